#include "nestderiv/exact.hpp"

namespace nestderiv {

namespace {

template <class T>
T factorial(int n) {
  T r = 1;
  for (int k = 2; k <= n; ++k) r *= T(k);
  return r;
}

template <class T>
T ipow(const T& base, int n) {
  T r = 1;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

template <class T>
Real rel_diff(const T& a, const T& b) {
  T scale = std::max(bmp::abs(a), bmp::abs(b));
  if (scale == 0) return 0;
  return to_real(T(bmp::abs(a - b) / scale));
}

}  // namespace

template <class T>
std::vector<TruncatedSeries<T>> g_series_chain(const TruncatedSeries<T>& omega, int n_max) {
  if (n_max < 0) throw UsageError("n_max must be >= 0");
  if (omega.order() < n_max) throw MathError("insufficient series order");
  std::vector<TruncatedSeries<T>> chain;
  chain.reserve(static_cast<std::size_t>(n_max) + 1);
  chain.push_back(TruncatedSeries<T>::constant(omega.center(), T(1), n_max));
  for (int k = 0; k < n_max; ++k) {
    const auto& g = chain.back();
    // Derivative has order n_max-k-1; the product is truncated to match.
    auto d = differentiate(g);
    chain.push_back(d + T(k + 1) * (omega.truncated(d.order()) * g.truncated(d.order())));
  }
  return chain;
}

template <class T>
NestedSequence<T> compute_g_sequence(InstancePtr inst, const T& x0, int n_max) {
  if (n_max < 0) throw UsageError("n_max must be >= 0");
  auto omega = inst->omega_series(x0, n_max);
  auto chain = g_series_chain(omega, n_max);
  NestedSequence<T> out{std::move(inst), x0, n_max, {}, 0};
  out.g.reserve(chain.size());
  for (const auto& s : chain) out.g.push_back(s[0]);
  if constexpr (std::is_same_v<T, Real>) out.precision_bits = precision_bits();
  return out;
}

namespace {

template <class T>
T nonzero_f(const ProblemInstance& inst, const T& x0) {
  T f0 = f_value(inst, x0);
  if (f0 == 0) throw MathError("f vanishes at center");
  return f0;
}

// Non-owning pointer wrapper so the engine can be driven from a plain reference.
InstancePtr borrow(const ProblemInstance& inst) { return InstancePtr(std::shared_ptr<void>(), &inst); }

}  // namespace

template <class T>
T nested_derivative(const ProblemInstance& inst, const T& x0, int n) {
  if (n < 0) throw UsageError("n must be >= 0");
  if (n == 0) return T(1);
  T f0 = nonzero_f(inst, x0);
  auto seq = compute_g_sequence(borrow(inst), x0, n);
  return ipow(f0, n) * seq.g[n];
}

template <class T>
std::vector<T> inverse_derivatives(const ProblemInstance& inst, const T& x0, int n_max) {
  if (n_max < 1) throw UsageError("n_max must be >= 1");
  T f0 = nonzero_f(inst, x0);
  auto seq = compute_g_sequence(borrow(inst), x0, n_max - 1);
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(n_max));
  T fpow = 1;
  for (int n = 1; n <= n_max; ++n) {
    fpow *= f0;
    out.push_back(fpow * seq.g[n - 1]);
  }
  return out;
}

template <class T>
TruncatedSeries<T> inverse_taylor_series(const ProblemInstance& inst, const T& x0, int order, std::optional<T> z0) {
  if (order < 0) throw UsageError("order must be >= 0");
  if (!z0) {
    if constexpr (std::is_same_v<T, Rational>) {
      auto h0 = inst.h_exact(x0);
      if (!h0) throw MathError(inst.name() + ": h(x0) is not rational; supply z0 or use float mode");
      z0 = *h0;
    } else {
      z0 = inst.h(x0);
    }
  }
  std::vector<T> c(static_cast<std::size_t>(order) + 1);
  c[0] = x0;
  if (order >= 1) {
    auto d = inverse_derivatives(inst, x0, order);
    T fact = 1;
    for (int n = 1; n <= order; ++n) {
      fact *= T(n);
      c[n] = d[n - 1] / fact;
    }
  }
  return TruncatedSeries<T>(*z0, std::move(c));
}

template <class T>
TruncatedSeries<T> h_series(const ProblemInstance& inst, const T& x0, int order) {
  if (order < 1) throw UsageError("order must be >= 1");
  return integrate(reciprocal(inst.f_series(x0, order - 1)));
}

template <class T>
std::vector<CoefficientComparison<T>> crosscheck_reversion(const ProblemInstance& inst, const T& x0, int order) {
  auto lagrange = revert(h_series(inst, x0, order));
  auto nested = inverse_taylor_series(inst, x0, order, std::optional<T>(T(0)));
  std::vector<CoefficientComparison<T>> out;
  for (int n = 1; n <= order; ++n) out.push_back({n, lagrange[n], nested[n], rel_diff(lagrange[n], nested[n])});
  return out;
}

template <class T>
std::vector<T> nested_derivatives_direct(const ProblemInstance& inst, const T& x0, int n_max) {
  auto f = inst.f_series(x0, n_max);
  auto d = TruncatedSeries<T>::constant(x0, T(1), n_max);
  std::vector<T> out{T(1)};
  for (int n = 0; n < n_max; ++n) {
    d = differentiate(f * d);
    out.push_back(d[0]);
  }
  return out;
}

ArithmeticMode preferred_mode(const ProblemInstance& inst, const Rational& x0) {
  if (inst.has_rational_series() && inst.domain().contains(x0) && inst.f_exact(x0)) return ArithmeticMode::rational;
  return ArithmeticMode::floating;
}

#define NESTDERIV_INSTANTIATE(T)                                                                              \
  template std::vector<TruncatedSeries<T>> g_series_chain(const TruncatedSeries<T>&, int);                    \
  template NestedSequence<T> compute_g_sequence(InstancePtr, const T&, int);                                  \
  template T nested_derivative(const ProblemInstance&, const T&, int);                                        \
  template std::vector<T> inverse_derivatives(const ProblemInstance&, const T&, int);                         \
  template TruncatedSeries<T> inverse_taylor_series(const ProblemInstance&, const T&, int, std::optional<T>); \
  template TruncatedSeries<T> h_series(const ProblemInstance&, const T&, int);                                \
  template std::vector<CoefficientComparison<T>> crosscheck_reversion(const ProblemInstance&, const T&, int); \
  template std::vector<T> nested_derivatives_direct(const ProblemInstance&, const T&, int);

NESTDERIV_INSTANTIATE(Rational)
NESTDERIV_INSTANTIATE(Real)

#undef NESTDERIV_INSTANTIATE

}  // namespace nestderiv
