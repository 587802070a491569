#include "nestderiv/catalog.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <variant>

#include "nestderiv/quadrature.hpp"

namespace nestderiv {

std::string Domain::describe() const {
  if (!lower) return "(all reals)";
  return "(x > " + format_rational(*lower) + ")";
}

Real ProblemInstance::h(const Real& x) const {
  check(x);
  return h_impl(x);
}

Real ProblemInstance::h_diff(const Real& s, const Real& x) const {
  check(s);
  check(x);
  return h_diff_impl(s, x);
}

Real ProblemInstance::h_impl(const Real&) const {
  throw MathError(name_ + ": h is not available globally");
}

namespace {

template <class T>
TruncatedSeries<T> generic_f_series(const ProblemInstance& inst, const T& x0, int order) {
  T f0 = f_value(inst, x0);
  if (order == 0) return TruncatedSeries<T>::constant(x0, f0, 0);
  return f0 * exp_series(integrate(inst.omega_series(x0, order - 1)));
}

}  // namespace

RationalSeries ProblemInstance::f_series(const Rational& x0, int order) const {
  return generic_f_series(*this, x0, order);
}

RealSeries ProblemInstance::f_series(const Real& x0, int order) const { return generic_f_series(*this, x0, order); }

Real f_value(const ProblemInstance& inst, const Real& x0) { return inst.f(x0); }

Rational f_value(const ProblemInstance& inst, const Rational& x0) {
  if (!inst.domain().contains(x0)) {
    throw DomainError(inst.name() + ": point outside domain " + inst.domain().describe());
  }
  auto v = inst.f_exact(x0);
  if (!v) throw MathError(inst.name() + ": f(x0) is not rational; use float mode");
  return *v;
}

std::pair<Rational, Rational> omega_tail_params(const ProblemInstance& inst) {
  if (!inst.tail()) throw MathError("no tail model");
  return {inst.tail()->a, inst.tail()->p};
}

namespace {

/// Polynomial c_0 + c_1 dx + ... padded with zeros to `order`.
template <class T>
TruncatedSeries<T> poly(const T& x0, std::initializer_list<T> c, int order) {
  std::vector<T> v(c);
  v.resize(static_cast<std::size_t>(order) + 1, T(0));
  return TruncatedSeries<T>(x0, std::move(v));
}

/// Forwards both arithmetic modes of the series factories to Derived's templates.
template <class Derived>
class SeriesInstance : public ProblemInstance {
 public:
  using ProblemInstance::ProblemInstance;

  RationalSeries omega_series(const Rational& x0, int order) const override {
    check(x0);
    return self().template omega_t<Rational>(x0, order);
  }
  RealSeries omega_series(const Real& x0, int order) const override {
    check(x0);
    return self().template omega_t<Real>(x0, order);
  }
  RationalSeries f_series(const Rational& x0, int order) const override { return f_series_t(x0, order); }
  RealSeries f_series(const Real& x0, int order) const override { return f_series_t(x0, order); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }

  template <class T>
  TruncatedSeries<T> f_series_t(const T& x0, int order) const {
    check(x0);
    if constexpr (requires(const Derived& d) { d.template f_t<T>(x0, order); }) {
      return self().template f_t<T>(x0, order);
    } else {
      return ProblemInstance::f_series(x0, order);
    }
  }
};

class Log1p final : public SeriesInstance<Log1p> {
 public:
  Log1p() : SeriesInstance("log1p", Domain{Rational(-1)}, TailModel{1, -1}, true) {}

  template <class T>
  TruncatedSeries<T> omega_t(const T& x0, int order) const {
    return reciprocal(poly<T>(x0, {T(1 + x0), T(1)}, order));
  }
  template <class T>
  TruncatedSeries<T> f_t(const T& x0, int order) const {
    return poly<T>(x0, {T(1 + x0), T(1)}, order);
  }

  std::optional<Rational> f_exact(const Rational& x0) const override { return Rational(1 + x0); }
  std::optional<Rational> h_exact(const Rational& x0) const override {
    if (x0 == 0) return Rational(0);
    return std::nullopt;
  }

 protected:
  Real f_impl(const Real& x) const override { return x + 1; }
  Real f1_impl(const Real&) const override { return 1; }
  Real f2_impl(const Real&) const override { return 0; }
  Real omega_impl(const Real& x) const override { return 1 / (x + 1); }
  Real h_impl(const Real& x) const override { return bmp::log1p(x); }
  Real h_diff_impl(const Real& s, const Real& x) const override { return bmp::log1p((s - x) / (x + 1)); }
};

class Arctan final : public SeriesInstance<Arctan> {
 public:
  Arctan() : SeriesInstance("arctan", Domain{}, TailModel{2, -1}, true) {}

  template <class T>
  TruncatedSeries<T> omega_t(const T& x0, int order) const {
    return poly<T>(x0, {T(2 * x0), T(2)}, order) * reciprocal(f_t<T>(x0, order));
  }
  template <class T>
  TruncatedSeries<T> f_t(const T& x0, int order) const {
    return poly<T>(x0, {T(x0 * x0 + 1), T(2 * x0), T(1)}, order);
  }

  std::optional<Rational> f_exact(const Rational& x0) const override { return Rational(x0 * x0 + 1); }
  std::optional<Rational> h_exact(const Rational& x0) const override {
    if (x0 == 0) return Rational(0);
    return std::nullopt;
  }

 protected:
  Real f_impl(const Real& x) const override { return x * x + 1; }
  Real f1_impl(const Real& x) const override { return 2 * x; }
  Real f2_impl(const Real&) const override { return 2; }
  Real omega_impl(const Real& x) const override { return 2 * x / (x * x + 1); }
  Real h_impl(const Real& x) const override { return bmp::atan(x); }
};

/// H(x) = integral_0^x exp(-t^2/2) dt by adaptive Gauss-Legendre, with partial sums
/// cached at knots k/2. Lookups take a shared lock; fills are idempotent, so racing
/// threads at worst compute the same knot twice.
class GaussianIntegral {
 public:
  Real operator()(const Real& x) const {
    if (x < 0) return -(*this)(Real(-x));
    int kmax = knot_count();
    Real k_real = bmp::floor(x * 2);
    if (k_real >= kmax) return knot(kmax);  // remaining tail is below one ulp of H
    int k = k_real.convert_to<int>();
    return knot(k) + integrate(Real(k) / 2, x);
  }

  /// Direct integral over [a, b]; keeps full relative accuracy far in the tail.
  Real integrate(const Real& a, const Real& b) const {
    if (a == b) return 0;
    // Beyond this point exp(-t^2/2) is below 2^-bits of its value at the nearer end.
    Real lo = std::min(a, b), hi = std::max(a, b);
    Real sign = a < b ? 1 : -1;
    if (lo >= 0) {
      Real cut = bmp::sqrt(lo * lo + 2 * Real(precision_bits() + 16) * bmp::log(Real(2)));
      hi = std::min(hi, cut);
    } else if (hi <= 0) {
      Real cut = -bmp::sqrt(hi * hi + 2 * Real(precision_bits() + 16) * bmp::log(Real(2)));
      lo = std::max(lo, cut);
    }
    auto integrand = [](const Real& t) { return bmp::exp(-t * t / 2); };
    Real tol("1e-30");
    Real v = integrate_adaptive(integrand, lo, hi, tol);
    return sign * v;
  }

 private:
  static int knot_count() {
    double cutoff = std::sqrt(2.0 * (precision_bits() + 16) * std::log(2.0));
    return static_cast<int>(std::ceil(cutoff * 2));
  }

  Real knot(int k) const {
    {
      std::shared_lock lock(mutex_);
      if (bits_ == precision_bits()) {
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
      }
    }
    int start = 0;
    Real acc = 0;
    {
      std::unique_lock lock(mutex_);
      if (bits_ != precision_bits()) {
        cache_.clear();
        bits_ = precision_bits();
      }
      cache_.emplace(0, Real(0));
      auto it = cache_.upper_bound(k);
      --it;
      start = it->first;
      acc = it->second;
    }
    std::map<int, Real> fresh;
    for (int j = start + 1; j <= k; ++j) {
      acc += integrate(Real(j - 1) / 2, Real(j) / 2);
      fresh.emplace(j, acc);
    }
    std::unique_lock lock(mutex_);
    for (auto& [j, v] : fresh) cache_.emplace(j, v);
    return cache_.at(k);
  }

  mutable std::shared_mutex mutex_;
  mutable std::map<int, Real> cache_;
  mutable unsigned bits_ = 0;
};

class HermiteLike final : public SeriesInstance<HermiteLike> {
 public:
  HermiteLike() : SeriesInstance("hermite_like", Domain{}, TailModel{1, 1}, true) {}

  template <class T>
  TruncatedSeries<T> omega_t(const T& x0, int order) const {
    return poly<T>(x0, {x0, T(1)}, order);
  }
  template <class T>
  TruncatedSeries<T> f_t(const T& x0, int order) const {
    // e^{(x0+dx)^2/2} = f(x0) e^{x0 dx + dx^2/2}
    return f_value(*this, x0) * exp_series(poly<T>(x0, {T(0), x0, T(1) / 2}, order));
  }

  std::optional<Rational> f_exact(const Rational& x0) const override {
    if (x0 == 0) return Rational(1);
    return std::nullopt;
  }
  std::optional<Rational> h_exact(const Rational& x0) const override {
    if (x0 == 0) return Rational(0);
    return std::nullopt;
  }

 protected:
  Real f_impl(const Real& x) const override { return bmp::exp(x * x / 2); }
  Real f1_impl(const Real& x) const override { return x * f_impl(x); }
  Real f2_impl(const Real& x) const override { return (1 + x * x) * f_impl(x); }
  Real omega_impl(const Real& x) const override { return x; }
  Real h_impl(const Real& x) const override { return integral_(x); }
  Real h_diff_impl(const Real& s, const Real& x) const override {
    // Far in one tail the difference of cached values cancels catastrophically.
    bool same_side = (s > 0 && x > 0) || (s < 0 && x < 0);
    if (same_side && std::min(bmp::abs(s), bmp::abs(x)) > 3) return integral_.integrate(x, s);
    return integral_(s) - integral_(x);
  }

 private:
  GaussianIntegral integral_;
};

class PowerLaw final : public SeriesInstance<PowerLaw> {
 public:
  explicit PowerLaw(Rational a)
      : SeriesInstance("power_law(" + format_rational(a) + ")", Domain{Rational(0)}, TailModel{a, -1}, true),
        a_(std::move(a)),
        a_real_(to_real(a_)) {}

  template <class T>
  TruncatedSeries<T> omega_t(const T& x0, int order) const {
    return T(a_) * reciprocal(poly<T>(x0, {x0, T(1)}, order));
  }
  template <class T>
  TruncatedSeries<T> f_t(const T& x0, int order) const {
    // x^a = x0^a * sum_k binom(a, k) (dx / x0)^k
    T f0 = f_value(*this, x0);
    std::vector<T> c(static_cast<std::size_t>(order) + 1);
    T binom = 1;
    T inv = T(1) / x0;
    T scale = 1;
    for (int k = 0; k <= order; ++k) {
      c[k] = f0 * binom * scale;
      binom = binom * (T(a_) - T(k)) / T(k + 1);
      scale *= inv;
    }
    return TruncatedSeries<T>(x0, std::move(c));
  }

  std::optional<Rational> f_exact(const Rational& x0) const override {
    if (!is_integer(a_)) return std::nullopt;
    return int_pow(x0, a_);
  }
  std::optional<Rational> h_exact(const Rational& x0) const override {
    if (a_ == 1) return x0 == 1 ? std::optional<Rational>(0) : std::nullopt;
    if (!is_integer(a_)) return std::nullopt;
    Rational e = 1 - a_;
    return Rational(int_pow(x0, e) / e);
  }

 protected:
  Real f_impl(const Real& x) const override { return bmp::pow(x, a_real_); }
  Real f1_impl(const Real& x) const override { return a_real_ * bmp::pow(x, a_real_ - 1); }
  Real f2_impl(const Real& x) const override { return a_real_ * (a_real_ - 1) * bmp::pow(x, a_real_ - 2); }
  Real omega_impl(const Real& x) const override { return a_real_ / x; }
  Real h_impl(const Real& x) const override {
    if (a_ == 1) return bmp::log(x);
    return bmp::pow(x, 1 - a_real_) / (1 - a_real_);
  }
  Real h_diff_impl(const Real& s, const Real& x) const override {
    if (a_ == 1) return bmp::log(s / x);
    return h_impl(s) - h_impl(x);
  }

 private:
  static Rational int_pow(const Rational& x, const Rational& e) {
    long long k = bmp::numerator(e).convert_to<long long>();
    Rational base = k < 0 ? Rational(1 / x) : x;
    Rational r = 1;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) r *= base;
    return r;
  }

  Rational a_;
  Real a_real_;
};

class SteepDecay final : public SeriesInstance<SteepDecay> {
 public:
  SteepDecay() : SeriesInstance("steep_decay", Domain{Rational(0)}, TailModel{1, -2}, false) {}

  template <class T>
  TruncatedSeries<T> omega_t(const T& x0, int order) const {
    auto r = reciprocal(poly<T>(x0, {x0, T(1)}, order));
    return r * r;
  }

 protected:
  Real f_impl(const Real& x) const override { return bmp::exp(-1 / x); }
  Real f1_impl(const Real& x) const override { return f_impl(x) / (x * x); }
  Real f2_impl(const Real& x) const override {
    Real inv = 1 / x;
    return f_impl(x) * (inv * inv * inv * inv - 2 * inv * inv * inv);
  }
  Real omega_impl(const Real& x) const override { return 1 / (x * x); }
};

class CustomSeries final : public ProblemInstance {
 public:
  explicit CustomSeries(AnySeries omega)
      : ProblemInstance("custom", Domain{}, std::nullopt, false),
        omega_(std::move(omega)),
        real_omega_(as_real(omega_)),
        real_f_(exp_series(integrate(real_omega_))) {}

  bool has_rational_series() const override { return std::holds_alternative<RationalSeries>(omega_); }

  RationalSeries omega_series(const Rational& x0, int order) const override {
    const auto* s = std::get_if<RationalSeries>(&omega_);
    if (!s) throw MathError("custom series is float mode; exact arithmetic unavailable");
    if (x0 != s->center()) throw MathError("custom series is only available at its center " + format_rational(s->center()));
    return s->truncated(order);
  }
  RealSeries omega_series(const Real& x0, int order) const override {
    if (x0 != real_omega_.center()) throw MathError("custom series is only available at its center");
    return real_omega_.truncated(order);
  }

  std::optional<Rational> f_exact(const Rational& x0) const override {
    if (at_center(x0)) return Rational(1);
    return std::nullopt;
  }
  std::optional<Rational> h_exact(const Rational& x0) const override {
    if (at_center(x0)) return Rational(0);
    return std::nullopt;
  }

 protected:
  Real f_impl(const Real& x) const override { return evaluate(real_f_, Real(x - real_f_.center())); }
  Real f1_impl(const Real& x) const override { return omega_impl(x) * f_impl(x); }
  Real f2_impl(const Real& x) const override {
    Real dx = x - real_omega_.center();
    Real w = evaluate(real_omega_, dx);
    return (evaluate(differentiate(real_omega_), dx) + w * w) * f_impl(x);
  }
  Real omega_impl(const Real& x) const override { return evaluate(real_omega_, Real(x - real_omega_.center())); }

 private:
  static RealSeries as_real(const AnySeries& any) {
    return std::visit(
        [](const auto& s) {
          std::vector<Real> c;
          for (const auto& v : s.coeffs()) c.push_back(to_real(v));
          return RealSeries(to_real(s.center()), std::move(c));
        },
        any);
  }

  bool at_center(const Rational& x0) const {
    if (const auto* s = std::get_if<RationalSeries>(&omega_)) return x0 == s->center();
    return to_real(x0) == real_omega_.center();
  }

  AnySeries omega_;
  RealSeries real_omega_;
  RealSeries real_f_;
};

}  // namespace

std::vector<std::string> catalog_names() { return {"log1p", "arctan", "hermite_like", "power_law(a)", "steep_decay"}; }

InstancePtr catalog_get(const std::string& name) {
  // Shared singletons keep the hermite_like quadrature cache warm across calls.
  static const InstancePtr log1p = std::make_shared<Log1p>();
  static const InstancePtr arctan = std::make_shared<Arctan>();
  static const InstancePtr hermite = std::make_shared<HermiteLike>();
  static const InstancePtr steep = std::make_shared<SteepDecay>();
  if (name == "log1p") return log1p;
  if (name == "arctan") return arctan;
  if (name == "hermite_like") return hermite;
  if (name == "steep_decay") return steep;
  const std::string prefix = "power_law(";
  if (name.starts_with(prefix) && name.ends_with(")") && name.size() > prefix.size() + 1) {
    Rational a = parse_rational(name.substr(prefix.size(), name.size() - prefix.size() - 1));
    if (a == 0) throw UsageError("power_law(a) needs a != 0");
    return std::make_shared<PowerLaw>(a);
  }
  std::ostringstream msg;
  msg << "unknown instance '" << name << "'; available:";
  for (const auto& n : catalog_names()) msg << ' ' << n;
  throw UsageError(msg.str());
}

InstancePtr custom_from_series(AnySeries omega_series) {
  return std::make_shared<CustomSeries>(std::move(omega_series));
}

}  // namespace nestderiv
