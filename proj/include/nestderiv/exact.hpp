#pragma once

#include <optional>
#include <vector>

#include "nestderiv/catalog.hpp"
#include "nestderiv/series.hpp"

namespace nestderiv {

enum class ArithmeticMode { rational, floating };

/// g_0(x0) .. g_{n_max}(x0) for g_{k+1} = g_k' + (k+1) omega g_k, g_0 = 1.
template <class T>
struct NestedSequence {
  InstancePtr instance;
  T x0;
  int n_max = 0;
  std::vector<T> g;
  unsigned precision_bits = 0;  // 0 in rational mode

  static constexpr ArithmeticMode mode =
      std::is_same_v<T, Rational> ? ArithmeticMode::rational : ArithmeticMode::floating;
};

/// Runs the recurrence in series arithmetic on an omega series of order >= n_max and
/// returns every intermediate g_k as a series of order n_max - k (so g_{n_max} has order 0).
template <class T>
std::vector<TruncatedSeries<T>> g_series_chain(const TruncatedSeries<T>& omega, int n_max);

template <class T>
NestedSequence<T> compute_g_sequence(InstancePtr inst, const T& x0, int n_max);

/// D^n[f](x0) = f(x0)^n g_n(x0).
template <class T>
T nested_derivative(const ProblemInstance& inst, const T& x0, int n);

/// d^n H / dz^n at z0 = h(x0) for n = 1..n_max, where H is the inverse of h.
template <class T>
std::vector<T> inverse_derivatives(const ProblemInstance& inst, const T& x0, int n_max);

/// Taylor series of h^{-1} about z0 through `order`. When z0 is not supplied it is
/// taken from h(x0) (exactly in rational mode, which then requires h(x0) rational).
template <class T>
TruncatedSeries<T> inverse_taylor_series(const ProblemInstance& inst, const T& x0, int order,
                                         std::optional<T> z0 = std::nullopt);

/// Taylor series of h about x0 with h(x0) replaced by 0, built from 1/f.
template <class T>
TruncatedSeries<T> h_series(const ProblemInstance& inst, const T& x0, int order);

template <class T>
struct CoefficientComparison {
  int n = 0;
  T lagrange;  // from revert(h series)
  T nested;    // from nested derivatives
  Real rel_diff;
};

/// Per-coefficient comparison of series reversion against the nested-derivative series, n = 1..order.
template <class T>
std::vector<CoefficientComparison<T>> crosscheck_reversion(const ProblemInstance& inst, const T& x0, int order);

/// Rational when omega has exact series and f(x0) is rational, floating otherwise.
ArithmeticMode preferred_mode(const ProblemInstance& inst, const Rational& x0);

/// Direct iteration of D^{n+1} = (f D^n)' in series arithmetic; values at x0 for n = 0..n_max.
template <class T>
std::vector<T> nested_derivatives_direct(const ProblemInstance& inst, const T& x0, int n_max);

}  // namespace nestderiv
