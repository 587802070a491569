#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nestderiv/numeric.hpp"

namespace nestderiv {

/// Finite Taylor expansion c_0 + c_1 (x - center) + ... + c_order (x - center)^order.
///
/// T is Rational (exact mode) or Real (float mode); the two never mix inside one
/// series. Every operation works strictly through `order`: products and sums
/// truncate to the smaller operand order rather than inventing unknown terms.
template <class T>
class TruncatedSeries {
 public:
  TruncatedSeries(T center, std::vector<T> coeffs) : center_(std::move(center)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw UsageError("series needs at least one coefficient");
  }

  static TruncatedSeries zero(T center, int order) {
    return TruncatedSeries(std::move(center), std::vector<T>(static_cast<std::size_t>(order) + 1, T(0)));
  }
  static TruncatedSeries constant(T center, T value, int order) {
    auto s = zero(std::move(center), order);
    s.coeffs_[0] = std::move(value);
    return s;
  }
  /// c + (x - center), i.e. the identity map expanded about `center`.
  static TruncatedSeries variable(T center, int order) {
    auto s = constant(center, center, order);
    if (order >= 1) s.coeffs_[1] = T(1);
    return s;
  }

  const T& center() const { return center_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const T> coeffs() const { return coeffs_; }
  const T& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  TruncatedSeries truncated(int order) const {
    if (order > this->order()) throw MathError("insufficient series order");
    return TruncatedSeries(center_, std::vector<T>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  TruncatedSeries operator-() const {
    auto r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    int n = common_order(a, b);
    std::vector<T> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[k] = a[k] + b[k];
    return TruncatedSeries(a.center_, std::move(c));
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    int n = common_order(a, b);
    std::vector<T> c(static_cast<std::size_t>(n) + 1, T(0));
    for (int i = 0; i <= n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j <= n; ++j) c[i + j] += a[i] * b[j];
    }
    return TruncatedSeries(a.center_, std::move(c));
  }

  friend TruncatedSeries operator*(const T& k, const TruncatedSeries& s) {
    auto r = s;
    for (auto& c : r.coeffs_) c *= k;
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& s, const T& k) { return k * s; }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.center_ == b.center_ && a.coeffs_ == b.coeffs_;
  }

 private:
  static int common_order(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.center_ != b.center_) throw MathError("center mismatch");
    return std::min(a.order(), b.order());
  }

  T center_;
  std::vector<T> coeffs_;
};

using RationalSeries = TruncatedSeries<Rational>;
using RealSeries = TruncatedSeries<Real>;

/// d/dx; the order drops by one (an order-0 series differentiates to the order-0 zero series).
template <class T>
TruncatedSeries<T> differentiate(const TruncatedSeries<T>& s) {
  if (s.order() == 0) return TruncatedSeries<T>::zero(s.center(), 0);
  std::vector<T> c(static_cast<std::size_t>(s.order()));
  for (int k = 1; k <= s.order(); ++k) c[k - 1] = T(k) * s[k];
  return TruncatedSeries<T>(s.center(), std::move(c));
}

/// Antiderivative taking value `constant` at the center; the order rises by one.
template <class T>
TruncatedSeries<T> integrate(const TruncatedSeries<T>& s, const T& constant = T(0)) {
  std::vector<T> c(static_cast<std::size_t>(s.order()) + 2);
  c[0] = constant;
  for (int k = 0; k <= s.order(); ++k) c[k + 1] = s[k] / T(k + 1);
  return TruncatedSeries<T>(s.center(), std::move(c));
}

template <class T>
TruncatedSeries<T> reciprocal(const TruncatedSeries<T>& s) {
  if (s[0] == 0) throw MathError("non-invertible series");
  int n = s.order();
  std::vector<T> r(static_cast<std::size_t>(n) + 1);
  T inv0 = T(1) / s[0];
  r[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    T acc = 0;
    for (int j = 1; j <= k; ++j) acc += s[j] * r[k - j];
    r[k] = -acc * inv0;
  }
  return TruncatedSeries<T>(s.center(), std::move(r));
}

/// Horner evaluation at x = center + dx.
template <class T>
T evaluate(const TruncatedSeries<T>& s, const T& dx) {
  T acc = s[s.order()];
  for (int k = s.order() - 1; k >= 0; --k) acc = acc * dx + s[k];
  return acc;
}

/// exp(s) for a series with zero constant term, from y' = s' y.
template <class T>
TruncatedSeries<T> exp_series(const TruncatedSeries<T>& s) {
  if (s[0] != 0) throw MathError("exp_series needs a zero constant term");
  int n = s.order();
  std::vector<T> y(static_cast<std::size_t>(n) + 1, T(0));
  y[0] = 1;
  for (int k = 1; k <= n; ++k) {
    T acc = 0;
    for (int j = 1; j <= k; ++j) acc += T(j) * s[j] * y[k - j];
    y[k] = acc / T(k);
  }
  return TruncatedSeries<T>(s.center(), std::move(y));
}

/// Compositional inverse. For s(x) = c_0 + c_1 (x - x0) + ..., returns the series of
/// s^{-1} about z0 = c_0 with constant term x0, solved one coefficient at a time:
/// with s = c_0 + A(dx) and the inverse x0 + B(dz), coefficient m of A(B(dz)) must vanish
/// for m >= 2, which is linear in b_m once b_1..b_{m-1} are fixed.
template <class T>
TruncatedSeries<T> revert(const TruncatedSeries<T>& s) {
  int n = s.order();
  if (n < 1 || s[1] == 0) throw MathError("non-invertible at center");
  std::vector<T> b(static_cast<std::size_t>(n) + 1, T(0));
  b[0] = s.center();
  T inv1 = T(1) / s[1];
  b[1] = inv1;
  std::vector<T> power(static_cast<std::size_t>(n) + 1);
  std::vector<T> next(static_cast<std::size_t>(n) + 1);
  for (int m = 2; m <= n; ++m) {
    // power = B^k truncated at degree m, B = b_1 w + ... + b_{m-1} w^{m-1}.
    std::fill(power.begin(), power.end(), T(0));
    for (int j = 1; j < m; ++j) power[j] = b[j];
    T acc = 0;
    for (int k = 2; k <= m; ++k) {
      std::fill(next.begin(), next.end(), T(0));
      for (int i = k - 1; i <= m; ++i) {
        if (power[i] == 0) continue;
        for (int j = 1; i + j <= m && j < m; ++j) next[i + j] += power[i] * b[j];
      }
      std::swap(power, next);
      if (s[k] != 0) acc += s[k] * power[m];
    }
    b[m] = -acc * inv1;
  }
  return TruncatedSeries<T>(s[0], std::move(b));
}

}  // namespace nestderiv
