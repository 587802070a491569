#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestderiv/numeric.hpp"
#include "nestderiv/series.hpp"
#include "nestderiv/series_io.hpp"

namespace nestderiv {

/// omega(x) ~ a x^p as x -> infinity.
struct TailModel {
  Rational a;
  Rational p;
};

/// Open interval (lower, +inf), or all reals when `lower` is empty.
struct Domain {
  std::optional<Rational> lower;

  bool contains(const Real& x) const { return !lower || x > to_real(*lower); }
  bool contains(const Rational& x) const { return !lower || x > *lower; }
  std::string describe() const;
};

/// A function package: f, its first two derivatives, h with h' = 1/f, and omega = f'/f,
/// together with Taylor expansions of omega and f about any admissible point.
///
/// Evaluators reject points outside the declared domain with DomainError. Instances are
/// immutable and may be shared freely across threads.
class ProblemInstance {
 public:
  virtual ~ProblemInstance() = default;

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  const std::optional<TailModel>& tail() const { return tail_; }
  /// True iff h can be evaluated globally, which the ray equation needs.
  bool supports_rays() const { return supports_rays_; }

  Real f(const Real& x) const { return check(x), f_impl(x); }
  Real f1(const Real& x) const { return check(x), f1_impl(x); }
  Real f2(const Real& x) const { return check(x), f2_impl(x); }
  Real omega(const Real& x) const { return check(x), omega_impl(x); }
  Real h(const Real& x) const;
  /// h(s) - h(x), possibly computed without forming either value.
  Real h_diff(const Real& s, const Real& x) const;

  /// f(x0) when it is rational, used by exact-mode nested derivatives.
  virtual std::optional<Rational> f_exact(const Rational& x0) const { (void)x0; return std::nullopt; }
  /// h(x0) when it is rational, used as the exact center of the inverse series.
  virtual std::optional<Rational> h_exact(const Rational& x0) const { (void)x0; return std::nullopt; }
  /// Whether omega_series(Rational, ...) is available.
  virtual bool has_rational_series() const { return true; }

  virtual RationalSeries omega_series(const Rational& x0, int order) const = 0;
  virtual RealSeries omega_series(const Real& x0, int order) const = 0;
  virtual RationalSeries f_series(const Rational& x0, int order) const;
  virtual RealSeries f_series(const Real& x0, int order) const;

 protected:
  ProblemInstance(std::string name, Domain domain, std::optional<TailModel> tail, bool supports_rays)
      : name_(std::move(name)), domain_(std::move(domain)), tail_(std::move(tail)), supports_rays_(supports_rays) {}

  template <class T>
  void check(const T& x) const {
    if (!domain_.contains(x)) throw DomainError(name_ + ": point outside domain " + domain_.describe());
  }

  virtual Real f_impl(const Real& x) const = 0;
  virtual Real f1_impl(const Real& x) const = 0;
  virtual Real f2_impl(const Real& x) const = 0;
  virtual Real omega_impl(const Real& x) const { return f1_impl(x) / f_impl(x); }
  virtual Real h_impl(const Real& x) const;
  virtual Real h_diff_impl(const Real& s, const Real& x) const { return h_impl(s) - h_impl(x); }

 private:
  std::string name_;
  Domain domain_;
  std::optional<TailModel> tail_;
  bool supports_rays_;
};

using InstancePtr = std::shared_ptr<const ProblemInstance>;

/// f(x0) in the arithmetic of T; exact mode throws when f(x0) is irrational.
Real f_value(const ProblemInstance& inst, const Real& x0);
Rational f_value(const ProblemInstance& inst, const Rational& x0);

/// One of: log1p, arctan, hermite_like, power_law(a), steep_decay.
InstancePtr catalog_get(const std::string& name);
std::vector<std::string> catalog_names();

/// Local-only instance defined by the Taylor series of omega about its center.
/// f is normalized to f(center) = 1 and h(center) = 0; no rays, no tail.
InstancePtr custom_from_series(AnySeries omega_series);

std::pair<Rational, Rational> omega_tail_params(const ProblemInstance& inst);

}  // namespace nestderiv
