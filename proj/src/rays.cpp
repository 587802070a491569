#include "nestderiv/rays.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nestderiv {

namespace {

bool is_integral(const Real& n) { return bmp::floor(n) == n; }

int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

void require_rays(const ProblemInstance& inst) {
  if (!inst.supports_rays()) throw MathError(inst.name() + ": instance does not support rays");
}

/// r'(s) = -f''(s) [h(s) - h(x)] - f'(s) / f(s)
Real ray_derivative(const ProblemInstance& inst, const Real& x, const Real& s) {
  return -inst.f2(s) * inst.h_diff(s, x) - inst.f1(s) / inst.f(s);
}

Real clip_margin(const Rational& lower) { return to_real(lower) + Real("1e-12") * (1 + bmp::abs(to_real(lower))); }

std::pair<Real, Real> default_window(const ProblemInstance& inst, const Real& x, const Real& n) {
  const Real target = 2 * n;
  const Real cap("1e60");
  auto reached = [&](const Real& s) { return bmp::abs(inst.f1(s) * inst.h_diff(s, x)) >= target; };

  Real lo;
  Real delta = 1 + bmp::abs(x);
  for (;;) {
    Real s = x - delta;
    const auto& lower = inst.domain().lower;
    if (lower && s <= to_real(*lower)) {
      lo = clip_margin(*lower);
      break;
    }
    if (reached(s) || delta > cap) {
      lo = s;
      break;
    }
    delta *= 2;
  }
  Real hi;
  delta = 1 + bmp::abs(x);
  for (;;) {
    Real s = x + delta;
    if (reached(s) || delta > cap) {
      hi = s;
      break;
    }
    delta *= 2;
  }
  return {lo, hi};
}

RayRoot refine_root(const ProblemInstance& inst, const Real& x, const Real& n, Real lo, Real hi, Real r_lo,
                    const RootSearchOptions& opts) {
  RayRoot root;
  root.lo = lo;
  root.hi = hi;
  const Real tol(opts.bisection_rel_tol);
  for (int iter = 0; iter < 400; ++iter) {
    Real scale = std::max(bmp::abs(lo), bmp::abs(hi));
    if (hi - lo <= tol * scale) break;
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    Real r_mid = ray_function(inst, x, n, mid);
    if (r_mid == 0) {
      lo = hi = mid;
      break;
    }
    if (sign_of(r_mid) == sign_of(r_lo)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
    }
  }
  Real s = (lo + hi) / 2;
  Real r = ray_function(inst, x, n, s);
  for (int step = 0; step < opts.newton_steps && r != 0; ++step) {
    Real d = ray_derivative(inst, x, s);
    if (d == 0) break;
    Real next = s - r / d;
    if (next < root.lo || next > root.hi) break;
    Real r_next = ray_function(inst, x, n, next);
    if (bmp::abs(r_next) > bmp::abs(r)) break;
    s = next;
    r = r_next;
  }
  root.s = s;
  root.residual = r;
  if (bmp::abs(r) > Real("1e-10") * (1 + n)) {
    throw MathError("ray root refinement failed near s = " + format_real(s, 10));
  }
  return root;
}

void label_roots(std::vector<RayRoot>& roots) {
  if (roots.size() == 1) {
    roots[0].branch_label = "s";
  } else if (roots.size() == 2) {
    roots[0].branch_label = "s-";
    roots[1].branch_label = "s+";
  } else {
    for (std::size_t i = 0; i < roots.size(); ++i) roots[i].branch_label = "s" + std::to_string(i + 1);
  }
}

}  // namespace

Real ray_function(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s) {
  return n - inst.f1(s) * inst.h_diff(s, x);
}

std::vector<RayRoot> solve_ray_roots(const ProblemInstance& inst, const Real& x, const Real& n,
                                     const RootSearchOptions& opts) {
  require_rays(inst);
  if (!(n > 0)) throw UsageError("n must be positive");
  if (opts.grid_points < 2) throw UsageError("grid_points must be >= 2");
  auto [lo, hi] = opts.window ? *opts.window : default_window(inst, x, n);
  if (!(lo < hi)) throw UsageError("empty root search window");

  Real u_lo = bmp::asinh(lo), u_hi = bmp::asinh(hi);
  const int m = opts.grid_points;
  std::vector<Real> grid(static_cast<std::size_t>(m));
  std::vector<Real> values(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    grid[i] = i == 0 ? lo : (i == m - 1 ? hi : Real(bmp::sinh(u_lo + (u_hi - u_lo) * i / (m - 1))));
    values[i] = ray_function(inst, x, n, grid[i]);
  }

  std::vector<RayRoot> roots;
  for (int i = 0; i + 1 < m; ++i) {
    if (values[i] == 0) {
      roots.push_back({grid[i], grid[i], grid[i], Real(0), {}});
      continue;
    }
    if (sign_of(values[i]) * sign_of(values[i + 1]) < 0) {
      roots.push_back(refine_root(inst, x, n, grid[i], grid[i + 1], values[i], opts));
    }
  }
  if (values[m - 1] == 0) roots.push_back({grid[m - 1], grid[m - 1], grid[m - 1], Real(0), {}});
  if (roots.empty()) throw MathError("no rays found (widen window)");
  label_roots(roots);
  return roots;
}

namespace {

struct RayPoint {
  RayDiagnostics diag;
  int phi_sign_without_power = 1;  // sign of f(s)/f(x)
};

RayPoint ray_point(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s) {
  Real fx = inst.f(x);
  if (fx == 0) throw MathError("f vanishes at x");
  Real fs = inst.f(s);
  Real f1s = inst.f1(s);
  Real f2s = inst.f2(s);
  if (f1s == 0) throw MathError("stationary ray");
  Real D = f1s * f1s + n * fs * f2s;
  if (D <= 0) throw MathError("caustic: transport amplitude undefined");

  Real log_fs = bmp::log(bmp::abs(fs));
  Real log_fx = bmp::log(bmp::abs(fx));
  Real log_f1s = bmp::log(bmp::abs(f1s));
  Real log_D = bmp::log(D);

  RayPoint out;
  auto& diag = out.diag;
  diag.F = log_fs - log_fx - n - n * (log_fx - log_f1s);
  diag.G = (2 * log_f1s - log_D) / 2;
  diag.J = n * f2s / f1s + inst.omega(s);
  diag.q = log_f1s - log_fx;
  Real ratio = f1s / fx;
  diag.p = ratio - (n + 1) * inst.omega(x);
  diag.ratio_sign = sign_of(ratio);
  out.phi_sign_without_power = sign_of(fs) * sign_of(fx);
  return out;
}

}  // namespace

RayDiagnostics ray_diagnostics(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s) {
  return ray_point(inst, x, n, s).diag;
}

PhiValue phi_eval(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s) {
  auto point = ray_point(inst, x, n, s);
  int sign = point.phi_sign_without_power;
  if (point.diag.ratio_sign < 0) {
    if (!is_integral(n)) throw MathError("sign undefined for non-integer power of negative base");
    if (bmp::fmod(n, Real(2)) != 0) sign = -sign;
  }
  Real log_phi = point.diag.F + point.diag.G;
  return {SignedLog(sign, log_phi), std::move(point.diag)};
}

KappaMethod default_kappa_method(const ProblemInstance& inst) {
  if (inst.name() == "log1p" || inst.name() == "arctan") return KappaMethod::closed_form;
  return KappaMethod::numeric_match;
}

namespace {

SignedLog sum_phi(const ProblemInstance& inst, const Real& x, const Real& n, const RootSearchOptions& opts) {
  SignedLog sum;
  for (const auto& root : solve_ray_roots(inst, x, n, opts)) sum += phi_eval(inst, x, n, root.s).value;
  return sum;
}

SignedLog kappa_numeric_match(const ProblemInstance& inst, const Real& n, const RootSearchOptions& opts) {
  require_rays(inst);
  if (!inst.tail()) throw MathError("no tail model");
  if (!is_integral(n)) throw MathError("numeric_match kappa needs integer n");
  int k = n.convert_to<int>();
  std::array<Real, 3> ratio;
  const std::array<Real, 3> ladder{Real(100), Real(1000), Real(10000)};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    SignedLog leading = SignedLog::from_real(large_x_leading(inst, k, ladder[i]));
    ratio[i] = (leading / sum_phi(inst, ladder[i], n, opts)).to_real();
  }
  // Richardson on the last two points; the convergence order comes from all three.
  Real d1 = ratio[1] - ratio[0];
  Real d2 = ratio[2] - ratio[1];
  Real extrapolated = ratio[2];
  if (d1 != 0 && d2 != 0 && sign_of(d1) == sign_of(d2) && bmp::abs(d2) < bmp::abs(d1)) {
    Real factor = bmp::abs(d1 / d2);  // = 10^order for error ~ x^-order
    extrapolated = ratio[2] + d2 / (factor - 1);
  }
  return SignedLog::from_real(extrapolated);
}

}  // namespace

SignedLog kappa_for(const ProblemInstance& inst, const Real& n, KappaMethod method, const RootSearchOptions& opts) {
  switch (method) {
    case KappaMethod::closed_form:
      if (inst.name() == "log1p") return SignedLog::from_real(1);
      if (inst.name() == "arctan") {
        // 2^{3/2} (n+2)^{-n-3/2} e^n (n+1)!
        Real log_k = Real(3) / 2 * bmp::log(Real(2)) - (n + Real(3) / 2) * bmp::log(n + 2) + n + bmp::lgamma(n + 2);
        return SignedLog::from_log(log_k);
      }
      throw MathError("closed-form kappa unavailable for " + inst.name());
    case KappaMethod::limit:
      if (inst.name() == "log1p") return SignedLog::from_real(1);
      if (inst.name() == "arctan") return SignedLog::from_real(4 * bmp::sqrt(pi()) * bmp::exp(Real(-2)));
      throw MathError("limit kappa unavailable for " + inst.name());
    case KappaMethod::numeric_match:
      return kappa_numeric_match(inst, n, opts);
  }
  throw UsageError("unknown kappa method");
}

AsymptoticValue asymptotic_g(const ProblemInstance& inst, const Real& x, const Real& n,
                             std::optional<KappaMethod> method, const RootSearchOptions& opts) {
  require_rays(inst);
  AsymptoticValue out;
  out.kappa = kappa_for(inst, n, method.value_or(default_kappa_method(inst)), opts);
  SignedLog sum;
  for (auto& root : solve_ray_roots(inst, x, n, opts)) {
    auto phi = phi_eval(inst, x, n, root.s);
    sum += phi.value;
    out.rays.push_back({std::move(root), phi.value, std::move(phi.diag)});
  }
  out.value = out.kappa * sum;
  return out;
}

Real pochhammer(const Real& p, int n) {
  Real r = 1;
  for (int j = 0; j < n; ++j) r *= p + j;
  return r;
}

Real large_x_leading(const ProblemInstance& inst, int n, const Real& x) {
  if (n < 0) throw UsageError("n must be >= 0");
  auto [a_q, p_q] = omega_tail_params(inst);
  if (n == 0) return 1;
  Real a = to_real(a_q), p = to_real(p_q);
  if (p_q < -1) {
    Real sign = n % 2 == 0 ? 1 : -1;
    return sign * a / (p + 1) * pochhammer(-p - 1, n) * bmp::pow(x, p - n + 1);
  }
  if (p_q == -1) {
    // (a-1)^n (a/(a-1))_n written as a product, finite at a = 1.
    Real c = 1;
    for (int j = 0; j < n; ++j) c *= a + (a - 1) * j;
    return c * bmp::pow(x, Real(-n));
  }
  Real factorial = 1;
  for (int j = 2; j <= n; ++j) factorial *= j;
  return factorial * bmp::pow(a, Real(n)) * bmp::pow(x, p * n);
}

EikonalResidual eikonal_residual(const ProblemInstance& inst, const Real& x, const Real& n,
                                 const std::string& branch_label, const Real& step, const RootSearchOptions& opts) {
  require_rays(inst);
  if (!(step > 0)) throw UsageError("step must be positive");
  auto find_branch = [&](const Real& xx, const Real& nn) -> Real {
    for (const auto& r : solve_ray_roots(inst, xx, nn, opts)) {
      if (r.branch_label == branch_label) return r.s;
    }
    throw MathError("branch lost");
  };
  const Real s0 = find_branch(x, n);
  auto phase = [&](const Real& xx, const Real& nn) {
    Real s = find_branch(xx, nn);
    if (bmp::abs(s - s0) > Real("0.1") * (1 + bmp::abs(s0))) throw MathError("branch lost");
    return ray_point(inst, xx, nn, s).diag.F;
  };
  auto five_point = [&](auto&& fn) {
    return (fn(-2) - 8 * fn(-1) + 8 * fn(1) - fn(2)) / (12 * step);
  };
  Real dFdx = five_point([&](int k) { return phase(x + k * step, n); });
  Real dFdn = five_point([&](int k) { return phase(x, n + k * step); });
  auto base = ray_point(inst, x, n, s0).diag;
  return {bmp::abs(dFdx - base.p), bmp::abs(dFdn - base.q)};
}

}  // namespace nestderiv
