#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestderiv/catalog.hpp"
#include "nestderiv/signed_log.hpp"

namespace nestderiv {

/// Root search for the ray equation r(s) = n - f'(s) [h(s) - h(x)] = 0.
///
/// The default window is [x - dl, x + dr], each side doubled until |f'(s)[h(s)-h(x)]|
/// reaches 2n or the domain boundary is hit. The window is scanned on a grid uniform in
/// asinh(s), sign changes are bisected to `bisection_rel_tol`, then polished with at
/// most `newton_steps` safeguarded Newton steps.
struct RootSearchOptions {
  int grid_points = 2048;
  std::optional<std::pair<Real, Real>> window;
  double bisection_rel_tol = 1e-13;
  int newton_steps = 4;
};

struct RayRoot {
  Real s;
  Real lo;  // bracket
  Real hi;
  Real residual;
  std::string branch_label;  // "s-"/"s+" for two roots, "s" for one, "s1".. otherwise
};

/// Phase, amplitude and characteristic data of one ray.
///
/// q is ln|f'(s)/f(x)| and ratio_sign the sign of that ratio; on branches where the
/// ratio is negative the phase is complex and F, q carry its real part.
struct RayDiagnostics {
  Real F;
  Real G;
  Real J;
  Real p;
  Real q;
  int ratio_sign = 1;
};

struct PhiValue {
  SignedLog value;
  RayDiagnostics diag;
};

enum class KappaMethod { closed_form, limit, numeric_match };

struct RayContribution {
  RayRoot root;
  SignedLog phi;
  RayDiagnostics diag;
};

struct AsymptoticValue {
  SignedLog value;
  SignedLog kappa;
  std::vector<RayContribution> rays;
};

struct EikonalResidual {
  Real res_p;
  Real res_q;
};

/// n - f'(s) [h(s) - h(x)].
Real ray_function(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s);

std::vector<RayRoot> solve_ray_roots(const ProblemInstance& inst, const Real& x, const Real& n,
                                     const RootSearchOptions& opts = {});

/// F, G, J, p, q at s without the sign of Phi, so any real n is accepted.
RayDiagnostics ray_diagnostics(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s);

/// Phi(x, n; s) in sign/log form together with F, G, J, p, q at s.
PhiValue phi_eval(const ProblemInstance& inst, const Real& x, const Real& n, const Real& s);

/// closed_form when the instance has one (log1p, arctan), numeric_match otherwise.
KappaMethod default_kappa_method(const ProblemInstance& inst);

SignedLog kappa_for(const ProblemInstance& inst, const Real& n, KappaMethod method,
                    const RootSearchOptions& opts = {});

/// kappa * sum over rays of Phi.
AsymptoticValue asymptotic_g(const ProblemInstance& inst, const Real& x, const Real& n,
                             std::optional<KappaMethod> method = std::nullopt, const RootSearchOptions& opts = {});

/// Leading behavior of g_n(x) as x -> infinity for omega ~ a x^p.
Real large_x_leading(const ProblemInstance& inst, int n, const Real& x);

/// Rising factorial p (p+1) ... (p+n-1).
Real pochhammer(const Real& p, int n);

/// |dF/dx - p| and |dF/dn - q| with F tracked along `branch_label` on a 5-point stencil.
EikonalResidual eikonal_residual(const ProblemInstance& inst, const Real& x, const Real& n,
                                 const std::string& branch_label, const Real& step,
                                 const RootSearchOptions& opts = {});

}  // namespace nestderiv
