#pragma once

#include <functional>

#include "nestderiv/numeric.hpp"

namespace nestderiv {

/// Adaptive Gauss-Legendre integration at the working precision. A panel is accepted
/// when the 32-point rule on it agrees with the sum over its two halves to within
/// `rel_tol` of the running magnitude. Nodes are computed once per precision.
Real integrate_adaptive(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& rel_tol,
                        int max_depth = 40);

}  // namespace nestderiv
