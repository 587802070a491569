#include "nestderiv/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace nestderiv {

namespace {

constexpr int kNodes = 32;

struct Rule {
  std::vector<Real> nodes;  // on [-1, 1]
  std::vector<Real> weights;
};

Rule build_rule() {
  Rule r;
  Real eps = bmp::ldexp(Real(1), -static_cast<int>(precision_bits()) + 4);
  for (int i = 1; i <= kNodes; ++i) {
    Real x = bmp::cos(pi() * (Real(i) - Real("0.25")) / (Real(kNodes) + Real("0.5")));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      // Three-term recurrence for P_n and its derivative.
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= kNodes; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kNodes * (x * p1 - p0) / (x * x - 1);
      Real step = p1 / dp;
      x -= step;
      if (bmp::abs(step) < eps) break;
    }
    r.nodes.push_back(x);
    r.weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  return r;
}

const Rule& rule() {
  static std::mutex mutex;
  static std::map<unsigned, std::unique_ptr<Rule>> rules;
  std::lock_guard lock(mutex);
  auto& slot = rules[precision_bits()];
  if (!slot) slot = std::make_unique<Rule>(build_rule());
  return *slot;
}

Real panel(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Rule& r) {
  Real mid = (a + b) / 2, half = (b - a) / 2;
  Real sum = 0;
  for (int i = 0; i < kNodes; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

Real refine(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& whole,
            const Real& rel_tol, int depth, const Rule& r) {
  Real mid = (a + b) / 2;
  Real left = panel(f, a, mid, r);
  Real right = panel(f, mid, b, r);
  Real both = left + right;
  if (depth <= 0 || bmp::abs(both - whole) <= rel_tol * bmp::abs(both)) return both;
  return refine(f, a, mid, left, rel_tol, depth - 1, r) + refine(f, mid, b, right, rel_tol, depth - 1, r);
}

}  // namespace

Real integrate_adaptive(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& rel_tol,
                        int max_depth) {
  if (a == b) return 0;
  const Rule& r = rule();
  return refine(f, a, b, panel(f, a, b, r), rel_tol, max_depth, r);
}

}  // namespace nestderiv
