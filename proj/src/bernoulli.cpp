#include "nestderiv/bernoulli.hpp"

#include "nestderiv/catalog.hpp"
#include "nestderiv/exact.hpp"

namespace nestderiv {

BernoulliTable bernoulli_exact(int m) {
  if (m < 0) throw UsageError("m must be >= 0");
  BernoulliTable table;
  table.values.reserve(static_cast<std::size_t>(m) + 1);
  table.values.emplace_back(1);
  // Row of binomials C(n+1, k), updated in place per n.
  std::vector<Integer> binom{1, 1};
  for (int n = 1; n <= m; ++n) {
    std::vector<Integer> next(binom.size() + 1);
    next.front() = next.back() = 1;
    for (std::size_t k = 1; k + 1 < next.size(); ++k) next[k] = binom[k - 1] + binom[k];
    binom = std::move(next);  // now C(n+1, .)
    Rational acc = 0;
    for (int k = 0; k < n; ++k) acc += Rational(binom[k]) * table.values[k];
    table.values.push_back(-acc / Rational(n + 1));
  }
  return table;
}

BernoulliIdentity nested_bernoulli_identity(int n) {
  if (n < 0) throw UsageError("n must be >= 0");
  auto arctan = catalog_get("arctan");
  BernoulliIdentity out;
  out.lhs = nested_derivative(*arctan, Rational(0), 2 * n);
  auto table = bernoulli_exact(2 * (n + 1));
  Integer four_n = bmp::pow(Integer(4), static_cast<unsigned>(n));
  out.rhs = Rational(2, n + 1) * Rational(four_n) * Rational(4 * four_n - 1) * bmp::abs(table[2 * (n + 1)]);
  out.equal = out.lhs == out.rhs;
  return out;
}

SignedLog bernoulli_asymptotic(int n, BernoulliForm form) {
  if (n < 1) throw UsageError("n must be >= 1");
  const Real N = n;
  const Real PI = pi();
  const Real log_pi = bmp::log(PI);
  if (form == BernoulliForm::leading) {
    // 4 sqrt(n pi) (n / (e pi))^{2n}
    return SignedLog::from_log(bmp::log(Real(4)) + (bmp::log(N) + log_pi) / 2 + 2 * N * (bmp::log(N) - 1 - log_pi));
  }
  // 2 4^n / (pi^{2n-1/2} (4^n - 1)) (n/e)^{2n} (4n^2 + pi^2) / sqrt(4n^3 + pi^2 (n-1))
  Real log_four_n = N * bmp::log(Real(4));
  Real log_v = bmp::log(Real(2)) + log_four_n - (2 * N - Real(1) / 2) * log_pi - bmp::log(-bmp::expm1(-log_four_n)) -
               log_four_n + 2 * N * (bmp::log(N) - 1) + bmp::log(4 * N * N + PI * PI) -
               bmp::log(4 * N * N * N + PI * PI * (N - 1)) / 2;
  return SignedLog::from_log(log_v);
}

}  // namespace nestderiv
