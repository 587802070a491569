#pragma once

#include <vector>

#include "nestderiv/numeric.hpp"
#include "nestderiv/signed_log.hpp"

namespace nestderiv {

/// B_0 .. B_m with B_1 = -1/2.
struct BernoulliTable {
  std::vector<Rational> values;

  const Rational& operator[](int k) const { return values.at(static_cast<std::size_t>(k)); }
  int max_index() const { return static_cast<int>(values.size()) - 1; }
};

/// Exact Bernoulli numbers from sum_{k=0}^{n} C(n+1, k) B_k = 0.
BernoulliTable bernoulli_exact(int m);

struct BernoulliIdentity {
  Rational lhs;  // D^{2n}[x^2+1](0) from the nested-derivative engine
  Rational rhs;  // 2/(n+1) 4^n (4^{n+1}-1) |B_{2(n+1)}|
  bool equal = false;
};

BernoulliIdentity nested_bernoulli_identity(int n);

enum class BernoulliForm { refined, leading };

/// Asymptotic approximation of |B_{2n}|.
SignedLog bernoulli_asymptotic(int n, BernoulliForm form);

}  // namespace nestderiv
