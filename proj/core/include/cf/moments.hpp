#pragma once

#include <vector>

#include "cf/numeric.hpp"

namespace cf {

enum class MomentKind { ordinary, factorial, cumulant };

// Exact moment sequence; values[n] is the order-n entry. Ordinary and
// factorial sequences carry values[0] = 1, cumulant sequences values[0] = 0.
struct MomentSequence {
  MomentKind kind = MomentKind::ordinary;
  std::vector<Rational> values;

  int order() const { return int(values.size()) - 1; }
  bool operator==(const MomentSequence&) const = default;
};

// m_n = sum over partitions of an n-set of prod kappa_{|block|},
// evaluated as a sum over occupation profiles weighted by rho.
MomentSequence cumulants_to_moments(const MomentSequence& c);

// kappa_n = sum over partitions of (-1)^{N-1} (N-1)! prod m_{|block|}.
MomentSequence moments_to_cumulants(const MomentSequence& m);

// E[X^{down n}] = sum_m (-1)^{n+m} s(n,m) E[X^m]
MomentSequence moments_to_factorial(const MomentSequence& m);

// E[X^n] = sum_m S(n,m) E[X^{down m}]
MomentSequence factorial_to_moments(const MomentSequence& f);

enum class Preset { gaussian, poisson, gamma };

// gaussian: odd 0, even (2k-1)!!; poisson: sum_m S(n,m) lambda^m;
// gamma: rising factorial lambda^{up n}. lambda ignored for gaussian.
MomentSequence preset_moments(Preset dist, int n_max, const Rational& lambda = 1);

// Reference path: the same partition sums by literal enumeration over set
// partitions. The profile-weighted fast path must agree with these.
Rational moment_from_cumulants_by_enumeration(const std::vector<Rational>& kappa, int n);
Rational cumulant_from_moments_by_enumeration(const std::vector<Rational>& m, int n);

}  // namespace cf
