#include "cf/moments.hpp"

#include "cf/combinat.hpp"
#include "cf/errors.hpp"

namespace cf {

namespace {

void expect_kind(const MomentSequence& s, MomentKind k, const char* what) {
  if (s.kind != k) throw domain_error(std::string("expected ") + what + " sequence");
  if (s.values.empty()) throw domain_error("moment sequence has no order-0 entry");
  if (k == MomentKind::cumulant) {
    if (s.values[0] != 0) throw domain_error("cumulant sequence must start at 0");
  } else if (s.values[0] != 1) {
    throw domain_error("moment sequence must have value 1 at order 0");
  }
}

// sum over occupation profiles with E = n of
//   rho * weight(N) * prod_j seq[j]^{n_j}
Rational profile_sum(const std::vector<Rational>& seq, int n, bool cumulant_weight) {
  Rational total = 0;
  for (const auto& prof : enumerate_profiles(n)) {
    Rational term(rho_multiplicity(prof));
    if (cumulant_weight) {
      long long N = prof.block_count();
      BigInt w = factorial(int(N - 1));
      if ((N - 1) % 2 == 1) w = -w;
      term *= Rational(w);
    }
    for (size_t j = 1; j <= prof.counts.size(); ++j)
      if (prof.counts[j - 1] > 0) term *= int_pow(seq[j], int(prof.counts[j - 1]));
    total += term;
  }
  return total;
}

}  // namespace

MomentSequence cumulants_to_moments(const MomentSequence& c) {
  expect_kind(c, MomentKind::cumulant, "cumulant");
  MomentSequence m;
  m.kind = MomentKind::ordinary;
  m.values.assign(c.values.size(), 0);
  m.values[0] = 1;
  for (int n = 1; n <= c.order(); ++n) m.values[n] = profile_sum(c.values, n, false);
  return m;
}

MomentSequence moments_to_cumulants(const MomentSequence& m) {
  expect_kind(m, MomentKind::ordinary, "ordinary");
  MomentSequence c;
  c.kind = MomentKind::cumulant;
  c.values.assign(m.values.size(), 0);
  for (int n = 1; n <= m.order(); ++n) c.values[n] = profile_sum(m.values, n, true);
  return c;
}

MomentSequence moments_to_factorial(const MomentSequence& m) {
  expect_kind(m, MomentKind::ordinary, "ordinary");
  MomentSequence f;
  f.kind = MomentKind::factorial;
  f.values.assign(m.values.size(), 0);
  f.values[0] = 1;
  for (int n = 1; n <= m.order(); ++n) {
    Rational v = 0;
    for (int k = 1; k <= n; ++k) {
      Rational term = Rational(stirling_first(n, k)) * m.values[k];
      if ((n + k) % 2 == 1) term = -term;
      v += term;
    }
    f.values[n] = v;
  }
  return f;
}

MomentSequence factorial_to_moments(const MomentSequence& f) {
  expect_kind(f, MomentKind::factorial, "factorial");
  MomentSequence m;
  m.kind = MomentKind::ordinary;
  m.values.assign(f.values.size(), 0);
  m.values[0] = 1;
  for (int n = 1; n <= f.order(); ++n) {
    Rational v = 0;
    for (int k = 1; k <= n; ++k) v += Rational(stirling_second(n, k)) * f.values[k];
    m.values[n] = v;
  }
  return m;
}

MomentSequence preset_moments(Preset dist, int n_max, const Rational& lambda) {
  if (n_max < 1) throw domain_error("preset_moments: n_max must be >= 1");
  if (dist != Preset::gaussian && lambda <= 0)
    throw domain_error("preset_moments: lambda must be positive");
  MomentSequence m;
  m.kind = MomentKind::ordinary;
  m.values.assign(n_max + 1, 0);
  m.values[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    switch (dist) {
      case Preset::gaussian:
        m.values[n] = (n % 2 == 1) ? Rational(0) : Rational(odd_double_factorial(n / 2));
        break;
      case Preset::poisson: {
        Rational v = 0;
        for (int k = 1; k <= n; ++k) v += Rational(stirling_second(n, k)) * int_pow(lambda, k);
        m.values[n] = v;
        break;
      }
      case Preset::gamma: {
        // lambda^{up n} = sum_k s(n,k) lambda^k with unsigned s
        Rational v = 0;
        for (int k = 1; k <= n; ++k) v += Rational(stirling_first(n, k)) * int_pow(lambda, k);
        m.values[n] = v;
        break;
      }
    }
  }
  return m;
}

Rational moment_from_cumulants_by_enumeration(const std::vector<Rational>& kappa, int n) {
  if (n < 1 || int(kappa.size()) <= n) throw domain_error("enumeration reference: bad order");
  std::vector<int> ground(n);
  for (int i = 0; i < n; ++i) ground[i] = i + 1;
  Rational total = 0;
  PartitionStream ps(ground);
  while (auto p = ps.next()) {
    Rational term = 1;
    for (const auto& b : p->blocks) term *= kappa[b.size()];
    total += term;
  }
  return total;
}

Rational cumulant_from_moments_by_enumeration(const std::vector<Rational>& m, int n) {
  if (n < 1 || int(m.size()) <= n) throw domain_error("enumeration reference: bad order");
  std::vector<int> ground(n);
  for (int i = 0; i < n; ++i) ground[i] = i + 1;
  Rational total = 0;
  PartitionStream ps(ground);
  while (auto p = ps.next()) {
    long long N = p->block_count();
    BigInt w = factorial(int(N - 1));
    if ((N - 1) % 2 == 1) w = -w;
    Rational term{w};
    for (const auto& b : p->blocks) term *= m[b.size()];
    total += term;
  }
  return total;
}

}  // namespace cf
