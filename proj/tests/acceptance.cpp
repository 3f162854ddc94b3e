// End-to-end gate: one line per criterion, nonzero exit if any fails or
// overruns its time budget. Tolerances are pinned here on purpose.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cf/arith.hpp"
#include "cf/combinat.hpp"
#include "cf/fields.hpp"
#include "cf/fock.hpp"
#include "cf/ito.hpp"
#include "cf/moments.hpp"

using cf::BigInt;
using cf::Multiset;
using cf::Rational;

namespace {

std::uint64_t lcg(std::uint64_t& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return s >> 33;
}

Rational rq(std::uint64_t& s) {
  long long num = (long long)(lcg(s) % 19) - 9;
  long long den = (long long)(lcg(s) % 9) + 1;
  return Rational(num, den);
}

std::vector<int> iota1(int n) {
  std::vector<int> g(n);
  for (int i = 0; i < n; ++i) g[i] = i + 1;
  return g;
}

std::vector<Multiset> all_multisets(int n_labels, int lo, int hi) {
  std::vector<Multiset> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (int(cur.size()) >= lo) out.push_back(cur);
    if (int(cur.size()) == hi) return;
    for (int v = start; v < n_labels; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

bool criterion_golden_tables() {
  const long long s1[6][6] = {{1, 0, 0, 0, 0, 0},      {1, 1, 0, 0, 0, 0},
                              {2, 3, 1, 0, 0, 0},      {6, 11, 6, 1, 0, 0},
                              {24, 50, 35, 10, 1, 0},  {120, 274, 225, 85, 15, 1}};
  const long long s2[6][6] = {{1, 0, 0, 0, 0, 0},     {1, 1, 0, 0, 0, 0},
                              {1, 3, 1, 0, 0, 0},     {1, 7, 6, 1, 0, 0},
                              {1, 15, 25, 10, 1, 0},  {1, 31, 90, 65, 15, 1}};
  for (int n = 1; n <= 6; ++n) {
    auto r1 = cf::stirling_first_row(n);
    auto r2 = cf::stirling_second_row(n);
    for (int m = 1; m <= n; ++m) {
      if (r1[size_t(m - 1)] != BigInt(s1[n - 1][m - 1])) return false;
      if (r2[size_t(m - 1)] != BigInt(s2[n - 1][m - 1])) return false;
    }
  }
  const long long bells[8] = {1, 2, 5, 15, 52, 203, 877, 4140};
  const long long hs[8] = {1, 1, 4, 26, 236, 2752, 39208, 660032};
  for (int n = 1; n <= 8; ++n) {
    if (cf::bell(n) != BigInt(bells[n - 1])) return false;
    if (cf::hierarchy_count(n) != BigInt(hs[n - 1])) return false;
  }
  return true;
}

bool criterion_enumeration_counts() {
  for (int n = 1; n <= 10; ++n) {
    std::map<int, BigInt> by_blocks;
    BigInt total = 0;
    cf::PartitionStream ps(iota1(n));
    while (auto p = ps.next()) {
      by_blocks[p->block_count()] += 1;
      total += 1;
    }
    if (total != cf::bell(n)) return false;
    for (int m = 1; m <= n; ++m)
      if (by_blocks[m] != cf::stirling_second(n, m)) return false;

    std::map<int, BigInt> by_cycles;
    cf::CyclePermutationStream cs(n);
    while (auto c = cs.next()) by_cycles[int(c->cycles.size())] += 1;
    for (int m = 1; m <= n; ++m)
      if (by_cycles[m] != cf::stirling_first(n, m)) return false;

    BigInt pairings = 0;
    cf::PairPartitionStream qs(iota1(n));
    while (qs.next()) pairings += 1;
    if (pairings != cf::pair_partition_count(n)) return false;

    BigInt hier = 0;
    cf::HierarchyCursor hc(n);
    while (hc.advance()) hier += 1;
    if (hier != cf::hierarchy_count(n)) return false;
  }
  return true;
}

bool criterion_mobius_delta() {
  for (int n = 1; n <= 5; ++n) {
    auto all = cf::enumerate_partitions(iota1(n));
    for (const auto& c : all)
      for (const auto& f : all) {
        if (!cf::is_coarsening(c, f)) continue;
        BigInt from_fine = 0, from_coarse = 0;
        for (const auto& m : all) {
          if (cf::is_coarsening(c, m) && cf::is_coarsening(m, f)) {
            from_fine += cf::mobius_factor(m, f);
            from_coarse += cf::mobius_factor(c, m);
          }
        }
        BigInt want = (c == f) ? 1 : 0;
        if (from_fine != want || from_coarse != want) return false;
      }
  }
  return true;
}

bool criterion_moment_roundtrips() {
  std::uint64_t s = 1311;
  for (int t = 0; t < 100; ++t) {
    cf::MomentSequence m{cf::MomentKind::ordinary, {Rational(1)}};
    for (int n = 1; n <= 10; ++n) m.values.push_back(rq(s));
    if (cf::cumulants_to_moments(cf::moments_to_cumulants(m)) != m) return false;
    if (cf::factorial_to_moments(cf::moments_to_factorial(m)) != m) return false;
  }

  const int K = 10;
  // gaussian: moments integrate the unit second cumulant; closed form is the
  // pairing count (2k-1)!! at even orders, zero at odd
  auto gm = cf::preset_moments(cf::Preset::gaussian, K);
  cf::MomentSequence gk{cf::MomentKind::cumulant, std::vector<Rational>(K + 1, Rational(0))};
  gk.values[2] = 1;
  if (cf::cumulants_to_moments(gk) != gm) return false;
  for (int n = 0; n <= K; ++n) {
    Rational want = n % 2 ? Rational(0) : Rational(cf::odd_double_factorial(n / 2));
    if (gm.values[size_t(n)] != want) return false;
  }

  for (const Rational& lam : {Rational(1), Rational(7, 3)}) {
    auto pm = cf::preset_moments(cf::Preset::poisson, K, lam);
    cf::MomentSequence pk{cf::MomentKind::cumulant, std::vector<Rational>(K + 1, lam)};
    pk.values[0] = 0;
    if (cf::cumulants_to_moments(pk) != pm) return false;
    for (int n = 0; n <= K; ++n) {
      Rational touchard = 0;
      for (int m = 0; m <= n; ++m)
        touchard += Rational(cf::stirling_second(n, m)) * cf::int_pow(lam, m);
      if (n == 0) touchard = 1;
      if (pm.values[size_t(n)] != touchard) return false;
    }
  }

  const Rational lam(5, 4);
  auto am = cf::preset_moments(cf::Preset::gamma, K, lam);
  cf::MomentSequence ak{cf::MomentKind::cumulant, std::vector<Rational>(K + 1, Rational(0))};
  for (int n = 1; n <= K; ++n) ak.values[size_t(n)] = lam * Rational(cf::factorial(n - 1));
  if (cf::cumulants_to_moments(ak) != am) return false;
  Rational rising = 1;
  for (int n = 1; n <= K; ++n) {
    rising *= lam + Rational(n - 1);
    if (am.values[size_t(n)] != rising) return false;
  }
  return true;
}

bool criterion_fock_oracle() {
  std::uint64_t s = 555;
  auto rand_fn = [&](int dim) {
    cf::TestFunction f;
    for (int d = 0; d < dim; ++d)
      f.c.emplace_back((double(lcg(s) % 2001) - 1000.0) / 1000.0,
                       (double(lcg(s) % 2001) - 1000.0) / 1000.0);
    return f;
  };

  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + int(lcg(s) % 3);
    int len = 1 + int(lcg(s) % 6);
    cf::VertexWord w;
    int depth = 0;
    for (int i = 0; i < len; ++i) {
      bool up = lcg(s) % 2 == 0;
      if (up) ++depth;
      w.letters.push_back(up ? cf::make_create(rand_fn(dim))
                             : cf::make_annihilate(rand_fn(dim)));
    }
    cf::cx a = cf::wick_gaussian_expectation(w);
    cf::cx b = cf::truncated_oracle(1, std::max(1, depth), w);
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) return false;
  }

  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + int(lcg(s) % 3);
    int len = 1 + int(lcg(s) % 6);
    cf::VertexWord w;
    int depth = 0;
    for (int i = 0; i < len; ++i) {
      int alpha = int(lcg(s) % 2), beta = int(lcg(s) % 2);
      depth += alpha;
      w.letters.push_back(
          cf::make_poisson_vertex(rand_fn(dim), rand_fn(dim), alpha, beta));
    }
    cf::cx a = cf::poisson_field_expectation(w);
    cf::cx b = cf::truncated_oracle(1, std::max(1, depth), w);
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) return false;
  }

  const cf::TestFunction f{{cf::cx(0.6, 0.3), cf::cx(0.5, -0.2)}};
  const double nf2 = cf::norm2(f);
  cf::cx q4 = 0;
  for (int mask = 0; mask < 16; ++mask) {
    cf::VertexWord w;
    for (int i = 3; i >= 0; --i)
      w.letters.push_back((mask >> i) & 1 ? cf::make_create(f) : cf::make_annihilate(f));
    q4 += cf::wick_gaussian_expectation(w);
  }
  if (std::abs(q4 - cf::cx(3.0 * nf2 * nf2)) > 1e-10 * nf2 * nf2) return false;

  const cf::TestFunction u{{cf::cx(0.6, 0.0), cf::cx(0.8, 0.0)}};
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<cf::TestFunction, cf::TestFunction>> pairs(size_t(n), {u, u});
    double expected = cf::to_double(Rational(cf::factorial(n)));
    if (std::abs(cf::exponential_field_expectation(pairs) - cf::cx(expected)) >
        1e-10 * expected)
      return false;
  }
  return true;
}

bool criterion_dyson_schwinger() {
  std::uint64_t s = 909;
  for (int N = 1; N <= 3; ++N) {
    std::vector<std::vector<Rational>> g;
    g.assign(size_t(N), std::vector<Rational>(size_t(N)));
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) g[size_t(i)][size_t(j)] = g[size_t(j)][size_t(i)] = rq(s);

    cf::GreenTable<Rational> greens;
    greens.kind = cf::GreenKind::ordinary;
    greens.vals[{}] = Rational(1);
    for (const auto& X : all_multisets(N, 1, 6))
      greens.vals[X] = cf::isserlis_green_t(g, X);

    const std::map<Multiset, Rational> no_vertices;
    for (const auto& X : all_multisets(N, 0, 5))
      for (int x = 0; x < N; ++x)
        if (cf::ds_residual_t<Rational>(g, no_vertices, greens, x, X) != 0) return false;
  }

  auto quartic = cf::make_field_model({"x"}, {{1.0}}, {{{0, 0, 0, 0}, -0.6}});
  auto keys = all_multisets(1, 1, 8);
  auto measured = cf::measure_oracle_many(quartic, keys, cf::OracleMethod::quadrature, {});
  cf::GreenTable<double> qg;
  qg.kind = cf::GreenKind::ordinary;
  qg.vals[{}] = 1.0;
  for (const auto& [k, r] : measured) qg.vals[k] = r.value;
  for (const auto& X : all_multisets(1, 0, 5))
    if (std::abs(cf::ds_residual(quartic, qg, 0, X)) > 1e-4) return false;
  return true;
}

bool criterion_legendre() {
  auto free_model = cf::make_field_model({"x"}, {{1.7}}, {});
  auto quartic = cf::make_field_model({"x"}, {{1.0}}, {{{0, 0, 0, 0}, -0.6}});
  if (cf::legendre_duality_check(free_model, {0.0}).max_dev > 1e-3) return false;
  if (cf::legendre_duality_check(quartic, {0.0}).max_dev > 1e-3) return false;

  auto rep = cf::self_energy_series_check(quartic);
  return rep.partial_errors.size() == 3 && rep.partial_errors[0] > rep.partial_errors[1] &&
         rep.partial_errors[1] > rep.partial_errors[2];
}

bool criterion_hierarchy_expansion() {
  std::uint64_t s = 727;
  std::map<Multiset, Rational> gamma_bar;
  for (const auto& key : all_multisets(2, 2, 7)) gamma_bar[key] = rq(s);
  std::vector<std::vector<Rational>> cov2 = {{Rational(2, 3), Rational(1, 5)},
                                             {Rational(1, 5), Rational(3, 4)}};
  const BigInt want[] = {BigInt(1), BigInt(4), BigInt(26), BigInt(236)};
  for (int sz = 2; sz <= 5; ++sz) {
    Multiset X;
    for (int i = 0; i < sz; ++i) X.push_back(i % 2);
    auto inside = cf::hierarchy_cumulant_expansion(0, X, gamma_bar, cov2, 2,
                                                   cf::UpsilonNorm::root_leg_inside);
    auto outside = cf::hierarchy_cumulant_expansion(0, X, gamma_bar, cov2, 2,
                                                    cf::UpsilonNorm::root_leg_outside);
    if (BigInt(inside.terms.size()) != want[sz - 2]) return false;
    Rational rec = cf::cumulant_by_recurrence(0, X, gamma_bar, cov2, 2);
    if (inside.total != rec || outside.total != rec) return false;
  }
  return true;
}

bool criterion_wick() {
  std::uint64_t s = 313;
  const std::vector<std::vector<Multiset>> groupings = {
      {{0}, {1}},          {{0, 0}, {1, 1}},      {{0, 1}, {0, 1}},
      {{0, 0, 0}, {1, 1, 1}}, {{0}, {0}, {0, 0}}, {{0}, {1}, {0, 1}}};
  for (int table = 0; table < 10; ++table) {
    cf::GreenTable<Rational> cum;
    cum.kind = cf::GreenKind::cumulant;
    for (const auto& key : all_multisets(2, 1, 6)) cum.vals[key] = rq(s);
    cf::GreenTable<Rational> ord;
    ord.kind = cf::GreenKind::ordinary;
    ord.vals[{}] = Rational(1);
    for (const auto& key : all_multisets(2, 1, 6))
      ord.vals[key] = cf::wick_product_expectation<Rational>({}, key, cum);

    for (const auto& groups : groupings) {
      Rational lhs = cf::wick_product_expectation<Rational>(groups, {}, cum);
      cf::FieldPolynomial<Rational> prod;
      prod.coeffs[{}] = Rational(1);
      for (const auto& Y : groups) prod = cf::poly_mul(prod, cf::wick_monomial(ord, Y));
      if (lhs != cf::poly_expectation(prod, ord)) return false;
    }
  }
  return true;
}

bool criterion_ito() {
  cf::Rng root(20260819);
  for (int i = 0; i < 1000; ++i) {
    auto j = cf::sample_poisson(1.5, root.sub("cfg").sub(std::uint64_t(i)));
    for (int n = 0; n <= 6; ++n)
      if (cf::offdiag_poisson_exact(j.count(), Rational(1.5), n) !=
          cf::charlier_exact(n, Rational(j.count()), Rational(1.5)))
        return false;
  }

  for (int n : {3, 4})
    if (!cf::hermite_convergence_check(n, 10000, 100, 4711).pass) return false;

  const long long P = 100000;
  if (!cf::exponentiated_martingale_check(cf::MartingaleKind::wiener, 0.5, 1.0, P, 101).pass)
    return false;
  if (!cf::exponentiated_martingale_check(cf::MartingaleKind::poisson, 0.4, 1.0, P, 102).pass)
    return false;
  if (!cf::iterated_moment_check(1, 1, 1.0, 1.0, 200, P, 103).pass) return false;
  if (!cf::iterated_moment_check(2, 2, 1.0, 1.0, 200, P, 104).pass) return false;
  if (!cf::iterated_moment_check(1, 2, 1.0, 1.0, 200, P, 105).pass) return false;
  for (int n = 1; n <= 4; ++n) {
    if (!cf::wiener_offdiag_martingale_check(n, 64, 1.0, P, 200 + n).pass) return false;
    if (!cf::poisson_offdiag_martingale_check(n, 2.0, P, 300 + n).pass) return false;
  }

  // doubled-exponential bridge: the paths reproduce exp of the overlap
  auto rep = cf::exponentiated_martingale_check(cf::MartingaleKind::general, 0.0, 1.0, P, 401);
  return rep.pass;
}

bool criterion_arith() {
  const int N = 500;
  auto mu = cf::mobius_sieve(N);
  cf::DirichletSeries mu_series = cf::DirichletSeries::zeros(N);
  cf::DirichletSeries ones = cf::DirichletSeries::zeros(N);
  for (int i = 1; i <= N; ++i) {
    mu_series.a[size_t(i)] = mu[size_t(i)];
    ones.a[size_t(i)] = 1;
  }
  auto e = cf::dirichlet_convolve(mu_series, ones);
  if (e.a[1] != Rational(1)) return false;
  for (int i = 2; i <= N; ++i)
    if (e.a[size_t(i)] != Rational(0)) return false;

  cf::DirichletSeries sig = cf::DirichletSeries::zeros(N);
  for (int i = 1; i <= N; ++i)
    sig.a[size_t(i)] = Rational(cf::multiplicative_eval(cf::MultFn::sigma, i));
  auto id = cf::mobius_invert(sig);
  for (int i = 1; i <= N; ++i)
    if (id.a[size_t(i)] != Rational(i)) return false;

  auto rep = cf::zeta_compare(2.0, 1000000, 1000);
  return std::abs(rep.partial_sum - 1.6449340668482264) <= 2e-6 && rep.agree;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<bool()> fn;
  };
  const std::vector<Criterion> gates = {
      {"golden-tables", 1, criterion_golden_tables},
      {"enumeration-matches-counting", 30, criterion_enumeration_counts},
      {"mobius-delta-sum", 10, criterion_mobius_delta},
      {"moment-roundtrips-and-presets", 5, criterion_moment_roundtrips},
      {"fock-oracle-equivalence", 60, criterion_fock_oracle},
      {"equation-of-motion-residuals", 60, criterion_dyson_schwinger},
      {"legendre-duality-and-self-energy", 120, criterion_legendre},
      {"hierarchy-expansion", 10, criterion_hierarchy_expansion},
      {"wick-product-expectations", 30, criterion_wick},
      {"path-integral-suite", 300, criterion_ito},
      {"multiplicative-inversion-and-zeta", 30, criterion_arith},
  };

  int failures = 0;
  for (size_t i = 0; i < gates.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = gates[i].fn();
    } catch (const std::exception& e) {
      note = std::string(" [threw: ") + e.what() + "]";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = dt <= gates[i].budget_s;
    bool pass = ok && in_budget;
    failures += pass ? 0 : 1;
    std::printf("%2zu %s %s (%.2fs, budget %.0fs)%s%s\n", i + 1, pass ? "PASS" : "FAIL",
                gates[i].name, dt, gates[i].budget_s,
                !ok && note.empty() ? " [criterion not met]" : note.c_str(),
                ok && !in_budget ? " [over budget]" : "");
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu passed\n", gates.size() - size_t(failures), gates.size());
  return failures == 0 ? 0 : 1;
}
