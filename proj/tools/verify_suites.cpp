#include "verify_suites.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cf/arith.hpp"
#include "cf/combinat.hpp"
#include "cf/fock.hpp"
#include "cf/moments.hpp"

namespace cfcli {

namespace {

using cf::BigInt;
using cf::Multiset;
using cf::Rational;
using nlohmann::ordered_json;

// fixed-seed generator so every run reports identical bytes
std::uint64_t lcg(std::uint64_t& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return s >> 33;
}

Rational rq(std::uint64_t& s) {
  long long num = (long long)(lcg(s) % 19) - 9;
  long long den = (long long)(lcg(s) % 9) + 1;
  return Rational(num, den);
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

}  // namespace

std::vector<CheckResult> verify_moments() {
  using cf::MomentKind;
  using cf::MomentSequence;
  std::vector<CheckResult> out;
  const int order = 10;

  std::uint64_t s = 20260819;
  {
    bool ok = true;
    const int trials = 25;
    for (int t = 0; ok && t < trials; ++t) {
      MomentSequence m{MomentKind::ordinary, {Rational(1)}};
      for (int n = 1; n <= order; ++n) m.values.push_back(rq(s));
      ok = cf::cumulants_to_moments(cf::moments_to_cumulants(m)) == m;
    }
    out.push_back({"ordinary-cumulant-roundtrip", ok,
                   {{"sequences", 25}, {"order", order}, {"exact", true}}});
  }
  {
    bool ok = true;
    const int trials = 25;
    for (int t = 0; ok && t < trials; ++t) {
      MomentSequence m{MomentKind::ordinary, {Rational(1)}};
      for (int n = 1; n <= order; ++n) m.values.push_back(rq(s));
      ok = cf::factorial_to_moments(cf::moments_to_factorial(m)) == m;
    }
    out.push_back({"ordinary-factorial-roundtrip", ok,
                   {{"sequences", 25}, {"order", order}, {"exact", true}}});
  }
  {
    // unit-variance cumulant sequence (0,0,1,0,...) must integrate to the
    // pairing-count moments
    MomentSequence k{MomentKind::cumulant, std::vector<Rational>(order + 1, Rational(0))};
    k.values[2] = 1;
    bool ok = cf::cumulants_to_moments(k) == cf::preset_moments(cf::Preset::gaussian, order);
    out.push_back({"gaussian-pairing-moments", ok, {{"order", order}, {"exact", true}}});
  }
  {
    bool ok = true;
    for (const Rational& lam :
         {Rational(1), Rational(2), Rational(5, 2), Rational(7, 3)}) {
      auto kap = cf::moments_to_cumulants(cf::preset_moments(cf::Preset::poisson, order, lam));
      for (int n = 1; n <= order; ++n) ok = ok && kap.values[size_t(n)] == lam;
    }
    out.push_back({"poisson-cumulants-all-lambda", ok,
                   {{"lambdas", {"1", "2", "5/2", "7/3"}}, {"order", order}, {"exact", true}}});
  }
  {
    bool ok = true;
    const Rational lam(3, 2);
    auto fac = cf::moments_to_factorial(cf::preset_moments(cf::Preset::poisson, order, lam));
    Rational p(1);
    for (int n = 1; n <= order; ++n) {
      p *= lam;
      ok = ok && fac.values[size_t(n)] == p;
    }
    out.push_back({"poisson-factorial-powers", ok,
                   {{"lambda", "3/2"}, {"order", order}, {"exact", true}}});
  }
  {
    bool ok = true;
    const Rational lam(5, 4);
    auto kap = cf::moments_to_cumulants(cf::preset_moments(cf::Preset::gamma, order, lam));
    for (int n = 1; n <= order; ++n)
      ok = ok && kap.values[size_t(n)] == lam * Rational(cf::factorial(n - 1));
    out.push_back({"gamma-cumulant-factorials", ok,
                   {{"lambda", "5/4"}, {"order", order}, {"exact", true}}});
  }
  return out;
}

std::vector<CheckResult> verify_fock() {
  using cf::cx;
  using cf::TestFunction;
  using cf::VertexWord;
  std::vector<CheckResult> out;

  const TestFunction f{{cx(0.6, 0.3), cx(0.5, -0.2)}};
  const double nf2 = cf::norm2(f);

  {
    // field operator B+(f) + B-(f): fourth vacuum moment expands into 16 words
    cx combinatorial = 0, literal = 0;
    for (int mask = 0; mask < 16; ++mask) {
      VertexWord w;
      for (int i = 3; i >= 0; --i)
        w.letters.push_back((mask >> i) & 1 ? cf::make_create(f) : cf::make_annihilate(f));
      combinatorial += cf::wick_gaussian_expectation(w);
      literal += cf::truncated_oracle(1, 4, w);
    }
    double expected = 3.0 * nf2 * nf2;
    double dev = std::max(std::abs(combinatorial - cx(expected)),
                          std::abs(literal - cx(expected)));
    bool ok = dev <= 1e-10 * expected;
    out.push_back({"q4-vacuum",
                   ok,
                   {{"value", combinatorial.real()},
                    {"expected", expected},
                    {"oracle", literal.real()},
                    {"tolerance_rel", 1e-10}}});
  }
  {
    // commuting number vertices over a unit vector: permanent of all-ones
    const TestFunction u{{cx(0.6, 0.0), cx(0.8, 0.0)}};
    bool ok = true;
    double worst = 0;
    for (int n = 1; n <= 5; ++n) {
      VertexWord w;
      std::vector<std::pair<TestFunction, TestFunction>> pairs;
      for (int i = 0; i < n; ++i) {
        pairs.emplace_back(u, u);
        w.letters.push_back(cf::make_exp_vertex(u, u));
      }
      double expected = cf::to_double(Rational(cf::factorial(n)));
      double dev = std::max(std::abs(cf::exponential_field_expectation(pairs) - cx(expected)),
                            std::abs(cf::truncated_oracle(2, 2 * n, w) - cx(expected)));
      worst = std::max(worst, dev / expected);
      ok = ok && dev <= 1e-10 * expected;
    }
    out.push_back({"number-word-factorial",
                   ok,
                   {{"orders", 5}, {"max_rel_dev", worst}, {"tolerance_rel", 1e-10}}});
  }
  {
    // unit test function turns the flagged-vertex moments into bell numbers
    const TestFunction u{{cx(0.6, 0.0), cx(0.8, 0.0)}};
    bool ok = true;
    double worst = 0;
    for (int n = 1; n <= 8; ++n) {
      double expected = cf::to_double(Rational(cf::bell(n)));
      double dev = std::abs(cf::poisson_observable_moment(u, n) - expected) / expected;
      worst = std::max(worst, dev);
      ok = ok && dev <= 1e-12;
    }
    out.push_back({"poisson-moments-bell", ok,
                   {{"orders", 8}, {"max_rel_dev", worst}, {"tolerance_rel", 1e-12}}});
  }
  {
    // matching sum vs literal operator application on mixed two-mode words
    const TestFunction g{{cx(0.2, -0.4), cx(-0.3, 0.1)}};
    std::uint64_t s = 77;
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 40; ++trial) {
      int len = 2 + int(lcg(s) % 5);
      VertexWord w;
      int depth = 0;
      for (int i = 0; i < len; ++i) {
        bool up = lcg(s) % 2 == 0;
        const TestFunction& h = lcg(s) % 2 == 0 ? f : g;
        w.letters.push_back(up ? cf::make_create(h) : cf::make_annihilate(h));
        depth += up ? 1 : 0;
      }
      cx a = cf::wick_gaussian_expectation(w);
      cx b = cf::truncated_oracle(1, std::max(1, depth), w);
      double dev = std::abs(a - b);
      worst = std::max(worst, dev);
      ok = ok && dev <= 1e-10 * (1.0 + std::abs(a));
    }
    out.push_back({"gaussian-oracle-agreement", ok,
                   {{"words", 40}, {"max_abs_dev", worst}, {"tolerance_rel", 1e-10}}});
  }
  {
    // exponential vectors: truncated series against the closed form
    const TestFunction g{{cx(0.2, -0.4), cx(-0.3, 0.1)}};
    cx ip = cf::inner(f, g);
    cx lhs = cf::exponential_vector_inner(f, g, 24);
    cx rhs = std::exp(ip);
    double dev = std::abs(lhs - rhs);
    bool ok = dev <= 1e-12;
    out.push_back({"exp-vector-inner", ok,
                   {{"abs_dev", dev}, {"truncation", 24}, {"tolerance_abs", 1e-12}}});
  }
  return out;
}

std::vector<CheckResult> verify_fields(const cf::FieldModel& m, double ds_tolerance) {
  std::vector<CheckResult> out;
  const int n = m.size();

  {
    // equation-of-motion residuals on quadrature-measured green tables
    const int max_x_order = n == 1 ? 5 : 3;
    const int green_order = max_x_order + std::max(1, m.max_vertex_degree()) - 1;
    cf::OracleOptions opt;
    opt.grid_points = n == 1 ? 2001 : (n == 2 ? 301 : 61);

    auto keys = all_multisets(n, 1, green_order);
    auto measured = cf::measure_oracle_many(m, keys, cf::OracleMethod::quadrature, opt);
    cf::GreenTable<double> greens;
    greens.kind = cf::GreenKind::ordinary;
    greens.vals[{}] = 1.0;
    for (const auto& [k, r] : measured) greens.vals[k] = r.value;

    double worst = 0;
    int count = 0;
    for (const auto& X : all_multisets(n, 0, max_x_order))
      for (int x = 0; x < n; ++x) {
        worst = std::max(worst, std::abs(cf::ds_residual(m, greens, x, X)));
        ++count;
      }
    out.push_back({"ds-residuals",
                   worst <= ds_tolerance,
                   {{"equations", count},
                    {"max_lhs_order", max_x_order + 1},
                    {"grid_points", opt.grid_points},
                    {"max_residual", worst},
                    {"tolerance", ds_tolerance}}});
  }

  if (n <= 2) {
    auto rep = cf::legendre_duality_check(m, std::vector<double>(size_t(n), 0.0));
    out.push_back({"legendre-duality",
                   rep.max_dev <= 1e-3,
                   {{"max_dev", rep.max_dev}, {"tolerance", 1e-3}}});
  }

  if (n == 1) {
    auto rep = cf::self_energy_series_check(m);
    bool ok = rep.partial_errors.size() == 3 &&
              rep.partial_errors[0] > rep.partial_errors[1] &&
              rep.partial_errors[1] > rep.partial_errors[2];
    out.push_back({"self-energy-series",
                   ok,
                   {{"c2", rep.c2},
                    {"pi", rep.pi},
                    {"partial_errors", rep.partial_errors}}});
  }

  {
    // tree-sum term counts and agreement with the one-step recurrence,
    // exact in rationals on a fixed two-site table
    std::uint64_t s = 4242;
    std::map<Multiset, Rational> gamma_bar;
    for (const auto& key : all_multisets(2, 2, 7)) gamma_bar[key] = rq(s);
    std::vector<std::vector<Rational>> cov2 = {{Rational(2, 3), Rational(1, 5)},
                                               {Rational(1, 5), Rational(3, 4)}};
    bool counts_ok = true, totals_ok = true;
    const BigInt want[] = {BigInt(1), BigInt(4), BigInt(26), BigInt(236)};
    for (int sz = 2; sz <= 5; ++sz) {
      Multiset X;
      for (int i = 0; i < sz; ++i) X.push_back(i % 2);
      auto inside = cf::hierarchy_cumulant_expansion(0, X, gamma_bar, cov2, 2,
                                                     cf::UpsilonNorm::root_leg_inside);
      auto outside = cf::hierarchy_cumulant_expansion(0, X, gamma_bar, cov2, 2,
                                                      cf::UpsilonNorm::root_leg_outside);
      counts_ok = counts_ok && BigInt(inside.terms.size()) == want[sz - 2];
      Rational rec = cf::cumulant_by_recurrence(0, X, gamma_bar, cov2, 2);
      totals_ok = totals_ok && inside.total == rec && outside.total == rec;
    }
    out.push_back({"hierarchy-term-counts", counts_ok,
                   {{"orders", {3, 4, 5, 6}}, {"counts", {1, 4, 26, 236}}}});
    out.push_back({"tree-vs-recurrence", totals_ok,
                   {{"orders", {3, 4, 5, 6}}, {"norms", 2}, {"exact", true}}});
  }

  {
    // product expectations: partition formula vs normal-ordered expansion
    std::uint64_t s = 9191;
    cf::GreenTable<Rational> cum;
    cum.kind = cf::GreenKind::cumulant;
    for (const auto& key : all_multisets(2, 1, 6)) cum.vals[key] = rq(s);

    cf::GreenTable<Rational> ord;
    ord.kind = cf::GreenKind::ordinary;
    ord.vals[{}] = Rational(1);
    for (const auto& key : all_multisets(2, 1, 6))
      ord.vals[key] = cf::wick_product_expectation<Rational>({}, key, cum);

    bool ok = true;
    const std::vector<std::pair<Multiset, Multiset>> cases = {
        {{0}, {1}},       {{0, 0}, {1, 1}},    {{0, 1}, {0, 1}},
        {{0, 0, 1}, {1}}, {{0, 1, 1}, {0, 0}}, {{0, 0, 0}, {1, 1, 1}}};
    for (const auto& [A, B] : cases) {
      Rational lhs = cf::wick_product_expectation<Rational>({A, B}, {}, cum);
      Rational rhs = cf::poly_expectation(
          cf::poly_mul(cf::wick_monomial(ord, A), cf::wick_monomial(ord, B)), ord);
      ok = ok && lhs == rhs;
    }
    out.push_back({"wick-recursion-agreement", ok,
                   {{"products", int(cases.size())}, {"max_order", 6}, {"exact", true}}});
  }
  return out;
}

std::vector<CheckResult> verify_arith() {
  std::vector<CheckResult> out;
  const int N = 500;

  {
    cf::DirichletSeries ones = cf::DirichletSeries::zeros(N);
    for (int i = 1; i <= N; ++i) ones.a[size_t(i)] = 1;
    auto e = cf::mobius_invert(ones);
    bool ok = e.a[1] == Rational(1);
    for (int i = 2; i <= N; ++i) ok = ok && e.a[size_t(i)] == Rational(0);
    out.push_back({"mobius-unit-inverse", ok, {{"length", N}, {"exact", true}}});
  }
  {
    cf::DirichletSeries sig = cf::DirichletSeries::zeros(N);
    for (int i = 1; i <= N; ++i)
      sig.a[size_t(i)] = Rational(cf::multiplicative_eval(cf::MultFn::sigma, i));
    auto id = cf::mobius_invert(sig);
    bool ok = true;
    for (int i = 1; i <= N; ++i) ok = ok && id.a[size_t(i)] == Rational(i);
    out.push_back({"mobius-inversion-sigma", ok, {{"length", N}, {"exact", true}}});
  }
  {
    auto rep = cf::zeta_compare(2.0, 1000000, 1000);
    const double target = 1.6449340668482264;  // pi^2 / 6
    double dev = std::abs(rep.partial_sum - target);
    bool ok = dev <= 2e-6 && rep.agree;
    out.push_back({"zeta-two-partial-sum",
                   ok,
                   {{"partial_sum", rep.partial_sum},
                    {"target", target},
                    {"abs_dev", dev},
                    {"tolerance", 2e-6},
                    {"euler_product_agrees", rep.agree}}});
  }
  {
    auto rep = cf::zeta_compare(4.0, 1000, 100);
    const double target = 1.0823232337111382;  // pi^4 / 90
    double dev = std::abs(rep.partial_sum - target);
    bool ok = dev <= rep.partial_tail + 1e-12 && rep.agree;
    out.push_back({"zeta-four-tail-bound",
                   ok,
                   {{"partial_sum", rep.partial_sum},
                    {"target", target},
                    {"abs_dev", dev},
                    {"tail_bound", rep.partial_tail},
                    {"euler_product_agrees", rep.agree}}});
  }
  {
    bool ok = true;
    long long checked = 0;
    for (long long a = 2; a * 2 <= 2000 && ok; ++a)
      for (long long b = a + 1; a * b <= 2000 && ok; ++b) {
        if (std::gcd(a, b) != 1) continue;
        ++checked;
        for (auto fn : {cf::MultFn::d, cf::MultFn::sigma, cf::MultFn::phi})
          ok = ok && cf::multiplicative_eval(fn, a * b) ==
                         cf::multiplicative_eval(fn, a) * cf::multiplicative_eval(fn, b);
      }
    out.push_back({"multiplicative-on-coprime", ok,
                   {{"pairs", checked}, {"functions", {"d", "sigma", "phi"}}}});
  }
  return out;
}

}  // namespace cfcli
