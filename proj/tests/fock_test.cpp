#include "cf/fock.hpp"

#include <cmath>
#include <vector>

#include "cf/combinat.hpp"
#include "cf/errors.hpp"
#include "cf/moments.hpp"
#include "cf/rng.hpp"
#include "doctest.h"

using namespace cf;

namespace {

TestFunction rand_fn(Rng& rng, int d) {
  TestFunction f;
  for (int i = 0; i < d; ++i)
    f.c.push_back(cx(2 * rng.next_double() - 1, 2 * rng.next_double() - 1));
  return f;
}

std::vector<cx> embed_at(const TestFunction& f, int copy, int modes) {
  std::vector<cx> F(modes, cx(0));
  for (int j = 0; j < f.dim(); ++j) F[size_t(copy) * f.dim() + j] = f.c[j];
  return F;
}

std::vector<cx> add(std::vector<cx> a, const std::vector<cx>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<cx> axpy(cx c, const std::vector<cx>& u, std::vector<cx> v) {
  for (size_t i = 0; i < v.size(); ++i) v[i] += c * u[i];
  return v;
}

TestFunction cw_scale(const TestFunction& f, const std::vector<double>& s) {
  TestFunction r = f;
  for (int i = 0; i < r.dim(); ++i) r.c[i] *= s[i];
  return r;
}

double dist(cx a, cx b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("truncated space obeys the commutation relation on safe states") {
  TruncatedSpace sp(2, 4);
  CHECK(sp.dim() == 15);  // C(6,2)
  Rng rng(11);
  auto f = rand_fn(rng, 2), g = rand_fn(rng, 2);
  cx ip = inner(f, g);
  for (int i = 0; i < sp.dim(); ++i) {
    int total = 0;
    for (int x : sp.occupation(i)) total += x;
    if (total > 3) continue;  // creation past the cap truncates, skip
    std::vector<cx> u(sp.dim(), cx(0));
    u[i] = 1;
    auto lhs = sp.annihilate(f.c, sp.create(g.c, u));
    auto rhs = sp.create(g.c, sp.annihilate(f.c, u));
    for (int j = 0; j < sp.dim(); ++j)
      CHECK(dist(lhs[j] - rhs[j], ip * u[j]) < 1e-12);
  }
}

TEST_CASE("gaussian field moments: pairing count times norm powers") {
  Rng rng(23);
  auto f = rand_fn(rng, 3);
  double nf2 = norm2(f);
  for (int k = 1; k <= 6; ++k) {
    // expand (B+ + B-)^k over all 2^k words
    cx total = 0;
    for (int mask = 0; mask < (1 << k); ++mask) {
      VertexWord w;
      for (int i = 0; i < k; ++i)
        w.letters.push_back((mask >> i) & 1 ? make_create(f) : make_annihilate(f));
      total += wick_gaussian_expectation(w);
    }
    double want = (k % 2) ? 0.0 : double(odd_double_factorial(k / 2)) * std::pow(nf2, k / 2);
    CHECK(dist(total, want) < 1e-10 * std::max(1.0, want));

    // same expansion applied literally on the truncated space
    TruncatedSpace sp(3, k);
    auto v = sp.vacuum();
    for (int i = 0; i < k; ++i) v = add(sp.create(f.c, v), sp.annihilate(f.c, v));
    CHECK(dist(sp.inner(sp.vacuum(), v), total) < 1e-10 * std::max(1.0, want));
  }
}

TEST_CASE("wick matching sum equals the literal operator word") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + int(rng.next_u64() % 2);
    int half = 1 + int(rng.next_u64() % 3);
    // random balanced word
    std::vector<int> kinds(2 * half, 0);
    for (int i = 0; i < half; ++i) kinds[i] = 1;
    for (int i = int(kinds.size()) - 1; i > 0; --i)
      std::swap(kinds[i], kinds[rng.next_u64() % (i + 1)]);
    VertexWord w;
    for (int kk : kinds)
      w.letters.push_back(kk ? make_create(rand_fn(rng, d)) : make_annihilate(rand_fn(rng, d)));
    cx combinatorial = wick_gaussian_expectation(w);
    cx literal = truncated_oracle(1, half, w);
    CHECK(dist(combinatorial, literal) < 1e-10);
  }

  // unbalanced words vanish
  Rng rng2(5);
  VertexWord unb;
  unb.letters = {make_create(rand_fn(rng2, 2)), make_create(rand_fn(rng2, 2)),
                 make_annihilate(rand_fn(rng2, 2))};
  CHECK(dist(wick_gaussian_expectation(unb), 0.0) < 1e-15);
  CHECK(dist(truncated_oracle(1, 2, unb), 0.0) < 1e-15);

  VertexWord pair;
  auto g = rand_fn(rng2, 3), f = rand_fn(rng2, 3);
  pair.letters = {make_annihilate(g), make_create(f)};
  CHECK(dist(wick_gaussian_expectation(pair), inner(g, f)) < 1e-14);
}

TEST_CASE("flagged poisson words match the literal oracle for every flag choice") {
  Rng rng(101);
  const int n = 3;
  std::vector<TestFunction> fs, gs;
  for (int i = 0; i < n; ++i) {
    fs.push_back(rand_fn(rng, 2));
    gs.push_back(rand_fn(rng, 2));
  }
  cx summed = 0;
  for (int am = 0; am < (1 << n); ++am)
    for (int bm = 0; bm < (1 << n); ++bm) {
      VertexWord w;  // letters left to right, so vertex n (applied last) first
      for (int i = n - 1; i >= 0; --i)
        w.letters.push_back(
            make_poisson_vertex(fs[i], gs[i], (am >> i) & 1, (bm >> i) & 1));
      cx via_partitions = poisson_field_expectation(w);
      cx via_oracle = truncated_oracle(1, std::max(1, n), w);
      CHECK(dist(via_partitions, via_oracle) < 1e-12);
      summed += via_partitions;
    }

  // the flag sum telescopes into the unrestricted partition sum
  cx direct = poisson_summed_expectation(fs, gs);
  CHECK(dist(summed, direct) < 1e-12);

  // and into the literal product of (1 + B+)(1 + B-) factors
  TruncatedSpace sp(2, n);
  auto v = sp.vacuum();
  for (int i = 0; i < n; ++i) {  // vertex i+1 applied i-th
    v = axpy(1, v, sp.annihilate(gs[i].c, v));
    v = axpy(1, v, sp.create(fs[i].c, v));
  }
  CHECK(dist(sp.inner(sp.vacuum(), v), direct) < 1e-12);
}

TEST_CASE("poisson words with a leading annihilator or trailing creator vanish") {
  Rng rng(7);
  auto f = rand_fn(rng, 2), g = rand_fn(rng, 2);
  VertexWord w;
  w.letters = {make_poisson_vertex(f, g, 1, 1), make_poisson_vertex(f, g, 1, 1)};
  // earliest vertex consumes from the vacuum: nothing to consume
  CHECK(dist(poisson_field_expectation(w), 0.0) < 1e-15);
  VertexWord w2;
  w2.letters = {make_poisson_vertex(f, g, 1, 0), make_poisson_vertex(f, g, 1, 0)};
  // latest vertex creates and nothing consumes it afterwards
  CHECK(dist(poisson_field_expectation(w2), 0.0) < 1e-15);
  VertexWord ok;
  ok.letters = {make_poisson_vertex(f, g, 0, 1), make_poisson_vertex(f, g, 1, 0)};
  CHECK(dist(poisson_field_expectation(ok), inner(g, f)) < 1e-14);
}

TEST_CASE("poisson observable moments") {
  TestFunction f;
  f.c = {cx(1, 0), cx(0, 1)};  // <f|f> = 2
  CHECK(poisson_observable_moment(f, 0) == doctest::Approx(1.0));
  CHECK(poisson_observable_moment(f, 1) == doctest::Approx(1.0));
  CHECK(poisson_observable_moment(f, 2) == doctest::Approx(3.0));   // S(2,1) 2 + 1
  CHECK(poisson_observable_moment(f, 3) == doctest::Approx(11.0));  // 4 + 6 + 1

  // literal check: n-fold application of (1 + B+)(1 + B-)
  for (int n = 1; n <= 4; ++n) {
    TruncatedSpace sp(2, n);
    auto v = sp.vacuum();
    for (int i = 0; i < n; ++i) {
      v = axpy(1, v, sp.annihilate(f.c, v));
      v = axpy(1, v, sp.create(f.c, v));
    }
    CHECK(poisson_observable_moment(f, n) ==
          doctest::Approx(sp.inner(sp.vacuum(), v).real()).epsilon(1e-12));
  }

  // unit norm reduces to the bell numbers, matching the unit-rate preset
  TestFunction u;
  u.c = {cx(std::sqrt(0.5), 0), cx(0, std::sqrt(0.5))};
  auto mseq = preset_moments(Preset::poisson, 6, 1);
  for (int n = 0; n <= 6; ++n)
    CHECK(poisson_observable_moment(u, n) ==
          doctest::Approx(double(Rational(mseq.values[n]))).epsilon(1e-12));

  TestFunction zero;
  zero.c = {cx(0, 0)};
  CHECK_THROWS_AS(poisson_observable_moment(zero, 2), domain_error);
}

TEST_CASE("exponential vertices: permanent values and commuting halves") {
  Rng rng(53);
  const int d = 2;

  SUBCASE("k = 1 and k = 2 hand formulas") {
    auto f1 = rand_fn(rng, d), g1 = rand_fn(rng, d);
    auto f2 = rand_fn(rng, d), g2 = rand_fn(rng, d);
    cx one = exponential_field_expectation({{f1, g1}});
    CHECK(dist(one, inner(g1, f1)) < 1e-14);
    cx two = exponential_field_expectation({{f1, g1}, {f2, g2}});
    cx want = inner(g1, f1) * inner(g2, f2) + inner(g2, f1) * inner(g1, f2);
    CHECK(dist(two, want) < 1e-13);
  }

  SUBCASE("permutation sum equals the literal doubled-space word") {
    for (int k = 1; k <= 3; ++k) {
      std::vector<std::pair<TestFunction, TestFunction>> pairs;
      VertexWord w;
      for (int i = 0; i < k; ++i) pairs.push_back({rand_fn(rng, d), rand_fn(rng, d)});
      for (int i = k - 1; i >= 0; --i)
        w.letters.push_back(make_exp_vertex(pairs[i].first, pairs[i].second));
      cx via_perms = exponential_field_expectation(pairs);
      cx via_oracle = truncated_oracle(2, 2 * k, w);
      CHECK(dist(via_perms, via_oracle) < 1e-11);
    }
  }

  SUBCASE("number operator powers give factorials") {
    TestFunction e1;
    e1.c = {cx(1, 0)};
    for (int n = 1; n <= 5; ++n) {
      std::vector<std::pair<TestFunction, TestFunction>> pairs(n, {e1, e1});
      CHECK(dist(exponential_field_expectation(pairs), double(factorial(n))) < 1e-10);
    }
  }

  SUBCASE("letters of the doubled field commute inside words") {
    auto f1 = rand_fn(rng, d), g1 = rand_fn(rng, d);
    auto f2 = rand_fn(rng, d), g2 = rand_fn(rng, d);
    VertexWord a, b, c;
    a.letters = {make_create(f1), make_annihilate(g1), make_create(f2), make_annihilate(g2)};
    b.letters = {make_annihilate(g1), make_create(f1), make_annihilate(g2), make_create(f2)};
    c.letters = {make_annihilate(g2), make_annihilate(g1), make_create(f2), make_create(f1)};
    cx va = truncated_oracle(2, 4, a);
    cx vb = truncated_oracle(2, 4, b);
    cx vc = truncated_oracle(2, 4, c);
    CHECK(dist(va, vb) < 1e-12);
    CHECK(dist(va, vc) < 1e-12);
  }
}

TEST_CASE("exponential vectors: truncated inner products converge to exp<f|g>") {
  Rng rng(71);
  auto f = rand_fn(rng, 2), g = rand_fn(rng, 2);
  cx ip = inner(f, g);
  cx target = std::exp(ip);
  double prev = 1e9;
  for (int M : {4, 8, 16, 24}) {
    double err = dist(exponential_vector_inner(f, g, M), target);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-12);

  // literal exponential vector built by the creation series
  const int M = 12;
  TruncatedSpace sp(2, M);
  auto ef = sp.vacuum(), term = sp.vacuum();
  for (int n = 1; n <= M; ++n) {
    term = sp.create(f.c, term);
    for (cx& z : term) z /= double(n);
    ef = add(ef, term);
  }
  auto eg = sp.vacuum();
  term = sp.vacuum();
  for (int n = 1; n <= M; ++n) {
    term = sp.create(g.c, term);
    for (cx& z : term) z /= double(n);
    eg = add(eg, term);
  }
  CHECK(dist(sp.inner(ef, eg), exponential_vector_inner(f, g, M)) < 1e-12);
}

TEST_CASE("thermal double: commutation relation and gaussian moment pattern") {
  const int d = 2;
  std::vector<double> rho = {0.6, 0.25};
  std::vector<double> sq_up(d), sq_dn(d);
  for (int i = 0; i < d; ++i) {
    sq_up[i] = std::sqrt(rho[i] + 1);
    sq_dn[i] = std::sqrt(rho[i]);
  }
  const int modes = 2 * d;

  auto bplus = [&](const TruncatedSpace& sp, const TestFunction& f, const std::vector<cx>& u) {
    auto a = sp.create(embed_at(cw_scale(f, sq_up), 0, modes), u);
    auto b = sp.annihilate(embed_at(conjugated(cw_scale(f, sq_dn)), 1, modes), u);
    return add(a, b);
  };
  auto bminus = [&](const TruncatedSpace& sp, const TestFunction& f, const std::vector<cx>& u) {
    auto a = sp.annihilate(embed_at(cw_scale(f, sq_up), 0, modes), u);
    auto b = sp.create(embed_at(conjugated(cw_scale(f, sq_dn)), 1, modes), u);
    return add(a, b);
  };

  Rng rng(87);
  auto f = rand_fn(rng, d), g = rand_fn(rng, d);

  SUBCASE("commutator is <f|g> on safe basis states") {
    TruncatedSpace sp(modes, 4);
    cx ip = inner(f, g);
    for (int i = 0; i < sp.dim(); ++i) {
      int total = 0;
      for (int x : sp.occupation(i)) total += x;
      if (total > 2) continue;
      std::vector<cx> u(sp.dim(), cx(0));
      u[i] = 1;
      auto lhs = bminus(sp, f, bplus(sp, g, u));
      auto rhs = bplus(sp, g, bminus(sp, f, u));
      for (int j = 0; j < sp.dim(); ++j)
        CHECK(dist(lhs[j] - rhs[j], ip * u[j]) < 1e-12);
    }
  }

  SUBCASE("field powers follow the pairing count with thermal covariance") {
    double cf = thermal_quadratic_form(f, rho);
    // by hand: sum (2 rho_d + 1) |f_d|^2
    double byhand = (2 * rho[0] + 1) * std::norm(f.c[0]) + (2 * rho[1] + 1) * std::norm(f.c[1]);
    CHECK(cf == doctest::Approx(byhand));
    for (int k = 1; k <= 3; ++k) {
      TruncatedSpace sp(modes, 2 * k);
      auto v = sp.vacuum();
      for (int i = 0; i < 2 * k; ++i) v = add(bplus(sp, f, v), bminus(sp, f, v));
      double want = double(odd_double_factorial(k)) * std::pow(cf, k);
      CHECK(sp.inner(sp.vacuum(), v).real() == doctest::Approx(want).epsilon(1e-10));
      // odd powers vanish
      auto vo = sp.vacuum();
      for (int i = 0; i < 2 * k - 1; ++i) vo = add(bplus(sp, f, vo), bminus(sp, f, vo));
      CHECK(std::abs(sp.inner(sp.vacuum(), vo)) < 1e-12);
    }
  }

  SUBCASE("planck occupation matches the half-argument coth") {
    for (double x : {0.3, 0.7, 2.0}) {
      double occ = 1.0 / std::expm1(x);
      CHECK(2 * occ + 1 == doctest::Approx(std::cosh(x / 2) / std::sinh(x / 2)).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(thermal_quadratic_form(f, {0.5}), domain_error);
  CHECK_THROWS_AS(thermal_quadratic_form(f, {0.5, -0.1}), domain_error);
}

TEST_CASE("oracle guards") {
  Rng rng(3);
  auto f = rand_fn(rng, 2);
  VertexWord w;
  w.letters = {make_create(f), make_create(f), make_annihilate(f), make_annihilate(f)};
  CHECK_THROWS_AS(truncated_oracle(1, 1, w), precision_error);  // depth 2 needs M >= 2
  CHECK_THROWS_AS(truncated_oracle(3, 4, w), domain_error);
  VertexWord mixed;
  mixed.letters = {make_create(f), make_poisson_vertex(f, f, 1, 1)};
  CHECK_THROWS_AS(wick_gaussian_expectation(mixed), domain_error);
  VertexWord expw;
  expw.letters = {make_exp_vertex(f, f)};
  CHECK_THROWS_AS(truncated_oracle(1, 4, expw), domain_error);
  TestFunction other;
  other.c = {cx(1, 0), cx(0, 0), cx(0, 0)};
  VertexWord dims;
  dims.letters = {make_create(f), make_annihilate(other)};
  CHECK_THROWS_AS(wick_gaussian_expectation(dims), domain_error);
  CHECK_THROWS_AS(TruncatedSpace(40, 40), capacity_error);
}
