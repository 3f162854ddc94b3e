#include "cf/moments.hpp"

#include "cf/combinat.hpp"
#include "cf/errors.hpp"
#include "doctest.h"

using namespace cf;

static MomentSequence seq(MomentKind k, std::vector<Rational> v) {
  return MomentSequence{k, std::move(v)};
}

TEST_CASE("gaussian preset and its cumulants") {
  auto m = preset_moments(Preset::gaussian, 8);
  REQUIRE(m.order() == 8);
  CHECK(m.values == std::vector<Rational>{1, 0, 1, 0, 3, 0, 15, 0, 105});

  auto c = moments_to_cumulants(m);
  CHECK(c.kind == MomentKind::cumulant);
  CHECK(c.values == std::vector<Rational>{0, 0, 1, 0, 0, 0, 0, 0, 0});
  CHECK(cumulants_to_moments(c).values == m.values);
}

TEST_CASE("poisson preset: bell moments, flat cumulants, pure factorial powers") {
  auto m = preset_moments(Preset::poisson, 8, 1);
  for (int n = 0; n <= 8; ++n) CHECK(m.values[n] == Rational(bell(n)));

  auto c = moments_to_cumulants(m);
  for (int n = 1; n <= 8; ++n) CHECK(c.values[n] == 1);

  auto lam = Rational(3, 2);
  auto m2 = preset_moments(Preset::poisson, 6, lam);
  auto c2 = moments_to_cumulants(m2);
  for (int n = 1; n <= 6; ++n) CHECK(c2.values[n] == lam);

  auto f2 = moments_to_factorial(m2);
  Rational pw = 1;
  for (int n = 1; n <= 6; ++n) {
    pw *= lam;
    CHECK(f2.values[n] == pw);
  }
  CHECK(factorial_to_moments(f2).values == m2.values);
}

TEST_CASE("gamma preset: rising factorials, cumulants lambda (n-1)!") {
  auto m = preset_moments(Preset::gamma, 5, 2);
  CHECK(m.values == std::vector<Rational>{1, 2, 6, 24, 120, 720});
  auto c = moments_to_cumulants(m);
  CHECK(c.values[1] == 2);
  CHECK(c.values[2] == 2);
  CHECK(c.values[3] == 4);
  CHECK(c.values[4] == 12);
  CHECK(c.values[5] == 48);
}

TEST_CASE("conversions are mutually inverse on arbitrary rational data") {
  auto c = seq(MomentKind::cumulant,
               {0, Rational(1, 3), Rational(-2, 5), 7, Rational(11, 2), -1,
                Rational(5, 7), 0, Rational(9, 4)});
  auto m = cumulants_to_moments(c);
  CHECK(m.kind == MomentKind::ordinary);
  CHECK(moments_to_cumulants(m).values == c.values);

  auto f = moments_to_factorial(m);
  CHECK(f.kind == MomentKind::factorial);
  CHECK(factorial_to_moments(f).values == m.values);
}

TEST_CASE("profile-weighted sums agree with literal partition enumeration") {
  std::vector<Rational> kappa = {0, Rational(2, 3), -1, Rational(7, 5),
                                 3,  Rational(-1, 2), 5, Rational(13, 11), 2};
  auto m = cumulants_to_moments(seq(MomentKind::cumulant, kappa));
  for (int n = 1; n <= 8; ++n)
    CHECK(m.values[n] == moment_from_cumulants_by_enumeration(kappa, n));

  for (int n = 1; n <= 8; ++n)
    CHECK(moments_to_cumulants(m).values[n] ==
          cumulant_from_moments_by_enumeration(m.values, n));
}

TEST_CASE("moment sequence validation") {
  CHECK_THROWS_AS(cumulants_to_moments(seq(MomentKind::ordinary, {1, 1})), domain_error);
  CHECK_THROWS_AS(moments_to_cumulants(seq(MomentKind::cumulant, {0, 1})), domain_error);
  CHECK_THROWS_AS(cumulants_to_moments(seq(MomentKind::cumulant, {1, 1})), domain_error);
  CHECK_THROWS_AS(moments_to_cumulants(seq(MomentKind::ordinary, {2, 1})), domain_error);
  CHECK_THROWS_AS(moments_to_cumulants(seq(MomentKind::ordinary, {})), domain_error);
  CHECK_THROWS_AS(preset_moments(Preset::poisson, 5, 0), domain_error);
  CHECK_THROWS_AS(preset_moments(Preset::gamma, 5, -2), domain_error);
  CHECK_THROWS_AS(preset_moments(Preset::gaussian, -1), domain_error);
}
