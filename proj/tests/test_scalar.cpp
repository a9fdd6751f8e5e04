#include <gtest/gtest.h>

#include <random>

#include "qwedge/scalar/laurent_poly.hpp"
#include "qwedge/scalar/prime_field.hpp"
#include "qwedge/scalar/ratfunc.hpp"
#include "qwedge/scalar/series.hpp"

using namespace qwedge;

namespace {

LaurentPoly random_laurent(std::mt19937_64& g) {
  std::uniform_int_distribution<int> lo(-4, 4), len(0, 4), coef(-5, 5);
  std::vector<mpz_class> c;
  const int n = len(g);
  for (int i = 0; i < n; ++i) c.emplace_back(coef(g));
  return LaurentPoly(lo(g), c);
}

RatFunc random_ratfunc(std::mt19937_64& g) {
  LaurentPoly d;
  do d = random_laurent(g);
  while (d.is_zero());
  return RatFunc(random_laurent(g), d);
}

}  // namespace

TEST(LaurentPoly, ArithmeticAndText) {
  const LaurentPoly q = LaurentPoly::q(1);
  const LaurentPoly a = q * q - LaurentPoly(2) + LaurentPoly::q(-3);
  EXPECT_EQ(a.low(), -3);
  EXPECT_EQ(a.high(), 2);
  EXPECT_EQ(a.to_string(), "q^-3-2+q^2");
  EXPECT_EQ(LaurentPoly::parse(a.to_string()), a);
  EXPECT_EQ(LaurentPoly().to_string(), "0");
  EXPECT_EQ((a - a).is_zero(), true);
  EXPECT_EQ(a.inverted_variable().inverted_variable(), a);
  EXPECT_EQ(a.at_one(), mpz_class(0));
}

TEST(LaurentPoly, RandomRingAxioms) {
  std::mt19937_64 g(7);
  for (int it = 0; it < 200; ++it) {
    auto a = random_laurent(g), b = random_laurent(g), c = random_laurent(g);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(LaurentPoly::parse(a.to_string()), a);
  }
}

TEST(RatFunc, CanonicalFormAndFieldAxioms) {
  std::mt19937_64 g(11);
  for (int it = 0; it < 150; ++it) {
    auto a = random_ratfunc(g), b = random_ratfunc(g), c = random_ratfunc(g);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
    }
    EXPECT_EQ(RatFunc::parse(a.to_string()), a);
    EXPECT_EQ(a.inverted_variable().inverted_variable(), a);
  }
  // [2][2] = [3] + 1
  EXPECT_EQ(q_number(2) * q_number(2), q_number(3) + RatFunc(1));
  const RatFunc x = (RatFunc::q(2) - RatFunc(1)) / (RatFunc::q(1) - RatFunc(1));
  EXPECT_EQ(x, RatFunc::q(1) + RatFunc(1));
  EXPECT_THROW(RatFunc(1) / RatFunc(), ArithmeticError);
}

TEST(PrimeField, MillerRabinMatchesTrialDivision) {
  auto trial = [](std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  };
  for (std::uint64_t n = 0; n < 20000; ++n) EXPECT_EQ(is_prime_u64(n), trial(n)) << n;
  EXPECT_TRUE(is_prime_u64(1152921504606846883ULL));  // 2^60 - 93
  EXPECT_FALSE(is_prime_u64(3215031751ULL));          // strong pseudoprime to 2,3,5,7
}

TEST(PrimeField, ShoupAgreesWithPlainMultiplication) {
  const PrimePoint pt = sample_point(3, 0);
  const PrimeField f = pt.field();
  std::mt19937_64 g(5);
  for (int it = 0; it < 10000; ++it) {
    const u64 a = g() % f.modulus(), w = g() % f.modulus();
    EXPECT_EQ(f.shoup_mul(a, w, f.shoup_precompute(w)), f.mul(a, w));
  }
  for (int it = 0; it < 100; ++it) {
    const u64 a = 1 + g() % (f.modulus() - 1);
    EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  }
}

TEST(PrimeField, SampledPointsAreValidAndDistinct) {
  const auto pts = sample_points(42, 8);
  ASSERT_EQ(pts.size(), 8u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_TRUE(is_prime_u64(pts[i].prime));
    EXPECT_GT(pts[i].prime, 1ULL << 59);
    EXPECT_TRUE(point_is_valid(pts[i]));
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(pts[i].prime, pts[j].prime);
  }
  EXPECT_EQ(sample_points(42, 8), pts);
}

TEST(PrimeField, EvaluationIsARingHomomorphism) {
  std::mt19937_64 g(13);
  const PrimePoint pt = sample_point(1, 1);
  const PrimeField f = pt.field();
  for (int it = 0; it < 200; ++it) {
    auto a = random_ratfunc(g), b = random_ratfunc(g);
    u64 ea, eb, es, ep;
    try {
      ea = eval_at(a, pt);
      eb = eval_at(b, pt);
      es = eval_at(a + b, pt);
      ep = eval_at(a * b, pt);
    } catch (const BadPointError&) {
      continue;
    }
    EXPECT_EQ(es, f.add(ea, eb));
    EXPECT_EQ(ep, f.mul(ea, eb));
  }
}

TEST(Series, ConstantsAndValidation) {
  SeriesConstants o3{Series::BD, 3, Variant::plus};
  EXPECT_EQ(o3.r(), RatFunc::q(2));
  SeriesConstants sp4{Series::C, 4, Variant::plus};
  EXPECT_EQ(sp4.r(), -RatFunc::q(5));
  EXPECT_THROW((SeriesConstants{Series::C, 3, Variant::plus}.validate()), ConfigError);
  EXPECT_THROW((SeriesConstants{Series::BD, 2, Variant::plus}.validate()), ConfigError);
  EXPECT_EQ(parse_series("o"), Series::BD);
  EXPECT_EQ(parse_series("sp"), Series::C);
  EXPECT_EQ(parse_series("sl"), Series::A);
}
