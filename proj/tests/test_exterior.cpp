#include <gtest/gtest.h>

#include "qwedge/exterior/exterior_calc.hpp"

using namespace qwedge;

namespace {

const RMatrixBundle& o3(Variant v = Variant::plus) {
  static const RMatrixBundle plus = build_bundle({Series::BD, 3, Variant::plus});
  static const RMatrixBundle minus = build_bundle({Series::BD, 3, Variant::minus});
  return v == Variant::plus ? plus : minus;
}

using Dims = std::vector<std::size_t>;

}  // namespace

TEST(Weights, GammaWeightsAreConservedBySigma) {
  const auto& b = o3();
  const auto w = gamma_pair_weight_keys(b.spec);
  const auto sigma = build_sigma(b);
  for (std::size_t i = 0; i < sigma.rows(); ++i)
    for (auto c : sigma.row_cols(i)) EXPECT_EQ(w[i], w[c]);
}

TEST(QuotientTower, TowerMatchesDirectStackingUpToDegreeFour) {
  const auto& b = o3();
  const auto pt = sample_point(3, 0);
  for (auto c : {IdealCase::s2, IdealCase::s3, IdealCase::s4}) {
    const auto gen = generator_space(b, c);
    const auto tower = quotient_tower_at(b, gen, pt, 4);
    std::size_t total = 1;
    for (int k = 0; k <= 4; ++k, total *= 9) {
      if (k < 2) continue;
      EXPECT_EQ(tower.dim(k), total - ideal_component_rank_direct(b, gen, pt, k)) << to_string(c) << " k=" << k;
    }
  }
}

TEST(QuotientTable, CaseS2ThroughDegreeFive) {
  const auto t = quotient_table(o3(), IdealCase::s2, 5);
  EXPECT_EQ(t.dims, (Dims{1, 9, 46, 183, 628, 1938}));
  EXPECT_TRUE(t.agreed());
}

TEST(QuotientTable, CaseS3CollapsesAtFour) {
  const auto t = quotient_table(o3(), IdealCase::s3, 6);
  EXPECT_EQ(t.dims, (Dims{1, 9, 30, 39, 0, 0, 0}));
}

TEST(QuotientTable, CaseS4HasOneTopForm) {
  const auto t = quotient_table(o3(), IdealCase::s4, 6);
  EXPECT_EQ(t.dims, (Dims{1, 9, 36, 54, 1, 0, 0}));
}

TEST(QuotientTable, StretchGuard) {
  EXPECT_THROW(quotient_table(o3(), IdealCase::s2, 6), ConfigError);
  EXPECT_THROW(quotient_table(o3(), IdealCase::s4, 7), ConfigError);
}

TEST(QuotientTable, IdealComponentIsComplement) {
  EXPECT_EQ(ideal_component_dim(o3(), IdealCase::s2, 3).value, 729u - 183u);
  EXPECT_EQ(ideal_component_dim(o3(), IdealCase::s4, 4).value, 6561u - 1u);
  EXPECT_EQ(ideal_component_dim(o3(), IdealCase::s3, 2).value, 51u);
}

TEST(Radical, DimensionAndQuotient) {
  const auto rep = radical_s4(o3());
  EXPECT_EQ(rep.radical_dim.value, 45u);
  EXPECT_TRUE(rep.agreed());
  EXPECT_EQ(rep.quotient_dims, (Dims{1, 9, 36, 9, 1, 0}));
  for (const auto& s : rep.single_kernel_dims) EXPECT_GE(s.value, 45u);
}

TEST(Woronowicz, RanksAndTransposedRoute) {
  const auto pt = sample_point(5, 1);
  const auto mb = evaluate(o3(), pt);
  const auto r = woronowicz_ranks_at(mb, 4);
  EXPECT_EQ(r, (Dims{1, 9, 46, 183, 628}));
  EXPECT_EQ(woronowicz_ranks_at(mb, 4, true), r);
}

TEST(Woronowicz, GrowthAgreesWithMaterializedAntisymmetrizer) {
  const auto pt = sample_point(5, 2);
  const auto sl3 = evaluate(build_bundle({Series::A, 3, Variant::plus}), pt);
  const auto r = woronowicz_ranks_at(sl3, 3);
  for (int k = 2; k <= 3; ++k) {
    const auto a = antisymmetrizer(sl3, k, AntisymForm::plain);
    EXPECT_EQ(r[static_cast<std::size_t>(k)], modular_rank(pt.field(), a)) << "k=" << k;
  }
}

TEST(Containment, WoronowiczBelowS2) {
  TableOptions opt;
  const auto s1 = quotient_table(o3(), IdealCase::s1, 5, opt);
  const auto s2 = quotient_table(o3(), IdealCase::s2, 5, opt);
  for (std::size_t k = 0; k < s1.dims.size(); ++k) EXPECT_LE(s1.dims[k], s2.dims[k]);
}

TEST(SLSanity, BothConstructionsGiveBinomials) {
  const auto sl2 = build_bundle({Series::A, 2, Variant::plus});
  const Dims binom{1, 4, 6, 4, 1};
  EXPECT_EQ(quotient_table(sl2, IdealCase::s1, 4).dims, binom);
  EXPECT_EQ(quotient_table(sl2, IdealCase::s2, 4).dims, binom);
  EXPECT_TRUE(subspace_equal(generator_space(sl2, IdealCase::s2), generator_space(sl2, IdealCase::s3)));
}

TEST(VariantSymmetry, TablesIgnoreTheVariant) {
  for (auto c : {IdealCase::s1, IdealCase::s2, IdealCase::s3, IdealCase::s4})
    EXPECT_EQ(quotient_table(o3(Variant::plus), c, 4).dims, quotient_table(o3(Variant::minus), c, 4).dims)
        << to_string(c);
}

TEST(Conjectures, InclusionHoldsAndLowDegreesAgree) {
  const auto rep = conjecture_experiments(o3(), 4);
  for (bool b : rep.inclusion) EXPECT_TRUE(b);
  for (int k = 0; k <= 3; ++k) EXPECT_TRUE(rep.equal[static_cast<std::size_t>(k)]);
}

TEST(A3Table, EveryRowAndTheFullFactorization) {
  for (auto v : {Variant::plus, Variant::minus}) {
    const auto rep = verify_a3_table(o3(v));
    for (const auto& r : rep.rows) EXPECT_TRUE(r.pass) << r.label;
    EXPECT_EQ(rep.accounted, 183u);
    EXPECT_EQ(rep.rank_a3.value, 183u);
    EXPECT_TRUE(rep.charpoly_factorization);
    EXPECT_TRUE(rep.extremal_rows);
  }
}
