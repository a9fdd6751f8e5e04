#include <gtest/gtest.h>

#include "qwedge/braid/braid_forms.hpp"
#include "qwedge/exterior/exterior_calc.hpp"
#include "qwedge/rank/rank_engine.hpp"

using namespace qwedge;

namespace {

const RMatrixBundle& o3() {
  static const RMatrixBundle b = build_bundle({Series::BD, 3, Variant::plus});
  return b;
}

QMatrix diag(const std::vector<RatFunc>& d) {
  const LegSpace s({static_cast<int>(d.size())});
  std::vector<Triplet<RatFunc>> t;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!d[i].is_zero()) t.push_back({i, i, d[i]});
  return QMatrix::from_triplets(RatFuncRing{}, s, s, std::move(t));
}

}  // namespace

TEST(RankEngine, TrivialMatrices) {
  const LegSpace s({9});
  EXPECT_EQ(generic_rank(QMatrix::identity(RatFuncRing{}, s)).value, 9u);
  EXPECT_EQ(generic_rank(QMatrix::zero(RatFuncRing{}, s, s)).value, 0u);
  const auto r = certified_rank(QMatrix::identity(RatFuncRing{}, s));
  EXPECT_EQ(r.mode, RankMode::exact);
  EXPECT_TRUE(r.agreed);
  EXPECT_EQ(r.per_point.size(), 3u);
}

TEST(RankEngine, GenericRankSeesThroughSpecialValues) {
  // diag(q - 1, q^2 - q^-2, 0): generic rank 2
  const auto m = diag({RatFunc::q(1) - RatFunc(1), RatFunc::q(2) - RatFunc::q(-2), RatFunc()});
  const auto r = certified_rank(m);
  EXPECT_EQ(r.value, 2u);
  EXPECT_TRUE(r.agreed);
}

TEST(RankEngine, DeterministicAndMonotone) {
  const auto sigma = build_sigma(o3());
  const auto shifted = shift_identity(RatFuncRing{}, RatFunc(1), sigma);
  RankOptions opt;
  opt.seed = 7;
  const auto a = generic_rank(shifted, opt), b = generic_rank(shifted, opt);
  EXPECT_EQ(a.per_point, b.per_point);
  EXPECT_EQ(a.points.front().prime, b.points.front().prime);
  // Appending rows never lowers the rank.
  const auto stacked = multiply(RatFuncRing{}, shifted, sigma);
  EXPECT_GE(subspace_sum_dim({SubspaceHandle::image_of(shifted), SubspaceHandle::image_of(stacked)}).value, a.value);
}

TEST(RankEngine, SigmaFixedSpaceAndProjectorForm) {
  const auto& b = o3();
  const auto ker = generator_space(b, IdealCase::s2);
  const auto d = subspace_dim(ker);
  EXPECT_EQ(d.value, 35u);
  EXPECT_TRUE(d.agreed);
  const auto proj = s2_projector_form(b);
  EXPECT_EQ(subspace_dim(proj).value, 35u);
  EXPECT_TRUE(subspace_equal(ker, proj));
}

TEST(RankEngine, ProjectorRanksSplit35) {
  const auto& b = o3();
  std::vector<std::size_t> ranks;
  for (const auto& p : b.projectors) ranks.push_back(generic_rank(p).value);
  ASSERT_EQ(ranks.size(), 3u);
  EXPECT_EQ(ranks[0] * ranks[0] + ranks[1] * ranks[1] + ranks[2] * ranks[2], 35u);
}

TEST(RankEngine, SigmaTildeImageIsSumOfFiveEigenspaces) {
  const auto& b = o3();
  const RatFunc q = b.q;
  const auto im = generator_space(b, IdealCase::s3);
  EXPECT_EQ(subspace_dim(im).value, 51u);
  // Eigenspaces of sigma at 1, q^3, q^-3, -q, -q^-1.
  const auto parts = sigma_eigenspaces(b, {RatFunc(1), q.pow(3), q.pow(-3), -q, -q.pow(-1)});
  const auto sum = subspace_sum_dim(parts);
  EXPECT_EQ(sum.value, 51u);
  std::vector<SubspaceHandle> with_im = parts;
  with_im.push_back(im);
  EXPECT_EQ(subspace_sum_dim(with_im).value, 51u);
}

TEST(RankEngine, EigenvalueAndAnnihilation) {
  const auto m = diag({RatFunc::q(1), RatFunc::q(1), RatFunc::q(-1)});
  const auto e = is_eigenvalue(m, RatFunc::q(1));
  EXPECT_TRUE(e.is_eigenvalue);
  EXPECT_EQ(e.multiplicity.value, 2u);
  EXPECT_FALSE(is_eigenvalue(QMatrix::identity(RatFuncRing{}, LegSpace({4})), RatFunc(2)).is_eigenvalue);
  EXPECT_TRUE(annihilates(m, poly_from_roots({RatFunc::q(1), RatFunc::q(-1)})));
  EXPECT_FALSE(annihilates(m, poly_from_roots({RatFunc::q(1)})));
}

TEST(RankEngine, QuadraticDividesCharpoly) {
  // Companion block of x^2 - q x - 1 twice, plus a zero.
  const LegSpace s({5});
  std::vector<Triplet<RatFunc>> t{{0, 1, RatFunc(1)}, {1, 0, RatFunc(1)}, {1, 1, RatFunc::q(1)},
                                  {2, 3, RatFunc(1)}, {3, 2, RatFunc(1)}, {3, 3, RatFunc::q(1)}};
  const auto m = QMatrix::from_triplets(RatFuncRing{}, s, s, std::move(t));
  const QPoly quad{RatFunc(-1), -RatFunc::q(1), RatFunc(1)};
  EXPECT_TRUE(quadratic_divides_charpoly(m, quad, 2));
  EXPECT_FALSE(quadratic_divides_charpoly(m, quad, 3));
}

TEST(RankEngine, CertifiedMatchesExactOnSigma) {
  // 81 x 81 is within the exact limit.
  const auto r = certified_rank(shift_identity(RatFuncRing{}, RatFunc(1), build_sigma(o3())));
  EXPECT_EQ(r.value, 46u);
  EXPECT_EQ(r.mode, RankMode::exact);
}
