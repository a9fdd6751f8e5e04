#include <gtest/gtest.h>

#include "qwedge/frt/bundle.hpp"
#include "qwedge/linalg/dense_mod.hpp"

using namespace qwedge;

namespace {

struct Case {
  Series series;
  int n;
  Variant variant;
};

class BundleSuite : public ::testing::TestWithParam<Case> {};

std::size_t mod_kernel_dim(const ModBundle& b, const ModMatrix& m, u64 lambda) {
  return m.rows() - mod_rank(b.ring, to_dense(shift_identity(b.ring, lambda, m), u64{0}));
}

}  // namespace

TEST_P(BundleSuite, YangBaxterAndSpectrum) {
  const auto [series, n, variant] = GetParam();
  const RMatrixBundle b = build_bundle({series, n, variant});
  const ModBundle m = evaluate(b, sample_point(9, 0));
  const auto& f = m.ring;
  const LegSpace three = LegSpace::uniform(n, 3);
  auto r1 = embed_at_leg(f, m.rhat, three, 1);
  auto r2 = embed_at_leg(f, m.rhat, three, 2);
  EXPECT_EQ(multiply(f, multiply(f, r1, r2), r1), multiply(f, multiply(f, r2, r1), r2));
  EXPECT_TRUE(detail::annihilated_by_roots(f, m.rhat, m.rhat_eigenvalues));
  const std::size_t nn = static_cast<std::size_t>(n);
  if (series == Series::A) {
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.q), nn * (nn + 1) / 2);
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.rhat_eigenvalues[1]), nn * (nn - 1) / 2);
  } else if (series == Series::BD) {
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.q), nn * (nn + 1) / 2 - 1);
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.rhat_eigenvalues[1]), nn * (nn - 1) / 2);
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.rhat_eigenvalues[2]), 1u);
  } else {
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.q), nn * (nn + 1) / 2);
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.rhat_eigenvalues[1]), nn * (nn - 1) / 2 - 1);
    EXPECT_EQ(mod_kernel_dim(m, m.rhat, m.rhat_eigenvalues[2]), 1u);
  }
  // projectors: complete, idempotent, mutually orthogonal
  auto sum = ModMatrix::zero(f, m.pair_space(), m.pair_space());
  for (std::size_t a = 0; a < m.projectors.size(); ++a) {
    sum = add(f, sum, m.projectors[a]);
    EXPECT_EQ(multiply(f, m.projectors[a], m.projectors[a]), m.projectors[a]);
    for (std::size_t c = 0; c < a; ++c) EXPECT_EQ(multiply(f, m.projectors[a], m.projectors[c]).nnz(), 0u);
  }
  EXPECT_EQ(sum, ModMatrix::identity(f, m.pair_space()));
}

TEST_P(BundleSuite, CompanionMatrices) {
  const auto [series, n, variant] = GetParam();
  const RMatrixBundle b = build_bundle({series, n, variant});
  RatFuncRing ring;
  EXPECT_EQ(multiply(ring, b.rhat, b.rhat_inv), QMatrix::identity(ring, b.pair_space()));
  EXPECT_EQ(multiply(ring, b.rgrave_minus, b.rgrave_minus_inv), QMatrix::identity(ring, b.pair_space()));
  // Rcheck-minus and Rcheck are mutually inverse
  EXPECT_EQ(multiply(ring, b.rcheck, b.rcheck_minus), QMatrix::identity(ring, b.pair_space()));
  // the exchange placement self-test singles out one convention
  const auto& ps = b.exchange_placements;
  EXPECT_NE(std::find(ps.begin(), ps.end(), IndexPlacement{1, 3, 0, 2}), ps.end());
}

TEST_P(BundleSuite, MetricIsInvariant) {
  const auto [series, n, variant] = GetParam();
  if (series == Series::A) GTEST_SKIP();
  const RMatrixBundle b = build_bundle({series, n, variant});
  RatFuncRing ring;
  const RatFunc r_inv = b.r.inverse();
  // R-hat C = r^-1 C and (C^-1 as row) R-hat = r^-1 (C^-1 as row)
  EXPECT_EQ(multiply(ring, b.rhat, b.metric_column), scale(ring, r_inv, b.metric_column));
  EXPECT_EQ(multiply(ring, b.metric_inv_row, b.rhat), scale(ring, r_inv, b.metric_inv_row));
}

INSTANTIATE_TEST_SUITE_P(Series, BundleSuite,
                         ::testing::Values(Case{Series::BD, 3, Variant::plus}, Case{Series::BD, 3, Variant::minus},
                                           Case{Series::BD, 4, Variant::plus}, Case{Series::BD, 5, Variant::plus},
                                           Case{Series::C, 2, Variant::plus}, Case{Series::C, 4, Variant::plus},
                                           Case{Series::A, 2, Variant::plus}, Case{Series::A, 3, Variant::plus}));
