#include <gtest/gtest.h>

#include "qwedge/theorem/theorem_verifier.hpp"

using namespace qwedge;

namespace {

const RMatrixBundle& bd(int n, Variant v = Variant::plus) {
  static std::map<std::pair<int, Variant>, RMatrixBundle> cache;
  auto it = cache.find({n, v});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, v), build_bundle({Series::BD, n, v})).first;
  return it->second;
}

}  // namespace

TEST(Contractions, ClosedMetricIsQuantumDimension) {
  const auto& b = bd(3);
  EXPECT_EQ(metric_trace(b), b.q + RatFunc(1) + b.q_inv);
  // e^2 e_2 equals gamma_2, the first link of the gamma chain.
  EXPECT_EQ(metric_trace(b), theta_constants(b, 2).gamma.at(2));
}

TEST(Contractions, RecursionShapes) {
  const auto& b = bd(3);
  const auto m = build_contractions(b, 5);
  for (int k = 1; k <= 5; ++k) {
    const std::size_t want = ipow(3, k + parity_of(k));
    EXPECT_EQ(m.lower[static_cast<std::size_t>(k)].size(), want);
    EXPECT_EQ(m.upper[static_cast<std::size_t>(k)].size(), want);
  }
}

TEST(ClassicalOracle, SpinCountingAndMatchings) {
  const std::vector<std::size_t> o3{1, 3, 3, 15, 15};
  for (int k = 2; k <= 6; ++k) EXPECT_EQ(classical_mk_dim(bd(3).spec, k), o3[static_cast<std::size_t>(k - 2)]) << k;
  const SeriesConstants o5{Series::BD, 5, Variant::plus};
  EXPECT_EQ(classical_mk_dim(o5, 4), 3u);
  EXPECT_EQ(classical_mk_dim(o5, 5), 15u);
  EXPECT_THROW(classical_mk_dim({Series::BD, 4, Variant::plus}, 9), ConfigError);
}

TEST(Saturation, MatchesClassicalDimensions) {
  const auto pt = sample_point(11, 0);
  for (int k = 2; k <= 5; ++k) EXPECT_EQ(saturate_Mk(bd(3), k, pt).dim(), classical_mk_dim(bd(3).spec, k)) << k;
  for (int k = 2; k <= 4; ++k) EXPECT_EQ(saturate_Mk(bd(4), k, pt).dim(), classical_mk_dim(bd(4).spec, k)) << k;
}

TEST(Lemma, ExactThroughDegreeFive) {
  const auto pt = sample_point(0, 0);
  for (int k = 2; k <= 5; ++k) {
    const auto rep = lemma_check(bd(3), bd(3), k, pt);
    EXPECT_TRUE(rep.pass()) << "k=" << k;
    EXPECT_EQ(rep.contractions.size(), static_cast<std::size_t>(k - 1));
  }
}

TEST(Lemma, ModularDegreeSixAndSpotFour) {
  const auto pt = sample_point(0, 1);
  const auto mb = evaluate(bd(3), pt);
  const auto rep = lemma_check(mb, bd(3), 6, pt);
  EXPECT_EQ(rep.mk_dim, 15u);
  EXPECT_TRUE(rep.pass());
  for (int k = 2; k <= 4; ++k) EXPECT_TRUE(lemma_check(bd(4), bd(4), k, pt).pass()) << "N=4 k=" << k;
}

TEST(Lemma, ContractionIsProportionalEvenWhereTheConstantIsChecked) {
  const auto& b = bd(3);
  const auto t4 = build_tk(b, b, 4), t2 = build_tk(b, b, 2);
  const auto gamma = theta_constants(b, 4).gamma.at(4);
  for (int i = 1; i < 4; ++i) {
    const auto c = contract_pair(b, t4, 4, i);
    for (std::size_t s = 0; s < c.size(); ++s) EXPECT_EQ(c[s], gamma * t2[s]);
  }
}

TEST(TauPolynomial, NormalizationAtOriginAndOne) {
  for (int k = 2; k <= 4; ++k) {
    EXPECT_EQ(tau_polynomial(k)->at(0L, 0L), 1) << k;
    EXPECT_EQ(tau_polynomial(k)->at(1L, 1L), 0) << k;
  }
  EXPECT_EQ(tau_polynomial(5)->at(0L, 0L), 1);
  // The reference degree-five polynomial misses p(1,1) = 0; the amended one does not.
  EXPECT_EQ(tau_polynomial(5)->at(1L, 1L), 6);
  EXPECT_EQ(tau_polynomial(5, true)->at(1L, 1L), 0);
  EXPECT_FALSE(tau_polynomial(6));
}

TEST(TauPolynomial, ComputedEigenvalueAgainstClosedForms) {
  for (int n : {3, 4, 5}) {
    const auto& b = bd(n);
    const auto th = theta_constants(b, 5);
    for (int k = 2; k <= 5; ++k) {
      const auto tk = build_tk(b, b, k);
      const auto at = abar_sum(b, k).apply(std::span<const RatFunc>(tk));
      std::size_t s = 0;
      while (tk[s].is_zero()) ++s;
      const RatFunc tau = at[s] / tk[s];
      EXPECT_EQ(tau, th.tau_amended.at(k)) << "N=" << n << " k=" << k;
      EXPECT_EQ(tau == th.tau.at(k), k < 5) << "N=" << n << " k=" << k;
    }
  }
}

TEST(Witness, CoEigenspaceAndCovector) {
  const auto& b = bd(3);
  EXPECT_EQ(subspace_dim(onerow_co_eigenspace(b, 2)).value, 5u);
  EXPECT_EQ(subspace_dim(onerow_co_eigenspace(b, 3)).value, 7u);
  for (int k = 2; k <= 4; ++k) EXPECT_TRUE(in_onerow_co_eigenspace(b, highest_weight_covector(b, k), k));
}

TEST(Witness, ExactLowDegreesBothVariants) {
  for (auto v : {Variant::plus, Variant::minus})
    for (int k = 2; k <= 4; ++k) {
      const auto rep = nonzero_form_witness(bd(3, v), k);
      EXPECT_TRUE(rep.pass()) << "k=" << k;
      EXPECT_EQ(rep.mode, "exact");
      EXPECT_TRUE(rep.tau_matches_reference.value_or(false)) << "k=" << k;
    }
}

TEST(Witness, ModularDegreeSix) {
  const auto rep = nonzero_form_witness(bd(3), 6, {}, false);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.mode, "modular");
  EXPECT_FALSE(rep.tau_matches_reference);
}

TEST(Symplectic, DegeneracyAppearsOneDegreeLater) {
  for (int n : {2, 4}) {
    const auto rep = sp_degeneracy(build_bundle({Series::C, n, Variant::plus}));
    EXPECT_FALSE(rep.gamma_n.is_zero()) << n;
    EXPECT_FALSE(rep.tn_zero) << n;
    EXPECT_TRUE(rep.gamma_n1.is_zero()) << n;
    EXPECT_TRUE(rep.tn1_zero) << n;
  }
  EXPECT_THROW(sp_degeneracy(bd(3)), ConfigError);
}
