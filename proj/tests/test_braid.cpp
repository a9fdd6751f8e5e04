#include <gtest/gtest.h>

#include <map>
#include <set>

#include "qwedge/braid/braid_forms.hpp"
#include "qwedge/linalg/dense_mod.hpp"

using namespace qwedge;

namespace {

const RMatrixBundle& o3(Variant v = Variant::plus) {
  static const RMatrixBundle plus = build_bundle({Series::BD, 3, Variant::plus});
  static const RMatrixBundle minus = build_bundle({Series::BD, 3, Variant::minus});
  return v == Variant::plus ? plus : minus;
}

std::size_t kernel_dim(const PrimeField& f, const ModMatrix& m, u64 lambda) {
  return m.rows() - mod_rank(f, to_dense(shift_identity(f, lambda, m), u64{0}));
}

std::size_t rank_of(const PrimeField& f, const ModMatrix& m) { return mod_rank(f, to_dense(m, u64{0})); }

// All reduced words of a permutation, by recursion on right descents.
void all_reduced_words(const std::vector<int>& perm, ReducedWord suffix, std::set<ReducedWord>& out) {
  const int k = static_cast<int>(perm.size());
  if (inversions(perm) == 0) {
    out.insert(suffix);
    return;
  }
  for (int i = 1; i < k; ++i) {
    if (perm[static_cast<std::size_t>(i - 1)] > perm[static_cast<std::size_t>(i)]) {
      // perm = perm' s_i with l(perm') = l(perm) - 1
      std::vector<int> p = perm;
      std::swap(p[static_cast<std::size_t>(i - 1)], p[static_cast<std::size_t>(i)]);
      ReducedWord w = suffix;
      w.insert(w.begin(), i);
      all_reduced_words(p, w, out);
    }
  }
}

}  // namespace

TEST(PermutationTable, PoincarePolynomialAndLengths) {
  for (int k = 1; k <= 6; ++k) {
    const PermutationTable t(k);
    std::set<std::vector<int>> perms;
    std::size_t fact = 1;
    for (int m = 2; m <= k; ++m) fact *= static_cast<std::size_t>(m);
    EXPECT_EQ(t.size(), fact);
    for (const auto& e : t.entries()) {
      EXPECT_EQ(e.length, inversions(e.perm));
      EXPECT_EQ(e.perm, word_permutation(k, e.word));
      perms.insert(e.perm);
    }
    EXPECT_EQ(perms.size(), fact);
    EXPECT_EQ(t.length_generating_function(), x_factorial(k));
  }
}

TEST(BraidForms, TwistLayout) {
  EXPECT_EQ(twist_groups(2), (std::vector<std::vector<int>>{{2}}));
  EXPECT_EQ(twist_groups(3), (std::vector<std::vector<int>>{{2, 4}, {3}}));
  EXPECT_EQ(twist_groups(4), (std::vector<std::vector<int>>{{2, 4, 6}, {3, 5}, {4}}));
  for (int k = 1; k <= 6; ++k) {
    std::size_t count = 0;
    for (const auto& g : twist_groups(k)) count += g.size();
    EXPECT_EQ(count, static_cast<std::size_t>(k * (k - 1) / 2));
  }
}

TEST(BraidForms, WordIndependenceInS4) {
  const ModBundle m = evaluate(o3(), sample_point(21, 0));
  const PermutationTable table(4);
  for (const auto& e : table.entries()) {
    std::set<ReducedWord> words;
    all_reduced_words(e.perm, {}, words);
    ASSERT_FALSE(words.empty());
    const auto ref_v = t_word(m, 4, e.word, WordSide::vector);
    const auto ref_c = t_word(m, 4, e.word, WordSide::covector);
    for (const auto& w : words) {
      EXPECT_EQ(word_permutation(4, w), e.perm);
      EXPECT_EQ(t_word(m, 4, w, WordSide::vector), ref_v);
      EXPECT_EQ(t_word(m, 4, w, WordSide::covector), ref_c);
    }
  }
}

TEST(BraidForms, SigmaSpectrumO3) {
  for (Variant v : {Variant::plus, Variant::minus}) {
    for (const auto& pt : sample_points(5, 3)) {
      const ModBundle m = evaluate(o3(v), pt);
      const auto& f = m.ring;
      const ModMatrix s = build_sigma(m);
      ASSERT_EQ(s.rows(), 81u);
      const u64 q = f.from_int(static_cast<long long>(pt.q_value));
      const u64 qi = f.inv(q);
      const std::vector<u64> eig{1, f.pow(q, 3), f.pow(qi, 3), f.neg(f.mul(q, q)), f.neg(f.mul(qi, qi)), f.neg(q), f.neg(qi)};
      std::size_t total = 0;
      for (u64 l : eig) {
        const auto d = kernel_dim(f, s, l);
        EXPECT_GT(d, 0u);
        total += d;
      }
      EXPECT_EQ(total, 81u);
      EXPECT_TRUE(detail::annihilated_by_roots(f, s, eig));
      EXPECT_EQ(kernel_dim(f, s, 1), 35u);
      EXPECT_TRUE(detail::braid_relation_holds(f, s));
    }
  }
}

TEST(BraidForms, SigmaTildeO3) {
  const auto& b = o3();
  RatFuncRing ring;
  const QMatrix s = build_sigma(b), st = build_sigma_tilde(b);
  EXPECT_EQ(multiply(ring, s, st), multiply(ring, st, s));
  const QMatrix q = QMatrix::identity(ring, LegSpace({1}));
  std::vector<RatFunc> eig{RatFunc::q(2), RatFunc::q(-2), RatFunc::q(-4), RatFunc::q(-1), RatFunc(-1), -RatFunc::q(-3)};
  const PrimePoint pt = sample_point(7, 0);
  const ModMatrix stm = evaluate(st, pt);
  std::vector<u64> ev;
  for (const auto& e : eig) ev.push_back(eval_at(e, pt));
  EXPECT_TRUE(detail::annihilated_by_roots(pt.field(), stm, ev));
  std::size_t total = 0;
  for (u64 l : ev) {
    const auto d = kernel_dim(pt.field(), stm, l);
    EXPECT_GT(d, 0u);
    total += d;
  }
  EXPECT_EQ(total, 81u);
  (void)q;
}

TEST(BraidForms, HornerMatchesWordSum) {
  const ModBundle m = evaluate(o3(), sample_point(22, 0));
  for (int k = 2; k <= 4; ++k) EXPECT_EQ(antisymmetrizer(m, k, AntisymForm::abar), antisymmetrizer_by_words(m, k, AntisymForm::abar));
  EXPECT_EQ(antisymmetrizer(m, 3, AntisymForm::dotted), antisymmetrizer_by_words(m, 3, AntisymForm::dotted));
  EXPECT_EQ(antisymmetrizer(m, 3, AntisymForm::plain), antisymmetrizer_by_words(m, 3, AntisymForm::plain));
  // vector application agrees with the materialized operator
  const auto sum = antisymmetrizer_sum(m, 3, AntisymForm::dotted);
  const auto mat = antisymmetrizer(m, 3, AntisymForm::dotted);
  std::vector<u64> x(mat.cols());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i * 7919 + 13) % 1000;
  EXPECT_EQ(sum.apply(std::span<const u64>(x)), matvec(m.ring, mat, std::span<const u64>(x)));
}

TEST(BraidForms, DottedIsTwistConjugateOfPlain) {
  const ModBundle m = evaluate(o3(), sample_point(23, 0));
  for (int k = 2; k <= 3; ++k) {
    const auto chain = build_bk(m, k);
    const auto plain = antisymmetrizer(m, k, AntisymForm::plain);
    const auto dotted = antisymmetrizer(m, k, AntisymForm::dotted);
    const LegSpace legs = LegSpace::uniform(3, 2 * k);
    EXPECT_EQ(dot_transform(m, plain, chain), dotted.with_spaces(legs, legs));
    EXPECT_EQ(undot_transform(m, dotted, chain), plain.with_spaces(legs, legs));
  }
  EXPECT_EQ(rank_of(m.ring, antisymmetrizer(m, 2, AntisymForm::plain)), 46u);
  EXPECT_EQ(rank_of(m.ring, antisymmetrizer(m, 3, AntisymForm::plain)), 183u);
}

TEST(BraidForms, SigmaTildeForSL2) {
  const RMatrixBundle b = build_bundle({Series::A, 2, Variant::plus});
  const PrimePoint pt = sample_point(8, 0);
  const ModBundle m = evaluate(b, pt);
  const auto& f = m.ring;
  const auto s = build_sigma(m), st = build_sigma_tilde(m);
  const u64 q = m.q;
  EXPECT_TRUE(detail::annihilated_by_roots(f, st, std::vector<u64>{f.neg(1), f.mul(q, q), f.inv(f.mul(q, q))}));
  // im(I + st) = ker(I - s): same dimension and (I - s)(I + st) = 0
  const auto i_plus = shift_identity(f, f.neg(1), st);  // -I - st
  EXPECT_EQ(multiply(f, shift_identity(f, u64{1}, s), i_plus).nnz(), 0u);
  EXPECT_EQ(rank_of(f, i_plus), kernel_dim(f, s, 1));
}
