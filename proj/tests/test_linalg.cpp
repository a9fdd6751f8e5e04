#include <gtest/gtest.h>

#include <random>

#include "qwedge/linalg/dense.hpp"
#include "qwedge/linalg/dense_mod.hpp"
#include "qwedge/linalg/sparse_matrix.hpp"

using namespace qwedge;

namespace {

ModMatrix random_mod(const PrimeField& f, const LegSpace& rs, const LegSpace& cs, std::mt19937_64& g, int fill = 3) {
  std::vector<Triplet<u64>> t;
  for (std::size_t i = 0; i < rs.total(); ++i)
    for (std::size_t j = 0; j < cs.total(); ++j)
      if (g() % fill == 0) t.push_back({i, j, g() % f.modulus()});
  return ModMatrix::from_triplets(f, rs, cs, std::move(t));
}

// det(x I - m) by evaluating at n+1 points and interpolating is overkill; a
// direct Laplace-free check: compare c(x0) with det(x0 I - m) by elimination.
u64 det_mod(const PrimeField& f, ModDense m) {
  u64 det = 1;
  const std::size_t n = m.rows;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = f.neg(det);
    }
    det = f.mul(det, m(c, c));
    const u64 inv = f.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      const u64 u = f.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(u, m(c, j)));
    }
  }
  return det;
}

u64 poly_eval(const PrimeField& f, const ModPoly& p, u64 x) {
  u64 acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = f.add(f.mul(acc, x), p[i]);
  return acc;
}

}  // namespace

TEST(SparseMatrix, KronAndEmbedding) {
  const PrimeField f = sample_point(1, 0).field();
  std::mt19937_64 g(1);
  const LegSpace two = LegSpace::uniform(3, 2), three = LegSpace::uniform(3, 3);
  auto a = random_mod(f, two, two, g);
  auto b = random_mod(f, LegSpace::uniform(3, 1), LegSpace::uniform(3, 1), g);
  // (a (x) 1)(1 (x) b) = a (x) b = (1 (x) b)(a (x) 1) as embedded operators
  auto a1 = embed_at_leg(f, a, three, 1);
  auto b3 = embed_at_leg(f, b, three, 3);
  EXPECT_EQ(multiply(f, a1, b3), kron(f, a, b).with_spaces(three, three));
  EXPECT_EQ(multiply(f, a1, b3), multiply(f, b3, a1));
  // apply_at_leg agrees with the materialized embedding
  std::vector<u64> x(27);
  for (auto& v : x) v = g() % f.modulus();
  auto a2 = embed_at_leg(f, a, three, 2);
  EXPECT_EQ(apply_at_leg(f, a, three, 2, std::span<const u64>(x)), matvec(f, a2, std::span<const u64>(x)));
}

TEST(SparseMatrix, PermuteLegsIsARepresentation) {
  const PrimeField f = sample_point(1, 0).field();
  const LegSpace s({2, 3, 4});
  auto p = permute_legs(f, {2, 0, 1}, s);
  auto p_inv = permute_legs(f, {1, 2, 0}, p.row_space());
  EXPECT_EQ(multiply(f, p_inv, p), ModMatrix::identity(f, s));
  EXPECT_EQ(p.row_space(), LegSpace({4, 2, 3}));
  EXPECT_THROW(permute_legs(f, {0, 0, 1}, s), ShapeError);
}

TEST(Dense, RankKernelInverseMod) {
  const PrimeField f = sample_point(2, 0).field();
  std::mt19937_64 g(2);
  for (int it = 0; it < 20; ++it) {
    // rank-deficient product of random factors
    const std::size_t k = 1 + g() % 6;
    auto l = random_mod(f, LegSpace({9}), LegSpace({static_cast<int>(k)}), g, 1);
    auto r = random_mod(f, LegSpace({static_cast<int>(k)}), LegSpace({11}), g, 1);
    auto m = to_dense(multiply(f, l, r), u64{0});
    EXPECT_EQ(mod_rank(f, m), k);
    EXPECT_EQ(dense_rank(f, m), k);
    auto ker = mod_kernel(f, m);
    EXPECT_EQ(ker.size(), 11 - k);
    for (const auto& v : ker) {
      auto y = matvec(f, to_sparse(f, m, LegSpace({9}), LegSpace({11})), std::span<const u64>(v));
      for (u64 e : y) EXPECT_EQ(e, 0u);
    }
  }
  auto a = random_mod(f, LegSpace({7}), LegSpace({7}), g, 1);
  auto ai = inverse(f, a);
  EXPECT_EQ(multiply(f, a, ai), ModMatrix::identity(f, LegSpace({7})));
}

TEST(Dense, CharpolyMatchesDeterminant) {
  const PrimeField f = sample_point(3, 0).field();
  std::mt19937_64 g(3);
  for (int n : {1, 2, 3, 5, 8, 13}) {
    auto m = to_dense(random_mod(f, LegSpace({n}), LegSpace({n}), g, 2), u64{0});
    const auto cp = mod_charpoly(f, m);
    ASSERT_EQ(cp.size(), static_cast<std::size_t>(n + 1));
    for (int t = 0; t < 4; ++t) {
      const u64 x0 = g() % f.modulus();
      ModDense s = m;
      for (std::size_t i = 0; i < s.rows; ++i)
        for (std::size_t j = 0; j < s.cols; ++j) s(i, j) = f.sub(i == j ? x0 : 0, m(i, j));
      EXPECT_EQ(poly_eval(f, cp, x0), det_mod(f, s));
    }
  }
}

TEST(Dense, ExactRankOverRationalFunctions) {
  RatFuncRing ring;
  const RatFunc q = RatFunc::q(1);
  DenseMatrix<RatFunc> m(3, 3, RatFunc());
  // rows: (1, q, q^2), (q, q^2, q^3), (1, 1, 1)
  m(0, 0) = 1; m(0, 1) = q; m(0, 2) = q * q;
  m(1, 0) = q; m(1, 1) = q * q; m(1, 2) = q * q * q;
  m(2, 0) = 1; m(2, 1) = 1; m(2, 2) = 1;
  EXPECT_EQ(dense_rank(ring, m), 2u);
  EXPECT_EQ(dense_kernel(ring, m).size(), 1u);
}
