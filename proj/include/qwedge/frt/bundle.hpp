#pragma once

// FRT R-hat matrices, the invariant metric, and the companion exchange
// matrices for SL_q(N), O_q(N) and Sp_q(N).

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwedge/errors.hpp"
#include "qwedge/linalg/dense.hpp"
#include "qwedge/linalg/sparse_matrix.hpp"
#include "qwedge/scalar/prime_field.hpp"
#include "qwedge/scalar/series.hpp"

namespace qwedge {

/// Index placement for 2-leg matrices: the result X satisfies
/// X^{a0 a1}_{a2 a3} = M^{a[p0] a[p1]}_{a[p2] a[p3]}.
using IndexPlacement = std::array<int, 4>;

/// Placement realizing (R-hat^-1)^{sr}_{ba} for the (ab, rs) entry.
inline constexpr IndexPlacement kReversedPlacement{3, 2, 1, 0};

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> place_indices(const Ring& ring, const SparseMatrix<T>& m, const IndexPlacement& p) {
  const int n = m.row_space().leg_dim(1);
  const LegSpace two = LegSpace::uniform(n, 2);
  std::vector<Triplet<T>> t;
  for (const auto& e : m.triplets()) {
    const std::array<int, 4> src{static_cast<int>(e.row) / n, static_cast<int>(e.row) % n,
                                 static_cast<int>(e.col) / n, static_cast<int>(e.col) % n};
    // src holds a[p0..p3]; invert the placement to recover a0..a3.
    std::array<int, 4> a{};
    for (int k = 0; k < 4; ++k) a[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])] = src[static_cast<std::size_t>(k)];
    t.push_back({static_cast<std::size_t>(a[0] * n + a[1]), static_cast<std::size_t>(a[2] * n + a[3]), e.value});
  }
  return SparseMatrix<T>::from_triplets(ring, two, two, std::move(t));
}

/// The complete set of matrices attached to one (series, N, variant).
///
/// Leg conventions: every 2-leg matrix M is stored with row index (i,j) and
/// column index (k,l) for the entry M^{ij}_{kl}.
template <class Ring>
struct BundleT {
  using value_type = typename Ring::value_type;
  using Matrix = SparseMatrix<value_type>;

  SeriesConstants spec;
  Ring ring;
  std::optional<PrimePoint> point;  // set for evaluated bundles

  value_type q;      // effective deformation parameter (q, or q^-1 for variant minus)
  value_type q_inv;
  value_type r;      // r in terms of the effective parameter

  Matrix rhat;
  Matrix rhat_inv;
  Matrix rcheck_minus;       // (R^-1)^{sr}_{ba}, acts on covector legs
  Matrix rcheck;             // R^{sr}_{ba}
  Matrix rgrave_minus;       // V (x) Vbar -> Vbar (x) V exchange
  Matrix rgrave_minus_inv;
  Matrix metric_column;      // N^2 x 1, entries C^{ab}
  Matrix metric_inv_row;     // 1 x N^2, entries (C^-1)_{ab}
  std::vector<value_type> rhat_eigenvalues;  // (q, -q^-1[, r^-1])
  std::vector<Matrix> projectors;            // one per eigenvalue, same order

  std::vector<IndexPlacement> exchange_placements;  // all placements giving rgrave_minus

  int n() const { return spec.n; }
  LegSpace vector_space() const { return LegSpace::uniform(spec.n, 1); }
  LegSpace pair_space() const { return LegSpace::uniform(spec.n, 2); }
};

using RMatrixBundle = BundleT<RatFuncRing>;
using ModBundle = BundleT<PrimeField>;

namespace detail {

/// Braiding of Gamma (x) Gamma assembled from its ingredients:
/// b2 (R-hat (.) Rcheck-minus) b2^-1 on the interleaved legs V Vbar V Vbar.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> assemble_braiding(const Ring& ring, const SparseMatrix<T>& vec_side, const SparseMatrix<T>& cov_side,
                                  const SparseMatrix<T>& exch, const SparseMatrix<T>& exch_inv) {
  const int n = vec_side.row_space().leg_dim(1);
  const LegSpace four = LegSpace::uniform(n, 4);
  auto b2 = embed_at_leg(ring, exch, four, 2);
  auto b2_inv = embed_at_leg(ring, exch_inv, four, 2);
  auto inner = odot(ring, vec_side, cov_side).with_spaces(four, four);
  return multiply(ring, multiply(ring, b2, inner), b2_inv).with_spaces(LegSpace::uniform(n * n, 2),
                                                                        LegSpace::uniform(n * n, 2));
}

template <class Ring, class T = typename Ring::value_type>
bool braid_relation_holds(const Ring& ring, const SparseMatrix<T>& s) {
  const int d = s.row_space().leg_dim(1);
  const LegSpace three = LegSpace::uniform(d, 3);
  auto s1 = embed_at_leg(ring, s, three, 1);
  auto s2 = embed_at_leg(ring, s, three, 2);
  return multiply(ring, multiply(ring, s1, s2), s1) == multiply(ring, multiply(ring, s2, s1), s2);
}

/// True iff prod over `values` of (lambda - m) vanishes.
template <class Ring, class T = typename Ring::value_type>
bool annihilated_by_roots(const Ring& ring, const SparseMatrix<T>& m, const std::vector<T>& values) {
  auto acc = SparseMatrix<T>::identity(ring, m.row_space());
  for (const auto& v : values) acc = multiply(ring, acc, shift_identity(ring, v, m));
  return acc.nnz() == 0;
}

template <class T, class Ring>
std::vector<T> distinct_values(const Ring& ring, const std::vector<T>& in) {
  std::vector<T> out;
  for (const auto& v : in) {
    bool seen = false;
    for (const auto& o : out) seen = seen || ring.is_zero(ring.sub(o, v));
    if (!seen) out.push_back(v);
  }
  return out;
}

inline RatFunc qpow(const RatFunc& q, int e) { return q.pow(e); }

/// FRT R-hat for the series, written in terms of the parameter `q`.
inline QMatrix frt_rhat(const SeriesConstants& spec, const RatFunc& q) {
  const int n = spec.n;
  const RatFunc big_q = q - q.inverse();
  const LegSpace two = LegSpace::uniform(n, 2);
  std::vector<Triplet<RatFunc>> r;  // R (not hatted): term E_ab (x) E_cd at row (a,c), col (b,d)
  auto term = [&](int a, int b, int c, int d, const RatFunc& v) {
    r.push_back({static_cast<std::size_t>(a * n + c), static_cast<std::size_t>(b * n + d), v});
  };
  if (spec.series == Series::A) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) term(i, i, j, j, i == j ? q : RatFunc(1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) term(i, j, j, i, big_q);
  } else {
    const bool symplectic = spec.series == Series::C;
    // doubled rho, plus a doubled shift on the middle index for odd O_q(N)
    // (a diagonal change of basis that removes half-integer powers of q).
    std::vector<int> rho2(static_cast<std::size_t>(n)), shift2(static_cast<std::size_t>(n), 0), eps(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
      const int ip = n - 1 - i;
      const int one_based = i + 1;
      int v = 0;
      if (i < ip) v = symplectic ? (n - 2 * one_based + 2) : (n - 2 * one_based);
      rho2[static_cast<std::size_t>(i)] = v;
    }
    for (int i = 0; i < n; ++i) {
      const int ip = n - 1 - i;
      if (i > ip) rho2[static_cast<std::size_t>(i)] = -rho2[static_cast<std::size_t>(ip)];
      if (symplectic && i >= n / 2) eps[static_cast<std::size_t>(i)] = -1;
    }
    if (!symplectic && n % 2 == 1) shift2[static_cast<std::size_t>(n / 2)] = 1;
    for (int i = 0; i < n; ++i) {
      const int ip = n - 1 - i;
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          term(i, i, i, i, i == ip ? RatFunc(1) : q);
        } else if (j != ip) {
          term(i, i, j, j, RatFunc(1));
        } else {
          term(i, i, j, j, q.inverse());
        }
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        term(i, j, j, i, big_q);
        const int ip = n - 1 - i, jp = n - 1 - j;
        const int e2 = rho2[static_cast<std::size_t>(i)] - rho2[static_cast<std::size_t>(j)] +
                       shift2[static_cast<std::size_t>(i)] - shift2[static_cast<std::size_t>(j)];
        if (e2 % 2 != 0) throw VerificationError("half-integer power of q in R-matrix");
        const int sign = eps[static_cast<std::size_t>(i)] * eps[static_cast<std::size_t>(j)];
        term(i, j, ip, jp, -RatFunc(sign) * big_q * qpow(q, e2 / 2));
      }
  }
  QMatrix rmat = QMatrix::from_triplets(RatFuncRing{}, two, two, std::move(r));
  return multiply(RatFuncRing{}, permute_legs(RatFuncRing{}, {1, 0}, two), rmat);
}

}  // namespace detail

/// Torus weight of each basis vector of V: e_i for SL_q(N); +e_i, -e_{i'} or 0
/// for the orthogonal and symplectic series (i' = N-1-i, 0-based). Every
/// bundle matrix conserves the total weight of its legs.
inline std::vector<std::vector<int>> basis_weights(const SeriesConstants& spec) {
  const int n = spec.n;
  const int rank = spec.series == Series::A ? n : n / 2;
  std::vector<std::vector<int>> w(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(rank), 0));
  for (int i = 0; i < n; ++i) {
    const int ip = n - 1 - i;
    if (spec.series == Series::A) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    else if (i < ip) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    else if (i > ip) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(ip)] = -1;
  }
  return w;
}

/// Weights packed into one integer (components must stay within +-127).
inline std::int64_t pack_weight(const std::vector<int>& w) {
  std::int64_t key = 0;
  for (int c : w) key = key * 256 + (c + 128);
  return key;
}

/// Specialization of every bundle matrix at a point.
inline ModBundle evaluate(const RMatrixBundle& b, const PrimePoint& pt) {
  ModBundle m;
  m.spec = b.spec;
  m.ring = pt.field();
  m.point = pt;
  m.q = eval_at(b.q, pt);
  m.q_inv = eval_at(b.q_inv, pt);
  m.r = eval_at(b.r, pt);
  m.rhat = evaluate(b.rhat, pt);
  m.rhat_inv = evaluate(b.rhat_inv, pt);
  m.rcheck_minus = evaluate(b.rcheck_minus, pt);
  m.rcheck = evaluate(b.rcheck, pt);
  m.rgrave_minus = evaluate(b.rgrave_minus, pt);
  m.rgrave_minus_inv = evaluate(b.rgrave_minus_inv, pt);
  if (b.spec.has_metric()) {
    m.metric_column = evaluate(b.metric_column, pt);
    m.metric_inv_row = evaluate(b.metric_inv_row, pt);
  }
  for (const auto& v : b.rhat_eigenvalues) m.rhat_eigenvalues.push_back(eval_at(v, pt));
  for (const auto& p : b.projectors) m.projectors.push_back(evaluate(p, pt));
  m.exchange_placements = b.exchange_placements;
  return m;
}

/// Spectral projectors of R-hat by Lagrange interpolation on its eigenvalues.
inline std::vector<QMatrix> spectral_projectors(const QMatrix& rhat, const std::vector<RatFunc>& eigenvalues) {
  RatFuncRing ring;
  std::vector<QMatrix> out;
  for (std::size_t a = 0; a < eigenvalues.size(); ++a) {
    auto p = QMatrix::identity(ring, rhat.row_space());
    for (std::size_t b = 0; b < eigenvalues.size(); ++b) {
      if (a == b) continue;
      const RatFunc gap = eigenvalues[a] - eigenvalues[b];
      if (gap.is_zero()) throw VerificationError("R-hat eigenvalue collision");
      auto factor = scale(ring, gap.inverse(), linear_combination(ring, RatFunc(1), rhat, -eigenvalues[b],
                                                                 QMatrix::identity(ring, rhat.row_space())));
      p = multiply(ring, p, factor);
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

/// Compatibility of an exchange X: V (x) Vbar -> Vbar (x) V with the braidings
/// on either side: X moves a covector leg through two vector legs (and a
/// vector leg through two covector legs) commuting with R-hat (resp. Rcheck-minus).
template <class Ring, class T = typename Ring::value_type>
bool exchange_is_natural(const Ring& ring, const SparseMatrix<T>& x, const SparseMatrix<T>& rhat,
                         const SparseMatrix<T>& rcm) {
  const LegSpace three = LegSpace::uniform(rhat.row_space().leg_dim(1), 3);
  auto x1 = embed_at_leg(ring, x, three, 1), x2 = embed_at_leg(ring, x, three, 2);
  auto x12 = multiply(ring, x1, x2), x21 = multiply(ring, x2, x1);
  return multiply(ring, embed_at_leg(ring, rhat, three, 2), x12) ==
             multiply(ring, x12, embed_at_leg(ring, rhat, three, 1)) &&
         multiply(ring, embed_at_leg(ring, rcm, three, 1), x21) == multiply(ring, x21, embed_at_leg(ring, rcm, three, 2));
}

}  // namespace detail

/// Index placements of R-hat^-1, grouped by the exchange matrix they produce,
/// for which the matrix is invertible, natural, and its braiding of
/// Gamma (x) Gamma satisfies the braid relation and is annihilated by the
/// predicted spectrum. Tested at one point.
inline std::vector<std::vector<IndexPlacement>> admissible_exchange_placements(const RMatrixBundle& partial,
                                                                               const PrimePoint& pt) {
  const PrimeField f = pt.field();
  const ModMatrix rhat = evaluate(partial.rhat, pt);
  const ModMatrix rinv = evaluate(partial.rhat_inv, pt);
  const ModMatrix rcm = evaluate(partial.rcheck_minus, pt);
  std::vector<u64> eig;
  for (const auto& v : partial.rhat_eigenvalues) eig.push_back(eval_at(v, pt));
  std::vector<u64> predicted;
  for (u64 a : eig)
    for (u64 b : eig) predicted.push_back(f.mul(a, f.inv(b)));
  predicted = detail::distinct_values(f, predicted);

  std::vector<std::vector<IndexPlacement>> groups;
  std::vector<ModMatrix> seen;
  IndexPlacement p{0, 1, 2, 3};
  do {
    const ModMatrix g = place_indices(f, rinv, p);
    const auto dup = std::find(seen.begin(), seen.end(), g);
    if (dup != seen.end()) {
      auto& grp = groups[static_cast<std::size_t>(dup - seen.begin())];
      if (!grp.empty()) grp.push_back(p);
      continue;
    }
    seen.push_back(g);
    groups.emplace_back();
    if (dense_rank(f, to_dense(g, u64{0})) < g.rows()) continue;
    if (!detail::exchange_is_natural(f, g, rhat, rcm)) continue;
    const ModMatrix s = detail::assemble_braiding(f, rhat, rcm, g, inverse(f, g));
    if (detail::braid_relation_holds(f, s) && detail::annihilated_by_roots(f, s, predicted)) groups.back().push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::erase_if(groups, [](const auto& grp) { return grp.empty(); });
  return groups;
}

/// Builds the complete bundle for a series. Throws ConfigError for
/// unsupported (series, N) and VerificationError if the exchange convention
/// self-test does not single out exactly one placement.
inline RMatrixBundle build_bundle(const SeriesConstants& spec) {
  spec.validate();
  RatFuncRing ring;
  RMatrixBundle b;
  b.spec = spec;
  b.ring = ring;
  b.q = spec.variant == Variant::plus ? RatFunc::q(1) : RatFunc::q(-1);
  b.q_inv = b.q.inverse();
  switch (spec.series) {
    case Series::BD: b.r = b.q.pow(spec.n - 1); break;
    case Series::C: b.r = -b.q.pow(spec.n + 1); break;
    case Series::A: b.r = RatFunc(1); break;
  }
  b.rhat = detail::frt_rhat(spec, b.q);
  b.rhat_inv = inverse(ring, b.rhat);
  b.rcheck_minus = place_indices(ring, b.rhat_inv, kReversedPlacement);
  b.rcheck = place_indices(ring, b.rhat, kReversedPlacement);
  b.rhat_eigenvalues = {b.q, -b.q_inv};
  if (spec.has_metric()) b.rhat_eigenvalues.push_back(b.r.inverse());
  b.projectors = spectral_projectors(b.rhat, b.rhat_eigenvalues);

  if (spec.has_metric()) {
    const std::size_t n2 = static_cast<std::size_t>(spec.n * spec.n);
    auto shifted = shift_identity(ring, b.r.inverse(), b.rhat);
    auto kernel = dense_kernel(ring, to_dense(shifted, RatFunc()));
    if (kernel.size() != 1) throw VerificationError("invariant vector of R-hat is not unique");
    // normalize so that C^{1N} = 1
    const RatFunc norm = kernel[0][static_cast<std::size_t>(spec.n - 1)];
    DenseMatrix<RatFunc> c(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.n), RatFunc());
    std::vector<Triplet<RatFunc>> col;
    for (std::size_t k = 0; k < n2; ++k) {
      const RatFunc v = kernel[0][k] / norm;
      c.data[k] = v;
      if (!v.is_zero()) col.push_back({k, 0, v});
    }
    b.metric_column = QMatrix::from_triplets(ring, b.pair_space(), LegSpace(), std::move(col));
    auto c_inv = dense_inverse(ring, c);
    std::vector<Triplet<RatFunc>> row;
    for (std::size_t k = 0; k < n2; ++k)
      if (!c_inv.data[k].is_zero()) row.push_back({0, k, c_inv.data[k]});
    b.metric_inv_row = QMatrix::from_triplets(ring, LegSpace(), b.pair_space(), std::move(row));
  }

  const auto groups = admissible_exchange_placements(b, sample_point(0x5eed, 0));
  if (groups.size() != 1)
    throw VerificationError("exchange-matrix convention self-test found " + std::to_string(groups.size()) +
                            " admissible exchange matrices (expected exactly one)");
  b.exchange_placements = groups.front();
  b.rgrave_minus = place_indices(ring, b.rhat_inv, b.exchange_placements.front());
  b.rgrave_minus_inv = inverse(ring, b.rgrave_minus);
  return b;
}

}  // namespace qwedge
