#pragma once

// Generic ranks over Q(q) by agreement of modular ranks at several points,
// plus kernels, subspace sums, eigenvalue tests and exact certification.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwedge/errors.hpp"
#include "qwedge/linalg/dense.hpp"
#include "qwedge/linalg/dense_mod.hpp"
#include "qwedge/linalg/sparse_matrix.hpp"
#include "qwedge/scalar/prime_field.hpp"

namespace qwedge {

enum class RankMode { modular_agreement, exact };

inline std::string to_string(RankMode m) { return m == RankMode::exact ? "exact" : "modular_agreement"; }

struct RankResult {
  std::size_t value = 0;
  std::vector<PrimePoint> points;
  std::vector<std::size_t> per_point;  // rank observed at each point
  bool agreed = true;
  RankMode mode = RankMode::modular_agreement;

  /// Combines per-point observations: value is the maximum, agreed iff all equal.
  static RankResult from_points(std::vector<PrimePoint> pts, std::vector<std::size_t> ranks) {
    RankResult r;
    r.points = std::move(pts);
    r.per_point = std::move(ranks);
    r.value = r.per_point.empty() ? 0 : *std::max_element(r.per_point.begin(), r.per_point.end());
    r.agreed = std::all_of(r.per_point.begin(), r.per_point.end(), [&](std::size_t v) { return v == r.value; });
    return r;
  }

  /// The same observation reported as a complement (e.g. kernel = cols - rank).
  RankResult complement(std::size_t total) const {
    RankResult r = *this;
    for (auto& v : r.per_point) v = total - v;
    r.value = total - value;
    return r;
  }
};

struct RankOptions {
  int trials = 3;
  std::uint64_t seed = 0;
  std::size_t dense_threshold = 2000;  // components with fewer columns go dense
};

/// Draws `trials` points for which `prepare` succeeds (no vanishing
/// denominators); bad points are skipped and resampled, never ignored silently.
template <class F>
std::vector<PrimePoint> good_points(const RankOptions& opt, F&& prepare) {
  std::vector<PrimePoint> pts;
  std::uint64_t idx = 0;
  while (static_cast<int>(pts.size()) < opt.trials) {
    if (idx > static_cast<std::uint64_t>(opt.trials) + 64) throw BadPointError("could not find enough good points");
    PrimePoint pt = sample_point(opt.seed, idx++);
    bool dup = false;
    for (const auto& p : pts) dup = dup || p.prime == pt.prime;
    if (dup) continue;
    try {
      prepare(pt);
    } catch (const BadPointError&) {
      continue;
    }
    pts.push_back(pt);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Modular rank of a sparse matrix with component splitting

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

/// Row-by-row sparse echelon insertion with a dense scratch row; suitable
/// for components too large for dense storage but with modest fill.
inline std::size_t sparse_rank_mod(const PrimeField& f, const std::vector<std::vector<std::pair<std::uint32_t, u64>>>& rows,
                                   std::size_t ncols) {
  std::vector<std::vector<std::pair<std::uint32_t, u64>>> pivot_rows(ncols);  // normalized, leading entry 1
  std::vector<u64> acc(ncols, 0);
  std::vector<std::uint32_t> support;
  std::vector<char> in_support(ncols, 0);
  std::size_t rank = 0;
  for (const auto& row : rows) {
    support.clear();
    for (auto [c, v] : row) {
      acc[c] = v;
      in_support[c] = 1;
      support.push_back(c);
    }
    std::make_heap(support.begin(), support.end(), std::greater<>());
    std::optional<std::uint32_t> lead;
    while (!support.empty()) {
      std::pop_heap(support.begin(), support.end(), std::greater<>());
      const std::uint32_t c = support.back();
      support.pop_back();
      in_support[c] = 0;
      const u64 v = acc[c];
      if (v == 0) continue;
      if (pivot_rows[c].empty()) {
        lead = c;
        break;
      }
      const u64 pre = f.shoup_precompute(v);
      for (auto [pc, pv] : pivot_rows[c]) {
        acc[pc] = f.sub(acc[pc], f.shoup_mul(pv, v, pre));
        if (!in_support[pc] && pc != c) {
          in_support[pc] = 1;
          support.push_back(pc);
          std::push_heap(support.begin(), support.end(), std::greater<>());
        }
      }
      acc[c] = 0;
    }
    if (lead) {
      // collect remaining entries (lead and everything still in the heap)
      std::vector<std::pair<std::uint32_t, u64>> prow;
      const u64 inv = f.inv(acc[*lead]);
      prow.emplace_back(*lead, 1);
      acc[*lead] = 0;
      std::sort(support.begin(), support.end());
      for (auto c : support) {
        in_support[c] = 0;
        if (acc[c]) prow.emplace_back(c, f.mul(acc[c], inv));
        acc[c] = 0;
      }
      pivot_rows[*lead] = std::move(prow);
      ++rank;
    }
    support.clear();
  }
  return rank;
}

}  // namespace detail

/// Rank of a sparse matrix over F_p, split into connected components of its
/// bipartite row/column support graph.
inline std::size_t modular_rank(const PrimeField& f, const ModMatrix& m, std::size_t dense_threshold = 2000) {
  const std::size_t nr = m.rows(), nc = m.cols();
  if (m.nnz() == 0) return 0;
  detail::UnionFind uf(nr + nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (auto c : m.row_cols(i)) uf.unite(i, nr + c);
  std::unordered_map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> comps;
  for (std::size_t i = 0; i < nr; ++i)
    if (!m.row_cols(i).empty()) comps[uf.find(i)].first.push_back(i);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto root = uf.find(nr + c);
    auto it = comps.find(root);
    if (it != comps.end()) it->second.second.push_back(c);
  }
  std::size_t rank = 0;
  std::vector<std::size_t> local(nc, 0);
  for (auto& [root, rc] : comps) {
    auto& [rows, cols] = rc;
    for (std::size_t j = 0; j < cols.size(); ++j) local[cols[j]] = j;
    if (cols.size() < dense_threshold) {
      ModDense d(rows.size(), cols.size(), 0);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto cs = m.row_cols(rows[r]);
        auto vs = m.row_values(rows[r]);
        for (std::size_t t = 0; t < cs.size(); ++t) d(r, local[cs[t]]) = vs[t];
      }
      rank += mod_rank(f, std::move(d));
    } else {
      std::vector<std::vector<std::pair<std::uint32_t, u64>>> srows(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto cs = m.row_cols(rows[r]);
        auto vs = m.row_values(rows[r]);
        for (std::size_t t = 0; t < cs.size(); ++t) srows[r].emplace_back(static_cast<std::uint32_t>(local[cs[t]]), vs[t]);
      }
      rank += detail::sparse_rank_mod(f, srows, cols.size());
    }
  }
  return rank;
}

/// Generic rank of a matrix over Q(q) by specialization at `trials` points.
inline RankResult generic_rank(const QMatrix& m, const RankOptions& opt = {}) {
  if (opt.trials < 1) throw ConfigError("trials must be at least 1");
  std::vector<ModMatrix> evaluated;
  auto pts = good_points(opt, [&](const PrimePoint& pt) { evaluated.push_back(evaluate(m, pt)); });
  std::vector<std::size_t> ranks;
  for (std::size_t i = 0; i < pts.size(); ++i) ranks.push_back(modular_rank(pts[i].field(), evaluated[i], opt.dense_threshold));
  return RankResult::from_points(std::move(pts), std::move(ranks));
}

/// Generic rank of a family of modular matrices produced per point.
template <class F>
RankResult generic_rank_by(const RankOptions& opt, F&& build_at) {
  std::vector<std::size_t> ranks;
  std::vector<ModMatrix> built;
  auto pts = good_points(opt, [&](const PrimePoint& pt) { built.push_back(build_at(pt)); });
  for (std::size_t i = 0; i < pts.size(); ++i) ranks.push_back(modular_rank(pts[i].field(), built[i], opt.dense_threshold));
  return RankResult::from_points(std::move(pts), std::move(ranks));
}

inline RankResult kernel_dim(const QMatrix& m, const RankOptions& opt = {}) { return generic_rank(m, opt).complement(m.cols()); }

/// Right kernel basis of the specialization of m at a point.
inline std::vector<std::vector<u64>> kernel_basis_at(const QMatrix& m, const PrimePoint& pt) {
  return mod_kernel(pt.field(), to_dense(evaluate(m, pt), u64{0}));
}

/// Exact rank over Q(q) by elimination with size-guided pivoting.
inline RankResult exact_rank(const QMatrix& m) {
  RankResult r;
  r.value = dense_rank(RatFuncRing{}, to_dense(m, RatFunc()));
  r.mode = RankMode::exact;
  r.agreed = true;
  return r;
}

/// Modular generic rank, cross-checked by exact elimination when the matrix
/// is small (both dimensions at most `exact_limit`). Throws
/// VerificationError if the two disagree.
inline RankResult certified_rank(const QMatrix& m, const RankOptions& opt = {}, std::size_t exact_limit = 100) {
  RankResult r = generic_rank(m, opt);
  if (m.rows() <= exact_limit && m.cols() <= exact_limit) {
    const auto ex = exact_rank(m);
    if (ex.value != r.value) throw VerificationError("exact and modular ranks disagree");
    r.mode = RankMode::exact;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Subspaces

enum class SubspaceKind { image, kernel };

/// A subspace given by generators: the column span of `generator` (image)
/// or the kernel of `generator` (kernel). Bases are materialized per point.
struct SubspaceHandle {
  LegSpace ambient;
  QMatrix generator;
  SubspaceKind kind = SubspaceKind::image;

  static SubspaceHandle image_of(QMatrix m) { return {m.row_space(), std::move(m), SubspaceKind::image}; }
  static SubspaceHandle kernel_of(QMatrix m) { return {m.col_space(), std::move(m), SubspaceKind::kernel}; }

  /// Spanning vectors (as rows) at a point.
  std::vector<std::vector<u64>> spanning_rows_at(const PrimePoint& pt) const {
    const auto g = evaluate(generator, pt);
    if (kind == SubspaceKind::kernel) return mod_kernel(pt.field(), to_dense(g, u64{0}));
    const auto gt = transpose(g);
    std::vector<std::vector<u64>> rows;
    for (std::size_t i = 0; i < gt.rows(); ++i) {
      std::vector<u64> v(gt.cols(), 0);
      auto cs = gt.row_cols(i);
      auto vs = gt.row_values(i);
      for (std::size_t t = 0; t < cs.size(); ++t) v[cs[t]] = vs[t];
      rows.push_back(std::move(v));
    }
    return rows;
  }
};

namespace detail {

inline ModMatrix rows_to_matrix(const PrimeField& f, const std::vector<std::vector<u64>>& rows, const LegSpace& ambient) {
  std::vector<Triplet<u64>> t;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j]) t.push_back({i, j, rows[i][j]});
  return ModMatrix::from_triplets(f, LegSpace({static_cast<int>(std::max<std::size_t>(rows.size(), 1))}), ambient, std::move(t));
}

}  // namespace detail

inline RankResult subspace_dim(const SubspaceHandle& s, const RankOptions& opt = {}) {
  return generic_rank_by(opt, [&](const PrimePoint& pt) {
    return detail::rows_to_matrix(pt.field(), s.spanning_rows_at(pt), s.ambient);
  });
}

inline RankResult subspace_sum_dim(const std::vector<SubspaceHandle>& parts, const RankOptions& opt = {}) {
  if (parts.empty()) return RankResult::from_points({}, {});
  for (const auto& p : parts)
    if (p.ambient.total() != parts.front().ambient.total()) throw ShapeError("subspace_sum_dim: ambient mismatch");
  return generic_rank_by(opt, [&](const PrimePoint& pt) {
    std::vector<std::vector<u64>> all;
    for (const auto& p : parts) {
      auto r = p.spanning_rows_at(pt);
      all.insert(all.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return detail::rows_to_matrix(pt.field(), all, parts.front().ambient);
  });
}

/// True iff dim A = dim B = dim(A + B) at every point.
inline bool subspace_equal(const SubspaceHandle& a, const SubspaceHandle& b, const RankOptions& opt = {}) {
  const auto da = subspace_dim(a, opt), db = subspace_dim(b, opt), ds = subspace_sum_dim({a, b}, opt);
  for (std::size_t i = 0; i < da.per_point.size(); ++i)
    if (da.per_point[i] != db.per_point[i] || da.per_point[i] != ds.per_point[i]) return false;
  return da.agreed && db.agreed && ds.agreed;
}

// ---------------------------------------------------------------------------
// Spectral checks

struct EigenCheck {
  bool is_eigenvalue = false;
  RankResult multiplicity;  // geometric multiplicity (kernel dimension)
};

/// A matrix given by its specialization at each point (for operators that
/// are cheaper to build modularly than over Q(q)).
using PointBuilder = std::function<ModMatrix(const PrimePoint&)>;

inline PointBuilder specializer(const QMatrix& m) {
  return [&m](const PrimePoint& pt) { return evaluate(m, pt); };
}

/// Eigenvalue test at each point: ker(M - lambda) nonzero everywhere.
inline EigenCheck is_eigenvalue(const PointBuilder& build, std::size_t dim, const RatFunc& lambda,
                                const RankOptions& opt = {}) {
  EigenCheck out;
  const auto r = generic_rank_by(opt, [&](const PrimePoint& pt) {
    const auto f = pt.field();
    return shift_identity(f, eval_at(lambda, pt), build(pt));
  });
  out.multiplicity = r.complement(dim);
  out.is_eigenvalue = std::all_of(out.multiplicity.per_point.begin(), out.multiplicity.per_point.end(),
                                  [](std::size_t d) { return d > 0; });
  return out;
}

inline EigenCheck is_eigenvalue(const QMatrix& m, const RatFunc& lambda, const RankOptions& opt = {}) {
  return is_eigenvalue(specializer(m), m.cols(), lambda, opt);
}

/// Polynomial with coefficients in Q(q), low degree first.
using QPoly = std::vector<RatFunc>;

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> poly_of_matrix(const Ring& ring, const std::vector<T>& p, const SparseMatrix<T>& m) {
  // Horner: p(M) = (...(c_d M + c_{d-1}) M + ...) + c_0
  auto id = SparseMatrix<T>::identity(ring, m.row_space());
  auto acc = SparseMatrix<T>::zero(ring, m.row_space(), m.col_space());
  for (std::size_t i = p.size(); i-- > 0;) acc = linear_combination(ring, ring.one(), multiply(ring, acc, m), p[i], id);
  return acc;
}

/// p(M) = 0 at every point, and exactly over Q(q) when M is at most
/// `exact_limit` square.
inline bool annihilates(const QMatrix& m, const QPoly& p, const RankOptions& opt = {}, std::size_t exact_limit = 100) {
  bool ok = true;
  good_points(opt, [&](const PrimePoint& pt) {
    const auto f = pt.field();
    std::vector<u64> pe;
    for (const auto& c : p) pe.push_back(eval_at(c, pt));
    ok = ok && poly_of_matrix(f, pe, evaluate(m, pt)).nnz() == 0;
  });
  if (ok && m.rows() <= exact_limit) ok = poly_of_matrix(RatFuncRing{}, p, m).nnz() == 0;
  return ok;
}

/// Product of (x - lambda_i) as a polynomial.
inline QPoly poly_from_roots(const std::vector<RatFunc>& roots) {
  QPoly p{RatFunc(1)};
  for (const auto& r : roots) {
    QPoly n(p.size() + 1, RatFunc());
    for (std::size_t i = 0; i < p.size(); ++i) {
      n[i + 1] = n[i + 1] + p[i];
      n[i] = n[i] - r * p[i];
    }
    p = std::move(n);
  }
  return p;
}

/// Characteristic polynomial mod p of a sparse matrix, as the product over
/// its diagonal blocks (connected components of the support graph).
inline ModPoly block_charpoly(const PrimeField& f, const ModMatrix& m) {
  const std::size_t n = m.rows();
  detail::UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto c : m.row_cols(i)) uf.unite(i, c);
  std::unordered_map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < n; ++i) comps[uf.find(i)].push_back(i);
  std::vector<std::size_t> local(n, 0);
  ModPoly total{1};
  for (auto& [root, idx] : comps) {
    for (std::size_t j = 0; j < idx.size(); ++j) local[idx[j]] = j;
    ModDense d(idx.size(), idx.size(), 0);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      auto cs = m.row_cols(idx[r]);
      auto vs = m.row_values(idx[r]);
      for (std::size_t t = 0; t < cs.size(); ++t) d(r, local[cs[t]]) = vs[t];
    }
    total = poly_mul(f, total, mod_charpoly(f, std::move(d)));
  }
  return total;
}

/// Largest e such that quad^e divides the characteristic polynomial, per point.
inline std::vector<int> charpoly_multiplicity(const PointBuilder& build, const QPoly& quad, const RankOptions& opt = {}) {
  std::vector<int> out;
  good_points(opt, [&](const PrimePoint& pt) {
    const auto f = pt.field();
    ModPoly qp;
    for (const auto& c : quad) qp.push_back(eval_at(c, pt));
    trim(qp);
    ModPoly cp = block_charpoly(f, build(pt));
    int e = 0;
    while (!cp.empty()) {
      auto [quo, rem] = poly_divmod(f, cp, qp);
      if (!rem.empty()) break;
      cp = std::move(quo);
      ++e;
    }
    out.push_back(e);
  });
  return out;
}

/// quad^expected divides the characteristic polynomial at every point.
inline bool quadratic_divides_charpoly(const PointBuilder& build, const QPoly& quad, int expected_multiplicity,
                                       const RankOptions& opt = {}) {
  const auto mult = charpoly_multiplicity(build, quad, opt);
  return std::all_of(mult.begin(), mult.end(), [&](int e) { return e >= expected_multiplicity; });
}

inline bool quadratic_divides_charpoly(const QMatrix& m, const QPoly& quad, int expected_multiplicity,
                                       const RankOptions& opt = {}) {
  return quadratic_divides_charpoly(specializer(m), quad, expected_multiplicity, opt);
}

}  // namespace qwedge
