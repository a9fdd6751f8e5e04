#pragma once

// Graded quotients of the tensor algebra of Gamma by two-sided ideals, the
// Woronowicz ranks rank A_k, the radical of the case-d) algebra and the
// eigenvalue table of A_3.
//
// Quotients are built degree by degree: a basis of A_k is a set of normal
// words c (x) e_y with c running over a basis of A_{k-1}; the degree-k
// relations are the images of b (x) w for b in A_{k-2} and w in the
// generator W. Everything is torus-graded, so elimination happens one weight
// block at a time.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwedge/braid/braid_forms.hpp"
#include "qwedge/rank/rank_engine.hpp"

namespace qwedge {

enum class IdealCase { s1, s2, s3, s4 };

inline std::string to_string(IdealCase c) {
  switch (c) {
    case IdealCase::s1: return "s1";
    case IdealCase::s2: return "s2";
    case IdealCase::s3: return "s3";
    case IdealCase::s4: return "s4";
  }
  return "?";
}

inline IdealCase parse_ideal_case(const std::string& s) {
  if (s == "s1") return IdealCase::s1;
  if (s == "s2") return IdealCase::s2;
  if (s == "s3") return IdealCase::s3;
  if (s == "s4") return IdealCase::s4;
  throw ConfigError("unknown case '" + s + "' (expected s1, s2, s3 or s4)");
}

// ---------------------------------------------------------------------------
// Weights

using WeightKey = std::int64_t;

/// Additive packing of a weight vector (12 bits per component).
inline WeightKey weight_key(const std::vector<int>& w) {
  WeightKey key = 0;
  for (std::size_t c = 0; c < w.size(); ++c) key += static_cast<WeightKey>(w[c]) << (12 * c);
  return key;
}

inline std::vector<WeightKey> vector_weight_keys(const SeriesConstants& spec) {
  std::vector<WeightKey> out;
  for (const auto& w : basis_weights(spec)) out.push_back(weight_key(w));
  return out;
}

/// Weight of theta_{ij} (index i*N + j): wt(i) - wt(j).
inline std::vector<WeightKey> gamma_weight_keys(const SeriesConstants& spec) {
  const auto v = vector_weight_keys(spec);
  std::vector<WeightKey> out;
  for (auto a : v)
    for (auto b : v) out.push_back(a - b);
  return out;
}

/// Weights of Gamma (x) Gamma, index x*N^2 + y.
inline std::vector<WeightKey> gamma_pair_weight_keys(const SeriesConstants& spec) {
  const auto g = gamma_weight_keys(spec);
  std::vector<WeightKey> out;
  for (auto a : g)
    for (auto b : g) out.push_back(a + b);
  return out;
}

// ---------------------------------------------------------------------------
// Degree-2 generators

template <class Ring>
auto sigma_shift(const BundleT<Ring>& b, const typename Ring::value_type& lambda) {
  return shift_identity(b.ring, lambda, build_sigma(b));
}

/// The degree-2 part of the ideal. For s1 this is ker A_2 = ker(I - sigma);
/// higher-degree generators of s1 are handled by woronowicz_ranks.
inline SubspaceHandle generator_space(const RMatrixBundle& b, IdealCase c) {
  const auto sigma = build_sigma(b);
  switch (c) {
    case IdealCase::s1:
    case IdealCase::s2: return SubspaceHandle::kernel_of(shift_identity(b.ring, RatFunc(1), sigma));
    case IdealCase::s3: {
      const auto st = build_sigma_tilde(b);
      return SubspaceHandle::image_of(shift_identity(b.ring, RatFunc(-1), st));
    }
    case IdealCase::s4: {
      // sigma is diagonalizable, so a sum of eigenspaces is the kernel of the
      // product of the shifts.
      auto p = multiply(b.ring, shift_identity(b.ring, RatFunc(1), sigma), shift_identity(b.ring, b.q.pow(3), sigma));
      p = multiply(b.ring, p, shift_identity(b.ring, b.q.pow(-3), sigma));
      return SubspaceHandle::kernel_of(std::move(p));
    }
  }
  throw ConfigError("unknown case");
}

/// Sum of the eigenspaces of sigma at the given eigenvalues, one handle each.
inline std::vector<SubspaceHandle> sigma_eigenspaces(const RMatrixBundle& b, const std::vector<RatFunc>& values) {
  const auto sigma = build_sigma(b);
  std::vector<SubspaceHandle> out;
  for (const auto& v : values) out.push_back(SubspaceHandle::kernel_of(shift_identity(b.ring, v, sigma)));
  return out;
}

/// b_2 (sum_i P_i (.) P'_i) b_2^-1 (Gamma (x) Gamma), where P_i projects onto
/// the R-hat eigenspace for lambda_i and P'_i onto the Rcheck-minus
/// eigenspace for lambda_i^-1.
inline SubspaceHandle s2_projector_form(const RMatrixBundle& b) {
  std::vector<RatFunc> inv;
  for (const auto& v : b.rhat_eigenvalues) inv.push_back(v.inverse());
  const auto cov = spectral_projectors(b.rcheck_minus, inv);
  const int n = b.n();
  const LegSpace four = LegSpace::uniform(n, 4);
  auto sum = QMatrix::zero(b.ring, four, four);
  for (std::size_t i = 0; i < b.projectors.size(); ++i)
    sum = add(b.ring, sum, odot(b.ring, b.projectors[i], cov[i]).with_spaces(four, four));
  const auto b2 = embed_at_leg(b.ring, b.rgrave_minus, four, 2);
  const auto b2_inv = embed_at_leg(b.ring, b.rgrave_minus_inv, four, 2);
  const LegSpace gg = LegSpace::uniform(n * n, 2);
  return SubspaceHandle::image_of(multiply(b.ring, multiply(b.ring, b2, sum), b2_inv).with_spaces(gg, gg));
}

// ---------------------------------------------------------------------------
// Graded quotient tower over F_p

using SparseVec = std::vector<std::pair<std::uint32_t, u64>>;

struct HomogeneousVector {
  WeightKey weight = 0;
  SparseVec entries;
};

/// Reduces spanning rows to a basis of homogeneous vectors. Throws if a basis
/// vector mixes weights (the generator is then not a graded subspace).
inline std::vector<HomogeneousVector> homogeneous_basis(const PrimeField& f, const std::vector<std::vector<u64>>& rows,
                                                        const std::vector<WeightKey>& weights) {
  std::vector<HomogeneousVector> out;
  if (rows.empty()) return out;
  ModDense d(rows.size(), weights.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < weights.size(); ++j) d(i, j) = rows[i][j];
  for (const auto& row : mod_row_basis(f, std::move(d))) {
    HomogeneousVector h;
    bool first = true;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j]) continue;
      if (first) h.weight = weights[j];
      else if (weights[j] != h.weight) throw VerificationError("generator is not weight-homogeneous");
      first = false;
      h.entries.emplace_back(static_cast<std::uint32_t>(j), row[j]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

class QuotientTower {
 public:
  struct Level {
    std::vector<WeightKey> weight;                     // per basis element
    std::vector<std::int32_t> col_to_basis;            // over A_{k-1} (x) Gamma; -1 for pivot columns
    std::unordered_map<std::uint64_t, SparseVec> reduced;  // pivot column -> normal form
    std::size_t dim() const { return weight.size(); }
  };

  QuotientTower(PrimeField f, std::vector<WeightKey> gamma_weights, std::vector<HomogeneousVector> generators)
      : f_(f), gw_(std::move(gamma_weights)), gens_(std::move(generators)) {
    Level l0;
    l0.weight = {0};
    l0.col_to_basis = {0};
    levels_.push_back(std::move(l0));
    Level l1;
    l1.weight = gw_;
    for (std::size_t y = 0; y < gw_.size(); ++y) l1.col_to_basis.push_back(static_cast<std::int32_t>(y));
    levels_.push_back(std::move(l1));
  }

  int top() const { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  std::size_t dim(int k) const { return level(k).dim(); }

  /// Normal form of (basis element c of A_{k-1}) (x) e_y in A_k.
  SparseVec normal_form(int k, std::size_t c, std::size_t y) const {
    const auto& lv = level(k);
    const std::uint64_t col = c * gw_.size() + y;
    const auto b = lv.col_to_basis[col];
    if (b >= 0) return {{static_cast<std::uint32_t>(b), 1}};
    auto it = lv.reduced.find(col);
    return it == lv.reduced.end() ? SparseVec{} : it->second;
  }

  /// Extends the tower through degree k.
  void extend_to(int kmax) {
    while (top() < kmax) add_level();
  }

 private:
  void add_level() {
    const int k = top() + 1;
    const Level& prev = levels_[static_cast<std::size_t>(k - 1)];
    const Level& pp = levels_[static_cast<std::size_t>(k - 2)];
    const std::size_t g = gw_.size();
    const std::size_t ncols = prev.dim() * g;

    std::map<WeightKey, std::vector<std::uint64_t>> col_blocks;
    for (std::size_t c = 0; c < prev.dim(); ++c)
      for (std::size_t y = 0; y < g; ++y) col_blocks[prev.weight[c] + gw_[y]].push_back(c * g + y);
    std::map<WeightKey, std::vector<std::pair<std::size_t, std::size_t>>> row_blocks;  // (b, generator)
    for (std::size_t b = 0; b < pp.dim(); ++b)
      for (std::size_t w = 0; w < gens_.size(); ++w) row_blocks[pp.weight[b] + gens_[w].weight].push_back({b, w});

    Level lv;
    lv.col_to_basis.assign(ncols, -1);
    std::vector<std::int64_t> local(ncols, -1);
    for (const auto& [wt, cols] : col_blocks) {
      for (std::size_t j = 0; j < cols.size(); ++j) local[cols[j]] = static_cast<std::int64_t>(j);
      const auto rit = row_blocks.find(wt);
      const std::size_t nrows = rit == row_blocks.end() ? 0 : rit->second.size();
      ModDense d(std::max<std::size_t>(nrows, 1), cols.size(), 0);
      for (std::size_t r = 0; r < nrows; ++r) {
        const auto [b, w] = rit->second[r];
        for (const auto& [xy, coeff] : gens_[w].entries) {
          const std::size_t x = xy / g, y = xy % g;
          for (const auto& [c, v] : normal_form(k - 1, b, x)) {
            const auto l = local[c * g + y];
            if (l < 0) throw VerificationError("relation leaves its weight block");
            auto& cell = d(r, static_cast<std::size_t>(l));
            cell = f_.add(cell, f_.mul(coeff, v));
          }
        }
      }
      const auto pivots = nrows ? mod_echelon(f_, d, true) : std::vector<std::size_t>{};
      std::vector<char> is_pivot(cols.size(), 0);
      for (auto p : pivots) is_pivot[p] = 1;
      std::vector<std::int32_t> new_index(cols.size(), -1);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (is_pivot[j]) continue;
        new_index[j] = static_cast<std::int32_t>(lv.weight.size());
        lv.col_to_basis[cols[j]] = new_index[j];
        lv.weight.push_back(wt);
      }
      for (std::size_t r = 0; r < pivots.size(); ++r) {
        SparseVec nf;
        for (std::size_t j = pivots[r] + 1; j < cols.size(); ++j)
          if (!is_pivot[j] && d(r, j)) nf.emplace_back(static_cast<std::uint32_t>(new_index[j]), f_.neg(d(r, j)));
        lv.reduced.emplace(cols[pivots[r]], std::move(nf));
      }
    }
    levels_.push_back(std::move(lv));
  }

  PrimeField f_;
  std::vector<WeightKey> gw_;
  std::vector<HomogeneousVector> gens_;
  std::vector<Level> levels_;
};

/// Degree-k dimensions of the quotient by the ideal generated by `gen`, at one point.
inline QuotientTower quotient_tower_at(const RMatrixBundle& b, const SubspaceHandle& gen, const PrimePoint& pt, int kmax) {
  const auto f = pt.field();
  QuotientTower tower(f, gamma_weight_keys(b.spec),
                      homogeneous_basis(f, gen.spanning_rows_at(pt), gamma_pair_weight_keys(b.spec)));
  tower.extend_to(kmax);
  return tower;
}

/// Reference route for small k: rank of the stacked embeddings
/// Gamma^j (x) W (x) Gamma^{k-2-j} inside Gamma^{(x)k}.
inline std::size_t ideal_component_rank_direct(const RMatrixBundle& b, const SubspaceHandle& gen, const PrimePoint& pt,
                                               int k, std::size_t dense_threshold = 2000) {
  if (k < 2) return 0;
  const auto f = pt.field();
  const auto gens = homogeneous_basis(f, gen.spanning_rows_at(pt), gamma_pair_weight_keys(b.spec));
  const std::size_t g = static_cast<std::size_t>(b.n() * b.n());
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= g;
  std::vector<Triplet<u64>> t;
  std::size_t row = 0;
  for (int j = 0; j <= k - 2; ++j) {
    std::size_t left = 1, right = 1;
    for (int i = 0; i < j; ++i) left *= g;
    for (int i = 0; i < k - 2 - j; ++i) right *= g;
    for (std::size_t u = 0; u < left; ++u)
      for (const auto& w : gens)
        for (std::size_t v = 0; v < right; ++v, ++row)
          for (const auto& [xy, c] : w.entries) t.push_back({row, (u * g * g + xy) * right + v, c});
  }
  const auto m = ModMatrix::from_triplets(f, LegSpace({static_cast<int>(std::max<std::size_t>(row, 1))}),
                                          LegSpace::uniform(static_cast<int>(g), k), std::move(t));
  return modular_rank(f, m, dense_threshold);
}

// ---------------------------------------------------------------------------
// Woronowicz ranks by image growth in the sorted (dotted) layout
//
// A_k = F'_k (A_{k-1} (x) 1) with F'_k = sum_j (-1)^j g_{k-j} ... g_{k-1}, so
// im A_k = F'_k (im A_{k-1} (x) V (x) Vbar). The generators g_i act as
// R-hat on V legs (i, i+1) and Rcheck-minus on Vbar legs (i, i+1) and keep
// the pair (weight of the V part, weight of the Vbar digits) fixed.

namespace detail {

/// The N^k multi-indices of V^k split by total weight, with local positions.
struct WeightClasses {
  std::map<WeightKey, std::vector<std::uint32_t>> members;
  std::vector<std::uint32_t> position;
  std::vector<WeightKey> weight;
};

inline WeightClasses weight_classes(const std::vector<WeightKey>& wv, int k) {
  const std::size_t n = wv.size();
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= n;
  WeightClasses wc;
  wc.position.resize(total);
  wc.weight.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    WeightKey w = 0;
    for (std::size_t t = idx, i = 0; i < static_cast<std::size_t>(k); ++i, t /= n) w += wv[t % n];
    wc.weight[idx] = w;
    auto& m = wc.members[w];
    wc.position[idx] = static_cast<std::uint32_t>(m.size());
    m.push_back(static_cast<std::uint32_t>(idx));
  }
  return wc;
}

/// CSR form of a 2-leg operator placed at legs (i, i+1) of V^k, restricted to one weight class.
struct LocalOp {
  std::vector<std::uint32_t> start, col;
  std::vector<u64> val;
};

inline LocalOp restrict_pair_op(const ModMatrix& op, int n, int k, int leg, const WeightClasses& wc,
                                const std::vector<std::uint32_t>& members) {
  std::size_t stride = 1;  // leg numbering: leg 1 is the most significant digit
  for (int i = leg + 1; i < k; ++i) stride *= static_cast<std::size_t>(n);
  const std::size_t nn = static_cast<std::size_t>(n);
  LocalOp lo;
  // Gather form: y[a] = sum_c op[pair(a)][c] x[a with pair replaced by c].
  lo.start.assign(1, 0);
  for (auto idx : members) {
    const std::size_t lo_d = (idx / stride) % nn, hi_d = (idx / (stride * nn)) % nn;
    const std::size_t base = idx - (hi_d * nn + lo_d) * stride;
    const std::size_t row = hi_d * nn + lo_d;
    auto cs = op.row_cols(row);
    auto vs = op.row_values(row);
    for (std::size_t t = 0; t < cs.size(); ++t) {
      const std::size_t src = base + (cs[t] / nn * nn + cs[t] % nn) * stride;
      if (wc.weight[src] != wc.weight[idx]) throw VerificationError("operator does not conserve weight");
      lo.col.push_back(wc.position[src]);
      lo.val.push_back(vs[t]);
    }
    lo.start.push_back(static_cast<std::uint32_t>(lo.col.size()));
  }
  return lo;
}

}  // namespace detail

/// rank A_k for k = 0..kmax at one point. With `transposed` the growth runs
/// on A_k^T (built from the transposed generators), an independent route to
/// the same ranks.
inline std::vector<std::size_t> woronowicz_ranks_at(const ModBundle& mb, int kmax, bool transposed = false) {
  const auto& f = mb.ring;
  const int n = mb.n();
  const auto wv = vector_weight_keys(mb.spec);
  const ModMatrix vec_gen = transposed ? transpose(mb.rhat) : mb.rhat;
  const ModMatrix cov_gen = transposed ? transpose(mb.rcheck_minus) : mb.rcheck_minus;
  std::vector<std::size_t> ranks{1};
  if (kmax < 1) return ranks;
  ranks.push_back(static_cast<std::size_t>(n * n));

  using BlockKey = std::pair<WeightKey, WeightKey>;
  // Level 1: the full space, one unit vector per basis element.
  auto classes = detail::weight_classes(wv, 1);
  std::map<BlockKey, std::vector<std::vector<u64>>> basis;
  for (const auto& [a, ma] : classes.members)
    for (const auto& [bw, mbm] : classes.members) {
      const std::size_t d = ma.size() * mbm.size();
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<u64> v(d, 0);
        v[i] = 1;
        basis[{a, bw}].push_back(std::move(v));
      }
    }

  for (int k = 2; k <= kmax; ++k) {
    auto next_classes = detail::weight_classes(wv, k);
    // Restricted generators per class: vector side R-hat, covector side Rcheck-minus.
    std::map<WeightKey, std::vector<detail::LocalOp>> vec_ops, cov_ops;
    for (const auto& [w, members] : next_classes.members)
      for (int i = 1; i < k; ++i) {
        vec_ops[w].push_back(detail::restrict_pair_op(vec_gen, n, k, i, next_classes, members));
        cov_ops[w].push_back(detail::restrict_pair_op(cov_gen, n, k, i, next_classes, members));
      }

    std::map<BlockKey, std::vector<std::vector<u64>>> grown;
    for (const auto& [key, vecs] : basis) {
      const auto& ma = classes.members.at(key.first);
      const auto& mbm = classes.members.at(key.second);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          const BlockKey nk{key.first + wv[static_cast<std::size_t>(x)], key.second + wv[static_cast<std::size_t>(y)]};
          const std::size_t na = next_classes.members.at(nk.first).size();
          const std::size_t nb = next_classes.members.at(nk.second).size();
          const auto& vops = vec_ops.at(nk.first);
          const auto& cops = cov_ops.at(nk.second);
          auto apply_g = [&](int i, const std::vector<u64>& in) {
            const auto& vo = vops[static_cast<std::size_t>(i - 1)];
            const auto& co = cops[static_cast<std::size_t>(i - 1)];
            std::vector<u64> mid(in.size(), 0), out(in.size(), 0);
            for (std::size_t a = 0; a < na; ++a)
              for (std::size_t bb = 0; bb < nb; ++bb) {
                u64 s = 0;
                for (auto t = co.start[bb]; t < co.start[bb + 1]; ++t)
                  s = f.add(s, f.mul(co.val[t], in[a * nb + co.col[t]]));
                mid[a * nb + bb] = s;
              }
            for (std::size_t a = 0; a < na; ++a)
              for (auto t = vo.start[a]; t < vo.start[a + 1]; ++t) {
                const u64 c = vo.val[t];
                const std::size_t src = vo.col[t];
                for (std::size_t bb = 0; bb < nb; ++bb)
                  if (mid[src * nb + bb]) out[a * nb + bb] = f.add(out[a * nb + bb], f.mul(c, mid[src * nb + bb]));
              }
            return out;
          };
          for (const auto& u : vecs) {
            std::vector<u64> v(na * nb, 0);
            for (std::size_t ia = 0; ia < ma.size(); ++ia)
              for (std::size_t ib = 0; ib < mbm.size(); ++ib) {
                const u64 c = u[ia * mbm.size() + ib];
                if (!c) continue;
                const std::size_t ga = ma[ia] * static_cast<std::size_t>(n) + static_cast<std::size_t>(x);
                const std::size_t gb = mbm[ib] * static_cast<std::size_t>(n) + static_cast<std::size_t>(y);
                v[next_classes.position[ga] * nb + next_classes.position[gb]] = c;
              }
            // F'_k v = sum_j (-1)^j t_j, t_0 = v, t_j = g_{k-j} t_{j-1}.
            std::vector<u64> acc = v, t = v;
            for (int j = 1; j <= k - 1; ++j) {
              t = apply_g(k - j, t);
              for (std::size_t s = 0; s < acc.size(); ++s) acc[s] = (j % 2) ? f.sub(acc[s], t[s]) : f.add(acc[s], t[s]);
            }
            grown[nk].push_back(std::move(acc));
          }
        }
    }
    std::map<BlockKey, std::vector<std::vector<u64>>> reduced;
    std::size_t rank = 0;
    for (auto& [key, vecs] : grown) {
      const std::size_t d = vecs.front().size();
      ModDense m(vecs.size(), d, 0);
      for (std::size_t i = 0; i < vecs.size(); ++i) std::copy(vecs[i].begin(), vecs[i].end(), &m(i, 0));
      vecs.clear();
      auto rows = mod_row_basis(f, std::move(m));
      rank += rows.size();
      if (!rows.empty()) reduced[key] = std::move(rows);
    }
    ranks.push_back(rank);
    basis = std::move(reduced);
    classes = std::move(next_classes);
  }
  return ranks;
}

// ---------------------------------------------------------------------------
// Tables

struct DimensionTable {
  IdealCase case_id = IdealCase::s2;
  std::vector<std::size_t> dims;          // k -> dim of the degree-k part of the quotient
  std::vector<RankResult> rank_results;   // per k; value = dims[k]
  bool agreed() const {
    return std::all_of(rank_results.begin(), rank_results.end(), [](const RankResult& r) { return r.agreed; });
  }
};

struct TableOptions {
  RankOptions rank;
  bool stretch = false;
};

inline void check_table_guard(IdealCase c, int kmax, bool stretch) {
  if (kmax < 0) throw ConfigError("kmax must be non-negative");
  const bool heavy = (c == IdealCase::s1 || c == IdealCase::s2) ? kmax >= 6 : kmax > 6;
  if (heavy && !stretch)
    throw ConfigError("kmax=" + std::to_string(kmax) + " for case " + to_string(c) +
                      " exceeds the default resource guard; pass --stretch to run it");
}

/// Assembles per-point dimension lists into a table.
inline DimensionTable assemble_table(IdealCase c, const std::vector<PrimePoint>& pts,
                                     const std::vector<std::vector<std::size_t>>& per_point, int kmax) {
  DimensionTable t;
  t.case_id = c;
  for (int k = 0; k <= kmax; ++k) {
    std::vector<std::size_t> vals;
    for (const auto& d : per_point) vals.push_back(d[static_cast<std::size_t>(k)]);
    auto r = RankResult::from_points(pts, std::move(vals));
    t.dims.push_back(r.value);
    t.rank_results.push_back(std::move(r));
  }
  return t;
}

inline DimensionTable quotient_table(const RMatrixBundle& b, IdealCase c, int kmax, const TableOptions& opt = {}) {
  check_table_guard(c, kmax, opt.stretch);
  std::vector<std::vector<std::size_t>> per_point;
  std::vector<PrimePoint> pts;
  if (c == IdealCase::s1) {
    pts = good_points(opt.rank, [&](const PrimePoint& pt) { per_point.push_back(woronowicz_ranks_at(evaluate(b, pt), kmax)); });
  } else {
    const auto gen = generator_space(b, c);
    pts = good_points(opt.rank, [&](const PrimePoint& pt) {
      const auto tower = quotient_tower_at(b, gen, pt, std::max(kmax, 1));
      std::vector<std::size_t> d;
      for (int k = 0; k <= kmax; ++k) d.push_back(tower.dim(k));
      per_point.push_back(std::move(d));
    });
  }
  return assemble_table(c, pts, per_point, kmax);
}

/// dim of the degree-k ideal component, 9^k - dim of the quotient.
inline RankResult ideal_component_dim(const RMatrixBundle& b, IdealCase c, int k, const TableOptions& opt = {}) {
  if (k < 2) throw ConfigError("ideal components start in degree 2");
  const auto t = quotient_table(b, c, k, opt);
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(b.n() * b.n());
  return t.rank_results.back().complement(total);
}

// ---------------------------------------------------------------------------
// Radical of the case-d) algebra

struct RadicalReport {
  RankResult radical_dim;
  std::vector<RankResult> single_kernel_dims;  // one per basis 1-form
  std::vector<std::size_t> algebra_dims;       // degrees 0..5 of the case-d) algebra
  std::vector<std::size_t> quotient_dims;      // the same with the radical removed
  bool agreed() const {
    bool ok = radical_dim.agreed;
    for (const auto& r : single_kernel_dims) ok = ok && r.agreed;
    return ok;
  }
};

/// The radical {rho in degree 3 | rho theta = 0 for every 1-form theta}; rho
/// theta lands in degree 4, so higher degrees need not be examined.
inline RadicalReport radical_s4(const RMatrixBundle& b, const RankOptions& opt = {}) {
  const auto gen = generator_space(b, IdealCase::s4);
  const std::size_t g = static_cast<std::size_t>(b.n() * b.n());
  std::vector<std::size_t> rad, deg3;
  std::vector<std::vector<std::size_t>> single(g), dims;
  const auto pts = good_points(opt, [&](const PrimePoint& pt) {
    const auto f = pt.field();
    const auto tower = quotient_tower_at(b, gen, pt, 5);
    const std::size_t d3 = tower.dim(3), d4 = tower.dim(4);
    ModDense all(std::max<std::size_t>(d3, 1), std::max<std::size_t>(g * d4, 1), 0);
    for (std::size_t a = 0; a < g; ++a) {
      ModDense one(std::max<std::size_t>(d3, 1), std::max<std::size_t>(d4, 1), 0);
      for (std::size_t c = 0; c < d3; ++c)
        for (const auto& [e, v] : tower.normal_form(4, c, a)) {
          one(c, e) = v;
          all(c, a * d4 + e) = v;
        }
      single[a].push_back(d3 - (d4 ? mod_rank(f, std::move(one)) : 0));
    }
    rad.push_back(d3 - (d4 ? mod_rank(f, std::move(all)) : 0));
    std::vector<std::size_t> d;
    for (int k = 0; k <= 5; ++k) d.push_back(tower.dim(k));
    dims.push_back(std::move(d));
  });
  RadicalReport rep;
  rep.radical_dim = RankResult::from_points(pts, rad);
  for (auto& s : single) rep.single_kernel_dims.push_back(RankResult::from_points(pts, s));
  rep.algebra_dims = assemble_table(IdealCase::s4, pts, dims, 5).dims;
  rep.quotient_dims = rep.algebra_dims;
  rep.quotient_dims[3] -= rep.radical_dim.value;
  return rep;
}

// ---------------------------------------------------------------------------
// The eigenvalue table of A_3

inline std::size_t pi_dim_o3(const std::vector<int>& young) {
  static const std::map<std::vector<int>, std::size_t> dims{
      {{}, 1}, {{1}, 3}, {{2}, 5}, {{1, 1}, 3}, {{3}, 7}, {{2, 1}, 5}, {{1, 1, 1}, 1}};
  return dims.at(young);
}

inline std::string young_label(const std::vector<int>& y) {
  std::string s = "(";
  for (std::size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + std::to_string(y[i]);
  return s + ")";
}

struct A3Row {
  std::vector<int> left, right;
  std::vector<RatFunc> eigenvalues;  // closed forms; empty for the row given by two quadratics
  std::string label() const { return young_label(left) + " (.) " + young_label(right); }
  std::size_t eigen_count() const { return eigenvalues.empty() ? 4 : eigenvalues.size(); }
};

/// The rows of the table with r, Q = q - q^-1, [2], [3] substituted.
inline std::vector<A3Row> a3_table_rows(const RMatrixBundle& b) {
  const RatFunc q = b.q, qi = b.q_inv, r = b.r, ri = b.r.inverse();
  const RatFunc Q = q - qi, n2 = q + qi, n3 = q * q + 1 + qi * qi;
  std::vector<A3Row> rows;
  rows.push_back({{1, 1, 1}, {3}, {qi.pow(3) * n2 * n3}});
  rows.push_back({{3}, {1, 1, 1}, {q.pow(3) * n2 * n3}});
  rows.push_back({{2, 1}, {2, 1}, {RatFunc(2) * n3}});
  rows.push_back({{3}, {1}, {RatFunc(1) + RatFunc(2) * q * q - RatFunc(2) * q * r - q.pow(3) * r}});
  rows.push_back({{1}, {3}, {RatFunc(1) + RatFunc(2) * qi * qi - RatFunc(2) * qi * ri - qi.pow(3) * ri}});
  rows.push_back({{1, 1, 1}, {1}, {RatFunc(1) + RatFunc(2) * qi * qi + RatFunc(2) * r * qi + r * qi.pow(3)}});
  rows.push_back({{1}, {1, 1, 1}, {RatFunc(1) + RatFunc(2) * q * q + RatFunc(2) * q * ri + q.pow(3) * ri}});
  rows.push_back({{2, 1}, {1}, {n3 * (r + 1) - Q * (r - 1), -n3 * (r - 1) - Q * (r + 1)}});
  rows.push_back({{1}, {2, 1}, {-n3 * (ri - 1) + Q * (ri + 1), n3 * (ri + 1) + Q * (ri - 1)}});
  rows.push_back({{1}, {1}, {}});
  return rows;
}

/// The two quadratics whose roots fill the (1) (.) (1) row.
inline std::vector<QPoly> a3_quadratics(const RMatrixBundle& b) {
  const RatFunc q = b.q, qi = b.q_inv, r = b.r, ri = b.r.inverse();
  const RatFunc Q = q - qi, n3 = q * q + 1 + qi * qi, s = r - ri;
  // lambda^2 - 2(s^2 + Q(Q^2+1)s + 2Q^2) and lambda^2 - 2([3] - Q s) lambda - 2 s (s + Q[3]).
  QPoly p1{RatFunc(-2) * (s * s + Q * (Q * Q + 1) * s + RatFunc(2) * Q * Q), RatFunc(0), RatFunc(1)};
  QPoly p2{RatFunc(-2) * s * (s + Q * n3), RatFunc(-2) * (n3 - Q * s), RatFunc(1)};
  return {p1, p2};
}

struct A3RowCheck {
  std::string label;
  std::vector<EigenCheck> eigen;        // one per closed-form eigenvalue
  std::vector<int> quadratic_multiplicity;  // minimum over points, one per quadratic (last row)
  std::size_t expected_multiplicity = 0;    // dim pi_left * dim pi_right per eigenvalue
  bool pass = false;
};

struct A3TableReport {
  std::vector<A3RowCheck> rows;
  std::size_t accounted = 0;       // sum over rows of dim pi products times eigenvalue counts
  RankResult rank_a3;
  bool charpoly_factorization = false;
  bool extremal_rows = false;
  bool pass() const {
    bool ok = charpoly_factorization && extremal_rows && rank_a3.agreed && accounted == rank_a3.value;
    for (const auto& r : rows) ok = ok && r.pass;
    return ok;
  }
};

namespace detail {

/// Common kernel of (op_i - lambda) at legs (i, i+1), i = 1..k-1, on V^k at a point.
inline std::vector<std::vector<u64>> joint_eigenspace(const PrimeField& f, const ModMatrix& op, u64 lambda, int n, int k) {
  const LegSpace legs = LegSpace::uniform(n, k);
  std::vector<Triplet<u64>> t;
  std::size_t offset = 0;
  for (int i = 1; i < k; ++i) {
    const auto m = shift_identity(f, lambda, embed_at_leg(f, op, legs, i));
    for (auto tr : m.triplets()) {
      tr.row += offset;
      t.push_back(tr);
    }
    offset += m.rows();
  }
  const auto stacked = ModMatrix::from_triplets(f, LegSpace({static_cast<int>(offset)}), legs, std::move(t));
  return mod_kernel(f, to_dense(stacked, u64{0}));
}

}  // namespace detail

/// Checks the table at every point. A_3 is built modularly (729 x 729).
inline A3TableReport verify_a3_table(const RMatrixBundle& b, const RankOptions& opt = {}) {
  A3TableReport rep;
  const PointBuilder a3 = [&b](const PrimePoint& pt) { return antisymmetrizer(evaluate(b, pt), 3, AntisymForm::plain); };
  const std::size_t dim = antisymmetrizer_space(b, 3, AntisymForm::plain).total();
  const auto rows = a3_table_rows(b);
  const auto quads = a3_quadratics(b);
  for (const auto& row : rows) {
    A3RowCheck c;
    c.label = row.label();
    c.expected_multiplicity = pi_dim_o3(row.left) * pi_dim_o3(row.right);
    rep.accounted += c.expected_multiplicity * row.eigen_count();
    c.pass = true;
    if (row.eigenvalues.empty()) {
      for (const auto& qd : quads) {
        const auto m = charpoly_multiplicity(a3, qd, opt);
        c.quadratic_multiplicity.push_back(m.empty() ? 0 : *std::min_element(m.begin(), m.end()));
        c.pass = c.pass && c.quadratic_multiplicity.back() == static_cast<int>(c.expected_multiplicity);
      }
    } else {
      for (const auto& lam : row.eigenvalues) {
        c.eigen.push_back(is_eigenvalue(a3, dim, lam, opt));
        const auto& e = c.eigen.back();
        c.pass = c.pass && e.is_eigenvalue && e.multiplicity.agreed && e.multiplicity.value == c.expected_multiplicity;
      }
    }
    rep.rows.push_back(std::move(c));
  }
  rep.rank_a3 = generic_rank_by(opt, a3);

  // Full factorization: charpoly = x^(729-183) prod (x - lambda)^m quad1^9 quad2^9.
  bool fact = true, extremal = true;
  good_points(opt, [&](const PrimePoint& pt) {
    const auto f = pt.field();
    const auto mat = a3(pt);
    ModPoly expected{1};
    std::size_t deg = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const int m = static_cast<int>(rep.rows[i].expected_multiplicity);
      for (const auto& lam : rows[i].eigenvalues) {
        expected = poly_mul(f, expected, poly_pow(f, {f.neg(eval_at(lam, pt)), 1}, m));
        deg += static_cast<std::size_t>(m);
      }
      if (rows[i].eigenvalues.empty())
        for (const auto& qd : quads) {
          ModPoly qp;
          for (const auto& c : qd) qp.push_back(eval_at(c, pt));
          expected = poly_mul(f, expected, poly_pow(f, qp, m));
          deg += 2 * static_cast<std::size_t>(m);
        }
    }
    ModPoly xpow(dim - deg + 1, 0);
    xpow.back() = 1;
    expected = poly_mul(f, expected, xpow);
    fact = fact && block_charpoly(f, mat) == expected;

    // Extremal rows: x (x) y with x in a joint R-hat eigenspace on V^3 and y
    // in a joint Rcheck-minus eigenspace on Vbar^3, moved to the interleaved
    // layout by b_3.
    const auto mb = evaluate(b, pt);
    const int n = b.n();
    const u64 q = mb.q, qi = mb.q_inv;
    const auto one_row_v = detail::joint_eigenspace(f, mb.rhat, q, n, 3);
    const auto one_col_v = detail::joint_eigenspace(f, mb.rhat, f.neg(qi), n, 3);
    const auto one_row_c = detail::joint_eigenspace(f, mb.rcheck_minus, qi, n, 3);
    const auto one_col_c = detail::joint_eigenspace(f, mb.rcheck_minus, f.neg(q), n, 3);
    auto check_pair = [&](const std::vector<std::vector<u64>>& xs, const std::vector<std::vector<u64>>& ys,
                          const RatFunc& lam, std::size_t expected_dim) {
      if (xs.size() * ys.size() != expected_dim) return false;
      const u64 l = eval_at(lam, pt);
      for (const auto& x : xs)
        for (const auto& y : ys) {
          std::vector<u64> xy(x.size() * y.size());
          for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) xy[i * y.size() + j] = f.mul(x[i], y[j]);
          const auto v = apply_twist(mb, 3, std::span<const u64>(xy));
          const auto av = matvec(f, mat, std::span<const u64>(v));
          for (std::size_t i = 0; i < v.size(); ++i)
            if (av[i] != f.mul(l, v[i])) return false;
        }
      return true;
    };
    extremal = extremal && check_pair(one_col_v, one_row_c, rows[0].eigenvalues[0], rep.rows[0].expected_multiplicity);
    extremal = extremal && check_pair(one_row_v, one_col_c, rows[1].eigenvalues[0], rep.rows[1].expected_multiplicity);
  });
  rep.charpoly_factorization = fact;
  rep.extremal_rows = extremal;
  return rep;
}

// ---------------------------------------------------------------------------
// Conjecture experiments

struct ConjectureReport {
  std::vector<std::size_t> rank_ak;          // S1 dims, k = 0..kmax
  std::vector<std::size_t> s2_dims;          // S2 dims, k = 0..kmax
  std::vector<bool> inclusion;               // <ker(I - sigma)>_k inside ker A_k, per k
  std::vector<bool> equal;                   // per-degree equality of the two algebras
  bool agreed = true;
};

/// Applies the plain A_k to random elements of Gamma^j (x) W (x) Gamma^{k-2-j}
/// and checks that they vanish.
inline bool ideal_in_kernel_at(const RMatrixBundle& b, const SubspaceHandle& gen, const PrimePoint& pt, int k,
                               std::uint64_t seed) {
  if (k < 2) return true;
  const auto f = pt.field();
  const auto mb = evaluate(b, pt);
  const auto sum = antisymmetrizer_sum(mb, k, AntisymForm::plain);
  const auto w = homogeneous_basis(f, gen.spanning_rows_at(pt), gamma_pair_weight_keys(b.spec));
  const std::size_t g = static_cast<std::size_t>(b.n() * b.n());
  std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 1;
  auto rnd = [&] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state % f.modulus();
  };
  for (int j = 0; j <= k - 2; ++j) {
    std::vector<u64> v{1};
    auto tensor = [&](const std::vector<u64>& a, const std::vector<u64>& c) {
      std::vector<u64> out(a.size() * c.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t t = 0; t < c.size(); ++t) out[i * c.size() + t] = f.mul(a[i], c[t]);
      return out;
    };
    auto random_gamma = [&] {
      std::vector<u64> x(g);
      for (auto& e : x) e = rnd();
      return x;
    };
    for (int i = 0; i < j; ++i) v = tensor(v, random_gamma());
    std::vector<u64> wv(g * g, 0);
    for (const auto& h : w) {
      const u64 c = rnd();
      for (const auto& [idx, val] : h.entries) wv[idx] = f.add(wv[idx], f.mul(c, val));
    }
    v = tensor(v, wv);
    for (int i = j + 2; i < k; ++i) v = tensor(v, random_gamma());
    const auto av = sum.apply(std::span<const u64>(v));
    if (std::any_of(av.begin(), av.end(), [](u64 x) { return x != 0; })) return false;
  }
  return true;
}

inline ConjectureReport conjecture_experiments(const RMatrixBundle& b, int kmax, const RankOptions& opt = {},
                                               bool stretch = false) {
  if (kmax > 6 || (kmax > 5 && !stretch))
    throw ConfigError("conjecture experiments run up to kmax = 5 (6 with --stretch)");
  ConjectureReport rep;
  TableOptions topt;
  topt.rank = opt;
  topt.stretch = stretch;
  const auto s1 = quotient_table(b, IdealCase::s1, kmax, topt);
  const auto s2 = quotient_table(b, IdealCase::s2, kmax, topt);
  rep.rank_ak = s1.dims;
  rep.s2_dims = s2.dims;
  rep.agreed = s1.agreed() && s2.agreed();
  const auto gen = generator_space(b, IdealCase::s2);
  for (int k = 0; k <= kmax; ++k) {
    bool inc = true;
    if (k >= 2)
      good_points(opt, [&](const PrimePoint& pt) { inc = inc && ideal_in_kernel_at(b, gen, pt, k, opt.seed + 17); });
    rep.inclusion.push_back(inc);
    rep.equal.push_back(s1.dims[static_cast<std::size_t>(k)] == s2.dims[static_cast<std::size_t>(k)]);
  }
  return rep;
}

}  // namespace qwedge
