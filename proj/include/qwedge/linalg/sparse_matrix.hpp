#pragma once

// Immutable CSR matrices over a ring policy (RatFuncRing or PrimeField),
// with tensor-leg bookkeeping for Kronecker products and leg embeddings.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qwedge/errors.hpp"
#include "qwedge/linalg/leg_space.hpp"
#include "qwedge/scalar/prime_field.hpp"
#include "qwedge/scalar/ratfunc.hpp"

namespace qwedge {

template <class T>
struct Triplet {
  std::size_t row;
  std::size_t col;
  T value;
};

template <class T>
class SparseMatrix {
 public:
  using value_type = T;

  SparseMatrix() = default;

  std::size_t rows() const { return row_space_.total(); }
  std::size_t cols() const { return col_space_.total(); }
  const LegSpace& row_space() const { return row_space_; }
  const LegSpace& col_space() const { return col_space_; }
  std::size_t nnz() const { return values_.size(); }
  bool is_square() const { return rows() == cols(); }

  /// Entries of row i as parallel spans (columns ascending).
  std::span<const std::uint32_t> row_cols(std::size_t i) const {
    return {cols_.data() + ptr_[i], ptr_[i + 1] - ptr_[i]};
  }
  std::span<const T> row_values(std::size_t i) const { return {values_.data() + ptr_[i], ptr_[i + 1] - ptr_[i]}; }

  /// Entry lookup (zero if absent).
  template <class Ring>
  T at(const Ring& ring, std::size_t i, std::size_t j) const {
    auto c = row_cols(i);
    auto it = std::lower_bound(c.begin(), c.end(), static_cast<std::uint32_t>(j));
    if (it == c.end() || *it != j) return ring.zero();
    return values_[ptr_[i] + static_cast<std::size_t>(it - c.begin())];
  }

  /// Builds from triplets; duplicates are summed and zeros dropped.
  template <class Ring>
  static SparseMatrix from_triplets(const Ring& ring, LegSpace row_space, LegSpace col_space,
                                    std::vector<Triplet<T>> triplets) {
    SparseMatrix m;
    m.row_space_ = std::move(row_space);
    m.col_space_ = std::move(col_space);
    const std::size_t nr = m.rows();
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    m.ptr_.assign(nr + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
      std::size_t e = k;
      T acc = triplets[k].value;
      while (++e < triplets.size() && triplets[e].row == triplets[k].row && triplets[e].col == triplets[k].col)
        acc = ring.add(acc, triplets[e].value);
      if (triplets[k].row >= nr || triplets[k].col >= m.cols()) throw ShapeError("triplet out of range");
      if (!ring.is_zero(acc)) {
        m.cols_.push_back(static_cast<std::uint32_t>(triplets[k].col));
        m.values_.push_back(std::move(acc));
        ++m.ptr_[triplets[k].row + 1];
      }
      k = e;
    }
    std::partial_sum(m.ptr_.begin(), m.ptr_.end(), m.ptr_.begin());
    return m;
  }

  /// Builds from rows already sorted by column with no zeros or duplicates.
  static SparseMatrix from_rows(LegSpace row_space, LegSpace col_space,
                                std::vector<std::vector<std::pair<std::uint32_t, T>>> rows) {
    SparseMatrix m;
    m.row_space_ = std::move(row_space);
    m.col_space_ = std::move(col_space);
    if (rows.size() != m.rows()) throw ShapeError("row count mismatch");
    m.ptr_.assign(rows.size() + 1, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (auto& [c, v] : rows[i]) {
        m.cols_.push_back(c);
        m.values_.push_back(std::move(v));
      }
      m.ptr_[i + 1] = m.cols_.size();
    }
    return m;
  }

  template <class Ring>
  static SparseMatrix identity(const Ring& ring, const LegSpace& space) {
    std::vector<Triplet<T>> t;
    for (std::size_t i = 0; i < space.total(); ++i) t.push_back({i, i, ring.one()});
    return from_triplets(ring, space, space, std::move(t));
  }

  template <class Ring>
  static SparseMatrix zero(const Ring& ring, const LegSpace& rs, const LegSpace& cs) {
    return from_triplets(ring, rs, cs, {});
  }

  std::vector<Triplet<T>> triplets() const {
    std::vector<Triplet<T>> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i + 1 < ptr_.size(); ++i)
      for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) t.push_back({i, cols_[k], values_[k]});
    return t;
  }

  /// Same entries, reinterpreted leg layout (total dimensions must match).
  SparseMatrix with_spaces(LegSpace rs, LegSpace cs) const {
    if (rs.total() != rows() || cs.total() != cols()) throw ShapeError("relabelled leg spaces change dimensions");
    SparseMatrix m = *this;
    m.row_space_ = std::move(rs);
    m.col_space_ = std::move(cs);
    return m;
  }

  /// Applies f to every stored value; entries mapping to zero are dropped.
  template <class Ring, class F>
  auto map_values(const Ring& ring, F&& f) const {
    using U = typename Ring::value_type;
    std::vector<std::vector<std::pair<std::uint32_t, U>>> rows(this->rows());
    for (std::size_t i = 0; i < this->rows(); ++i)
      for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) {
        U v = f(values_[k]);
        if (!ring.is_zero(v)) rows[i].emplace_back(cols_[k], std::move(v));
      }
    return SparseMatrix<U>::from_rows(row_space_, col_space_, std::move(rows));
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.ptr_ == b.ptr_ && a.cols_ == b.cols_ &&
           a.values_ == b.values_;
  }

 private:
  LegSpace row_space_;
  LegSpace col_space_;
  std::vector<std::size_t> ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<T> values_;
};

using QMatrix = SparseMatrix<RatFunc>;
using ModMatrix = SparseMatrix<u64>;

// ---------------------------------------------------------------------------
// Algebra

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> multiply(const Ring& ring, const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw ShapeError("multiply: inner dimensions differ");
  std::vector<T> acc(b.cols(), ring.zero());
  std::vector<char> used(b.cols(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::vector<std::pair<std::uint32_t, T>>> rows(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    for (std::size_t k = 0; k < ac.size(); ++k) {
      auto bc = b.row_cols(ac[k]);
      auto bv = b.row_values(ac[k]);
      for (std::size_t m = 0; m < bc.size(); ++m) {
        const auto j = bc[m];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        acc[j] = ring.add(acc[j], ring.mul(av[k], bv[m]));
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto j : touched) {
      if (!ring.is_zero(acc[j])) rows[i].emplace_back(j, std::move(acc[j]));
      acc[j] = ring.zero();
      used[j] = 0;
    }
    touched.clear();
  }
  return SparseMatrix<T>::from_rows(a.row_space(), b.col_space(), std::move(rows));
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> linear_combination(const Ring& ring, const T& alpha, const SparseMatrix<T>& a, const T& beta,
                                   const SparseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: shapes differ");
  std::vector<Triplet<T>> t;
  for (auto& e : a.triplets()) t.push_back({e.row, e.col, ring.mul(alpha, e.value)});
  for (auto& e : b.triplets()) t.push_back({e.row, e.col, ring.mul(beta, e.value)});
  return SparseMatrix<T>::from_triplets(ring, a.row_space(), a.col_space(), std::move(t));
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> add(const Ring& ring, const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  return linear_combination(ring, ring.one(), a, ring.one(), b);
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> subtract(const Ring& ring, const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  return linear_combination(ring, ring.one(), a, ring.neg(ring.one()), b);
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> scale(const Ring& ring, const T& alpha, const SparseMatrix<T>& a) {
  return a.map_values(ring, [&](const T& v) { return ring.mul(alpha, v); });
}

/// lambda * I - a.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> shift_identity(const Ring& ring, const T& lambda, const SparseMatrix<T>& a) {
  return linear_combination(ring, lambda, SparseMatrix<T>::identity(ring, a.row_space()), ring.neg(ring.one()), a);
}

template <class T>
SparseMatrix<T> transpose(const SparseMatrix<T>& a) {
  std::vector<std::vector<std::pair<std::uint32_t, T>>> rows(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto c = a.row_cols(i);
    auto v = a.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) rows[c[k]].emplace_back(static_cast<std::uint32_t>(i), v[k]);
  }
  return SparseMatrix<T>::from_rows(a.col_space(), a.row_space(), std::move(rows));
}

/// Kronecker product; leg lists concatenate.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> kron(const Ring& ring, const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  std::vector<std::vector<std::pair<std::uint32_t, T>>> rows(a.rows() * b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    for (std::size_t k = 0; k < b.rows(); ++k) {
      auto bc = b.row_cols(k);
      auto bv = b.row_values(k);
      auto& row = rows[i * b.rows() + k];
      row.reserve(ac.size() * bc.size());
      for (std::size_t x = 0; x < ac.size(); ++x)
        for (std::size_t y = 0; y < bc.size(); ++y)
          row.emplace_back(static_cast<std::uint32_t>(ac[x] * b.cols() + bc[y]), ring.mul(av[x], bv[y]));
    }
  }
  return SparseMatrix<T>::from_rows(a.row_space().concat(b.row_space()), a.col_space().concat(b.col_space()),
                                    std::move(rows));
}

/// op acting on the consecutive legs first_leg .. first_leg+width-1 of space,
/// identity elsewhere.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> embed_at_leg(const Ring& ring, const SparseMatrix<T>& op, const LegSpace& space, int first_leg) {
  const int width = op.row_space().legs();
  if (!op.is_square() || op.row_space() != op.col_space()) throw ShapeError("embed_at_leg: operator must be square");
  if (first_leg < 1 || first_leg + width - 1 > space.legs()) throw ShapeError("embed_at_leg: legs out of range");
  if (space.slice(first_leg, width) != op.row_space()) throw ShapeError("embed_at_leg: leg dimension mismatch");
  const auto left = SparseMatrix<T>::identity(ring, space.slice(1, first_leg - 1));
  const int right_count = space.legs() - (first_leg + width - 1);
  const auto right = SparseMatrix<T>::identity(ring, space.slice(first_leg + width, right_count));
  return kron(ring, kron(ring, left, op), right).with_spaces(space, space);
}

/// Permutation operator: the output leg i carries input leg perm[i]
/// (perm is a 0-based list of input legs).
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> permute_legs(const Ring& ring, const std::vector<int>& perm, const LegSpace& space) {
  const int m = space.legs();
  if (static_cast<int>(perm.size()) != m) throw ShapeError("permute_legs: wrong permutation size");
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (int p : perm) {
    if (p < 0 || p >= m || seen[static_cast<std::size_t>(p)]) throw ShapeError("permute_legs: not a bijection");
    seen[static_cast<std::size_t>(p)] = 1;
  }
  std::vector<int> out_dims(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out_dims[static_cast<std::size_t>(i)] = space.leg_dim(perm[static_cast<std::size_t>(i)] + 1);
  LegSpace out_space(out_dims);
  std::vector<Triplet<T>> t;
  for (std::size_t col = 0; col < space.total(); ++col) {
    auto d = space.digits(col);
    std::vector<int> od(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) od[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    t.push_back({out_space.index(od), col, ring.one()});
  }
  return SparseMatrix<T>::from_triplets(ring, out_space, space, std::move(t));
}

/// P1 (on legs 1..k) combined with P2 (on legs k+1..2k).
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> odot(const Ring& ring, const SparseMatrix<T>& p1, const SparseMatrix<T>& p2) {
  if (!p1.is_square() || !p2.is_square()) throw ShapeError("odot: operands must be square");
  return kron(ring, p1, p2);
}

template <class Ring, class T = typename Ring::value_type>
std::vector<T> matvec(const Ring& ring, const SparseMatrix<T>& a, std::span<const T> x) {
  if (x.size() != a.cols()) throw ShapeError("matvec: size mismatch");
  std::vector<T> y(a.rows(), ring.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto c = a.row_cols(i);
    auto v = a.row_values(i);
    T acc = ring.zero();
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!ring.is_zero(x[c[k]])) acc = ring.add(acc, ring.mul(v[k], x[c[k]]));
    y[i] = std::move(acc);
  }
  return y;
}

/// Applies a square operator on legs [first_leg, first_leg+width) of a vector
/// in `space` without materializing the embedding.
template <class Ring, class T = typename Ring::value_type>
std::vector<T> apply_at_leg(const Ring& ring, const SparseMatrix<T>& op, const LegSpace& space, int first_leg,
                            std::span<const T> x) {
  const int width = op.row_space().legs();
  const std::size_t block = op.rows();
  const std::size_t inner = space.span_dim(first_leg + width, space.legs());
  const std::size_t outer = space.span_dim(1, first_leg - 1);
  if (x.size() != space.total() || space.slice(first_leg, width) != op.row_space())
    throw ShapeError("apply_at_leg: layout mismatch");
  std::vector<T> y(x.size(), ring.zero());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < block; ++r) {
      auto c = op.row_cols(r);
      auto v = op.row_values(r);
      const std::size_t out_base = (o * block + r) * inner;
      for (std::size_t k = 0; k < c.size(); ++k) {
        const std::size_t in_base = (o * block + c[k]) * inner;
        for (std::size_t s = 0; s < inner; ++s) {
          const T& xv = x[in_base + s];
          if (!ring.is_zero(xv)) y[out_base + s] = ring.add(y[out_base + s], ring.mul(v[k], xv));
        }
      }
    }
  }
  return y;
}

/// Entrywise specialization at a point (BadPointError if a denominator vanishes).
inline ModMatrix evaluate(const QMatrix& a, const PrimePoint& pt) {
  return a.map_values(pt.field(), [&](const RatFunc& v) { return eval_at(v, pt); });
}

inline std::vector<u64> evaluate(std::span<const RatFunc> v, const PrimePoint& pt) {
  std::vector<u64> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = eval_at(v[i], pt);
  return out;
}

inline std::string scalar_string(const RatFunc& v) { return v.to_string(); }
inline std::string scalar_string(u64 v) { return std::to_string(v); }

/// Coordinate list "row col value" per line, sorted by (row, col).
template <class T>
std::string to_coordinate_text(const SparseMatrix<T>& a) {
  std::string out;
  for (const auto& e : a.triplets())
    out += std::to_string(e.row) + " " + std::to_string(e.col) + " " + scalar_string(e.value) + "\n";
  return out;
}

}  // namespace qwedge
