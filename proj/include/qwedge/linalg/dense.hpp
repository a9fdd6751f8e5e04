#pragma once

// Small dense matrices over a ring policy with Gauss-Jordan elimination.
// Used for exact work over Q(q) (dimensions up to ~100) and for reference
// computations in tests; the modular hot paths live in dense_mod.hpp.

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qwedge/errors.hpp"
#include "qwedge/linalg/sparse_matrix.hpp"

namespace qwedge {

template <class T>
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, const T& fill) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

template <class T>
DenseMatrix<T> to_dense(const SparseMatrix<T>& a, const T& zero) {
  DenseMatrix<T> d(a.rows(), a.cols(), zero);
  for (const auto& e : a.triplets()) d(e.row, e.col) = e.value;
  return d;
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> to_sparse(const Ring& ring, const DenseMatrix<T>& d, const LegSpace& rs, const LegSpace& cs) {
  std::vector<Triplet<T>> t;
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t j = 0; j < d.cols; ++j)
      if (!ring.is_zero(d(i, j))) t.push_back({i, j, d(i, j)});
  return SparseMatrix<T>::from_triplets(ring, rs, cs, std::move(t));
}

namespace detail {

inline std::size_t pivot_cost(const RatFunc& v) { return v.num().length() + v.den().length(); }
inline std::size_t pivot_cost(u64) { return 0; }

}  // namespace detail

/// Reduced row echelon form in place; returns pivot columns.
///
/// Pivots are chosen per column among remaining rows by smallest size
/// (cheapest representation), which keeps Q(q) entries from growing.
template <class Ring, class T = typename Ring::value_type>
std::vector<std::size_t> rref_in_place(const Ring& ring, DenseMatrix<T>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::optional<std::size_t> best;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = r; i < m.rows; ++i) {
      if (ring.is_zero(m(i, c))) continue;
      const std::size_t cost = detail::pivot_cost(m(i, c));
      if (cost < best_cost) {
        best = i;
        best_cost = cost;
        if (cost == 0 || cost == 1) break;
      }
    }
    if (!best) continue;
    if (*best != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(*best, j));
    const T inv = ring.inv(m(r, c));
    for (std::size_t j = c; j < m.cols; ++j)
      if (!ring.is_zero(m(r, j))) m(r, j) = ring.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || ring.is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j)
        if (!ring.is_zero(m(r, j))) m(i, j) = ring.sub(m(i, j), ring.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class Ring, class T = typename Ring::value_type>
std::size_t dense_rank(const Ring& ring, DenseMatrix<T> m) {
  return rref_in_place(ring, m).size();
}

/// Columns spanning the right kernel, one vector per free column.
template <class Ring, class T = typename Ring::value_type>
std::vector<std::vector<T>> dense_kernel(const Ring& ring, DenseMatrix<T> m) {
  const auto pivots = rref_in_place(ring, m);
  std::vector<char> is_pivot(m.cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(m.cols, ring.zero());
    v[f] = ring.one();
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (!ring.is_zero(m(r, f))) v[pivots[r]] = ring.neg(m(r, f));
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class Ring, class T = typename Ring::value_type>
DenseMatrix<T> dense_inverse(const Ring& ring, const DenseMatrix<T>& a) {
  if (a.rows != a.cols) throw ShapeError("inverse of non-square matrix");
  const std::size_t n = a.rows;
  DenseMatrix<T> aug(n, 2 * n, ring.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = ring.one();
  }
  const auto pivots = rref_in_place(ring, aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw ArithmeticError("singular matrix");
  DenseMatrix<T> inv(n, n, ring.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> inverse(const Ring& ring, const SparseMatrix<T>& a) {
  return to_sparse(ring, dense_inverse(ring, to_dense(a, ring.zero())), a.col_space(), a.row_space());
}

}  // namespace qwedge
