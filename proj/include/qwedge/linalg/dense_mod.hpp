#pragma once

// Dense elimination, kernels and characteristic polynomials over F_p.
// Row operations use Shoup multiplication with a per-row precomputed factor.

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qwedge/linalg/dense.hpp"
#include "qwedge/scalar/prime_field.hpp"

namespace qwedge {

using ModDense = DenseMatrix<u64>;

namespace detail {

/// row[j] -= f * pivot[j] for j in [from, n).
inline void axpy_row(const PrimeField& f, u64* row, const u64* pivot, u64 factor, std::size_t from, std::size_t n) {
  const u64 pre = f.shoup_precompute(factor);
  const u64 p = f.modulus();
  for (std::size_t j = from; j < n; ++j) {
    const u64 pj = pivot[j];
    if (pj == 0) continue;
    const u64 t = f.shoup_mul(pj, factor, pre);
    const u64 v = row[j];
    row[j] = v >= t ? v - t : v + p - t;
  }
}

inline void scale_row(const PrimeField& f, u64* row, u64 factor, std::size_t from, std::size_t n) {
  const u64 pre = f.shoup_precompute(factor);
  for (std::size_t j = from; j < n; ++j)
    if (row[j]) row[j] = f.shoup_mul(row[j], factor, pre);
}

}  // namespace detail

/// Row echelon form in place. With full_reduce the result is the reduced
/// row echelon form with unit pivots. Returns pivot columns in order.
inline std::vector<std::size_t> mod_echelon(const PrimeField& f, ModDense& m, bool full_reduce) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t nc = m.cols;
  for (std::size_t c = 0; c < nc && r < m.rows; ++c) {
    std::size_t piv = m.rows;
    for (std::size_t i = r; i < m.rows; ++i)
      if (m(i, c)) {
        piv = i;
        break;
      }
    if (piv == m.rows) continue;
    if (piv != r) std::swap_ranges(&m(piv, 0), &m(piv, 0) + nc, &m(r, 0));
    u64* prow = &m(r, 0);
    detail::scale_row(f, prow, f.inv(prow[c]), c, nc);
    const std::size_t start = full_reduce ? 0 : r + 1;
    for (std::size_t i = start; i < m.rows; ++i) {
      if (i == r) continue;
      u64* row = &m(i, 0);
      if (row[c]) detail::axpy_row(f, row, prow, row[c], c, nc);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t mod_rank(const PrimeField& f, ModDense m) { return mod_echelon(f, m, false).size(); }

/// Right kernel basis of m (one vector per free column).
inline std::vector<std::vector<u64>> mod_kernel(const PrimeField& f, ModDense m) {
  const auto pivots = mod_echelon(f, m, true);
  std::vector<char> is_pivot(m.cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<u64>> basis;
  for (std::size_t fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<u64> v(m.cols, 0);
    v[fc] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m(r, fc));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Rows of the reduced echelon form spanning the row space of m.
inline std::vector<std::vector<u64>> mod_row_basis(const PrimeField& f, ModDense m) {
  const auto pivots = mod_echelon(f, m, true);
  std::vector<std::vector<u64>> out;
  for (std::size_t r = 0; r < pivots.size(); ++r) out.emplace_back(&m(r, 0), &m(r, 0) + m.cols);
  return out;
}

inline ModDense mod_multiply(const PrimeField& f, const ModDense& a, const ModDense& b) {
  ModDense c(a.rows, b.cols, 0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const u64 x = a(i, k);
      if (!x) continue;
      const u64 pre = f.shoup_precompute(x);
      for (std::size_t j = 0; j < b.cols; ++j)
        if (b(k, j)) c(i, j) = f.add(c(i, j), f.shoup_mul(b(k, j), x, pre));
    }
  return c;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, coefficients low -> high, no trailing zeros.

using ModPoly = std::vector<u64>;

inline void trim(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline ModPoly poly_mul(const PrimeField& f, const ModPoly& a, const ModPoly& b) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  trim(r);
  return r;
}

inline ModPoly poly_pow(const PrimeField& f, const ModPoly& a, int e) {
  ModPoly r{1};
  for (int i = 0; i < e; ++i) r = poly_mul(f, r, a);
  return r;
}

/// Quotient and remainder of a by b (b nonzero).
inline std::pair<ModPoly, ModPoly> poly_divmod(const PrimeField& f, ModPoly a, const ModPoly& b) {
  if (b.empty()) throw ArithmeticError("polynomial division by zero mod p");
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  ModPoly q(a.size() - b.size() + 1, 0);
  const u64 inv_lead = f.inv(b.back());
  for (std::size_t d = a.size() - b.size() + 1; d-- > 0;) {
    const u64 c = f.mul(a[d + b.size() - 1], inv_lead);
    q[d] = c;
    if (!c) continue;
    for (std::size_t i = 0; i < b.size(); ++i) a[d + i] = f.sub(a[d + i], f.mul(c, b[i]));
  }
  trim(a);
  trim(q);
  return {q, a};
}

/// Characteristic polynomial det(xI - m) via Hessenberg reduction.
inline ModPoly mod_charpoly(const PrimeField& f, ModDense h) {
  const std::size_t n = h.rows;
  if (h.cols != n) throw ShapeError("charpoly of non-square matrix");
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = n;
    for (std::size_t i = m; i < n; ++i)
      if (h(i, m - 1)) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(m, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, m));
    }
    const u64 inv = f.inv(h(m, m - 1));
    for (std::size_t i = m + 1; i < n; ++i) {
      if (!h(i, m - 1)) continue;
      const u64 u = f.mul(h(i, m - 1), inv);
      // row_i -= u * row_m ; col_m += u * col_i
      detail::axpy_row(f, &h(i, 0), &h(m, 0), u, 0, n);
      for (std::size_t k = 0; k < n; ++k)
        if (h(k, i)) h(k, m) = f.add(h(k, m), f.mul(u, h(k, i)));
    }
  }
  // Characteristic polynomials of leading principal blocks.
  std::vector<ModPoly> p(n + 1);
  p[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_{i=1}^{m-1} h[i-1][m-1] * prod_{j=i}^{m-1} h[j][j-1] * p_{i-1}
    ModPoly xp(p[m - 1].size() + 1, 0);
    for (std::size_t i = 0; i < p[m - 1].size(); ++i) {
      xp[i + 1] = f.add(xp[i + 1], p[m - 1][i]);
      xp[i] = f.sub(xp[i], f.mul(h(m - 1, m - 1), p[m - 1][i]));
    }
    u64 t = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      t = f.mul(t, h(i, i - 1));
      if (!t) break;
      const u64 c = f.mul(t, h(i - 1, m - 1));
      if (c)
        for (std::size_t k = 0; k < p[i - 1].size(); ++k) xp[k] = f.sub(xp[k], f.mul(c, p[i - 1][k]));
    }
    trim(xp);
    p[m] = std::move(xp);
  }
  return p[n];
}

}  // namespace qwedge
