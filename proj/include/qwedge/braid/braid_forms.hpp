#pragma once

// Twist chains b_k, the dot transform, the braidings sigma and sigma-tilde on
// Gamma (x) Gamma, braid words T_w / T_w^c, and the three antisymmetrizers.
//
// Leg layouts. Gamma = V (x) Vbar. "Interleaved" legs are V Vbar V Vbar ...
// (the natural layout of Gamma^{(x)k}); "sorted" legs are V...V Vbar...Vbar.
// b_k maps sorted to interleaved, so dot(T) = b_k^-1 T b_k is the sorted form.

#include <span>
#include <vector>

#include "qwedge/braid/permutation_table.hpp"
#include "qwedge/frt/bundle.hpp"

namespace qwedge {

enum class AntisymForm { plain, dotted, abar };
enum class WordSide { vector, covector };

template <class Ring>
struct TwistChain {
  using Matrix = SparseMatrix<typename Ring::value_type>;
  int k = 1;
  /// Exchange positions grouped as in the k-twist: group g holds legs
  /// g+1, g+3, ..., 2k-1-g. The matrix product runs over groups left to right.
  std::vector<std::vector<int>> groups;
  Matrix b;  // on 2k legs of dimension N; empty when not materialized
};

inline std::vector<std::vector<int>> twist_groups(int k) {
  std::vector<std::vector<int>> groups;
  for (int g = 1; g <= k - 1; ++g) {
    std::vector<int> grp;
    for (int leg = g + 1; leg <= 2 * k - 1 - g; leg += 2) grp.push_back(leg);
    groups.push_back(std::move(grp));
  }
  return groups;
}

/// Applies b_k (or its inverse) to a vector on 2k legs without materializing.
template <class Ring, class T = typename Ring::value_type>
std::vector<T> apply_twist(const BundleT<Ring>& bundle, int k, std::span<const T> x, bool inverse_map = false) {
  const LegSpace legs = LegSpace::uniform(bundle.n(), 2 * k);
  const auto groups = twist_groups(k);
  std::vector<T> v(x.begin(), x.end());
  if (!inverse_map) {
    for (auto g = groups.rbegin(); g != groups.rend(); ++g)
      for (int leg : *g) v = apply_at_leg(bundle.ring, bundle.rgrave_minus, legs, leg, std::span<const T>(v));
  } else {
    for (const auto& g : groups)
      for (int leg : g) v = apply_at_leg(bundle.ring, bundle.rgrave_minus_inv, legs, leg, std::span<const T>(v));
  }
  return v;
}

template <class Ring>
TwistChain<Ring> build_bk(const BundleT<Ring>& bundle, int k, bool materialize = true) {
  if (k < 1) throw std::invalid_argument("build_bk requires k >= 1");
  TwistChain<Ring> chain;
  chain.k = k;
  chain.groups = twist_groups(k);
  if (!materialize) return chain;
  const LegSpace legs = LegSpace::uniform(bundle.n(), 2 * k);
  using Matrix = typename TwistChain<Ring>::Matrix;
  Matrix b = Matrix::identity(bundle.ring, legs);
  for (const auto& g : chain.groups)
    for (int leg : g) b = multiply(bundle.ring, b, embed_at_leg(bundle.ring, bundle.rgrave_minus, legs, leg));
  chain.b = std::move(b);
  return chain;
}

template <class Ring>
auto build_bk_inverse(const BundleT<Ring>& bundle, int k) {
  const LegSpace legs = LegSpace::uniform(bundle.n(), 2 * k);
  using Matrix = typename BundleT<Ring>::Matrix;
  Matrix b = Matrix::identity(bundle.ring, legs);
  const auto groups = twist_groups(k);
  for (auto g = groups.rbegin(); g != groups.rend(); ++g)
    for (int leg : *g) b = multiply(bundle.ring, b, embed_at_leg(bundle.ring, bundle.rgrave_minus_inv, legs, leg));
  return b;
}

/// b_k^-1 T b_k for T square on 2k legs.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> dot_transform(const BundleT<Ring>& bundle, const SparseMatrix<T>& op, const TwistChain<Ring>& chain) {
  const LegSpace legs = LegSpace::uniform(bundle.n(), 2 * chain.k);
  if (op.rows() != legs.total() || !op.is_square()) throw ShapeError("dot_transform: operator must act on 2k legs");
  const auto b_inv = build_bk_inverse(bundle, chain.k);
  return multiply(bundle.ring, multiply(bundle.ring, b_inv, op.with_spaces(legs, legs)), chain.b);
}

/// Inverse of dot_transform: b_k S b_k^-1.
template <class Ring, class T = typename Ring::value_type>
SparseMatrix<T> undot_transform(const BundleT<Ring>& bundle, const SparseMatrix<T>& op, const TwistChain<Ring>& chain) {
  const LegSpace legs = LegSpace::uniform(bundle.n(), 2 * chain.k);
  const auto b_inv = build_bk_inverse(bundle, chain.k);
  return multiply(bundle.ring, multiply(bundle.ring, chain.b, op.with_spaces(legs, legs)), b_inv);
}

/// sigma = b_2 (R-hat (.) Rcheck-minus) b_2^-1 on two Gamma legs.
template <class Ring>
auto build_sigma(const BundleT<Ring>& b) {
  return detail::assemble_braiding(b.ring, b.rhat, b.rcheck_minus, b.rgrave_minus, b.rgrave_minus_inv);
}

/// sigma-tilde = b_2 (R-hat (.) Rcheck) b_2^-1 on two Gamma legs.
template <class Ring>
auto build_sigma_tilde(const BundleT<Ring>& b) {
  return detail::assemble_braiding(b.ring, b.rhat, b.rcheck, b.rgrave_minus, b.rgrave_minus_inv);
}

/// T_w (vector side, R-hat) or T_w^c (covector side, Rcheck-minus) on k legs.
template <class Ring>
auto t_word(const BundleT<Ring>& b, int k, const ReducedWord& word, WordSide side) {
  const LegSpace legs = LegSpace::uniform(b.n(), k);
  const auto& gen = side == WordSide::vector ? b.rhat : b.rcheck_minus;
  using Matrix = typename BundleT<Ring>::Matrix;
  Matrix m = Matrix::identity(b.ring, legs);
  for (int i : word) {
    if (i < 1 || i >= k) throw std::invalid_argument("t_word: generator out of range");
    m = multiply(b.ring, m, embed_at_leg(b.ring, gen, legs, i));
  }
  return m;
}

/// A braid group action by generators g_1..g_{k-1}, each a matrix already
/// embedded on the full space, together with the Horner weight x so that the
/// represented operator is sum_w x^l(w) g_w.
template <class Ring>
struct BraidSum {
  using T = typename Ring::value_type;
  Ring ring;
  int k = 2;
  T x;
  std::vector<SparseMatrix<T>> gens;  // gens[i-1] = g_i

  std::size_t dim() const { return gens.empty() ? 1 : gens.front().rows(); }

  /// Applies sum_w x^l(w) g_w to v using the coset factorization
  /// F_2 F_3 ... F_k, F_j = 1 + x g_{j-1}(1 + x g_{j-2}(... (1 + x g_1))).
  std::vector<T> apply(std::span<const T> v) const {
    std::vector<T> cur(v.begin(), v.end());
    for (int j = k; j >= 2; --j) {
      std::vector<T> h = cur;
      for (int i = 1; i <= j - 1; ++i) {
        auto gh = matvec(ring, gens[static_cast<std::size_t>(i - 1)], std::span<const T>(h));
        for (std::size_t t = 0; t < h.size(); ++t) h[t] = ring.add(cur[t], ring.mul(x, gh[t]));
      }
      cur = std::move(h);
    }
    return cur;
  }

  /// The represented operator as a sparse matrix.
  SparseMatrix<T> materialize(const LegSpace& space) const {
    auto id = SparseMatrix<T>::identity(ring, space);
    auto acc = id;
    for (int j = 2; j <= k; ++j) {
      auto f = id;
      for (int i = 1; i <= j - 1; ++i)
        f = linear_combination(ring, ring.one(), id, x, multiply(ring, gens[static_cast<std::size_t>(i - 1)], f));
      acc = multiply(ring, acc, f);
    }
    return acc;
  }
};

/// The generators and Horner weight of an antisymmetrizer:
///   plain  : sum (-1)^l sigma_w on Gamma^{(x)k} (legs of dimension N^2);
///   dotted : sum (-1)^l T_w (.) T_w^c on sorted legs V^k Vbar^k;
///   abar   : sum (-q)^-l T_w on V^k.
template <class Ring>
BraidSum<Ring> antisymmetrizer_sum(const BundleT<Ring>& b, int k, AntisymForm form) {
  if (k < 1) throw std::invalid_argument("antisymmetrizer requires k >= 1");
  BraidSum<Ring> s;
  s.ring = b.ring;
  s.k = k;
  const auto& ring = b.ring;
  switch (form) {
    case AntisymForm::plain: {
      s.x = ring.neg(ring.one());
      const auto sigma = build_sigma(b);
      const LegSpace legs = LegSpace::uniform(b.n() * b.n(), k);
      for (int i = 1; i < k; ++i) s.gens.push_back(embed_at_leg(ring, sigma, legs, i));
      break;
    }
    case AntisymForm::dotted: {
      s.x = ring.neg(ring.one());
      const LegSpace legs = LegSpace::uniform(b.n(), 2 * k);
      for (int i = 1; i < k; ++i)
        s.gens.push_back(multiply(ring, embed_at_leg(ring, b.rhat, legs, i), embed_at_leg(ring, b.rcheck_minus, legs, k + i)));
      break;
    }
    case AntisymForm::abar: {
      s.x = ring.neg(b.q_inv);
      const LegSpace legs = LegSpace::uniform(b.n(), k);
      for (int i = 1; i < k; ++i) s.gens.push_back(embed_at_leg(ring, b.rhat, legs, i));
      break;
    }
  }
  return s;
}

template <class Ring>
LegSpace antisymmetrizer_space(const BundleT<Ring>& b, int k, AntisymForm form) {
  switch (form) {
    case AntisymForm::plain: return LegSpace::uniform(b.n() * b.n(), k);
    case AntisymForm::dotted: return LegSpace::uniform(b.n(), 2 * k);
    case AntisymForm::abar: return LegSpace::uniform(b.n(), k);
  }
  return {};
}

template <class Ring>
auto antisymmetrizer(const BundleT<Ring>& b, int k, AntisymForm form) {
  const LegSpace space = antisymmetrizer_space(b, k, form);
  if (k == 1) return BundleT<Ring>::Matrix::identity(b.ring, space);
  return antisymmetrizer_sum(b, k, form).materialize(space);
}

/// Reference implementation: the k! term sum over the permutation table.
template <class Ring>
auto antisymmetrizer_by_words(const BundleT<Ring>& b, int k, AntisymForm form) {
  const auto sum = antisymmetrizer_sum(b, k, form);
  const LegSpace space = antisymmetrizer_space(b, k, form);
  using Matrix = typename BundleT<Ring>::Matrix;
  const auto& ring = b.ring;
  Matrix acc = Matrix::zero(ring, space, space);
  const PermutationTable table(k);
  for (const auto& e : table.entries()) {
    Matrix term = Matrix::identity(ring, space);
    for (int i : e.word) term = multiply(ring, term, sum.gens[static_cast<std::size_t>(i - 1)]);
    auto coeff = ring.one();
    for (int t = 0; t < e.length; ++t) coeff = ring.mul(coeff, sum.x);
    acc = linear_combination(ring, ring.one(), acc, coeff, term);
  }
  return acc;
}

/// Legs of Gamma^{(x)k} reordered from interleaved (V Vbar V Vbar ...) to
/// sorted (V ... V Vbar ... Vbar) as a permutation operator.
template <class Ring>
auto interleaved_to_sorted(const BundleT<Ring>& b, int k) {
  std::vector<int> perm;
  for (int i = 0; i < k; ++i) perm.push_back(2 * i);
  for (int i = 0; i < k; ++i) perm.push_back(2 * i + 1);
  return permute_legs(b.ring, perm, LegSpace::uniform(b.n(), 2 * k));
}

}  // namespace qwedge
