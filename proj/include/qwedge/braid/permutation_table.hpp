#pragma once

// Symmetric group S_k with one reduced word per element.
//
// Words come from the Lehmer code through the coset decomposition
// S_k = S_{k-1} . {1, s_{k-1}, s_{k-1}s_{k-2}, ..., s_{k-1}...s_1}; the word of
// w is the concatenation of its coset representatives, so lengths add and
// sum_w x^l(w) T_w factors as a product of k-1 short sums.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qwedge/errors.hpp"

namespace qwedge {

/// Generators are 1-based: s_i swaps positions i and i+1.
using ReducedWord = std::vector<int>;

struct PermutationEntry {
  std::vector<int> perm;  // one-line notation, 0-based images
  int length = 0;
  ReducedWord word;
};

/// Number of inversions of a permutation in one-line notation.
inline int inversions(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  return inv;
}

/// Permutation of a word: product s_{i1} s_{i2} ... s_{im} composed as maps.
inline std::vector<int> word_permutation(int k, const ReducedWord& word) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  // (s_{i1} ... s_{im})(x): apply s_{im} first.
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const int i = *it;
    if (i < 1 || i >= k) throw std::invalid_argument("generator index out of range");
    for (auto& v : p) {
      if (v == i - 1) v = i;
      else if (v == i) v = i - 1;
    }
  }
  return p;
}

class PermutationTable {
 public:
  explicit PermutationTable(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("PermutationTable requires k >= 1");
    std::vector<ReducedWord> words{{}};
    for (int m = 2; m <= k; ++m) {
      std::vector<ReducedWord> next;
      next.reserve(words.size() * static_cast<std::size_t>(m));
      for (const auto& u : words)
        for (int j = 0; j < m; ++j) {
          ReducedWord w = u;
          for (int t = 0; t < j; ++t) w.push_back(m - 1 - t);
          next.push_back(std::move(w));
        }
      words = std::move(next);
    }
    for (auto& w : words) {
      PermutationEntry e;
      e.perm = word_permutation(k, w);
      e.length = static_cast<int>(w.size());
      e.word = std::move(w);
      entries_.push_back(std::move(e));
    }
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const auto& a, const auto& b) { return a.length < b.length; });
  }

  int k() const { return k_; }
  const std::vector<PermutationEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Coefficients of sum_w x^l(w) over the table.
  std::vector<std::int64_t> length_generating_function() const {
    std::vector<std::int64_t> c(static_cast<std::size_t>(k_ * (k_ - 1) / 2 + 1), 0);
    for (const auto& e : entries_) ++c[static_cast<std::size_t>(e.length)];
    return c;
  }

 private:
  int k_;
  std::vector<PermutationEntry> entries_;
};

/// Coefficients of [k]_x! = prod_{m=1}^{k} (1 + x + ... + x^{m-1}).
inline std::vector<std::int64_t> x_factorial(int k) {
  std::vector<std::int64_t> c{1};
  for (int m = 1; m <= k; ++m) {
    std::vector<std::int64_t> n(c.size() + static_cast<std::size_t>(m - 1), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int j = 0; j < m; ++j) n[i + static_cast<std::size_t>(j)] += c[i];
    c = std::move(n);
  }
  return c;
}

}  // namespace qwedge
