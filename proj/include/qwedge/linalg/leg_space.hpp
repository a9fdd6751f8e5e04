#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qwedge/errors.hpp"

namespace qwedge {

/// Ordered tensor legs. Basis index convention: row-major with leg 1 the
/// slowest (most significant) digit. Legs are numbered from 1, following the
/// usual "A_i acts on legs i, i+1" notation.
class LegSpace {
 public:
  LegSpace() = default;
  explicit LegSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_)
      if (d < 1) throw ShapeError("leg dimension must be positive");
  }
  static LegSpace uniform(int dim, int count) { return LegSpace(std::vector<int>(static_cast<std::size_t>(count), dim)); }

  int legs() const { return static_cast<int>(dims_.size()); }
  int leg_dim(int leg) const { return dims_.at(static_cast<std::size_t>(leg - 1)); }
  const std::vector<int>& dims() const { return dims_; }

  std::size_t total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                           [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
  }

  /// Product of dimensions of legs [first, last] (1-based, inclusive).
  std::size_t span_dim(int first, int last) const {
    std::size_t p = 1;
    for (int l = first; l <= last; ++l) p *= static_cast<std::size_t>(leg_dim(l));
    return p;
  }

  LegSpace concat(const LegSpace& other) const {
    std::vector<int> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return LegSpace(std::move(d));
  }

  /// Legs [first, first+count) as their own space.
  LegSpace slice(int first, int count) const {
    if (first < 1 || first + count - 1 > legs()) throw ShapeError("leg slice out of range");
    return LegSpace(std::vector<int>(dims_.begin() + first - 1, dims_.begin() + first - 1 + count));
  }

  /// Digits of a basis index, one per leg.
  std::vector<int> digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t l = dims_.size(); l-- > 0;) {
      out[l] = static_cast<int>(index % static_cast<std::size_t>(dims_[l]));
      index /= static_cast<std::size_t>(dims_[l]);
    }
    return out;
  }

  std::size_t index(const std::vector<int>& digits) const {
    std::size_t i = 0;
    for (std::size_t l = 0; l < dims_.size(); ++l) i = i * static_cast<std::size_t>(dims_[l]) + static_cast<std::size_t>(digits[l]);
    return i;
  }

  friend bool operator==(const LegSpace&, const LegSpace&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dims_.size(); ++i) s += (i ? "," : "") + std::to_string(dims_[i]);
    return s + "]";
  }

 private:
  std::vector<int> dims_;
};

}  // namespace qwedge
