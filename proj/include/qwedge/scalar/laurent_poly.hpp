#pragma once

// Laurent polynomials in q with arbitrary-precision integer coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwedge/errors.hpp"

namespace qwedge {

namespace detail {

using ZPoly = std::vector<mpz_class>;  // dense, index = degree, no trailing zeros

inline void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline mpz_class content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) {
    if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

inline void divide_content(ZPoly& p, const mpz_class& g) {
  if (g == 1 || g == 0) return;
  for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

/// Primitive part with positive leading coefficient.
inline ZPoly primitive(ZPoly p) {
  if (p.empty()) return p;
  mpz_class g = content(p);
  if (p.back() < 0) g = -g;
  divide_content(p, g);
  return p;
}

/// Reduces a (in place) modulo b up to a scalar factor: a <- lc(b)^e a - s*b.
inline void pseudo_reduce(ZPoly& a, const ZPoly& b) {
  const int nb = degree(b);
  const mpz_class& lb = b.back();
  while (degree(a) >= nb && !a.empty()) {
    const int shift = degree(a) - nb;
    mpz_class la = a.back();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());
    mpz_class fa = lb / g;
    mpz_class fb = la / g;
    for (auto& c : a) c *= fa;
    for (int i = 0; i <= nb; ++i) a[shift + i] -= fb * b[i];
    trim(a);
  }
}

/// gcd over Z[q] with positive leading coefficient (content included).
inline ZPoly gcd(ZPoly a, ZPoly b) {
  if (a.empty() || b.empty()) {
    ZPoly r = a.empty() ? std::move(b) : std::move(a);
    if (!r.empty() && r.back() < 0)
      for (auto& c : r) c = -c;
    return r;
  }
  mpz_class ca = content(a), cb = content(b), g;
  mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  a = primitive(std::move(a));
  b = primitive(std::move(b));
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.empty()) {
    if (degree(b) == 0) {
      a = ZPoly{mpz_class(1)};
      break;
    }
    pseudo_reduce(a, b);
    a = primitive(std::move(a));
    std::swap(a, b);
  }
  for (auto& c : a) c *= g;
  return a;
}

/// Exact quotient a / b over Z[q]; throws if b does not divide a.
inline ZPoly divexact(const ZPoly& a, const ZPoly& b) {
  if (b.empty()) throw ArithmeticError("polynomial division by zero");
  if (a.empty()) return {};
  if (degree(a) < degree(b)) throw ArithmeticError("inexact polynomial division");
  ZPoly r = a;
  ZPoly quo(static_cast<std::size_t>(degree(a) - degree(b) + 1));
  const int nb = degree(b);
  const mpz_class& lb = b.back();
  for (int d = degree(a) - nb; d >= 0; --d) {
    mpz_class& top = r[static_cast<std::size_t>(d + nb)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t()))
      throw ArithmeticError("inexact polynomial division");
    mpz_class c = top / lb;
    quo[static_cast<std::size_t>(d)] = c;
    for (int i = 0; i <= nb; ++i) r[static_cast<std::size_t>(d + i)] -= c * b[static_cast<std::size_t>(i)];
  }
  trim(r);
  if (!r.empty()) throw ArithmeticError("inexact polynomial division");
  trim(quo);
  return quo;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] != 0) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  trim(r);
  return r;
}

}  // namespace detail

/// Sum of c_e q^e over a finite set of integer exponents e.
///
/// Stored densely from the lowest exponent; the lowest and highest stored
/// coefficients are nonzero, so equal polynomials compare equal memberwise.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) coeffs_.emplace_back(c);
  }
  explicit LaurentPoly(const mpz_class& c) {
    if (c != 0) coeffs_.push_back(c);
  }
  LaurentPoly(int low, std::vector<mpz_class> coeffs) : low_(low), coeffs_(std::move(coeffs)) {
    canonicalize();
  }

  static LaurentPoly monomial(const mpz_class& c, int exponent) {
    LaurentPoly p(c);
    if (!p.is_zero()) p.low_ = exponent;
    return p;
  }
  static LaurentPoly q(int exponent = 1) { return monomial(1, exponent); }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const { return coeffs_.size() == 1 && low_ == 0 && coeffs_[0] == 1; }
  bool is_monomial() const { return coeffs_.size() == 1; }
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t length() const { return coeffs_.size(); }
  const std::vector<mpz_class>& coefficients() const { return coeffs_; }

  mpz_class coeff(int exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return 0;
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
  }
  const mpz_class& leading() const { return coeffs_.back(); }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int lo = std::min(a.low_, b.low_);
    const int hi = std::max(a.high(), b.high());
    std::vector<mpz_class> c(static_cast<std::size_t>(hi - lo + 1));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[static_cast<std::size_t>(a.low_ - lo) + i] = a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[static_cast<std::size_t>(b.low_ - lo) + i] += b.coeffs_[i];
    return LaurentPoly(lo, std::move(c));
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return LaurentPoly(a.low_ + b.low_, detail::mul(a.coeffs_, b.coeffs_));
  }

  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  /// Multiplies by q^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly r = *this;
    if (!r.is_zero()) r.low_ += k;
    return r;
  }

  /// Image under q -> q^-1.
  LaurentPoly inverted_variable() const {
    if (is_zero()) return {};
    std::vector<mpz_class> c(coeffs_.rbegin(), coeffs_.rend());
    return LaurentPoly(-high(), std::move(c));
  }

  /// Value at q = 1.
  mpz_class at_one() const {
    mpz_class s = 0;
    for (const auto& c : coeffs_) s += c;
    return s;
  }

  /// Canonical text: terms in ascending exponent, e.g. "q^-1+1-2*q^3".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      const mpz_class& c = coeffs_[i];
      if (c == 0) continue;
      const int e = low_ + static_cast<int>(i);
      mpz_class mag = abs(c);
      if (c < 0) {
        out += '-';
      } else if (!out.empty()) {
        out += '+';
      }
      if (e == 0) {
        out += mag.get_str();
        continue;
      }
      if (mag != 1) out += mag.get_str() + "*";
      out += 'q';
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

  /// Inverse of to_string (also accepts whitespace-free forms it emits).
  static LaurentPoly parse(std::string_view s) {
    if (s == "0") return {};
    LaurentPoly acc;
    std::size_t i = 0;
    auto fail = [&] { throw std::invalid_argument("malformed Laurent polynomial: " + std::string(s)); };
    if (s.empty()) fail();
    while (i < s.size()) {
      int sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
      }
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      mpz_class c = 1;
      bool have_digits = j > i;
      if (have_digits) c = mpz_class(std::string(s.substr(i, j - i)));
      i = j;
      int e = 0;
      if (i < s.size() && s[i] == '*') {
        if (!have_digits) fail();
        ++i;
        if (i >= s.size() || s[i] != 'q') fail();
      }
      if (i < s.size() && s[i] == 'q') {
        ++i;
        e = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          std::size_t k = i;
          if (k < s.size() && s[k] == '-') ++k;
          std::size_t m = k;
          while (m < s.size() && std::isdigit(static_cast<unsigned char>(s[m]))) ++m;
          if (m == k) fail();
          e = std::stoi(std::string(s.substr(i, m - i)));
          i = m;
        }
      } else if (!have_digits) {
        fail();
      }
      acc += monomial(sign * c, e);
    }
    return acc;
  }

  /// Ordinary polynomial q^{-low} * p (constant term nonzero).
  detail::ZPoly stripped() const { return coeffs_; }

 private:
  void canonicalize() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    if (first > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
      low_ += static_cast<int>(first);
    }
    detail::trim(coeffs_);
  }

  int low_ = 0;
  std::vector<mpz_class> coeffs_;
};

}  // namespace qwedge
