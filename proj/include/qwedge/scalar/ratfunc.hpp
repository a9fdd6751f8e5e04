#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "qwedge/errors.hpp"
#include "qwedge/scalar/laurent_poly.hpp"

namespace qwedge {

/// Element of Q(q), stored as numerator / denominator.
///
/// Canonical form: the denominator is an ordinary polynomial with nonzero
/// constant term and positive leading coefficient, coprime to the numerator
/// over Z[q, q^-1]. Powers of q live in the numerator. Equal values therefore
/// have identical representations.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(LaurentPoly p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(LaurentPoly num, LaurentPoly den) { assign(std::move(num), std::move(den)); }

  static RatFunc q(int exponent = 1) { return RatFunc(LaurentPoly::q(exponent)); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_);
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_);
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw ArithmeticError("division by zero in Q(q)");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

  RatFunc inverse() const { return RatFunc(1) / *this; }

  RatFunc pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r(1), b = *this;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  /// Image under q -> q^-1.
  RatFunc inverted_variable() const { return RatFunc(num_.inverted_variable(), den_.inverted_variable()); }

  /// Canonical "num/den" text, exponents ascending, e.g. "q^-1+q/1".
  std::string to_string() const { return num_.to_string() + "/" + den_.to_string(); }

  /// Compact display form: omits "/1".
  std::string pretty() const { return den_.is_one() ? num_.to_string() : "(" + num_.to_string() + ")/(" + den_.to_string() + ")"; }

  static RatFunc parse(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return RatFunc(LaurentPoly::parse(s));
    return RatFunc(LaurentPoly::parse(s.substr(0, slash)), LaurentPoly::parse(s.substr(slash + 1)));
  }

  /// Re-normalizes an already canonical value; identity on canonical input.
  RatFunc normalized() const { return RatFunc(num_, den_); }

 private:
  void assign(LaurentPoly num, LaurentPoly den) {
    if (den.is_zero()) throw ArithmeticError("zero denominator in Q(q)");
    if (num.is_zero()) {
      num_ = LaurentPoly();
      den_ = LaurentPoly(1);
      return;
    }
    const int shift = num.low() - den.low();
    detail::ZPoly n = num.stripped();
    detail::ZPoly d = den.stripped();
    if (d.size() == 1) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), d[0].get_mpz_t(), detail::content(n).get_mpz_t());
      if (d[0] < 0) g = -g;
      detail::divide_content(n, g);
      d[0] /= g;
    } else {
      detail::ZPoly g = detail::gcd(n, d);
      if (!(g.size() == 1 && g[0] == 1)) {
        n = detail::divexact(n, g);
        d = detail::divexact(d, g);
      }
      if (d.back() < 0) {
        for (auto& c : n) c = -c;
        for (auto& c : d) c = -c;
      }
    }
    num_ = LaurentPoly(shift, std::move(n));
    den_ = LaurentPoly(0, std::move(d));
  }

  LaurentPoly num_;
  LaurentPoly den_;
};

/// Balanced q-integer [k] = (q^k - q^-k) / (q - q^-1), k >= 1.
inline RatFunc q_number(int k) {
  if (k < 1) throw std::invalid_argument("q_number requires k >= 1");
  LaurentPoly s;
  for (int j = -(k - 1); j <= k - 1; j += 2) s += LaurentPoly::q(j);
  return RatFunc(s);
}

/// Stateless ring policy for generic matrix code over Q(q).
struct RatFuncRing {
  using value_type = RatFunc;
  static RatFunc zero() { return {}; }
  static RatFunc one() { return RatFunc(1); }
  static RatFunc add(const RatFunc& a, const RatFunc& b) { return a + b; }
  static RatFunc sub(const RatFunc& a, const RatFunc& b) { return a - b; }
  static RatFunc mul(const RatFunc& a, const RatFunc& b) { return a * b; }
  static RatFunc neg(const RatFunc& a) { return -a; }
  static RatFunc inv(const RatFunc& a) { return a.inverse(); }
  static bool is_zero(const RatFunc& a) { return a.is_zero(); }
  static RatFunc from_int(long c) { return RatFunc(c); }
};

}  // namespace qwedge
