#pragma once

// Word-size prime fields and specialization points q -> q_value mod p.

#include <gmp.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qwedge/errors.hpp"
#include "qwedge/scalar/ratfunc.hpp"

namespace qwedge {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Arithmetic in Z/pZ for a prime p < 2^62. Residues are kept in [0, p).
class PrimeField {
 public:
  using value_type = u64;

  PrimeField() = default;
  explicit PrimeField(u64 p) : p_(p) {}

  u64 modulus() const { return p_; }

  u64 zero() const { return 0; }
  u64 one() const { return 1; }
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p_); }
  bool is_zero(u64 a) const { return a == 0; }

  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  u64 inv(u64 a) const {
    if (a == 0) throw ArithmeticError("inverse of zero mod p");
    // extended Euclid on signed 128-bit
    __int128 t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      __int128 qq = r / nr;
      __int128 tmp = t - qq * nt;
      t = nt;
      nt = tmp;
      tmp = r - qq * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<u64>(t);
  }

  u64 from_int(long long c) const {
    long long m = c % static_cast<long long>(p_);
    return static_cast<u64>(m < 0 ? m + static_cast<long long>(p_) : m);
  }

  u64 from_mpz(const mpz_class& c) const {
    mpz_class m;
    mpz_fdiv_r_ui(m.get_mpz_t(), c.get_mpz_t(), p_);
    return m.get_ui();
  }

  /// Precomputed multiplier for repeated products with a fixed factor w
  /// (Shoup's trick): w_pre = floor(w * 2^64 / p).
  u64 shoup_precompute(u64 w) const { return static_cast<u64>((static_cast<u128>(w) << 64) / p_); }

  /// a * w mod p using w's precomputed multiplier.
  u64 shoup_mul(u64 a, u64 w, u64 w_pre) const {
    u64 hi = static_cast<u64>((static_cast<u128>(a) * w_pre) >> 64);
    u64 r = a * w - hi * p_;
    return r >= p_ ? r - p_ : r;
  }

 private:
  u64 p_ = 2;
};

namespace detail {

inline u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = detail::powmod64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr int kDefaultOrderGuard = 24;

/// A specialization q -> q_value in F_prime, standing in for generic q.
struct PrimePoint {
  u64 prime = 0;
  u64 q_value = 0;

  PrimeField field() const { return PrimeField(prime); }
  friend bool operator==(const PrimePoint&, const PrimePoint&) = default;
  std::string to_string() const { return "(p=" + std::to_string(prime) + ", q=" + std::to_string(q_value) + ")"; }
};

/// True iff q_value is a unit of multiplicative order > guard.
inline bool point_is_valid(const PrimePoint& pt, int order_guard = kDefaultOrderGuard) {
  if (!is_prime_u64(pt.prime)) return false;
  if (pt.q_value < 2 || pt.q_value > pt.prime - 2) return false;
  PrimeField f(pt.prime);
  u64 x = 1;
  for (int m = 1; m <= order_guard; ++m) {
    x = f.mul(x, pt.q_value);
    if (x == 1) return false;
  }
  return true;
}

/// Reproducible point for (seed, index): ~60-bit prime and admissible q.
inline PrimePoint sample_point(u64 seed, u64 index, int order_guard = kDefaultOrderGuard) {
  std::mt19937_64 gen(detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(index + 0x51ed27ULL)));
  PrimePoint pt;
  u64 candidate = (gen() >> 4) | (1ULL << 59) | 1ULL;
  while (!is_prime_u64(candidate)) candidate += 2;
  pt.prime = candidate;
  std::uniform_int_distribution<u64> dist(2, candidate - 2);
  do {
    pt.q_value = dist(gen);
  } while (!point_is_valid(pt, order_guard));
  return pt;
}

/// First `count` points for a seed, skipping indices whose prime repeats.
inline std::vector<PrimePoint> sample_points(u64 seed, int count, u64 first_index = 0) {
  std::vector<PrimePoint> out;
  for (u64 idx = first_index; static_cast<int>(out.size()) < count; ++idx) {
    PrimePoint pt = sample_point(seed, idx);
    bool dup = false;
    for (const auto& o : out) dup = dup || o.prime == pt.prime;
    if (!dup) out.push_back(pt);
  }
  return out;
}

/// Value of a Laurent polynomial at q = q_value (mod p).
inline u64 eval_at(const LaurentPoly& a, const PrimePoint& pt) {
  if (a.is_zero()) return 0;
  PrimeField f(pt.prime);
  const u64 qv = pt.q_value;
  u64 acc = 0;
  const auto& c = a.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.add(f.mul(acc, qv), f.from_mpz(*it));
  const int lo = a.low();
  const u64 scale = lo >= 0 ? f.pow(qv, static_cast<u64>(lo)) : f.pow(f.inv(qv), static_cast<u64>(-lo));
  return f.mul(acc, scale);
}

/// Ring homomorphism Q(q) -> F_p. Throws BadPointError if the denominator vanishes.
inline u64 eval_at(const RatFunc& a, const PrimePoint& pt) {
  const u64 d = eval_at(a.den(), pt);
  if (d == 0) throw BadPointError("denominator " + a.den().to_string() + " vanishes at " + pt.to_string());
  PrimeField f(pt.prime);
  return f.mul(eval_at(a.num(), pt), f.inv(d));
}

}  // namespace qwedge
