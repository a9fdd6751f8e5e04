#pragma once

#include <string>

#include "qwedge/errors.hpp"
#include "qwedge/scalar/ratfunc.hpp"

namespace qwedge {

/// A: SL_q(N) (Hecke R-matrix). BD: O_q(N). C: Sp_q(N).
enum class Series { A, BD, C };

/// plus: q as given. minus: the calculus obtained by q -> q^-1.
enum class Variant { plus, minus };

inline std::string to_string(Series s) {
  switch (s) {
    case Series::A: return "sl";
    case Series::BD: return "o";
    case Series::C: return "sp";
  }
  return "?";
}
inline std::string to_string(Variant v) { return v == Variant::plus ? "plus" : "minus"; }

inline Series parse_series(const std::string& s) {
  if (s == "sl" || s == "A") return Series::A;
  if (s == "o" || s == "BD") return Series::BD;
  if (s == "sp" || s == "C") return Series::C;
  throw ConfigError("unknown series '" + s + "' (expected sl, o or sp)");
}
inline Variant parse_variant(const std::string& s) {
  if (s == "plus") return Variant::plus;
  if (s == "minus") return Variant::minus;
  throw ConfigError("unknown variant '" + s + "' (expected plus or minus)");
}

/// Series data with the constants r and Q = q - q^-1.
///
/// r = q^{N-1} for O_q(N) and r = -q^{N+1} for Sp_q(N); r^-1 is the eigenvalue
/// of R-hat on the invariant vector C. For SL_q(N) r is unused and set to 1.
struct SeriesConstants {
  Series series = Series::BD;
  int n = 3;
  Variant variant = Variant::plus;

  RatFunc r() const {
    switch (series) {
      case Series::BD: return RatFunc::q(n - 1);
      case Series::C: return -RatFunc::q(n + 1);
      case Series::A: return RatFunc(1);
    }
    return RatFunc(1);
  }
  static RatFunc big_q() { return RatFunc::q(1) - RatFunc::q(-1); }

  bool has_metric() const { return series != Series::A; }

  void validate() const {
    if (n < 2) throw ConfigError("N must be at least 2");
    if (series == Series::BD && n < 3) throw ConfigError("O_q(N) requires N >= 3");
    if (series == Series::C && n % 2 != 0) throw ConfigError("Sp_q(N) requires even N");
  }

  std::string label() const { return to_string(series) + std::to_string(n) + "-" + to_string(variant); }
};

}  // namespace qwedge
