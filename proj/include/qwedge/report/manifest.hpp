#pragma once

// Expected values, each with a short description of where it comes from.
// Reports and tests read them from here only.

#include <string>
#include <vector>

#include "qwedge/report/report.hpp"
#include "qwedge/scalar/ratfunc.hpp"

namespace qwedge::manifest {

template <class T>
struct Expected {
  T value;
  Provenance provenance;
  const char* source;
};

using Dims = std::vector<std::size_t>;

// O_q(3), Gamma = V (x) Vbar of dimension 9.

/// Braiding spectrum of Gamma (x) Gamma; the set is closed under q -> q^-1.
inline Expected<std::vector<RatFunc>> sigma_eigenvalues(const RatFunc& q) {
  const RatFunc qi = q.inverse();
  return {{RatFunc(1), q.pow(3), qi.pow(3), -q.pow(2), -qi.pow(2), -q, -qi}, Provenance::reference,
          "O_q(3) braiding spectrum"};
}
inline Expected<std::vector<RatFunc>> sigma_tilde_eigenvalues(const RatFunc& q) {
  const RatFunc qi = q.inverse();
  return {{q.pow(2), qi.pow(2), qi.pow(4), qi, RatFunc(-1), -qi.pow(3)}, Provenance::reference,
          "O_q(3) second braiding spectrum"};
}
inline const Expected<std::size_t> sigma_fixed_dim{35, Provenance::oracle, "81 - rank A_2 = 81 - 46"};
inline const Expected<std::size_t> gamma_pair_dim{81, Provenance::oracle, "dim Gamma (x) Gamma = 9^2"};

inline const Expected<Dims> s2_dims{{1, 9, 46, 183, 628, 1938, 5514}, Provenance::reference,
                                    "quotient by <ker(I - sigma)>"};
inline const Expected<Dims> s3_dims{{1, 9, 30, 39, 0}, Provenance::reference, "quotient by <im(I + sigma~)>"};
inline const Expected<Dims> s4_dims{{1, 9, 36, 54, 1, 0}, Provenance::reference, "quotient by the cubic relation"};
inline const Expected<std::size_t> radical_dim{45, Provenance::reference, "radical of the cubic-relation algebra"};
inline const Expected<Dims> radical_quotient_dims{{1, 9, 36, 9, 1, 0}, Provenance::reference,
                                                  "cubic-relation algebra modulo its radical"};
/// Woronowicz's algebra agrees with the S2 quotient through degree 3.
inline const Expected<Dims> woronowicz_low{{1, 9, 46, 183}, Provenance::reference,
                                           "S1 = S2 in degrees <= 3"};

inline const Expected<std::size_t> a3_rank{183, Provenance::reference, "rank A_3 = dim of the degree-3 forms"};
inline const Expected<int> a3_quadratic_multiplicity{9, Provenance::oracle, "dim pi_(1) (x) pi_(1) = 3 * 3"};

inline const Expected<std::vector<std::size_t>> co_eigenspace_dims{{5, 7}, Provenance::oracle,
                                                                   "dim of the one-row O(3) modules (2), (3)"};

inline std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// SL_q(N): the exterior algebra has the classical dimensions C(N^2, k).
inline Expected<Dims> sl_dims(int n, int kmax) {
  Dims d;
  for (int k = 0; k <= kmax; ++k) d.push_back(binomial(static_cast<std::size_t>(n * n), static_cast<std::size_t>(k)));
  return {d, Provenance::reference, "C(N^2, k) for SL_q(N)"};
}

}  // namespace qwedge::manifest
