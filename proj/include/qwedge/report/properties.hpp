#pragma once

// Structural property checks that involve no published constants.

#include <filesystem>
#include <random>

#include "qwedge/linalg/dense_mod.hpp"
#include "qwedge/report/runner.hpp"

namespace qwedge {

namespace detail {

/// A reduced word for perm built from its last right descent at every step;
/// the permutation table uses the first, so the two usually differ.
inline ReducedWord last_descent_word(std::vector<int> perm) {
  ReducedWord w;
  const int k = static_cast<int>(perm.size());
  while (inversions(perm) > 0) {
    for (int i = k - 1; i >= 1; --i) {
      if (perm[static_cast<std::size_t>(i - 1)] > perm[static_cast<std::size_t>(i)]) {
        std::swap(perm[static_cast<std::size_t>(i - 1)], perm[static_cast<std::size_t>(i)]);
        w.insert(w.begin(), i);
        break;
      }
    }
  }
  return w;
}

inline RatFunc random_ratfunc(std::mt19937_64& g) {
  std::uniform_int_distribution<int> lo(-4, 4), len(1, 4), coef(-5, 5);
  auto poly = [&] {
    std::vector<mpz_class> c;
    const int n = len(g);
    for (int i = 0; i < n; ++i) c.emplace_back(coef(g));
    return LaurentPoly(lo(g), c);
  };
  LaurentPoly d;
  do d = poly();
  while (d.is_zero());
  return RatFunc(poly(), d);
}

}  // namespace detail

inline std::vector<Result> Runner::property_results(const std::string& p) {
  std::vector<Result> out;
  const PrimePoint pt = sample_point(cfg_.seed, 0);

  // Yang-Baxter and the R-hat spectrum for every supported family.
  json ybe = json::object();
  bool ybe_ok = true;
  const std::vector<SeriesConstants> families{{Series::A, 2, Variant::plus},  {Series::A, 3, Variant::plus},
                                              {Series::BD, 3, Variant::plus}, {Series::BD, 3, Variant::minus},
                                              {Series::BD, 4, Variant::plus}, {Series::BD, 5, Variant::plus},
                                              {Series::C, 2, Variant::plus},  {Series::C, 4, Variant::plus}};
  for (const auto& s : families) {
    const ModBundle m = evaluate(bundle(s), pt);
    const auto& f = m.ring;
    const LegSpace three = LegSpace::uniform(s.n, 3);
    const auto r1 = embed_at_leg(f, m.rhat, three, 1), r2 = embed_at_leg(f, m.rhat, three, 2);
    const bool ok = multiply(f, multiply(f, r1, r2), r1) == multiply(f, multiply(f, r2, r1), r2) &&
                    detail::annihilated_by_roots(f, m.rhat, m.rhat_eigenvalues);
    ybe[s.label()] = ok;
    ybe_ok = ybe_ok && ok;
  }
  out.push_back(observation(p + "Yang-Baxter equation and R-hat spectrum", ybe, ybe_ok));

  // Braid relation of sigma on Gamma^{(x)3}.
  const ModBundle o3 = evaluate(bundle({Series::BD, 3, Variant::plus}), pt);
  const bool braid = detail::braid_relation_holds(o3.ring, build_sigma(o3));
  out.push_back(observation(p + "sigma satisfies the braid relation", braid, braid));

  // T_w does not depend on the reduced word.
  bool words = true;
  std::size_t distinct = 0;
  const PermutationTable table(4);
  for (const auto& e : table.entries()) {
    const auto alt = detail::last_descent_word(e.perm);
    if (word_permutation(4, alt) != e.perm) words = false;
    if (alt != e.word) ++distinct;
    for (auto side : {WordSide::vector, WordSide::covector})
      words = words && t_word(o3, 4, alt, side) == t_word(o3, 4, e.word, side);
  }
  out.push_back(observation(p + "reduced-word independence in S_4", json{{"alternative_words", distinct}}, words && distinct > 0));

  // The Horner form of A_3 equals the sum over all words.
  const bool horner = antisymmetrizer(o3, 3, AntisymForm::plain) == antisymmetrizer_by_words(o3, 3, AntisymForm::plain);
  out.push_back(observation(p + "coset factorization of A_3 equals the word sum", horner, horner));

  // Evaluation at a point is a field homomorphism.
  std::mt19937_64 g(cfg_.seed + 1);
  const PrimeField f = pt.field();
  std::size_t checked = 0;
  bool hom = true;
  for (int it = 0; it < 300; ++it) {
    const auto a = detail::random_ratfunc(g), b = detail::random_ratfunc(g);
    try {
      const u64 ea = eval_at(a, pt), eb = eval_at(b, pt);
      hom = hom && eval_at(a + b, pt) == f.add(ea, eb) && eval_at(a * b, pt) == f.mul(ea, eb) &&
            eval_at(a - b, pt) == f.sub(ea, eb);
      if (ea != 0) hom = hom && eval_at(a.inverse(), pt) == f.inv(ea);
      ++checked;
    } catch (const BadPointError&) {
    }
  }
  out.push_back(observation(p + "evaluation is a ring homomorphism", json{{"samples", checked}}, hom && checked > 250));

  // Determinism of the rank engine.
  const auto s = build_sigma(bundle({Series::BD, 3, Variant::plus}));
  const auto shifted = shift_identity(RatFuncRing{}, RatFunc(1), s);
  const auto r1 = generic_rank(shifted, cfg_.rank()), r2 = generic_rank(shifted, cfg_.rank());
  const bool det = r1.per_point == r2.per_point && r1.points == r2.points;
  out.push_back(observation(p + "generic rank is deterministic for a fixed seed", rank_json(r1), det, Provenance::property,
                            evidence(rank_json(r1))));

  // Cache round trip: a second run is served from the cache and reproduces
  // the report; a corrupt entry is a miss.
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qwedge-prop-" + std::to_string(::getpid()) + "-" + std::to_string(cfg_.seed));
  std::filesystem::remove_all(dir);
  RunConfig c = cfg_;
  c.series = "o";
  c.n = 3;
  c.variant = "plus";
  c.ideal_case = "s2";
  c.kmax = 3;
  c.cache_dir = dir.string();
  auto body = [](const Report& r) {
    json j = r.to_json();
    j["meta"].erase("timestamps");
    return j.dump();
  };
  Runner first(c), second(c);
  const auto a = first.run("dims"), b = second.run("dims");
  RunConfig nc = c;
  nc.cache_dir.clear();
  const auto fresh = Runner(nc).run("dims");
  bool corrupt_is_miss = false;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ofstream(e.path(), std::ios::trunc) << "{ not json";
    Runner third(c);
    const auto r = third.run("dims");
    corrupt_is_miss = third.cache_hits() == 0 && body(r) == body(a);
    break;
  }
  std::filesystem::remove_all(dir);
  const bool idem = first.cache_hits() == 0 && second.cache_hits() > 0 && body(a) == body(b) && body(a) == body(fresh);
  out.push_back(observation(p + "cache hit reproduces the report byte for byte",
                            json{{"second_run_hits", second.cache_hits()}}, idem));
  out.push_back(observation(p + "corrupt cache entry is treated as a miss", corrupt_is_miss, corrupt_is_miss));
  return out;
}

}  // namespace qwedge
