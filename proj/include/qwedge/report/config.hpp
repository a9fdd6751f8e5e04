#pragma once

#include <string>
#include <thread>

#include "qwedge/exterior/exterior_calc.hpp"
#include "qwedge/report/report.hpp"

namespace qwedge {

/// Everything that determines a run. cache_dir, format and jobs affect where
/// and how fast results appear, never their content, so they are left out of
/// the canonical form.
struct RunConfig {
  std::string series = "o";
  int n = 3;
  std::string variant = "plus";
  std::string ideal_case = "s2";
  int k = 6;
  int kmax = 5;
  int trials = 3;
  std::uint64_t seed = 0;
  bool stretch = false;
  std::string cache_dir;  // empty: no cache
  std::string format = "json";
  int jobs = 0;           // 0: one per hardware thread

  SeriesConstants spec() const {
    SeriesConstants s{parse_series(series), n, parse_variant(variant)};
    s.validate();
    return s;
  }
  RankOptions rank() const {
    if (trials < 1) throw ConfigError("--trials must be at least 1");
    RankOptions o;
    o.trials = trials;
    o.seed = seed;
    return o;
  }
  TableOptions table() const {
    TableOptions t;
    t.rank = rank();
    t.stretch = stretch;
    return t;
  }
  int worker_count() const {
    if (jobs > 0) return jobs;
    const unsigned h = std::thread::hardware_concurrency();
    return h ? static_cast<int>(h) : 1;
  }

  json canonical() const {
    return {{"series", series}, {"n", n}, {"variant", variant}, {"case", ideal_case}, {"k", k},
            {"kmax", kmax}, {"trials", trials}, {"seed", seed}, {"stretch", stretch}};
  }
};

}  // namespace qwedge
