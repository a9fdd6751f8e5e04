// Acceptance run: one PASS/FAIL line per criterion. Failing checks are listed
// under their criterion. Exit status is nonzero if any criterion fails.

#include <iostream>

#include "CLI11.hpp"
#include "qwedge/qwedge.hpp"

int main(int argc, char** argv) {
  using namespace qwedge;
  CLI::App app{"qwedge acceptance criteria"};
  int only = 0;
  bool verbose = false, no_stretch = false;
  RunConfig cfg;
  cfg.stretch = true;
  app.add_option("--criterion", only, "run a single criterion (1-13)")->check(CLI::Range(0, Runner::kCriteria));
  app.add_option("--seed", cfg.seed, "seed for the specialization points");
  app.add_option("--trials", cfg.trials, "number of specialization points");
  app.add_option("--cache-dir", cfg.cache_dir, "result cache directory");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_flag("--no-stretch", no_stretch, "skip the degree-6 S2 table");
  app.add_flag("-v,--verbose", verbose, "print every check");
  CLI11_PARSE(app, argc, argv);
  if (no_stretch) cfg.stretch = false;

  Runner runner(cfg);
  std::vector<int> ids;
  if (only) ids.push_back(only);
  else
    for (int i = 1; i <= Runner::kCriteria; ++i) ids.push_back(i);

  std::vector<std::vector<Result>> results(ids.size());
  std::vector<std::string> errors(ids.size());
  parallel_for(only ? 1 : cfg.worker_count(), ids.size(), [&](std::size_t i) {
    try {
      results[i] = runner.criterion(ids[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  int failed = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    bool pass = errors[i].empty() && !results[i].empty();
    for (const auto& r : results[i]) pass = pass && r.pass && r.agreed();
    failed += pass ? 0 : 1;
    std::cout << "criterion " << ids[i] << ": " << (pass ? "PASS" : "FAIL") << "  " << Runner::criterion_title(ids[i])
              << " (" << results[i].size() << " checks)\n";
    if (!errors[i].empty()) std::cout << "    error: " << errors[i] << "\n";
    for (const auto& r : results[i]) {
      const bool bad = !r.pass || !r.agreed();
      if (!bad && !verbose) continue;
      std::cout << "    " << (bad ? "FAIL " : "ok   ") << r.name;
      if (r.expected) std::cout << "\n        expected " << r.expected->dump();
      std::cout << "\n        computed " << r.computed.dump() << "\n";
    }
  }
  std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
