#include <iostream>

#include "CLI11.hpp"
#include "qwedge/qwedge.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kConfigError = 2;
constexpr int kInternalError = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace qwedge;
  CLI::App app{"qwedge: exterior algebras of bicovariant calculi on quantum groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  app.add_option("--series", cfg.series, "sl, o or sp")->envname("QWEDGE_SERIES")->check(CLI::IsMember({"sl", "o", "sp"}));
  app.add_option("--n", cfg.n, "matrix size N")->envname("QWEDGE_N");
  app.add_option("--variant", cfg.variant, "plus or minus")->envname("QWEDGE_VARIANT")->check(CLI::IsMember({"plus", "minus"}));
  app.add_option("--case", cfg.ideal_case, "ideal for dims: s1, s2, s3, s4")
      ->envname("QWEDGE_CASE")
      ->check(CLI::IsMember({"s1", "s2", "s3", "s4"}));
  app.add_option("--k", cfg.k, "highest degree for theorem")->envname("QWEDGE_K");
  app.add_option("--kmax", cfg.kmax, "highest degree for dims and conjectures")->envname("QWEDGE_KMAX");
  app.add_option("--trials", cfg.trials, "number of specialization points")->envname("QWEDGE_TRIALS");
  app.add_option("--seed", cfg.seed, "seed for the specialization points")->envname("QWEDGE_SEED");
  app.add_option("--cache-dir", cfg.cache_dir, "result cache directory (off when empty)")->envname("QWEDGE_CACHE_DIR");
  app.add_option("--format", cfg.format, "json, csv or md")->envname("QWEDGE_FORMAT")->check(CLI::IsMember({"json", "csv", "md"}));
  app.add_option("--jobs", cfg.jobs, "worker threads for 'all' (0: one per core)")->envname("QWEDGE_JOBS");
  app.add_flag("--stretch", cfg.stretch, "allow computations beyond the default resource guard")->envname("QWEDGE_STRETCH");

  std::string command;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->callback([&command, name] { command = name; });
    return s;
  };
  sub("spectrum", "eigenvalues of sigma and sigma~, rank A_3");
  sub("dims", "quotient dimensions for --case up to --kmax");
  sub("radical", "radical of the S4 algebra (O_q(3))");
  sub("a3-table", "eigenvalue table of A_3 (O_q(3))");
  sub("theorem", "rank-one lemma and nonzero k-forms up to --k");
  sub("conjectures", "ker A_k versus <ker(I - sigma)> up to --kmax");
  sub("all", "every acceptance criterion");
  auto* bundle = app.add_subcommand("bundle", "R-matrix data");
  bundle->fallthrough();
  bundle->require_subcommand(1);
  auto* dump = bundle->add_subcommand("dump", "print the bundle matrices");
  dump->fallthrough();
  dump->callback([&command] { command = "bundle dump"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  Report rep;
  try {
    Runner runner(cfg);
    rep = runner.run(command);
    std::cout << emit(rep, cfg.format);
  } catch (const std::exception& e) {
    std::cerr << "qwedge: " << e.what() << "\n";
    return kInternalError;
  }
  if (rep.error) {
    const auto kind = rep.error->value("kind", "");
    std::cerr << "qwedge: " << rep.error->value("message", "") << "\n";
    return kind == "config" ? kConfigError : kInternalError;
  }
  return rep.ok() ? kOk : kChecksFailed;
}
