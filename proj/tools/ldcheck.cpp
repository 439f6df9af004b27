#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ldcheck/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ldcheck: proof checker for the calculus of constructions with definitions"};
  app.require_subcommand(1);

  ldc::CheckOptions opts;
  opts.fuel = ldc::default_fuel();
  std::vector<std::string> paths;
  std::string freeze;
  auto* check = app.add_subcommand("check", "check .ld files or directories");
  check->add_option("paths", paths, "files or directories")->required();
  check->add_option("--fuel", opts.fuel, "beta+delta step budget per judgment");
  check->add_flag("--keep-going", opts.keep_going, "continue after the first failure");
  check->add_flag("--json", opts.json, "JSON report on stdout");
  check->add_option("--trace", opts.trace, "print the normalization trace of one definition");
  check->add_option("--freeze", freeze, "comma-separated names left folded in traces");

  std::string corpus, spec;
  auto* mutate = app.add_subcommand("mutate", "check that corpus mutants are rejected");
  mutate->add_option("corpus", corpus, "corpus file or directory")->required();
  mutate->add_option("spec", spec, "JSON mutant list")->required();
  mutate->add_option("--fuel", opts.fuel, "beta+delta step budget per judgment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      std::stringstream ss(freeze);
      for (std::string n; std::getline(ss, n, ',');)
        if (!n.empty()) opts.freeze.insert(n);
      ldc::CheckRun run = ldc::run_check(paths, opts);
      std::cout << (opts.json ? ldc::report_json(run) : ldc::report_text(run));
      return run.exit_code;
    }
    auto mutants = ldc::load_mutant_spec(spec);
    ldc::MutationReport rep = ldc::run_mutations(corpus, mutants, opts.fuel);
    std::cout << ldc::mutation_report_text(rep);
    return rep.ok() ? 0 : 1;
  } catch (const ldc::Error& e) {
    std::cerr << "ldcheck: " << e.what() << "\n";
    return e.kind == ldc::ErrorKind::IOError ? 2 : 1;
  }
}
