#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "ldcheck/kernel.hpp"

namespace ldc {

// LDCHECK_FUEL when set to a positive number, else kDefaultFuel.
uint64_t default_fuel();

struct CheckOptions {
  uint64_t fuel = kDefaultFuel;
  bool keep_going = false;
  bool json = false;
  std::string trace;
  std::set<std::string> freeze;
};

struct CheckRun {
  std::vector<DefinitionResult> results;
  std::vector<std::string> trace;
  std::string io_error;
  double elapsed = 0;
  int exit_code = 0;
};

CheckRun run_check(const std::vector<std::string>& paths, const CheckOptions& opts);
std::string report_json(const CheckRun& run, bool with_elapsed = true);
std::string report_text(const CheckRun& run);

enum class MutationKind { SwapArgs, VarShift, FlipElim, DeletePrim, Identity };

struct Mutant {
  std::string name;
  MutationKind kind = MutationKind::Identity;
  std::string target;
  unsigned occurrence = 0;
  // When non-empty, the failing named definitions must be exactly these.
  std::vector<std::string> expect_failures;
};

struct MutantResult {
  std::string name;
  MutationKind kind = MutationKind::Identity;
  bool applied = false;   // the mutation changed something
  bool rejected = false;  // some definition failed with a type-level error
  bool fuel = false;      // a failure was FuelExhausted
  std::string first_failure;
  ErrorKind first_kind = ErrorKind::TypeMismatch;
  std::vector<std::string> failed;  // named definitions that failed
  bool expectation_met = true;
  bool passed() const;
};

struct MutationReport {
  std::vector<MutantResult> results;
  bool baseline_ok = true;
  bool ok() const;
};

MutationKind mutation_kind(const std::string& s);
const char* mutation_kind_name(MutationKind k);
std::vector<Mutant> load_mutant_spec(const std::string& path);

// Applies one mutation to a checked definition list; returns false when the
// mutation found nothing to change.
bool apply_mutation(std::vector<DefPtr>& defs, const Mutant& m);

MutationReport run_mutations(const std::vector<DefPtr>& baseline, const std::vector<Mutant>& mutants,
                             uint64_t fuel = kDefaultFuel);
MutationReport run_mutations(const std::string& corpus_path, const std::vector<Mutant>& mutants,
                             uint64_t fuel = kDefaultFuel);
std::string mutation_report_text(const MutationReport& r);

}  // namespace ldc
