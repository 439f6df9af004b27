// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <iostream>
#include <set>
#include <sstream>

#include "ldcheck/cli.hpp"
#include "ldcheck/corpus.hpp"
#include "ldcheck/surface.hpp"
#include "props.hpp"

using namespace ldc;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  failures += !ok;
  std::cout << "criterion " << n << " " << what << ": " << (ok ? "PASS" : "FAIL") << " ("
            << detail << ")" << std::endl;
}

template <class F>
void guarded(int n, const std::string& what, F f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(n, what, false, std::string("exception: ") + e.what());
  }
}

std::vector<std::string> required_labels() {
  std::vector<std::string> out = {"partition", "Ext1",        "Ext-proof1", "Ext2",
                                  "Ext-proof2", "perm-group", "RH-equiv",   "permutable",
                                  "quotient",  "correspondence.1", "correspondence.2"};
  auto range = [&](const std::string& stem, int n, const char* sep) {
    for (int i = 1; i <= n; ++i) out.push_back(stem + sep + std::to_string(i));
  };
  range("Gr", 9, "");
  range("corollary", 8, ".");
  range("coset", 7, ".");
  range("conjugate", 3, ".");
  range("normal-criteria", 5, ".");
  return out;
}

void full_corpus(const Manifest& m) {
  CheckOptions o;
  o.fuel = default_fuel();
  CheckRun run = run_check({corpus_dir() + "/prelude", corpus_dir() + "/groups"}, o);
  std::set<std::string> ok;
  size_t steps = 0;
  for (const auto& r : run.results) {
    if (r.ok) ok.insert(r.name);
    steps += r.name.find('.') != std::string::npos;
  }
  size_t covered = 0, listed = 0;
  std::string missing;
  for (const auto& e : m.entries) {
    if (e.kind == "omitted") continue;
    ++listed;
    if (ok.count(e.name))
      ++covered;
    else if (missing.empty())
      missing = e.label;
  }
  std::ostringstream d;
  d << run.results.size() << " definitions including " << steps << " proof steps, " << covered
    << "/" << listed << " manifest entries, " << run.elapsed << " s";
  if (!missing.empty()) d << ", first missing " << missing;
  report(1, "full-corpus check", run.exit_code == 0 && covered == listed && run.elapsed < 60,
         d.str());
}

void named_theorems(const Manifest& m) {
  const Environment& env = props::corpus_env();
  auto idx = theorem_index(env, m);
  size_t ok = 0;
  std::string bad;
  auto labels = required_labels();
  for (const auto& label : labels) {
    const ManifestEntry* e = m.by_label(label);
    const Definition* d = e ? env.find(e->name) : nullptr;
    bool good = d && (e->kind != "proof-term" || idx.count(label));
    if (good) {
      try {
        Kernel(env).check_definition(*d);
      } catch (const Error&) {
        good = false;
      }
    }
    if (good)
      ++ok;
    else if (bad.empty())
      bad = label;
  }
  std::ostringstream d;
  d << ok << "/" << labels.size() << " named results re-checked, " << idx.size() << " indexed";
  if (!bad.empty()) d << ", first failure " << bad;
  report(2, "named theorems", ok == labels.size(), d.str());
}

void mutation_suite() {
  std::string dir = std::string(LDCHECK_TEST_DIR) + "/mutants/";
  std::set<std::string> names;
  size_t real = 0, rejected = 0, fuel = 0;
  bool all = true, classical = false;
  const std::set<std::string> ext = {"Ext_1", "Ext_proof_1", "Ext_2", "Ext_proof_2"};
  std::pair<const char*, std::vector<DefPtr>> suites[] = {{"prelude.json", props::prelude_defs()},
                                                          {"groups.json", props::corpus_defs()}};
  for (const auto& [f, defs] : suites) {
    auto mutants = load_mutant_spec(dir + f);
    MutationReport rep = run_mutations(defs, mutants);
    all = all && rep.ok();
    for (size_t i = 0; i < rep.results.size(); ++i) {
      const auto& r = rep.results[i];
      if (!r.applied) continue;
      ++real;
      names.insert(r.name);
      rejected += r.rejected && !r.fuel;
      fuel += r.fuel;
      if (mutants[i].kind == MutationKind::DeletePrim && mutants[i].target == "exc_thrd")
        classical = std::set<std::string>(r.failed.begin(), r.failed.end()) == ext;
    }
  }
  std::ostringstream d;
  d << rejected << "/" << real << " mutants rejected, " << fuel << " by fuel, classical deletion "
    << (classical ? "hits exactly the extension proofs" : "does not match");
  report(3, "mutation suite",
         all && names.size() == real && real >= 25 && rejected == real && classical, d.str());
}

void kernel_properties() {
  const Environment& env = props::corpus_env();
  auto sites = props::sample_sites(env, 1500, 7);
  std::vector<std::pair<props::Outcome, size_t>> runs = {
      {props::alpha_laws(1000), 1000},
      {props::shift_subst_laws(500), 500},
      {props::unique_typing(env, sites, 200), 200},
      {props::subject_reduction(env, sites, 200), 200},
      {props::normalize_laws(env, sites, 100), 100},
  };
  bool ok = true;
  std::string d;
  for (const auto& [o, want] : runs) {
    ok = ok && o.ok(want);
    d += (d.empty() ? "" : "; ") + o.line();
  }
  report(4, "kernel properties", ok, d);
}

void oracle_equivalence() {
  auto v = props::verdict_agreement(props::corpus_defs());
  size_t pos = 0;
  auto c = props::conversion_agreement(props::corpus_env(),
                                       props::sample_sites(props::corpus_env(), 600, 11), 500, &pos);
  report(5, "oracle equivalence", v.ok(props::corpus_defs().size()) && c.ok(500),
         v.line() + "; " + c.line() + ", " + std::to_string(pos) + " convertible");
}

void round_trip() {
  auto o = props::round_trip(props::corpus_defs());
  report(6, "round trip", o.ok(props::corpus_defs().size()), o.line());
}

}  // namespace

int main() {
  Manifest m;
  try {
    m = load_full_manifest();
  } catch (const std::exception& e) {
    std::cout << "cannot load manifest: " << e.what() << "\n";
    return 1;
  }
  guarded(1, "full-corpus check", [&] { full_corpus(m); });
  guarded(2, "named theorems", [&] { named_theorems(m); });
  guarded(3, "mutation suite", [] { mutation_suite(); });
  guarded(4, "kernel properties", [] { kernel_properties(); });
  guarded(5, "oracle equivalence", [] { oracle_equivalence(); });
  guarded(6, "round trip", [] { round_trip(); });
  return failures == 0 ? 0 : 1;
}
