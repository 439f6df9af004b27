#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldcheck/env.hpp"
#include "ldcheck/kernel.hpp"

namespace ldc {

struct ManifestEntry {
  std::string name;  // empty for omitted entries
  std::string label;
  std::string kind;  // definition, primitive, proof-term, omitted
  std::string file;
  std::string reason;
  bool auxiliary = false;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  const ManifestEntry* by_label(const std::string& label) const;
  const ManifestEntry* by_name(const std::string& name) const;
};

// Root of the shipped corpus: $LDCHECK_CORPUS, else the source-tree copy.
std::string corpus_dir();

Manifest load_manifest(const std::string& path);
// Prelude and groups manifests concatenated.
Manifest load_full_manifest(const std::string& root = corpus_dir());

struct CorpusLoad {
  std::vector<DefPtr> defs;
  std::vector<DefinitionResult> results;
  bool ok() const;
};

// Elaborates and checks every file under dir into env; files already in
// `loaded` are treated as present.
CorpusLoad load_dir(Environment& env, const std::string& dir,
                    const std::vector<std::string>& loaded = {}, bool keep_going = false,
                    uint64_t fuel = kDefaultFuel);

// Throw the first kernel error if the shipped corpus fails.
Environment load_prelude(const std::string& root = corpus_dir());
Environment load_groups(const Environment& prelude, const std::string& root = corpus_dir());

// Definitions whose body or type reaches the axiom through other definitions.
std::vector<std::string> classical_dependency_report(const Environment& env,
                                                     const std::string& axiom = "exc_thrd");

struct IndexEntry {
  std::string name;
  std::string statement;
};

// Label to definition for every proof-term entry; throws MissingEntry when
// the environment lacks one.
std::map<std::string, IndexEntry> theorem_index(const Environment& env, const Manifest& m);

}  // namespace ldc
