#include "ldcheck/corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "ldcheck/surface.hpp"

#ifndef LDCHECK_SOURCE_CORPUS
#define LDCHECK_SOURCE_CORPUS "corpus"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace ldc {

const ManifestEntry* Manifest::by_label(const std::string& label) const {
  for (const auto& e : entries)
    if (e.label == label) return &e;
  return nullptr;
}

const ManifestEntry* Manifest::by_name(const std::string& name) const {
  for (const auto& e : entries)
    if (!e.name.empty() && e.name == name) return &e;
  return nullptr;
}

std::string corpus_dir() {
  if (const char* p = std::getenv("LDCHECK_CORPUS"); p && *p) return p;
  return LDCHECK_SOURCE_CORPUS;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SyntaxError, path + ": " + e.what());
  }
  Manifest m;
  for (const auto& e : j.at("entries")) {
    ManifestEntry me;
    if (e.contains("name") && e["name"].is_string()) me.name = e["name"];
    me.label = e.at("label");
    me.kind = e.at("kind");
    me.file = e.value("file", "");
    me.reason = e.value("reason", "");
    me.auxiliary = e.value("auxiliary", false);
    m.entries.push_back(std::move(me));
  }
  return m;
}

Manifest load_full_manifest(const std::string& root) {
  Manifest m = load_manifest(root + "/prelude/MANIFEST.json");
  Manifest g = load_manifest(root + "/groups/MANIFEST.json");
  m.entries.insert(m.entries.end(), g.entries.begin(), g.entries.end());
  return m;
}

bool CorpusLoad::ok() const {
  for (const auto& r : results)
    if (!r.ok) return false;
  return true;
}

CorpusLoad load_dir(Environment& env, const std::string& dir,
                    const std::vector<std::string>& loaded, bool keep_going, uint64_t fuel) {
  ElabOptions opts;
  opts.keep_going = keep_going;
  opts.fuel = fuel;
  Elaborator el(env, opts);
  for (const auto& f : loaded) el.assume_loaded(f);
  for (const auto& f : expand_paths({dir}))
    if (!el.run_file(f) && !keep_going) break;
  return {el.definitions(), el.results()};
}

static void throw_first(const CorpusLoad& c) {
  for (const auto& r : c.results)
    if (!r.ok) throw Error(r.kind, r.name + ": " + r.message, r.span);
}

Environment load_prelude(const std::string& root) {
  Environment env;
  throw_first(load_dir(env, root + "/prelude"));
  return env;
}

Environment load_groups(const Environment& prelude, const std::string& root) {
  Environment env = prelude;
  throw_first(load_dir(env, root + "/groups", expand_paths({root + "/prelude"})));
  return env;
}

std::vector<std::string> classical_dependency_report(const Environment& env,
                                                     const std::string& axiom) {
  std::set<std::string> tainted;
  std::vector<std::string> out;
  if (!env.contains(axiom)) return out;
  tainted.insert(axiom);
  for (const auto& d : env.defs()) {
    if (d->name == axiom) continue;
    std::vector<std::string> cs;
    collect_consts(d->type, cs);
    if (d->body) collect_consts(d->body, cs);
    for (const auto& p : d->params) collect_consts(p.type, cs);
    for (const auto& c : cs)
      if (tainted.count(c)) {
        tainted.insert(d->name);
        out.push_back(d->name);
        break;
      }
  }
  return out;
}

std::map<std::string, IndexEntry> theorem_index(const Environment& env, const Manifest& m) {
  std::map<std::string, IndexEntry> idx;
  for (const auto& e : m.entries) {
    if (e.kind != "proof-term") continue;
    const Definition* d = env.find(e.name);
    if (!d)
      throw Error(ErrorKind::MissingEntry,
                  "manifest label '" + e.label + "' names '" + e.name + "', which is not loaded");
    idx[e.label] = {e.name, display_statement(*d)};
  }
  return idx;
}

}  // namespace ldc
