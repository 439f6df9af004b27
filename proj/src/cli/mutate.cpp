#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ldcheck/cli.hpp"
#include "ldcheck/surface.hpp"

namespace ldc {

static const std::map<std::string, std::string> kFlips = {
    {"and_el1", "and_el2"},     {"and_el2", "and_el1"},     {"or_in1", "or_in2"},
    {"or_in2", "or_in1"},       {"eq_trans1", "eq_trans2"}, {"eq_trans2", "eq_trans1"},
    {"eq_trans3", "eq_trans1"}, {"eq_subs1", "eq_subs2"},   {"eq_subs2", "eq_subs1"},
    {"eq_cong1", "eq_cong2"},   {"eq_cong2", "eq_cong1"},   {"eq_sub1", "eq_sub2"},
    {"eq_sub2", "eq_sub1"},     {"Gr4", "Gr5"},             {"Gr5", "Gr4"},
    {"Gr7", "Gr8"},             {"Gr8", "Gr7"},
};

MutationKind mutation_kind(const std::string& s) {
  if (s == "swap_args") return MutationKind::SwapArgs;
  if (s == "var_shift") return MutationKind::VarShift;
  if (s == "flip_elim") return MutationKind::FlipElim;
  if (s == "delete_prim") return MutationKind::DeletePrim;
  if (s == "identity") return MutationKind::Identity;
  throw Error(ErrorKind::SyntaxError, "unknown mutation kind '" + s + "'");
}

const char* mutation_kind_name(MutationKind k) {
  switch (k) {
    case MutationKind::SwapArgs:
      return "swap_args";
    case MutationKind::VarShift:
      return "var_shift";
    case MutationKind::FlipElim:
      return "flip_elim";
    case MutationKind::DeletePrim:
      return "delete_prim";
    case MutationKind::Identity:
      return "identity";
  }
  return "?";
}

std::vector<Mutant> load_mutant_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot read '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, path + ": " + e.what());
  }
  std::vector<Mutant> out;
  for (const auto& e : j.at("mutants")) {
    Mutant m;
    m.name = e.at("name");
    m.kind = mutation_kind(e.at("kind"));
    m.target = e.value("target", "");
    m.occurrence = e.value("occurrence", 0u);
    if (e.contains("expect_failures"))
      m.expect_failures = e["expect_failures"].get<std::vector<std::string>>();
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Rewrites the n-th candidate node (pre-order) of a term.
struct Rewriter {
  MutationKind kind;
  unsigned target;
  unsigned seen = 0;
  bool done = false;

  bool candidate(const TermPtr& t) const {
    switch (kind) {
      case MutationKind::VarShift:
        return t->tag == Tag::Var;
      case MutationKind::FlipElim:
        return t->tag == Tag::Const && kFlips.count(t->name);
      case MutationKind::SwapArgs:
        return t->tag == Tag::Const && swap_pair(t).first >= 0;
      default:
        return false;
    }
  }

  // The last argument and the nearest earlier one that differs from it.
  static std::pair<int, int> swap_pair(const TermPtr& t) {
    int n = int(t->args.size());
    for (int j = n - 1; j > 0; --j)
      for (int i = j - 1; i >= 0; --i)
        if (!alpha_eq(t->args[i], t->args[j])) return {i, j};
    return {-1, -1};
  }

  TermPtr mutate(const TermPtr& t) const {
    switch (kind) {
      case MutationKind::VarShift:
        return mk_var(t->index + 1, t->name);
      case MutationKind::FlipElim:
        return mk_const(kFlips.at(t->name), t->args);
      case MutationKind::SwapArgs: {
        auto [i, j] = swap_pair(t);
        std::vector<TermPtr> args = t->args;
        std::swap(args[size_t(i)], args[size_t(j)]);
        return mk_const(t->name, std::move(args));
      }
      default:
        return t;
    }
  }

  TermPtr run(const TermPtr& t) {
    if (done) return t;
    if (candidate(t) && seen++ == target) {
      done = true;
      return mutate(t);
    }
    switch (t->tag) {
      case Tag::Pi:
      case Tag::Lam: {
        TermPtr a = run(t->a), b = run(t->b);
        if (a == t->a && b == t->b) return t;
        return t->tag == Tag::Pi ? mk_pi(t->name, a, b) : mk_lam(t->name, a, b);
      }
      case Tag::App: {
        TermPtr a = run(t->a), b = run(t->b);
        if (a == t->a && b == t->b) return t;
        return mk_app(a, b);
      }
      case Tag::Const: {
        std::vector<TermPtr> args;
        bool changed = false;
        for (const auto& x : t->args) {
          args.push_back(run(x));
          changed |= args.back() != x;
        }
        return changed ? mk_const(t->name, std::move(args)) : t;
      }
      default:
        return t;
    }
  }
};

bool is_named(const std::string& name) { return name.find('.') == std::string::npos; }

}  // namespace

bool apply_mutation(std::vector<DefPtr>& defs, const Mutant& m) {
  auto it = std::find_if(defs.begin(), defs.end(),
                         [&](const DefPtr& d) { return d->name == m.target; });
  if (m.kind == MutationKind::Identity || it == defs.end()) return false;
  if (m.kind == MutationKind::DeletePrim) {
    defs.erase(it);
    return true;
  }
  if (!(*it)->body) return false;
  Rewriter rw{m.kind, m.occurrence};
  TermPtr body = rw.run((*it)->body);
  if (!rw.done || alpha_eq(body, (*it)->body)) return false;
  auto d = std::make_shared<Definition>(**it);
  d->body = body;
  *it = d;
  return true;
}

bool MutantResult::passed() const {
  if (!applied) return kind == MutationKind::Identity && !rejected;
  return rejected && !fuel && expectation_met;
}

bool MutationReport::ok() const {
  if (!baseline_ok) return false;
  for (const auto& r : results)
    if (!r.passed()) return false;
  return true;
}

MutationReport run_mutations(const std::vector<DefPtr>& baseline,
                             const std::vector<Mutant>& mutants, uint64_t fuel) {
  MutationReport rep;
  rep.baseline_ok = check_environment(baseline, false, fuel).ok();
  for (const auto& m : mutants) {
    MutantResult r;
    r.name = m.name;
    r.kind = m.kind;
    std::vector<DefPtr> defs = baseline;
    r.applied = apply_mutation(defs, m);
    EnvironmentReport er = check_environment(defs, true, fuel);
    for (const auto& x : er.results) {
      if (x.ok) continue;
      if (x.kind == ErrorKind::FuelExhausted) r.fuel = true;
      if (!r.rejected) {
        r.first_failure = x.name;
        r.first_kind = x.kind;
      }
      r.rejected = true;
      if (is_named(x.name)) r.failed.push_back(x.name);
    }
    if (!m.expect_failures.empty()) {
      std::set<std::string> want(m.expect_failures.begin(), m.expect_failures.end());
      std::set<std::string> got(r.failed.begin(), r.failed.end());
      r.expectation_met = want == got;
    }
    rep.results.push_back(std::move(r));
  }
  return rep;
}

MutationReport run_mutations(const std::string& corpus_path, const std::vector<Mutant>& mutants,
                             uint64_t fuel) {
  Environment env;
  ElabOptions eo;
  eo.fuel = fuel;
  Elaborator el(env, eo);
  for (const auto& f : expand_paths({corpus_path})) el.run_file(f);
  if (el.failed()) {
    MutationReport rep;
    rep.baseline_ok = false;
    return rep;
  }
  return run_mutations(el.definitions(), mutants, fuel);
}

std::string mutation_report_text(const MutationReport& r) {
  std::ostringstream os;
  if (!r.baseline_ok) os << "baseline corpus does not check\n";
  size_t passed = 0;
  for (const auto& m : r.results) {
    passed += m.passed();
    os << (m.passed() ? "pass " : "FAIL ") << m.name << ": ";
    if (!m.applied)
      os << (m.rejected ? "non-mutant rejected" : "non-mutant accepted");
    else if (!m.rejected)
      os << "AcceptedMutant(" << m.name << ")";
    else {
      os << "rejected at " << m.first_failure << " (" << kind_name(m.first_kind) << ")";
      if (m.fuel) os << ", fuel exhausted";
      if (!m.expectation_met) {
        os << ", unexpected failure set:";
        for (const auto& f : m.failed) os << " " << f;
      }
    }
    os << "\n";
  }
  os << passed << " of " << r.results.size() << " mutants behaved as expected\n";
  return os.str();
}

}  // namespace ldc
