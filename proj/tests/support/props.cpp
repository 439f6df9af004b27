#include "props.hpp"

#include <random>
#include <sstream>

#include "ldcheck/corpus.hpp"
#include "ldcheck/surface.hpp"
#include "naive.hpp"
#include "random_terms.hpp"

namespace props {

using ldc::Tag;

std::string Outcome::line() const {
  std::ostringstream os;
  os << name << ": " << checked << " checked, " << failures << " failures";
  if (failures) os << " (first: " << first << ")";
  return os.str();
}

namespace {

struct Sampler {
  size_t n;
  uint32_t max_size;
  std::mt19937 rng;
  std::vector<Site> out;
  size_t seen = 0;
  const ldc::Definition* def = nullptr;

  void visit(const TermPtr& t, Context& ctx) {
    if (t->tag != Tag::Sort && t->tag != Tag::Var && t->size <= max_size) {
      ++seen;
      if (out.size() < n) {
        out.push_back({def, ctx, t});
      } else {
        size_t k = std::uniform_int_distribution<size_t>(0, seen - 1)(rng);
        if (k < n) out[k] = {def, ctx, t};
      }
    }
    switch (t->tag) {
      case Tag::Pi:
      case Tag::Lam:
        visit(t->a, ctx);
        ctx.push_back({t->name, t->a});
        visit(t->b, ctx);
        ctx.pop_back();
        return;
      case Tag::App:
        visit(t->a, ctx);
        visit(t->b, ctx);
        return;
      case Tag::Const:
        for (const auto& x : t->args) visit(x, ctx);
        return;
      default:
        return;
    }
  }
};

struct Loaded {
  ldc::Environment env;
  std::vector<ldc::DefPtr> defs;
  Loaded() {
    ldc::Elaborator el(env);
    std::string root = ldc::corpus_dir();
    for (const auto& f : ldc::expand_paths({root + "/prelude", root + "/groups"}))
      if (!el.run_file(f)) throw std::runtime_error("corpus does not check: " + f);
    defs = el.definitions();
  }
};

TermPtr beta_step(const TermPtr& t) {
  switch (t->tag) {
    case Tag::App: {
      if (t->a->tag == Tag::Lam) return ldc::subst(t->a->b, 0, t->b);
      if (auto a = beta_step(t->a)) return ldc::mk_app(a, t->b);
      if (auto b = beta_step(t->b)) return ldc::mk_app(t->a, b);
      return nullptr;
    }
    case Tag::Pi:
    case Tag::Lam: {
      if (auto a = beta_step(t->a))
        return t->tag == Tag::Pi ? ldc::mk_pi(t->name, a, t->b) : ldc::mk_lam(t->name, a, t->b);
      if (auto b = beta_step(t->b))
        return t->tag == Tag::Pi ? ldc::mk_pi(t->name, t->a, b) : ldc::mk_lam(t->name, t->a, b);
      return nullptr;
    }
    case Tag::Const:
      for (size_t i = 0; i < t->args.size(); ++i)
        if (auto x = beta_step(t->args[i])) {
          auto args = t->args;
          args[i] = x;
          return ldc::mk_const(t->name, std::move(args));
        }
      return nullptr;
    default:
      return nullptr;
  }
}

TermPtr delta_step(const ldc::Environment& env, const TermPtr& t) {
  switch (t->tag) {
    case Tag::Const: {
      const ldc::Definition* d = env.find(t->name);
      if (d && d->body) return ldc::instantiate(d->body, t->args);
      for (size_t i = 0; i < t->args.size(); ++i)
        if (auto x = delta_step(env, t->args[i])) {
          auto args = t->args;
          args[i] = x;
          return ldc::mk_const(t->name, std::move(args));
        }
      return nullptr;
    }
    case Tag::App: {
      if (auto a = delta_step(env, t->a)) return ldc::mk_app(a, t->b);
      if (auto b = delta_step(env, t->b)) return ldc::mk_app(t->a, b);
      return nullptr;
    }
    case Tag::Pi:
    case Tag::Lam: {
      if (auto a = delta_step(env, t->a))
        return t->tag == Tag::Pi ? ldc::mk_pi(t->name, a, t->b) : ldc::mk_lam(t->name, a, t->b);
      if (auto b = delta_step(env, t->b))
        return t->tag == Tag::Pi ? ldc::mk_pi(t->name, t->a, b) : ldc::mk_lam(t->name, t->a, b);
      return nullptr;
    }
    default:
      return nullptr;
  }
}

std::string where(const Site& s) {
  return (s.def ? s.def->name : std::string("?")) + ": " + ldc::show(s.term);
}

}  // namespace

std::vector<Site> sample_sites(const ldc::Environment& env, size_t n, uint32_t seed,
                               uint32_t max_size) {
  Sampler s{n, max_size, std::mt19937(seed), {}};
  for (const auto& d : env.defs()) {
    s.def = d.get();
    Context ctx(d->params.begin(), d->params.end());
    s.visit(d->type, ctx);
    if (d->body) s.visit(d->body, ctx);
  }
  return s.out;
}

static Loaded& loaded() {
  static Loaded l;
  return l;
}

const ldc::Environment& corpus_env() { return loaded().env; }
const std::vector<ldc::DefPtr>& corpus_defs() { return loaded().defs; }

std::vector<ldc::DefPtr> prelude_defs() {
  std::vector<ldc::DefPtr> out;
  for (const auto& d : corpus_defs()) {
    if (d->span.file.find("/prelude/") == std::string::npos) break;
    out.push_back(d);
  }
  return out;
}

bool redex_free(const ldc::Environment& env, const TermPtr& t) {
  switch (t->tag) {
    case Tag::App:
      return t->a->tag != Tag::Lam && redex_free(env, t->a) && redex_free(env, t->b);
    case Tag::Pi:
    case Tag::Lam:
      return redex_free(env, t->a) && redex_free(env, t->b);
    case Tag::Const: {
      const ldc::Definition* d = env.find(t->name);
      if (d && d->body) return false;
      for (const auto& x : t->args)
        if (!redex_free(env, x)) return false;
      return true;
    }
    default:
      return true;
  }
}

Outcome alpha_laws(size_t n, uint32_t seed) {
  Outcome o{"alpha-equivalence laws"};
  std::mt19937 rng(seed);
  for (size_t i = 0; i < n; ++i) {
    int depth = int(rng() % 7);
    TermPtr t = oracle::random_term(rng, depth, 2);
    TermPtr u = oracle::rehint(t, rng), w = oracle::rehint(u, rng);
    TermPtr s = oracle::random_term(rng, depth, 2);
    ++o.checked;
    if (!ldc::alpha_eq(t, t)) o.fail("reflexivity: " + ldc::show(t));
    if (!ldc::alpha_eq(t, u) || !ldc::alpha_eq(u, t)) o.fail("renaming: " + ldc::show(t));
    if (!ldc::alpha_eq(u, w) || !ldc::alpha_eq(t, w)) o.fail("transitivity: " + ldc::show(t));
    bool ts = ldc::alpha_eq(t, s);
    if (ts != ldc::alpha_eq(s, t)) o.fail("symmetry: " + ldc::show(t) + " vs " + ldc::show(s));
    if (ts != oracle::named_alpha(oracle::to_named(t), oracle::to_named(s)))
      o.fail("named oracle: " + ldc::show(t) + " vs " + ldc::show(s));
    if (!oracle::named_alpha(oracle::to_named(t), oracle::to_named(u)))
      o.fail("named renaming: " + ldc::show(t));
  }
  return o;
}

Outcome shift_subst_laws(size_t n, uint32_t seed) {
  Outcome o{"shift and substitution laws"};
  std::mt19937 rng(seed);
  for (size_t i = 0; i < n; ++i) {
    TermPtr t = oracle::random_term(rng, int(rng() % 6), 3);
    TermPtr v = oracle::random_term(rng, int(rng() % 4), 3);
    long d = 1 + long(rng() % 2);
    unsigned c = unsigned(rng() % 3), j = unsigned(rng() % 3);
    auto nt = oracle::to_named(t);
    ++o.checked;
    if (!ldc::alpha_eq(ldc::shift(t, d, c), oracle::from_named(oracle::named_shift(nt, d, c))))
      o.fail("shift vs oracle: " + ldc::show(t));
    auto nv = oracle::named_shift(oracle::to_named(v), long(j), 0);
    if (!ldc::alpha_eq(ldc::subst(t, j, v), oracle::from_named(oracle::named_subst(nt, j, nv))))
      o.fail("subst vs oracle: " + ldc::show(t) + " [" + std::to_string(j) + " := " +
             ldc::show(v) + "]");
    if (!ldc::alpha_eq(ldc::subst(ldc::shift(t, 1, 0), 0, v), t))
      o.fail("subst after shift: " + ldc::show(t));
    if (ldc::shift(t, 0, c) != t) o.fail("shift by zero: " + ldc::show(t));
    if (!ldc::alpha_eq(ldc::shift(ldc::shift(t, d, c), -d, c), t))
      o.fail("shift round trip: " + ldc::show(t));
  }
  return o;
}

Outcome unique_typing(const ldc::Environment& env, const std::vector<Site>& sites, size_t n) {
  Outcome o{"unique typing"};
  for (const auto& s : sites) {
    if (o.checked >= n) break;
    ++o.checked;
    try {
      Context c1 = s.ctx, c2 = s.ctx;
      ldc::Kernel k(env);
      TermPtr t1 = k.infer(c1, s.term);
      naive::Checker nc(env);
      TermPtr t2 = nc.infer(c2, s.term);
      if (!k.convertible(t1, t2) || !nc.convertible(t1, t2)) o.fail("types differ at " + where(s));
    } catch (const ldc::Error& e) {
      o.fail(where(s) + ": " + e.what());
    }
  }
  return o;
}

Outcome subject_reduction(const ldc::Environment& env, const std::vector<Site>& sites, size_t n) {
  Outcome o{"subject reduction"};
  for (const auto& s : sites) {
    if (o.checked >= n) break;
    TermPtr t = s.term, next;
    for (int round = 0; round < 40 && t; ++round) {
      if ((next = beta_step(t))) break;
      t = delta_step(env, t);
    }
    if (!next) continue;
    ++o.checked;
    try {
      Context c = s.ctx;
      ldc::Kernel k(env);
      TermPtr before = k.infer(c, t);
      TermPtr after = k.infer(c, next);
      TermPtr orig = k.infer(c, s.term);
      if (!k.convertible(before, after) || !k.convertible(orig, after))
        o.fail("type changed by a beta step at " + where(s));
    } catch (const ldc::Error& e) {
      o.fail(where(s) + ": " + e.what());
    }
  }
  return o;
}

Outcome normalize_laws(const ldc::Environment& env, const std::vector<Site>& sites, size_t n) {
  Outcome o{"normalize idempotence"};
  for (const auto& s : sites) {
    if (o.checked >= n) break;
    ldc::Kernel k(env);
    TermPtr n1;
    try {
      n1 = k.normalize(s.term);
    } catch (const ldc::Error& e) {
      if (e.kind == ldc::ErrorKind::FuelExhausted) continue;
      o.fail(where(s) + ": " + e.what());
      continue;
    }
    ++o.checked;
    if (!ldc::alpha_eq(k.normalize(n1), n1)) o.fail("not idempotent at " + where(s));
    if (!redex_free(env, n1)) o.fail("redex left at " + where(s));
  }
  return o;
}

Outcome verdict_agreement(const std::vector<ldc::DefPtr>& defs) {
  Outcome o{"definition verdicts"};
  auto kr = ldc::check_environment(defs, true);
  auto nr = naive::check_all(defs);
  for (size_t i = 0; i < defs.size(); ++i) {
    ++o.checked;
    if (kr.results[i].ok != nr[i].ok)
      o.fail(defs[i]->name + ": kernel " + (kr.results[i].ok ? "accepts" : "rejects") +
             ", naive " + (nr[i].ok ? "accepts" : "rejects"));
  }
  return o;
}

Outcome mutant_agreement(const std::vector<ldc::DefPtr>& defs,
                         const std::vector<ldc::Mutant>& mutants) {
  Outcome o{"mutant verdicts"};
  for (const auto& m : mutants) {
    std::vector<ldc::DefPtr> mutated = defs;
    if (!ldc::apply_mutation(mutated, m)) continue;
    ++o.checked;
    ldc::Environment env;
    auto kr = ldc::check_environment(mutated, false, ldc::kDefaultFuel, &env);
    if (kr.ok()) {
      o.fail(m.name + ": kernel accepts");
      continue;
    }
    const std::string& bad = kr.results.back().name;
    for (const auto& d : mutated)
      if (d->name == bad) {
        try {
          naive::Checker(env).check_definition(*d);
          o.fail(m.name + ": naive accepts " + bad);
        } catch (const ldc::Error&) {
        }
        break;
      }
  }
  return o;
}

Outcome conversion_agreement(const ldc::Environment& env, const std::vector<Site>& sites,
                             size_t n, size_t* positives) {
  Outcome o{"conversion queries"};
  size_t pos = 0;
  std::vector<TermPtr> types(sites.size());
  for (size_t i = 0; i < sites.size(); ++i) {
    Context c = sites[i].ctx;
    try {
      types[i] = ldc::Kernel(env).infer(c, sites[i].term);
    } catch (const ldc::Error&) {
    }
  }
  for (size_t i = 0; i < sites.size() && o.checked < n; ++i) {
    if (!types[i]) continue;
    const Site& s = sites[i];
    const TermPtr& a = types[i];
    std::vector<std::pair<TermPtr, TermPtr>> queries;
    queries.emplace_back(a, ldc::whnf(env, a));
    if (auto u = delta_step(env, s.term)) queries.emplace_back(s.term, u);
    for (size_t j = i + 1; j < sites.size(); ++j)
      if (types[j] && sites[j].ctx.size() == s.ctx.size()) {
        queries.emplace_back(a, types[j]);
        queries.emplace_back(s.term, sites[j].term);
        break;
      }
    for (const auto& [x, y] : queries) {
      if (o.checked >= n) break;
      ++o.checked;
      int kv, nv;
      try {
        kv = ldc::Kernel(env).convertible(x, y);
      } catch (const ldc::Error&) {
        kv = -1;
      }
      try {
        nv = naive::Checker(env).convertible(x, y);
      } catch (const ldc::Error&) {
        nv = -1;
      }
      pos += kv == 1;
      if (kv != nv) o.fail(where(s) + ": kernel " + std::to_string(kv) + ", naive " + std::to_string(nv));
    }
  }
  if (positives) *positives = pos;
  return o;
}

Outcome round_trip(const std::vector<ldc::DefPtr>& defs) {
  Outcome o{"round trip"};
  ldc::Environment env;
  ldc::ElabOptions eo;
  eo.check = false;
  ldc::Elaborator el(env, eo);
  for (const auto& d : defs) {
    ++o.checked;
    std::string text = ldc::pretty_print(*d);
    try {
      size_t before = el.definitions().size();
      el.run_module(ldc::parse_module(text, d->name));
      if (el.definitions().size() != before + 1) throw std::runtime_error("no definition produced");
      const auto& e = el.definitions().back();
      bool same = e->name == d->name && e->params.size() == d->params.size() &&
                  ldc::alpha_eq(e->type, d->type) &&
                  (d->body ? e->body && ldc::alpha_eq(e->body, d->body) : !e->body);
      for (size_t i = 0; same && i < d->params.size(); ++i)
        same = ldc::alpha_eq(e->params[i].type, d->params[i].type);
      if (!same) throw std::runtime_error("differs after reparsing");
    } catch (const std::exception& ex) {
      o.fail(d->name + ": " + ex.what());
      if (!env.contains(d->name)) env.add(d);
    }
  }
  return o;
}

}  // namespace props
