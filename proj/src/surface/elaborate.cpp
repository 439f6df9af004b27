#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ldcheck/surface.hpp"

namespace fs = std::filesystem;

namespace ldc {

namespace {

// Signals that an argument needs an expected type to solve its implicits.
struct NeedsExpected {};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::string> expand_paths(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> files;
      for (const auto& e : fs::recursive_directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".ld") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else if (fs::exists(p, ec)) {
      out.push_back(p);
    } else {
      throw Error(ErrorKind::IOError, "no such file or directory: '" + p + "'");
    }
  }
  return out;
}

struct Elaborator::Impl {
  Elaborator& owner;
  Environment& env;
  ElabOptions opts;
  std::shared_ptr<SchemaMemo> memo = std::make_shared<SchemaMemo>();
  Kernel k;

  Context ctx;
  std::vector<uint64_t> ctx_seq;

  struct Local {
    std::string kname;
    uint64_t seq;
    std::vector<std::string> params;
    bool restated = false;
  };
  bool in_proof = false;
  std::string proof_name;
  std::map<std::string, std::vector<Local>> locals;
  uint64_t seq = 0;

  std::vector<TermPtr> sol;
  std::vector<std::string> meta_names;

  std::set<std::string> loaded;
  std::vector<std::string> loading;
  std::string current_file;

  Impl(Elaborator& o, Environment& e, ElabOptions op)
      : owner(o), env(e), opts(op), k(e, UINT64_MAX, memo) {}

  // ---- scope ----

  struct Resolved {
    enum { None, Var, Const } kind = None;
    uint32_t level = 0;
    std::string kname;
  };

  Resolved resolve_local(const std::string& name) const {
    Resolved r;
    uint64_t best = 0;
    bool found = false;
    for (size_t i = ctx.size(); i-- > 0;) {
      if (ctx[i].name == name) {
        r.kind = Resolved::Var;
        r.level = uint32_t(i);
        best = ctx_seq[i];
        found = true;
        break;
      }
    }
    auto it = locals.find(name);
    if (in_proof && it != locals.end() && !it->second.empty()) {
      // A new step shadows all earlier ones; a restatement only where its flags are open.
      const auto& es = it->second;
      size_t first = es.size() - 1;
      while (first > 0 && es[first].restated) --first;
      const Local* pick = &es[first];
      for (size_t j = es.size(); j-- > first;) {
        const Local& c = es[j];
        bool visible = std::all_of(c.params.begin(), c.params.end(), [&](const std::string& n) {
          return std::any_of(ctx.begin(), ctx.end(), [&](const Param& q) { return q.name == n; });
        });
        if (visible) {
          pick = &c;
          break;
        }
      }
      const Local& l = *pick;
      if (!found || l.seq > best) {
        r.kind = Resolved::Const;
        r.kname = l.kname;
      }
    }
    return r;
  }

  Resolved resolve_var(const std::string& name) const {
    Resolved r;
    for (size_t i = ctx.size(); i-- > 0;) {
      if (ctx[i].name == name) {
        r.kind = Resolved::Var;
        r.level = uint32_t(i);
        break;
      }
    }
    return r;
  }

  Resolved resolve(const std::string& name) const {
    Resolved r = resolve_local(name);
    if (r.kind != Resolved::None) return r;
    if (env.find(name)) {
      r.kind = Resolved::Const;
      r.kname = name;
    }
    return r;
  }

  TermPtr var_term(uint32_t level) const {
    return mk_var(uint32_t(ctx.size()) - 1 - level, ctx[level].name);
  }

  void push(const std::string& name, TermPtr type, bool implicit = false) {
    ctx.push_back({name, std::move(type), implicit});
    ctx_seq.push_back(++seq);
  }

  void pop(size_t n = 1) {
    for (size_t i = 0; i < n; ++i) {
      ctx.pop_back();
      ctx_seq.pop_back();
    }
  }

  // ---- implicit arguments ----

  TermPtr new_meta(const std::string& what) {
    sol.push_back(nullptr);
    meta_names.push_back(what);
    return mk_meta(uint32_t(sol.size() - 1), 0);
  }

  TermPtr zonk(const TermPtr& t) {
    if (!has_meta(t)) return t;
    switch (t->tag) {
      case Tag::Meta: {
        const TermPtr& s = sol[t->meta];
        if (!s) return t;
        return shift(zonk(s), t->index);
      }
      case Tag::Pi:
        return mk_pi(t->name, zonk(t->a), zonk(t->b));
      case Tag::Lam:
        return mk_lam(t->name, zonk(t->a), zonk(t->b));
      case Tag::App:
        return mk_app(zonk(t->a), zonk(t->b));
      case Tag::Const: {
        std::vector<TermPtr> args;
        for (const auto& x : t->args) args.push_back(zonk(x));
        return mk_const(t->name, std::move(args));
      }
      default:
        return t;
    }
  }

  // Smallest free variable index, or INT64_MAX when closed.
  static int64_t min_free(const TermPtr& t, uint32_t depth) {
    if (t->loose <= depth) return INT64_MAX;
    switch (t->tag) {
      case Tag::Var:
        return t->index >= depth ? int64_t(t->index - depth) : INT64_MAX;
      case Tag::Pi:
      case Tag::Lam:
        return std::min(min_free(t->a, depth), min_free(t->b, depth + 1));
      case Tag::App:
        return std::min(min_free(t->a, depth), min_free(t->b, depth));
      case Tag::Const: {
        int64_t m = INT64_MAX;
        for (const auto& x : t->args) m = std::min(m, min_free(x, depth));
        return m;
      }
      default:
        return INT64_MAX;
    }
  }

  static bool occurs(uint32_t id, const TermPtr& t) {
    if (!has_meta(t)) return false;
    switch (t->tag) {
      case Tag::Meta:
        return t->meta == id;
      case Tag::Pi:
      case Tag::Lam:
      case Tag::App:
        return occurs(id, t->a) || occurs(id, t->b);
      case Tag::Const:
        for (const auto& x : t->args)
          if (occurs(id, x)) return true;
        return false;
      default:
        return false;
    }
  }

  bool assign(const TermPtr& m, TermPtr t) {
    t = zonk(t);
    if (t->tag == Tag::Meta && t->meta == m->meta) return t->index == m->index;
    if (occurs(m->meta, t)) return false;
    try {
      sol[m->meta] = shift(t, -int64_t(m->index));
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  // Binder types crossed by unification, innermost last.
  std::vector<TermPtr> ubind;

  struct NotPattern {};

  // Moves t (under `depth` extra binders) from the current context into the
  // meta's context extended by n lambdas binding the pattern variables.
  TermPtr pattern_rename(const TermPtr& t, const std::vector<uint32_t>& vars, uint32_t k, uint32_t n,
                         uint32_t depth) {
    switch (t->tag) {
      case Tag::Sort:
        return t;
      case Tag::Var: {
        uint32_t i = t->index;
        if (i < depth) return t;
        i -= depth;
        if (i < k) {
          for (uint32_t j = 0; j < n; ++j)
            if (vars[j] == i) return mk_var(depth + n - 1 - j, t->name);
          throw NotPattern{};
        }
        return mk_var(i - k + n + depth, t->name);
      }
      case Tag::Meta: {
        if (t->index < depth + k) throw NotPattern{};
        return mk_meta(t->meta, t->index - k + n);
      }
      case Tag::Pi:
      case Tag::Lam:
      {
        TermPtr a = pattern_rename(t->a, vars, k, n, depth);
        TermPtr b = pattern_rename(t->b, vars, k, n, depth + 1);
        return t->tag == Tag::Pi ? mk_pi(t->name, a, b) : mk_lam(t->name, a, b);
      }
      case Tag::App:
        return mk_app(pattern_rename(t->a, vars, k, n, depth), pattern_rename(t->b, vars, k, n, depth));
      case Tag::Const: {
        std::vector<TermPtr> args;
        for (const auto& x : t->args) args.push_back(pattern_rename(x, vars, k, n, depth));
        return mk_const(t->name, std::move(args));
      }
    }
    return t;
  }

  static TermPtr eta_contract(TermPtr t) {
    while (t->tag == Tag::Lam && t->b->tag == Tag::App && t->b->b->tag == Tag::Var &&
           t->b->b->index == 0) {
      try {
        t = shift(t->b->a, -1, 0);
      } catch (const Error&) {
        break;
      }
    }
    return t;
  }

  // ?m x1 .. xn := t for distinct variables bound since ?m was created.
  bool pattern(const TermPtr& m, const std::vector<TermPtr>& sp, const TermPtr& t) {
    if (sp.empty() || sol[m->meta]) return false;
    uint32_t k = m->index;
    std::vector<uint32_t> vars;
    for (const auto& x : sp) {
      if (x->tag != Tag::Var || x->index >= k || x->index >= ubind.size()) return false;
      if (std::find(vars.begin(), vars.end(), x->index) != vars.end()) return false;
      vars.push_back(x->index);
    }
    if (occurs(m->meta, t)) return false;
    try {
      uint32_t n = uint32_t(vars.size());
      TermPtr body = pattern_rename(t, vars, k, n, 0);
      std::vector<TermPtr> doms;
      for (uint32_t j = 0; j < n; ++j) {
        uint32_t i = vars[j];
        TermPtr ty = shift(ubind[ubind.size() - 1 - i], i + 1);
        doms.push_back(pattern_rename(ty, std::vector<uint32_t>(vars.begin(), vars.begin() + j), k, j, 0));
      }
      for (uint32_t j = n; j-- > 0;) body = mk_lam(sp[j]->name, doms[j], body);
      sol[m->meta] = eta_contract(body);
    } catch (const NotPattern&) {
      return false;
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  bool unify_all(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!unify(a[i], b[i])) return false;
    return true;
  }

  TermPtr unfold(const TermPtr& t) {
    std::vector<TermPtr> sp;
    TermPtr head = spine(t, sp);
    return k.whnf_beta(mk_apps(k.delta_unfold(head), sp));
  }

  bool unify(TermPtr a, TermPtr b) {
    a = zonk(a);
    b = zonk(b);
    if (!has_meta(a) && !has_meta(b)) return k.convertible(a, b);
    if (a->tag == Tag::Meta) return assign(a, b);
    if (b->tag == Tag::Meta) return assign(b, a);
    a = k.whnf_beta(a);
    b = k.whnf_beta(b);
    std::vector<TermPtr> sa, sb;
    for (int guard = 0; guard < 100000; ++guard) {
      a = k.whnf_beta(zonk(a));
      b = k.whnf_beta(zonk(b));
      if (!has_meta(a) && !has_meta(b)) return k.convertible(a, b);
      if (a->tag == Tag::Meta) return assign(a, b);
      if (b->tag == Tag::Meta) return assign(b, a);
      TermPtr ha = spine(a, sa), hb = spine(b, sb);
      const Definition* da = ha->tag == Tag::Const ? env.find(ha->name) : nullptr;
      const Definition* db = hb->tag == Tag::Const ? env.find(hb->name) : nullptr;
      bool ua = da && !da->primitive();
      bool ub = db && !db->primitive();
      if (ha->tag == Tag::Const && hb->tag == Tag::Const && ha->name == hb->name &&
          sa.size() == sb.size()) {
        auto saved = sol;
        if (unify_all(ha->args, hb->args) && unify_all(sa, sb)) return true;
        sol = saved;
        if (!ua) return false;
        a = unfold(a);
        b = unfold(b);
        continue;
      }
      if (ha->tag == Tag::Meta && pattern(ha, sa, b)) return true;
      if (hb->tag == Tag::Meta && pattern(hb, sb, a)) return true;
      if (ha->tag == Tag::Meta || hb->tag == Tag::Meta) {
        // First order: the meta takes the longer spine's extra prefix.
        size_t n = std::min(sa.size(), sb.size());
        TermPtr fa = mk_apps(ha, std::vector<TermPtr>(sa.begin(), sa.end() - n));
        TermPtr fb = mk_apps(hb, std::vector<TermPtr>(sb.begin(), sb.end() - n));
        auto saved = sol;
        if (n > 0 && unify(fa, fb) &&
            unify_all(std::vector<TermPtr>(sa.end() - n, sa.end()),
                      std::vector<TermPtr>(sb.end() - n, sb.end())))
          return true;
        sol = saved;
        if (ua) {
          a = unfold(a);
          continue;
        }
        if (ub) {
          b = unfold(b);
          continue;
        }
        return false;
      }
      if (ua && ub) {
        if (env.position(ha->name) >= env.position(hb->name))
          a = unfold(a);
        else
          b = unfold(b);
        continue;
      }
      if (ua) {
        a = unfold(a);
        continue;
      }
      if (ub) {
        b = unfold(b);
        continue;
      }
      if (ha->tag != hb->tag || sa.size() != sb.size()) return false;
      switch (ha->tag) {
        case Tag::Sort:
          return ha->sort == hb->sort;
        case Tag::Var:
          return ha->index == hb->index && unify_all(sa, sb);
        case Tag::Pi:
        case Tag::Lam:
          if (!unify(ha->a, hb->a)) return false;
          {
            ubind.push_back(ha->a);
            bool ok = unify(ha->b, hb->b);
            ubind.pop_back();
            if (!ok) return false;
          }
          return unify_all(sa, sb);
        default:
          return false;
      }
    }
    return false;
  }

  // ---- expressions ----

  std::string names_show(const TermPtr& t) const {
    std::vector<std::string> names;
    for (const auto& p : ctx) names.push_back(p.name);
    return pretty_term(t, names);
  }

  [[noreturn]] void mismatch(const ExprPtr& e, const TermPtr& actual, const TermPtr& expected,
                             const std::string& what) {
    throw Error(ErrorKind::TypeMismatch,
                what + " has type '" + names_show(zonk(actual)) + "' but '" +
                    names_show(zonk(expected)) + "' was expected",
                e->span);
  }

  TermPtr infer(const TermPtr& t) { return k.infer(ctx, t); }

  TermPtr elab_type(const ExprPtr& e) {
    if (e->k == Expr::K::Sort && e->sort == Sort::Box) return mk_box();
    TermPtr t = elab(e, nullptr);
    try {
      k.sort_of(ctx, t);
    } catch (Error& err) {
      if (err.span.empty()) err.span = e->span;
      throw;
    }
    return t;
  }

  TermPtr elab(const ExprPtr& e, const TermPtr& expected) {
    try {
      return elab_inner(e, expected);
    } catch (Error& err) {
      if (err.span.empty()) err.span = e->span;
      throw;
    }
  }

  TermPtr elab_inner(const ExprPtr& e, const TermPtr& expected) {
    switch (e->k) {
      case Expr::K::Sort:
        if (e->sort == Sort::Box) throw Error(ErrorKind::SortError, "Box has no type", e->span);
        return mk_star();
      case Expr::K::Hole:
        throw NeedsExpected{};
      case Expr::K::Name: {
        Resolved r = resolve(e->name);
        if (r.kind == Resolved::None)
          throw Error(ErrorKind::UnboundName, "unbound name '" + e->name + "'", e->span);
        if (r.kind == Resolved::Var) return var_term(r.level);
        return elab_const(r.kname, {}, false, e, expected);
      }
      case Expr::K::Call: {
        if (e->explicit_all) {
          if (!env.find(e->name))
            throw Error(ErrorKind::UnknownConstant, "unknown constant '" + e->name + "'", e->span);
          return elab_const(e->name, e->args, true, e, expected);
        }
        Resolved r = resolve(e->name);
        if (r.kind == Resolved::None)
          throw Error(ErrorKind::UnboundName, "unbound name '" + e->name + "'", e->span);
        if (r.kind == Resolved::Var) {
          TermPtr f = var_term(r.level);
          for (const auto& a : e->args) f = elab_apply(f, a, e);
          return f;
        }
        return elab_const(r.kname, e->args, false, e, expected);
      }
      case Expr::K::App: {
        TermPtr f = elab(e->args[0], nullptr);
        return elab_apply(f, e->args[1], e);
      }
      case Expr::K::Pi: {
        size_t n = 0;
        std::vector<TermPtr> doms;
        try {
          for (const auto& b : e->binders) {
            TermPtr d = elab_type(b.type);
            doms.push_back(d);
            push(b.name, d);
            ++n;
          }
          TermPtr body = elab_type(e->body);
          for (size_t i = n; i-- > 0;) {
            body = mk_pi(e->binders[i].name, doms[i], body);
          }
          pop(n);
          return body;
        } catch (...) {
          pop(n);
          throw;
        }
      }
      case Expr::K::Lam: {
        size_t n = 0;
        std::vector<TermPtr> doms;
        TermPtr exp = expected;
        try {
          for (const auto& b : e->binders) {
            TermPtr d = elab_type(b.type);
            doms.push_back(d);
            if (exp) {
              TermPtr w = k.whnf(exp);
              exp = w->tag == Tag::Pi ? w->b : nullptr;
            }
            push(b.name, d);
            ++n;
          }
          TermPtr body = elab(e->body, exp);
          for (size_t i = n; i-- > 0;) body = mk_lam(e->binders[i].name, doms[i], body);
          pop(n);
          return body;
        } catch (...) {
          pop(n);
          throw;
        }
      }
    }
    throw std::logic_error("unhandled expression");
  }

  TermPtr elab_apply(const TermPtr& f, const ExprPtr& arg, const ExprPtr& whole) {
    TermPtr ft = k.whnf(infer(f));
    if (ft->tag != Tag::Pi)
      throw Error(ErrorKind::NotAFunction,
                  "'" + names_show(f) + "' has non-function type '" + names_show(ft) + "'",
                  whole->span);
    TermPtr x = elab(arg, ft->a);
    TermPtr xt = infer(x);
    if (!k.convertible(xt, ft->a)) mismatch(arg, xt, ft->a, "argument '" + names_show(x) + "'");
    return mk_app(f, x);
  }

  // Picks how many leading parameters are filled from same-named variables.
  bool fill_prefix(const Definition& d, size_t j, std::vector<TermPtr>& out) {
    out.clear();
    for (size_t p = 0; p < j; ++p) {
      Resolved r = resolve_var(d.params[p].name);
      if (r.kind == Resolved::None) r = resolve_local(d.params[p].name);
      if (r.kind == Resolved::None || (r.kind == Resolved::Const && r.kname == d.name)) return false;
      if (r.kind == Resolved::Var) {
        out.push_back(var_term(r.level));
      } else {
        auto e = std::make_shared<Expr>();
        e->k = Expr::K::Name;
        e->name = d.params[p].name;
        try {
          out.push_back(elab_const(r.kname, {}, false, e, nullptr));
        } catch (const Error&) {
          return false;
        } catch (const NeedsExpected&) {
          return false;
        }
      }
    }
    return true;
  }

  TermPtr elab_const(const std::string& kname, const std::vector<ExprPtr>& given, bool explicit_all,
                     const ExprPtr& e, const TermPtr& expected) {
    const Definition& d = env.get(kname);
    size_t n = d.params.size();
    size_t j = 0;
    std::vector<TermPtr> prefix;
    if (explicit_all) {
      if (given.size() != n)
        throw Error(ErrorKind::ArityMismatch,
                    "'" + kname + "' expects " + std::to_string(n) + " arguments, got " +
                        std::to_string(given.size()),
                    e->span);
    } else {
      bool found = false;
      for (j = 0; j <= n; ++j) {
        size_t explicit_count = 0;
        for (size_t p = j; p < n; ++p) explicit_count += d.params[p].implicit ? 0 : 1;
        if (explicit_count != given.size()) continue;
        if (fill_prefix(d, j, prefix)) {
          found = true;
          break;
        }
      }
      if (!found)
        throw Error(ErrorKind::ArityMismatch,
                    "'" + kname + "' cannot be applied to " + std::to_string(given.size()) +
                        " arguments here (it has " + std::to_string(n) + " parameters)",
                    e->span);
    }

    std::vector<TermPtr> args(n);
    std::vector<ExprPtr> pending_expr(n);
    std::vector<TermPtr> pending_term(n);
    size_t gi = 0;
    for (size_t p = 0; p < n; ++p) {
      args[p] = new_meta(d.params[p].name + " of " + kname);
      if (p < j) {
        pending_term[p] = prefix[p];
      } else if (explicit_all || !d.params[p].implicit) {
        const ExprPtr& g = given[gi++];
        if (g->k != Expr::K::Hole) pending_expr[p] = g;
      }
    }

    auto settle = [&](size_t p, const TermPtr& t, const ExprPtr& src) {
      TermPtr expect_t = zonk(param_type(d, p, args));
      TermPtr actual = infer(t);
      bool kinded = is_sort(d.params[p].type, Sort::Star) && is_sort(k.whnf(actual), Sort::Box);
      if (!kinded && !unify(actual, expect_t)) {
        ExprPtr where = src ? src : e;
        mismatch(where, actual, expect_t,
                 "argument " + std::to_string(p + 1) + " (" + d.params[p].name + ") of '" + kname +
                     "'");
      }
      sol[args[p]->meta] = t;
    };

    std::vector<size_t> postponed;
    for (size_t p = 0; p < n; ++p) {
      if (pending_term[p]) {
        settle(p, pending_term[p], nullptr);
        continue;
      }
      if (!pending_expr[p]) continue;
      TermPtr expect_t = zonk(param_type(d, p, args));
      TermPtr t;
      if (!has_meta(expect_t) && !is_sort(d.params[p].type, Sort::Star)) {
        t = elab(pending_expr[p], expect_t);
      } else {
        try {
          t = elab(pending_expr[p], nullptr);
        } catch (const NeedsExpected&) {
          postponed.push_back(p);
          continue;
        } catch (const Error& err) {
          if (err.kind != ErrorKind::UnresolvedImplicit) throw;
          postponed.push_back(p);
          continue;
        }
      }
      settle(p, t, pending_expr[p]);
    }

    if (expected) {
      TermPtr result = zonk(instantiate(d.type, args));
      if (!unify(result, expected)) {
        if (postponed.empty() && !has_meta(zonk(result)))
          mismatch(e, result, expected, "'" + kname + "'");
      }
    }

    for (size_t p : postponed) {
      TermPtr expect_t = zonk(param_type(d, p, args));
      TermPtr t;
      try {
        t = elab(pending_expr[p], has_meta(expect_t) ? nullptr : expect_t);
      } catch (const NeedsExpected&) {
        throw Error(ErrorKind::UnresolvedImplicit,
                    "cannot infer argument " + std::to_string(p + 1) + " of '" + kname + "'",
                    pending_expr[p]->span);
      }
      settle(p, t, pending_expr[p]);
    }

    for (size_t p = 0; p < n; ++p) {
      args[p] = zonk(args[p]);
      if (has_meta(args[p])) {
        if (!expected) throw NeedsExpected{};
        throw Error(ErrorKind::UnresolvedImplicit,
                    "cannot infer parameter '" + d.params[p].name + "' of '" + kname + "'", e->span);
      }
    }
    return mk_const(kname, std::move(args));
  }

  TermPtr elab_top(const ExprPtr& e, const TermPtr& expected) {
    try {
      return elab(e, expected);
    } catch (const NeedsExpected&) {
      throw Error(ErrorKind::UnresolvedImplicit, "cannot infer implicit arguments", e->span);
    }
  }

  TermPtr elab_type_top(const ExprPtr& e) {
    try {
      return elab_type(e);
    } catch (const NeedsExpected&) {
      throw Error(ErrorKind::UnresolvedImplicit, "cannot infer implicit arguments", e->span);
    }
  }

  // ---- items ----

  std::string unique_name(std::string base) {
    while (env.contains(base)) base += "'";
    return base;
  }

  bool add_definition(std::shared_ptr<Definition> d) {
    DefinitionResult r;
    r.name = d->name;
    r.span = d->span;
    if (opts.check) {
      Kernel kc(env, opts.fuel, memo);
      try {
        kc.check_definition(*d);
      } catch (const Error& err) {
        r.ok = false;
        r.kind = err.kind;
        r.message = err.message;
      }
      r.stats = kc.stats;
    }
    owner.results_.push_back(r);
    if (!r.ok) {
      owner.failed_ = true;
      return false;
    }
    env.add(d);
    owner.defs_.push_back(d);
    return true;
  }

  void fail_item(const Item& it, const std::string& name, const Error& err) {
    DefinitionResult r;
    r.name = name;
    r.ok = false;
    r.kind = err.kind;
    r.message = err.message;
    r.span = err.span.empty() ? it.span : err.span;
    owner.results_.push_back(r);
    owner.failed_ = true;
  }

  static std::vector<std::string> param_names(const Definition& d) {
    std::vector<std::string> out;
    for (const auto& p : d.params) out.push_back(p.name);
    return out;
  }

  bool run_def(const Item& it) {
    sol.clear();
    std::string kname;
    if (it.k == Item::K::Let) {
      if (!in_proof) {
        fail_item(it, it.name, Error(ErrorKind::SyntaxError, "'let' outside a proof block", it.span));
        return opts.keep_going;
      }
      kname = unique_name(proof_name + "." + it.name);
    } else {
      kname = it.name;
    }
    size_t pushed = 0;
    auto d = std::make_shared<Definition>();
    try {
      if (env.contains(kname))
        throw Error(ErrorKind::DuplicateName, "'" + kname + "' is already defined", it.span);
      for (const auto& b : it.binders) {
        TermPtr t = elab_type_top(b.type);
        push(b.name, t, b.implicit);
        ++pushed;
      }
      k.stats = {};
      k.fuel = opts.fuel * 4;
      TermPtr type, body;
      if (it.type) type = elab_type_top(it.type);
      if (it.body) {
        body = elab_top(it.body, type);
        if (!type) type = infer(body);
      }
      d->name = kname;
      d->params = ctx;
      d->type = type;
      d->body = body;
      d->span = it.span;
    } catch (const Error& err) {
      pop(pushed);
      fail_item(it, kname, err);
      return opts.keep_going;
    }
    pop(pushed);
    bool ok = add_definition(d);
    if (ok && it.k == Item::K::Let) locals[it.name].push_back({kname, ++seq, param_names(*d)});
    return ok || opts.keep_going;
  }

  bool run_have(const Item& it) {
    sol.clear();
    std::string kname = proof_name + "." + it.name + "'";
    auto d = std::make_shared<Definition>();
    try {
      if (!in_proof) throw Error(ErrorKind::SyntaxError, "'have' outside a proof block", it.span);
      Resolved r = resolve_local(it.name);
      if (r.kind == Resolved::None)
        throw Error(ErrorKind::UnboundName, "unbound name '" + it.name + "'", it.span);
      auto ref = std::make_shared<Expr>();
      ref->k = Expr::K::Name;
      ref->name = it.name;
      ref->span = it.span;
      k.stats = {};
      k.fuel = opts.fuel * 4;
      TermPtr t = elab_top(ref, nullptr);
      TermPtr ty = elab_type_top(it.type);
      size_t depth = ctx.size();
      size_t m = r.kind == Resolved::Var ? r.level + 1 : env.get(r.kname).params.size();
      // Keep the smallest context prefix both terms live in.
      int64_t lowest = std::min(min_free(t, 0), min_free(ty, 0));
      if (lowest < int64_t(depth)) m = std::max<size_t>(m, depth - size_t(lowest));
      m = std::min(m, depth);
      int64_t drop = int64_t(depth - m);
      t = shift(t, -drop);
      ty = shift(ty, -drop);
      kname = unique_name(kname);
      d->name = kname;
      d->params.assign(ctx.begin(), ctx.begin() + m);
      d->type = ty;
      d->body = t;
      d->span = it.span;
    } catch (const Error& err) {
      fail_item(it, kname, err);
      return opts.keep_going;
    }
    bool ok = add_definition(d);
    if (ok) locals[it.name].push_back({kname, ++seq, param_names(*d), true});
    return ok || opts.keep_going;
  }

  bool run_items(const std::vector<Item>& items) {
    for (const auto& it : items)
      if (!run_item(it)) return false;
    return true;
  }

  bool run_item(const Item& it) {
    switch (it.k) {
      case Item::K::Import:
        return load_import(it);
      case Item::K::Def:
      case Item::K::Prim:
      case Item::K::Let:
        return run_def(it);
      case Item::K::Have:
        return run_have(it);
      case Item::K::Flag: {
        size_t pushed = 0;
        try {
          for (const auto& b : it.binders) {
            TermPtr t = elab_type_top(b.type);
            push(b.name, t, b.implicit);
            ++pushed;
          }
        } catch (const Error& err) {
          pop(pushed);
          fail_item(it, "flag", err);
          return false;
        }
        bool ok = run_items(it.items);
        pop(pushed);
        return ok;
      }
      case Item::K::Proof: {
        if (in_proof) {
          fail_item(it, it.name, Error(ErrorKind::SyntaxError, "nested proof block", it.span));
          return false;
        }
        in_proof = true;
        proof_name = it.name;
        locals.clear();
        bool ok = run_items(it.items);
        in_proof = false;
        locals.clear();
        return ok;
      }
    }
    return true;
  }

  bool load_import(const Item& it) {
    fs::path base = fs::path(current_file).parent_path();
    fs::path p = base / it.path;
    return load_file(p.string(), &it);
  }

  bool load_file(const std::string& path, const Item* from) {
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(fs::path(path), ec);
    std::string key = canon.string();
    if (loaded.count(key)) return true;
    if (std::find(loading.begin(), loading.end(), key) != loading.end())
      throw Error(ErrorKind::IOError, "import cycle through '" + path + "'",
                  from ? from->span : Span{});
    if (!fs::exists(canon, ec))
      throw Error(ErrorKind::IOError, "cannot read '" + path + "'", from ? from->span : Span{});
    std::string text = read_file(path);
    SourceModule m;
    try {
      m = parse_module(text, path);
    } catch (const Error& err) {
      DefinitionResult r;
      r.name = "<parse " + path + ">";
      r.ok = false;
      r.kind = err.kind;
      r.message = err.message;
      r.span = err.span;
      owner.results_.push_back(r);
      owner.failed_ = true;
      loaded.insert(key);
      return false;
    }
    loading.push_back(key);
    std::string saved = current_file;
    current_file = path;
    bool ok = run_module(m);
    current_file = saved;
    loading.pop_back();
    loaded.insert(key);
    return ok;
  }

  bool run_module(const SourceModule& m) {
    std::string saved = current_file;
    if (current_file.empty() || current_file != m.path) current_file = m.path;
    bool ok = run_items(m.items);
    current_file = saved;
    return ok;
  }
};

Elaborator::Elaborator(Environment& env, ElabOptions opts)
    : impl_(std::make_unique<Impl>(*this, env, opts)), env_(env), opts_(opts) {}

Elaborator::~Elaborator() = default;

bool Elaborator::run_file(const std::string& path) { return impl_->load_file(path, nullptr); }

bool Elaborator::run_module(const SourceModule& m) { return impl_->run_module(m); }

void Elaborator::assume_loaded(const std::string& path) {
  std::error_code ec;
  impl_->loaded.insert(fs::weakly_canonical(fs::path(path), ec).string());
}

TermPtr Elaborator::elaborate_closed(const ExprPtr& e, const TermPtr& expected) {
  return impl_->elab_top(e, expected);
}

}  // namespace ldc
