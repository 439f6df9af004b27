#include "ldcheck/kernel.hpp"

#include <sstream>

namespace ldc {

Kernel::Kernel(const Environment& env, uint64_t fuel, std::shared_ptr<SchemaMemo> memo)
    : fuel(fuel), env_(env), memo_(memo ? std::move(memo) : std::make_shared<SchemaMemo>()) {}

void Kernel::tick_beta() {
  ++stats.beta;
  if (stats.fuel_used() > fuel)
    throw Error(ErrorKind::FuelExhausted, "fuel of " + std::to_string(fuel) + " steps exhausted");
}

void Kernel::tick_delta() {
  ++stats.delta;
  if (stats.fuel_used() > fuel)
    throw Error(ErrorKind::FuelExhausted, "fuel of " + std::to_string(fuel) + " steps exhausted");
}

TermPtr Kernel::delta_unfold(const TermPtr& c) {
  if (c->tag != Tag::Const) throw std::logic_error("delta_unfold of a non-constant");
  const Definition* d = env_.find(c->name);
  if (!d) throw Error(ErrorKind::UnknownConstant, "unknown constant '" + c->name + "'");
  if (d->params.size() != c->args.size())
    throw Error(ErrorKind::ArityMismatch,
                "'" + c->name + "' expects " + std::to_string(d->params.size()) +
                    " arguments, got " + std::to_string(c->args.size()));
  if (d->primitive()) throw Error(ErrorKind::Opaque, "'" + c->name + "' is primitive");
  tick_delta();
  return instantiate(d->body, c->args);
}

TermPtr Kernel::reduce_head(const TermPtr& t0, bool delta,
                            const std::set<std::string>* freeze) {
  TermPtr t = t0;
  std::vector<TermPtr> sp;
  for (;;) {
    TermPtr head = spine(t, sp);
    if (head->tag == Tag::Lam && !sp.empty()) {
      tick_beta();
      TermPtr r = subst(head->b, 0, sp[0]);
      for (size_t i = 1; i < sp.size(); ++i) r = mk_app(r, sp[i]);
      t = r;
      if (trace) trace("beta", t);
      continue;
    }
    if (delta && head->tag == Tag::Const) {
      const Definition* d = env_.find(head->name);
      if (d && !d->primitive() && !(freeze && freeze->count(head->name))) {
        t = mk_apps(delta_unfold(head), sp);
        if (trace) trace("delta", t);
        continue;
      }
    }
    return t;
  }
}

TermPtr Kernel::whnf(const TermPtr& t) { return reduce_head(t, true, nullptr); }

TermPtr Kernel::whnf_beta(const TermPtr& t) { return reduce_head(t, false, nullptr); }

TermPtr Kernel::nf(const TermPtr& t0, const std::set<std::string>& freeze) {
  TermPtr t = reduce_head(t0, true, &freeze);
  std::vector<TermPtr> sp;
  TermPtr head = spine(t, sp);
  switch (head->tag) {
    case Tag::Pi:
    case Tag::Lam: {
      TermPtr a = nf(head->a, freeze), b = nf(head->b, freeze);
      head = head->tag == Tag::Pi ? mk_pi(head->name, a, b) : mk_lam(head->name, a, b);
      break;
    }
    case Tag::Const: {
      std::vector<TermPtr> args;
      for (const auto& x : head->args) args.push_back(nf(x, freeze));
      head = mk_const(head->name, std::move(args));
      break;
    }
    default:
      break;
  }
  for (auto& x : sp) x = nf(x, freeze);
  return mk_apps(head, sp);
}

TermPtr Kernel::normalize(const TermPtr& t, const std::set<std::string>& freeze) {
  return nf(t, freeze);
}

TermPtr Kernel::unfold_head(const TermPtr& t) {
  std::vector<TermPtr> sp;
  TermPtr head = spine(t, sp);
  return whnf_beta(mk_apps(delta_unfold(head), sp));
}

bool Kernel::conv_args(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!convertible(a[i], b[i])) return false;
  return true;
}

bool Kernel::convertible(const TermPtr& a0, const TermPtr& b0) {
  if (alpha_eq(a0, b0)) return true;
  TermPtr a = whnf_beta(a0), b = whnf_beta(b0);
  std::vector<TermPtr> sa, sb;
  for (;;) {
    if (alpha_eq(a, b)) return true;
    TermPtr ha = spine(a, sa), hb = spine(b, sb);
    const Definition* da = ha->tag == Tag::Const ? env_.find(ha->name) : nullptr;
    const Definition* db = hb->tag == Tag::Const ? env_.find(hb->name) : nullptr;
    bool ua = da && !da->primitive();
    bool ub = db && !db->primitive();
    if (ha->tag == Tag::Const && hb->tag == Tag::Const && ha->name == hb->name &&
        sa.size() == sb.size()) {
      if (conv_args(ha->args, hb->args) && conv_args(sa, sb)) return true;
      if (!ua) return false;
      a = unfold_head(a);
      b = unfold_head(b);
      continue;
    }
    if (ua && ub) {
      if (env_.position(ha->name) >= env_.position(hb->name))
        a = unfold_head(a);
      else
        b = unfold_head(b);
      continue;
    }
    if (ua) {
      a = unfold_head(a);
      continue;
    }
    if (ub) {
      b = unfold_head(b);
      continue;
    }
    if (ha->tag != hb->tag || sa.size() != sb.size()) return false;
    switch (ha->tag) {
      case Tag::Sort:
        return ha->sort == hb->sort && conv_args(sa, sb);
      case Tag::Var:
        return ha->index == hb->index && conv_args(sa, sb);
      case Tag::Pi:
      case Tag::Lam:
        return convertible(ha->a, hb->a) && convertible(ha->b, hb->b) && conv_args(sa, sb);
      case Tag::Const:
        return false;
      case Tag::Meta:
      case Tag::App:
        return false;
    }
    return false;
  }
}

static std::string ctx_names_show(const Context& ctx, const TermPtr& t) {
  std::vector<std::string> names;
  for (const auto& p : ctx) names.push_back(p.name);
  return show(t, names);
}

Sort Kernel::sort_of(Context& ctx, const TermPtr& type) {
  TermPtr s = whnf(infer(ctx, type));
  if (s->tag != Tag::Sort)
    throw Error(ErrorKind::SortError,
                "'" + ctx_names_show(ctx, type) + "' is not a type (its type is '" +
                    ctx_names_show(ctx, s) + "')");
  return s->sort;
}

TermPtr Kernel::infer(Context& ctx, const TermPtr& t) {
  switch (t->tag) {
    case Tag::Sort:
      if (t->sort == Sort::Box) throw Error(ErrorKind::SortError, "Box has no type");
      return mk_box();
    case Tag::Var:
      if (t->index >= ctx.size())
        throw Error(ErrorKind::UnboundVariable,
                    "variable #" + std::to_string(t->index) + " (" + t->name + ") is unbound");
      return shift(ctx[ctx.size() - 1 - t->index].type, int64_t(t->index) + 1);
    case Tag::Pi: {
      sort_of(ctx, t->a);
      ctx.push_back({t->name, t->a});
      Sort s;
      try {
        s = sort_of(ctx, t->b);
      } catch (...) {
        ctx.pop_back();
        throw;
      }
      ctx.pop_back();
      return mk_sort(s);
    }
    case Tag::Lam: {
      sort_of(ctx, t->a);
      ctx.push_back({t->name, t->a});
      TermPtr body_type;
      try {
        body_type = infer(ctx, t->b);
        if (is_sort(body_type, Sort::Box))
          throw Error(ErrorKind::SortError, "abstraction body has type Box");
        sort_of(ctx, body_type);
      } catch (...) {
        ctx.pop_back();
        throw;
      }
      ctx.pop_back();
      return mk_pi(t->name, t->a, body_type);
    }
    case Tag::App: {
      TermPtr ft = whnf(infer(ctx, t->a));
      if (ft->tag != Tag::Pi)
        throw Error(ErrorKind::NotAFunction,
                    "'" + ctx_names_show(ctx, t->a) + "' has non-function type '" +
                        ctx_names_show(ctx, ft) + "'");
      TermPtr at = infer(ctx, t->b);
      if (!convertible(at, ft->a))
        throw Error(ErrorKind::TypeMismatch,
                    "argument '" + ctx_names_show(ctx, t->b) + "' has type '" +
                        ctx_names_show(ctx, at) + "' but '" + ctx_names_show(ctx, ft->a) +
                        "' was expected");
      return subst(ft->b, 0, t->b);
    }
    case Tag::Const:
      return infer_const(ctx, t);
    case Tag::Meta:
      throw Error(ErrorKind::UnresolvedImplicit, "unsolved implicit argument");
  }
  return t;
}

TermPtr Kernel::infer_const(Context& ctx, const TermPtr& t) {
  const Definition* d = env_.find(t->name);
  if (!d) throw Error(ErrorKind::UnknownConstant, "unknown constant '" + t->name + "'");
  if (d->params.size() != t->args.size())
    throw Error(ErrorKind::ArityMismatch,
                "'" + t->name + "' expects " + std::to_string(d->params.size()) +
                    " arguments, got " + std::to_string(t->args.size()));
  std::vector<bool> kinded(d->params.size(), false);
  bool any_kinded = false;
  for (size_t i = 0; i < t->args.size(); ++i) {
    TermPtr expected = param_type(*d, i, t->args);
    TermPtr actual = infer(ctx, t->args[i]);
    if (convertible(actual, expected)) continue;
    if (is_sort(d->params[i].type, Sort::Star) && is_sort(whnf(actual), Sort::Box)) {
      kinded[i] = true;
      any_kinded = true;
      continue;
    }
    throw Error(ErrorKind::TypeMismatch,
                "argument " + std::to_string(i + 1) + " of '" + t->name + "' (" +
                    d->params[i].name + ") has type '" + ctx_names_show(ctx, actual) +
                    "' but '" + ctx_names_show(ctx, expected) + "' was expected");
  }
  if (any_kinded) check_instance(*d, kinded);
  return instantiate(d->type, t->args);
}

void Kernel::check(Context& ctx, const TermPtr& t, const TermPtr& type) {
  TermPtr actual = infer(ctx, t);
  if (!convertible(actual, type))
    throw Error(ErrorKind::TypeMismatch, "'" + ctx_names_show(ctx, t) + "' has type '" +
                                             ctx_names_show(ctx, actual) + "' but '" +
                                             ctx_names_show(ctx, type) + "' was expected");
}

void Kernel::check_params(Context& ctx, const Definition& d, const std::vector<bool>* kinded) {
  for (size_t i = 0; i < d.params.size(); ++i) {
    if (kinded && (*kinded)[i]) {
      ctx.push_back({d.params[i].name, mk_box()});
      continue;
    }
    sort_of(ctx, d.params[i].type);
    ctx.push_back(d.params[i]);
  }
}

void Kernel::check_instance(const Definition& d, const std::vector<bool>& kinded) {
  std::string key = d.name + "#";
  for (bool k : kinded) key += k ? '1' : '0';
  if (memo_->count(key)) return;
  try {
    Context ctx;
    check_params(ctx, d, &kinded);
    if (!is_sort(d.type, Sort::Box)) sort_of(ctx, d.type);
    if (d.body) check(ctx, d.body, d.type);
  } catch (const Error& e) {
    if (e.kind == ErrorKind::FuelExhausted) throw;
    throw Error(ErrorKind::TypeMismatch,
                "'" + d.name + "' cannot take a kind for a * parameter: " + e.message);
  }
  memo_->insert(key);
}

void Kernel::check_definition(const Definition& d) {
  Context ctx;
  check_params(ctx, d, nullptr);
  if (!is_sort(d.type, Sort::Box)) sort_of(ctx, d.type);
  if (d.body) check(ctx, d.body, d.type);
}

TermPtr delta_unfold(const Environment& env, const TermPtr& c) {
  Kernel k(env);
  return k.delta_unfold(c);
}

TermPtr whnf(const Environment& env, const TermPtr& t, uint64_t fuel) {
  Kernel k(env, fuel);
  return k.whnf(t);
}

TermPtr normalize(const Environment& env, const TermPtr& t, const std::set<std::string>& freeze,
                  uint64_t fuel) {
  Kernel k(env, fuel);
  return k.normalize(t, freeze);
}

bool convertible(const Environment& env, const TermPtr& a, const TermPtr& b, uint64_t fuel) {
  Kernel k(env, fuel);
  return k.convertible(a, b);
}

TermPtr infer_type(const Environment& env, const Context& ctx, const TermPtr& t, uint64_t fuel) {
  Kernel k(env, fuel);
  Context c = ctx;
  return k.infer(c, t);
}

void check_type(const Environment& env, const Context& ctx, const TermPtr& t,
                const TermPtr& type, uint64_t fuel) {
  Kernel k(env, fuel);
  Context c = ctx;
  k.check(c, t, type);
}

Stats check_definition(const Environment& env, const Definition& d, uint64_t fuel) {
  if (env.contains(d.name))
    throw Error(ErrorKind::DuplicateName, "'" + d.name + "' is already defined", d.span);
  Kernel k(env, fuel);
  k.check_definition(d);
  return k.stats;
}

bool EnvironmentReport::ok() const { return failures() == 0; }

size_t EnvironmentReport::failures() const {
  size_t n = 0;
  for (const auto& r : results) n += r.ok ? 0 : 1;
  return n;
}

EnvironmentReport check_environment(const std::vector<DefPtr>& defs, bool keep_going,
                                    uint64_t fuel, Environment* base) {
  Environment local;
  Environment& env = base ? *base : local;
  auto memo = std::make_shared<SchemaMemo>();
  EnvironmentReport report;
  for (const auto& d : defs) {
    DefinitionResult r;
    r.name = d->name;
    r.span = d->span;
    Kernel k(env, fuel, memo);
    try {
      if (env.contains(d->name))
        throw Error(ErrorKind::DuplicateName, "'" + d->name + "' is already defined");
      k.check_definition(*d);
      env.add(d);
    } catch (const Error& e) {
      r.ok = false;
      r.kind = e.kind;
      r.message = e.message;
    }
    r.stats = k.stats;
    report.results.push_back(r);
    if (!r.ok && !keep_going) break;
  }
  return report;
}

static void show_rec(std::ostringstream& os, const TermPtr& t, std::vector<std::string>& names,
                     int prec) {
  switch (t->tag) {
    case Tag::Sort:
      os << (t->sort == Sort::Star ? "*" : "□");
      return;
    case Tag::Var:
      if (t->index < names.size())
        os << names[names.size() - 1 - t->index];
      else
        os << "#" << t->index;
      return;
    case Tag::Pi:
    case Tag::Lam: {
      if (prec > 0) os << "(";
      std::string n = t->name.empty() ? "x" : t->name;
      if (t->tag == Tag::Lam) os << "\\";
      os << "(" << n << " : ";
      show_rec(os, t->a, names, 0);
      os << ")" << (t->tag == Tag::Pi ? " -> " : " => ");
      names.push_back(n);
      show_rec(os, t->b, names, 0);
      names.pop_back();
      if (prec > 0) os << ")";
      return;
    }
    case Tag::App:
      if (prec > 1) os << "(";
      show_rec(os, t->a, names, 1);
      os << " ";
      show_rec(os, t->b, names, 2);
      if (prec > 1) os << ")";
      return;
    case Tag::Const:
      os << t->name;
      if (!t->args.empty()) {
        os << "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) os << ", ";
          show_rec(os, t->args[i], names, 0);
        }
        os << ")";
      }
      return;
    case Tag::Meta:
      os << "?" << t->meta;
      return;
  }
}

std::string show(const TermPtr& t, std::vector<std::string> names) {
  std::ostringstream os;
  show_rec(os, t, names, 0);
  return os.str();
}

}  // namespace ldc
