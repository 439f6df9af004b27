#include "ldcheck/term.hpp"

#include <algorithm>
#include <stdexcept>

#include "ldcheck/error.hpp"

namespace ldc {

namespace {

uint32_t under_binder(uint32_t loose) {
  if (loose == kOpenMeta) return kOpenMeta;
  return loose > 0 ? loose - 1 : 0;
}

uint32_t sat_add(uint32_t a, uint32_t b) {
  uint64_t s = uint64_t(a) + b;
  return s > 0x7fffffff ? 0x7fffffff : uint32_t(s);
}

std::shared_ptr<Term> node(Tag tag) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  return t;
}

}  // namespace

TermPtr mk_sort(Sort s) {
  auto t = node(Tag::Sort);
  t->sort = s;
  return t;
}

TermPtr mk_star() {
  static const TermPtr star = mk_sort(Sort::Star);
  return star;
}

TermPtr mk_box() {
  static const TermPtr box = mk_sort(Sort::Box);
  return box;
}

TermPtr mk_var(uint32_t index, std::string hint) {
  auto t = node(Tag::Var);
  t->index = index;
  t->loose = index + 1;
  t->name = std::move(hint);
  return t;
}

static TermPtr binder(Tag tag, std::string hint, TermPtr dom, TermPtr body) {
  auto t = node(tag);
  t->loose = std::max(dom->loose, under_binder(body->loose));
  t->size = sat_add(sat_add(dom->size, body->size), 1);
  t->name = std::move(hint);
  t->a = std::move(dom);
  t->b = std::move(body);
  return t;
}

TermPtr mk_pi(std::string hint, TermPtr dom, TermPtr body) {
  return binder(Tag::Pi, std::move(hint), std::move(dom), std::move(body));
}

TermPtr mk_lam(std::string hint, TermPtr dom, TermPtr body) {
  return binder(Tag::Lam, std::move(hint), std::move(dom), std::move(body));
}

TermPtr mk_app(TermPtr fn, TermPtr arg) {
  auto t = node(Tag::App);
  t->loose = std::max(fn->loose, arg->loose);
  t->size = sat_add(sat_add(fn->size, arg->size), 1);
  t->a = std::move(fn);
  t->b = std::move(arg);
  return t;
}

TermPtr mk_apps(TermPtr fn, const std::vector<TermPtr>& args) {
  for (const auto& x : args) fn = mk_app(fn, x);
  return fn;
}

TermPtr mk_const(std::string name, std::vector<TermPtr> args) {
  auto t = node(Tag::Const);
  t->name = std::move(name);
  for (const auto& x : args) {
    t->loose = std::max(t->loose, x->loose);
    t->size = sat_add(t->size, x->size);
  }
  t->args = std::move(args);
  return t;
}

TermPtr mk_meta(uint32_t id, uint32_t shift_by) {
  auto t = node(Tag::Meta);
  t->meta = id;
  t->index = shift_by;
  t->loose = kOpenMeta;
  return t;
}

TermPtr mk_arrow(TermPtr dom, TermPtr cod) {
  return mk_pi("_", std::move(dom), shift(cod, 1));
}

bool is_sort(const TermPtr& t, Sort s) {
  return t->tag == Tag::Sort && t->sort == s;
}

bool has_meta(const TermPtr& t) { return t->loose == kOpenMeta; }

static TermPtr shift_rec(const TermPtr& t, int64_t d, uint32_t cutoff) {
  if (t->loose <= cutoff) return t;
  switch (t->tag) {
    case Tag::Sort:
      return t;
    case Tag::Var: {
      int64_t i = int64_t(t->index) + d;
      if (i < int64_t(cutoff))
        throw Error(ErrorKind::UnderflowError,
                    "shifting variable " + t->name + " below zero");
      return mk_var(uint32_t(i), t->name);
    }
    case Tag::Pi:
    case Tag::Lam: {
      auto a = shift_rec(t->a, d, cutoff);
      auto b = shift_rec(t->b, d, cutoff + 1);
      if (a == t->a && b == t->b) return t;
      return binder(t->tag, t->name, a, b);
    }
    case Tag::App: {
      auto a = shift_rec(t->a, d, cutoff);
      auto b = shift_rec(t->b, d, cutoff);
      if (a == t->a && b == t->b) return t;
      return mk_app(a, b);
    }
    case Tag::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool same = true;
      for (const auto& x : t->args) {
        args.push_back(shift_rec(x, d, cutoff));
        same = same && args.back() == x;
      }
      if (same) return t;
      return mk_const(t->name, std::move(args));
    }
    case Tag::Meta: {
      if (t->index < cutoff)
        throw std::logic_error("implicit argument shifted inside its own scope");
      int64_t s = int64_t(t->index) + d;
      if (s < 0) throw Error(ErrorKind::UnderflowError, "shifting implicit below zero");
      return mk_meta(t->meta, uint32_t(s));
    }
  }
  return t;
}

TermPtr shift(const TermPtr& t, int64_t d, uint32_t cutoff) {
  if (d == 0) return t;
  return shift_rec(t, d, cutoff);
}

// vals live outside the n binders; variable depth+k (k < n) is bound by
// binder n-1-k counted from the outside.
static TermPtr inst_rec(const TermPtr& t, const std::vector<TermPtr>& vals,
                        uint32_t depth) {
  uint32_t n = uint32_t(vals.size());
  if (t->loose <= depth) return t;
  switch (t->tag) {
    case Tag::Sort:
      return t;
    case Tag::Var: {
      uint32_t i = t->index;
      if (i < depth) return t;
      if (i < depth + n) return shift(vals[n - 1 - (i - depth)], depth);
      return mk_var(i - n, t->name);
    }
    case Tag::Pi:
    case Tag::Lam: {
      auto a = inst_rec(t->a, vals, depth);
      auto b = inst_rec(t->b, vals, depth + 1);
      return binder(t->tag, t->name, a, b);
    }
    case Tag::App:
      return mk_app(inst_rec(t->a, vals, depth), inst_rec(t->b, vals, depth));
    case Tag::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& x : t->args) args.push_back(inst_rec(x, vals, depth));
      return mk_const(t->name, std::move(args));
    }
    case Tag::Meta:
      if (t->index < depth + n)
        throw std::logic_error("implicit argument substituted inside its own scope");
      return mk_meta(t->meta, t->index - n);
  }
  return t;
}

TermPtr instantiate(const TermPtr& body, const std::vector<TermPtr>& vals) {
  if (vals.empty()) return body;
  return inst_rec(body, vals, 0);
}

static TermPtr subst_rec(const TermPtr& t, uint32_t j, const TermPtr& v) {
  if (t->loose <= j) return t;
  switch (t->tag) {
    case Tag::Sort:
      return t;
    case Tag::Var:
      if (t->index == j) return shift(v, j);
      if (t->index > j) return mk_var(t->index - 1, t->name);
      return t;
    case Tag::Pi:
    case Tag::Lam:
      return binder(t->tag, t->name, subst_rec(t->a, j, v), subst_rec(t->b, j + 1, v));
    case Tag::App:
      return mk_app(subst_rec(t->a, j, v), subst_rec(t->b, j, v));
    case Tag::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& x : t->args) args.push_back(subst_rec(x, j, v));
      return mk_const(t->name, std::move(args));
    }
    case Tag::Meta:
      if (t->index <= j)
        throw std::logic_error("implicit argument substituted inside its own scope");
      return mk_meta(t->meta, t->index - 1);
  }
  return t;
}

TermPtr subst(const TermPtr& t, uint32_t j, const TermPtr& v) {
  return subst_rec(t, j, v);
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->tag != b->tag || a->loose != b->loose || a->size != b->size) return false;
  switch (a->tag) {
    case Tag::Sort:
      return a->sort == b->sort;
    case Tag::Var:
      return a->index == b->index;
    case Tag::Pi:
    case Tag::Lam:
    case Tag::App:
      return alpha_eq(a->a, b->a) && alpha_eq(a->b, b->b);
    case Tag::Const:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_eq(a->args[i], b->args[i])) return false;
      return true;
    case Tag::Meta:
      return a->meta == b->meta && a->index == b->index;
  }
  return false;
}

TermPtr spine(const TermPtr& t, std::vector<TermPtr>& args) {
  args.clear();
  TermPtr head = t;
  while (head->tag == Tag::App) {
    args.push_back(head->b);
    head = head->a;
  }
  std::reverse(args.begin(), args.end());
  return head;
}

bool mentions_const(const TermPtr& t, const std::string& name) {
  switch (t->tag) {
    case Tag::Sort:
    case Tag::Var:
    case Tag::Meta:
      return false;
    case Tag::Pi:
    case Tag::Lam:
    case Tag::App:
      return mentions_const(t->a, name) || mentions_const(t->b, name);
    case Tag::Const:
      if (t->name == name) return true;
      for (const auto& x : t->args)
        if (mentions_const(x, name)) return true;
      return false;
  }
  return false;
}

void collect_consts(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->tag) {
    case Tag::Sort:
    case Tag::Var:
    case Tag::Meta:
      return;
    case Tag::Pi:
    case Tag::Lam:
    case Tag::App:
      collect_consts(t->a, out);
      collect_consts(t->b, out);
      return;
    case Tag::Const:
      if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
      for (const auto& x : t->args) collect_consts(x, out);
      return;
  }
}

}  // namespace ldc
