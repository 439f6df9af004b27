#include <algorithm>
#include <map>
#include <sstream>

#include "ldcheck/surface.hpp"

namespace ldc {

namespace {

bool uses_var0(const TermPtr& body) {
  // Shifting down fails exactly when variable 0 occurs.
  try {
    shift(body, -1, 0);
    return false;
  } catch (const Error&) {
    return true;
  }
}

bool var0_free(const TermPtr& body) {
  if (body->loose == 0) return true;
  return !uses_var0(body);
}

std::string primes(int n) {
  std::string s;
  if (n % 2 == 1) s += "′";
  for (int i = 0; i < n / 2; ++i) s += "″";
  return s;
}

std::string fresh(const std::string& hint, const std::vector<std::string>& names) {
  std::string base = (hint.empty() || hint == "_") ? "x" : hint;
  for (int n = 0;; ++n) {
    std::string cand = base + primes(n);
    if (std::find(names.begin(), names.end(), cand) == names.end()) return cand;
  }
}

class Printer {
 public:
  explicit Printer(std::vector<std::string> names) : names_(std::move(names)) {}

  // 0: binder forms, 1: arrow operand / application head, 2: argument
  void term(const TermPtr& t, int prec) {
    switch (t->tag) {
      case Tag::Sort:
        os << (t->sort == Sort::Star ? "*" : "Box");
        return;
      case Tag::Var:
        if (t->index < names_.size())
          os << names_[names_.size() - 1 - t->index];
        else
          os << "#" << t->index;
        return;
      case Tag::Meta:
        os << "?" << t->meta;
        return;
      case Tag::Const:
        os << "@" << t->name;
        if (!t->args.empty()) {
          os << "(";
          for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) os << ", ";
            term(t->args[i], 0);
          }
          os << ")";
        }
        return;
      case Tag::App: {
        if (prec > 1) os << "(";
        term(t->a, 1);
        os << " ";
        term(t->b, 2);
        if (prec > 1) os << ")";
        return;
      }
      case Tag::Pi: {
        if (prec > 0) os << "(";
        if (var0_free(t->b)) {
          term(t->a, 1);
          os << " -> ";
          names_.push_back("_");
          term(t->b, 0);
          names_.pop_back();
        } else {
          std::string n = fresh(t->name, names_);
          os << "(" << n << " : ";
          term(t->a, 0);
          os << ") -> ";
          names_.push_back(n);
          term(t->b, 0);
          names_.pop_back();
        }
        if (prec > 0) os << ")";
        return;
      }
      case Tag::Lam: {
        if (prec > 0) os << "(";
        std::string n = fresh(t->name, names_);
        os << "\\(" << n << " : ";
        term(t->a, 0);
        os << ") => ";
        names_.push_back(n);
        term(t->b, 0);
        names_.pop_back();
        if (prec > 0) os << ")";
        return;
      }
    }
  }

  std::vector<std::string> names_;
  std::ostringstream os;
};

// ---- notation display ----

enum Prec {
  kBinder = 0,
  kIff = 1,
  kImp = 2,
  kOr = 3,
  kAnd = 4,
  kNot = 5,
  kRel = 6,
  kSetOp = 7,
  kMul = 8,
  kPost = 9,
  kApp = 10,
  kAtom = 11,
};

class Display {
 public:
  explicit Display(std::vector<std::string> names) : names_(std::move(names)) {}

  std::string var_name(const TermPtr& v) const {
    if (v->tag == Tag::Var && v->index < names_.size()) return names_[names_.size() - 1 - v->index];
    return "";
  }

  void open(int need, int have) {
    if (have < need) os << "(";
  }
  void close(int need, int have) {
    if (have < need) os << ")";
  }

  void infix(const TermPtr& l, const char* op, const TermPtr& r, int prec, int need, int lp, int rp) {
    open(need, prec);
    term(l, lp);
    os << op;
    term(r, rp);
    close(need, prec);
  }

  // Quantifier over a lambda body.
  bool binder_const(const char* sym, const TermPtr& dom, const TermPtr& lam, int need) {
    if (lam->tag != Tag::Lam) return false;
    open(need, kBinder);
    std::string n = fresh(lam->name, names_);
    os << sym << n << ":";
    term(dom, kApp);
    os << ". ";
    names_.push_back(n);
    term(lam->b, kBinder);
    names_.pop_back();
    close(need, kBinder);
    return true;
  }

  void term(const TermPtr& t, int need) {
    switch (t->tag) {
      case Tag::Sort:
        os << (t->sort == Sort::Star ? "*" : "□");
        return;
      case Tag::Var:
        os << (t->index < names_.size() ? names_[names_.size() - 1 - t->index] : "#?");
        return;
      case Tag::Meta:
        os << "?";
        return;
      case Tag::Const:
        constant(t, need);
        return;
      case Tag::App: {
        if (t->a->tag == Tag::App && var_name(t->a->a) == "mul") {
          infix(t->a->b, "·", t->b, kMul, need, kMul, kPost);
          return;
        }
        if (var_name(t->a) == "inv") {
          open(need, kPost);
          term(t->b, kPost);
          os << "⁻¹";
          close(need, kPost);
          return;
        }
        open(need, kApp);
        term(t->a, kApp);
        os << " ";
        term(t->b, kAtom);
        close(need, kApp);
        return;
      }
      case Tag::Pi: {
        if (var0_free(t->b)) {
          open(need, kImp);
          term(t->a, kOr);
          os << " ⇒ ";
          names_.push_back("_");
          term(t->b, kImp);
          names_.pop_back();
          close(need, kImp);
          return;
        }
        open(need, kBinder);
        std::string n = fresh(t->name, names_);
        os << "Π" << n << ":";
        term(t->a, kApp);
        os << ". ";
        names_.push_back(n);
        term(t->b, kBinder);
        names_.pop_back();
        close(need, kBinder);
        return;
      }
      case Tag::Lam: {
        open(need, kBinder);
        std::string n = fresh(t->name, names_);
        os << "λ" << n << ":";
        term(t->a, kApp);
        os << ". ";
        names_.push_back(n);
        term(t->b, kBinder);
        names_.pop_back();
        close(need, kBinder);
        return;
      }
    }
  }

  void constant(const TermPtr& t, int need) {
    const auto& a = t->args;
    const std::string& n = t->name;
    auto is = [&](const char* name, size_t arity) { return n == name && a.size() == arity; };
    if (is("and", 2)) return infix(a[0], " ∧ ", a[1], kAnd, need, kAnd, kNot);
    if (is("or", 2)) return infix(a[0], " ∨ ", a[1], kOr, need, kOr, kAnd);
    if (is("iff", 2)) {
      bool eq_left = a[0]->tag == Tag::Const && a[0]->name == "eq";
      return infix(a[0], " ⇔ ", a[1], kIff, need, eq_left ? kSetOp : kImp, kImp);
    }
    if (is("not", 1)) {
      open(need, kNot);
      os << "¬";
      term(a[0], kNot);
      close(need, kNot);
      return;
    }
    if (is("Bot", 0)) {
      os << "⊥";
      return;
    }
    if (is("eq", 3)) return infix(a[1], " = ", a[2], kRel, need, kSetOp, kSetOp);
    if (is("element", 3)) return infix(a[1], " ε ", a[2], kRel, need, kSetOp, kSetOp);
    if (is("subset", 3)) return infix(a[1], " ⊆ ", a[2], kRel, need, kSetOp, kSetOp);
    if (is("inter", 3)) return infix(a[1], " ∩ ", a[2], kSetOp, need, kSetOp, kMul);
    if (is("union", 3)) return infix(a[1], " ∪ ", a[2], kSetOp, need, kSetOp, kMul);
    if (is("mt1", 4)) return infix(a[3], "·", a[2], kMul, need, kMul, kPost);
    if (is("mt2", 4)) return infix(a[2], "·", a[3], kMul, need, kMul, kPost);
    if (is("Mt1", 4) || is("Mt2", 4)) return infix(a[2], "·", a[3], kMul, need, kMul, kPost);
    if (is("Iv", 3)) {
      open(need, kPost);
      term(a[2], kPost);
      os << "⁻¹";
      close(need, kPost);
      return;
    }
    if (is("Subgroup", 6)) return infix(a[5], " ≤ ", a[1], kRel, need, kPost, kSetOp);
    if (is("Normal_subgroup", 6)) return infix(a[5], " ◁ ", a[1], kRel, need, kPost, kSetOp);
    if (is("Quotient_group", 6)) return infix(a[1], "/", a[5], kMul, need, kMul, kPost);
    if (is("all", 2) && binder_const("∀", a[0], a[1], need)) return;
    if (is("ex", 2) && binder_const("∃", a[0], a[1], need)) return;
    if (is("ex_unique", 2) && binder_const("∃¹", a[0], a[1], need)) return;
    os << n;
    if (!a.empty()) {
      os << "(";
      for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ", ";
        term(a[i], kBinder);
      }
      os << ")";
    }
  }

  std::vector<std::string> names_;
  std::ostringstream os;
};

}  // namespace

std::string pretty_term(const TermPtr& t, const std::vector<std::string>& names) {
  Printer p(names);
  p.term(t, 0);
  return p.os.str();
}

std::string pretty_print(const Definition& d) {
  Printer p({});
  p.os << (d.primitive() ? "prim " : "def ") << d.name;
  for (const auto& prm : d.params) {
    std::string n = fresh(prm.name, p.names_);
    p.os << " " << (prm.implicit ? "{" : "(") << n << " : ";
    p.term(prm.type, 0);
    p.os << (prm.implicit ? "}" : ")");
    p.names_.push_back(n);
  }
  p.os << " : ";
  p.term(d.type, 0);
  if (!d.primitive()) {
    p.os << " := ";
    p.term(d.body, 0);
  }
  p.os << ";";
  return p.os.str();
}

std::string display_term(const TermPtr& t, const std::vector<std::string>& names) {
  Display p(names);
  p.term(t, kBinder);
  return p.os.str();
}

std::string display_statement(const Definition& d) {
  std::vector<std::string> names;
  for (const auto& prm : d.params) names.push_back(fresh(prm.name, names));
  return display_term(d.type, names);
}

}  // namespace ldc
