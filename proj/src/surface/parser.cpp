#include <algorithm>
#include <cstring>

#include "ldcheck/surface.hpp"

namespace ldc {

namespace {

enum class TK { Ident, Str, Sym, Eof };

struct Token {
  TK kind;
  std::string text;
  Span span;
  bool space_before = false;
};

struct SymAlias {
  const char* src;
  const char* canon;
};

// Longest spellings first within a shared prefix.
const SymAlias kSymbols[] = {
    {":=", ":="},   {"=>", "=>"},   {"<->", "<->"}, {"->", "->"},   {"/\\", "/\\"},
    {"\\/", "\\/"}, {"\\", "\\"},   {"(", "("},     {")", ")"},     {"{", "{"},
    {"}", "}"},     {",", ","},     {";", ";"},     {":", ":"},     {"@", "@"},
    {"=", "="},     {"~", "~"},     {"*_p", "*"},   {"*_s", "*"},   {"*", "*"},
    {"^-1", "^-1"}, {"λ", "\\"},    {"→", "->"},    {"⇒", "->"},    {"⇔", "<->"},
    {"↔", "<->"},   {"∧", "/\\"},   {"∨", "\\/"},   {"¬", "~"},     {"ε", "ε"},
    {"ϵ", "ε"},     {"∈", "ε"},     {"⊆", "⊆"},     {"∩", "∩"},     {"∪", "∪"},
    {"·", "·"},     {"⁻¹", "^-1"},  {"□", "Box"},   {"∀", "forall"}, {"∃!", "exists!"},
    {"∃", "exists"}, {"⊥", "Bot"},
};

const std::map<std::string, std::string> kWordSymbols = {
    {"forall", "forall"}, {"exists", "exists"}, {"in", "ε"},   {"sub", "⊆"},
    {"cap", "∩"},         {"cup", "∪"},         {"Box", "Box"},
};

const std::set<std::string> kKeywords = {"def", "prim", "let", "have", "flag", "proof", "import"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

class Lexer {
 public:
  Lexer(const std::string& text, const std::string& path) : s_(text), path_(path) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      bool space = skip_space();
      Token t = next();
      t.space_before = space;
      out.push_back(t);
      if (t.kind == TK::Eof) break;
    }
    return out;
  }

 private:
  Span here(size_t begin) const {
    Span sp;
    sp.file = path_;
    sp.begin = begin;
    sp.end = pos_;
    sp.line = tok_line_;
    sp.col = tok_col_;
    return sp;
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      unsigned char c = s_[pos_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  bool starts(const char* p) const { return s_.compare(pos_, std::strlen(p), p) == 0; }

  [[noreturn]] void fail(const std::string& msg) {
    Span sp;
    sp.file = path_;
    sp.begin = pos_;
    sp.end = std::min(pos_ + 1, s_.size());
    sp.line = line_;
    sp.col = col_;
    throw Error(ErrorKind::SyntaxError, msg, sp);
  }

  bool skip_space() {
    bool any = false;
    for (;;) {
      if (pos_ >= s_.size()) return any;
      unsigned char c = s_[pos_];
      if (std::isspace(c)) {
        advance(1);
        any = true;
      } else if (starts("--")) {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance(1);
        any = true;
      } else if (starts("{-")) {
        int depth = 0;
        do {
          if (pos_ >= s_.size()) fail("unterminated block comment");
          if (starts("{-")) {
            ++depth;
            advance(2);
          } else if (starts("-}")) {
            --depth;
            advance(2);
          } else {
            advance(1);
          }
        } while (depth > 0);
        any = true;
      } else {
        return any;
      }
    }
  }

  Token next() {
    tok_line_ = line_;
    tok_col_ = col_;
    size_t begin = pos_;
    Token t;
    if (pos_ >= s_.size()) {
      t.kind = TK::Eof;
      t.span = here(begin);
      return t;
    }
    unsigned char c = s_[pos_];
    if (c == '"') {
      advance(1);
      std::string v;
      while (pos_ < s_.size() && s_[pos_] != '"' && s_[pos_] != '\n') {
        v += s_[pos_];
        advance(1);
      }
      if (pos_ >= s_.size() || s_[pos_] != '"') fail("unterminated string");
      advance(1);
      t.kind = TK::Str;
      t.text = v;
      t.span = here(begin);
      return t;
    }
    if (ident_start(c)) {
      std::string v;
      for (;;) {
        while (pos_ < s_.size()) {
          unsigned char d = s_[pos_];
          if (ident_char(d)) {
            v += char(d);
            advance(1);
          } else if (starts("′")) {
            v += "′";
            advance(std::strlen("′"));
          } else if (starts("″")) {
            v += "″";
            advance(std::strlen("″"));
          } else {
            break;
          }
        }
        // Qualified names: `block.a1`.
        if (pos_ + 1 < s_.size() && s_[pos_] == '.' && ident_start(s_[pos_ + 1])) {
          v += '.';
          advance(1);
          continue;
        }
        break;
      }
      if (v == "exists" && pos_ < s_.size() && s_[pos_] == '!') {
        advance(1);
        v = "exists!";
      }
      t.span = here(begin);
      auto w = kWordSymbols.find(v);
      if (v == "exists!") {
        t.kind = TK::Sym;
        t.text = v;
      } else if (w != kWordSymbols.end()) {
        t.kind = TK::Sym;
        t.text = w->second;
      } else if (v == "_") {
        t.kind = TK::Sym;
        t.text = "_";
      } else {
        t.kind = TK::Ident;
        t.text = v;
      }
      return t;
    }
    for (const auto& sym : kSymbols) {
      if (starts(sym.src)) {
        advance(std::strlen(sym.src));
        t.span = here(begin);
        if (std::strcmp(sym.canon, "Bot") == 0) {
          t.kind = TK::Ident;
          t.text = "Bot";
        } else {
          t.kind = TK::Sym;
          t.text = sym.canon;
        }
        return t;
      }
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::string path_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int tok_line_ = 1, tok_col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  SourceModule module(const std::string& path) {
    SourceModule m;
    m.path = path;
    bool seen_def = false;
    while (!at_eof()) {
      Item it = item();
      if (it.k == Item::K::Import) {
        if (seen_def) fail_at(it.span, "imports must precede all definitions", {});
      } else {
        seen_def = true;
      }
      m.items.push_back(std::move(it));
    }
    return m;
  }

  ExprPtr whole_expr() {
    ExprPtr e = expr();
    if (!at_eof()) fail({"end of input"});
    return e;
  }

 private:
  const Token& peek(size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool at_eof() const { return peek().kind == TK::Eof; }
  bool is_sym(const char* s, size_t k = 0) const {
    return peek(k).kind == TK::Sym && peek(k).text == s;
  }
  bool is_kw(const char* s) const { return peek().kind == TK::Ident && peek().text == s; }
  Token take() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TK::Eof: return "end of input";
      case TK::Str: return "string \"" + t.text + "\"";
      case TK::Ident: return "identifier '" + t.text + "'";
      case TK::Sym: return "'" + t.text + "'";
    }
    return "?";
  }

  [[noreturn]] void fail_at(const Span& sp, const std::string& msg,
                            const std::vector<std::string>& expected) {
    std::string m = msg;
    if (!expected.empty()) {
      m += " (expected one of:";
      for (const auto& e : expected) m += " " + e;
      m += ")";
    }
    throw Error(ErrorKind::SyntaxError, m, sp);
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) {
    fail_at(peek().span, "unexpected " + describe(peek()), expected);
  }

  Token expect(const char* sym) {
    if (!is_sym(sym)) fail({std::string("'") + sym + "'"});
    return take();
  }

  std::string ident() {
    if (peek().kind != TK::Ident || kKeywords.count(peek().text)) fail({"identifier"});
    return take().text;
  }

  Span join(const Span& a, const Span& b) {
    Span s = a;
    s.end = b.end;
    return s;
  }

  Span prev_span() const { return t_[i_ > 0 ? i_ - 1 : 0].span; }

  // ---- items ----

  Item item() {
    Item it;
    it.span = peek().span;
    if (peek().kind != TK::Ident) fail({"def", "prim", "let", "have", "flag", "proof", "import"});
    std::string kw = peek().text;
    if (kw == "import") {
      take();
      if (peek().kind != TK::Str) fail({"string"});
      it.k = Item::K::Import;
      it.path = take().text;
      expect(";");
    } else if (kw == "def" || kw == "let" || kw == "prim") {
      take();
      it.k = kw == "def" ? Item::K::Def : kw == "let" ? Item::K::Let : Item::K::Prim;
      it.name = ident();
      while (is_sym("(") || is_sym("{")) binder_group(it.binders, true);
      if (it.k == Item::K::Prim) {
        expect(":");
        it.type = expr();
      } else {
        if (is_sym(":")) {
          take();
          it.type = expr();
        }
        expect(":=");
        it.body = expr();
      }
      expect(";");
    } else if (kw == "have") {
      take();
      it.k = Item::K::Have;
      it.name = ident();
      expect(":");
      it.type = expr();
      expect(";");
    } else if (kw == "flag") {
      take();
      it.k = Item::K::Flag;
      if (!is_sym("(") && !is_sym("{")) fail({"'('", "'{'"});
      while (is_sym("(") || (is_sym("{") && looks_like_binder(1))) binder_group(it.binders, true);
      block(it.items);
    } else if (kw == "proof") {
      take();
      it.k = Item::K::Proof;
      it.name = ident();
      block(it.items);
    } else {
      fail({"def", "prim", "let", "have", "flag", "proof", "import"});
    }
    it.span = join(it.span, prev_span());
    return it;
  }

  void block(std::vector<Item>& items) {
    expect("{");
    while (!is_sym("}")) {
      if (at_eof()) fail({"'}'"});
      items.push_back(item());
    }
    take();
  }

  // `{ x y : T }` versus a block opening.
  bool looks_like_binder(size_t k) const {
    size_t j = k;
    if (peek(j).kind != TK::Ident || kKeywords.count(peek(j).text)) return false;
    while (peek(j).kind == TK::Ident) ++j;
    return peek(j).kind == TK::Sym && peek(j).text == ":";
  }

  void binder_group(std::vector<Binder>& out, bool allow_implicit) {
    bool implicit = is_sym("{");
    if (implicit && !allow_implicit) fail({"'('"});
    Span start = take().span;
    std::vector<std::pair<std::string, Span>> names;
    do {
      Span sp = peek().span;
      names.push_back({ident(), sp});
    } while (peek().kind == TK::Ident);
    expect(":");
    ExprPtr ty = expr();
    expect(implicit ? "}" : ")");
    for (auto& [n, sp] : names) {
      Binder b;
      b.name = n;
      b.type = ty;
      b.implicit = implicit;
      b.span = sp;
      out.push_back(b);
    }
    (void)start;
  }

  // ---- expressions, lowest precedence first ----

  ExprPtr mk(Expr::K k, Span sp) {
    auto e = std::make_shared<Expr>();
    e->k = k;
    e->span = sp;
    return e;
  }

  ExprPtr call(const std::string& name, std::vector<ExprPtr> args, Span sp) {
    auto e = mk(Expr::K::Call, sp);
    e->name = name;
    e->args = std::move(args);
    return e;
  }

  ExprPtr hole(Span sp) { return mk(Expr::K::Hole, sp); }

  ExprPtr name_expr(const std::string& n, Span sp) {
    auto e = mk(Expr::K::Name, sp);
    e->name = n;
    return e;
  }

  ExprPtr app(ExprPtr f, ExprPtr x) {
    auto e = mk(Expr::K::App, join(f->span, x->span));
    e->args = {f, x};
    return e;
  }

  ExprPtr expr() { return iff(); }

  ExprPtr iff() {
    ExprPtr l = imp();
    if (is_sym("<->")) {
      take();
      ExprPtr r = imp();
      return call("iff", {l, r}, join(l->span, r->span));
    }
    return l;
  }

  ExprPtr imp() {
    ExprPtr l = disj();
    if (is_sym("->")) {
      take();
      ExprPtr r = imp();
      auto e = mk(Expr::K::Pi, join(l->span, r->span));
      Binder b;
      b.name = "_";
      b.type = l;
      b.span = l->span;
      e->binders = {b};
      e->body = r;
      return e;
    }
    return l;
  }

  ExprPtr disj() {
    ExprPtr l = conj();
    while (is_sym("\\/")) {
      take();
      ExprPtr r = conj();
      l = call("or", {l, r}, join(l->span, r->span));
    }
    return l;
  }

  ExprPtr conj() {
    ExprPtr l = neg();
    while (is_sym("/\\")) {
      take();
      ExprPtr r = neg();
      l = call("and", {l, r}, join(l->span, r->span));
    }
    return l;
  }

  ExprPtr neg() {
    if (is_sym("~")) {
      Span sp = take().span;
      ExprPtr a = neg();
      return call("not", {a}, join(sp, a->span));
    }
    return rel();
  }

  ExprPtr rel() {
    ExprPtr l = setop();
    const char* target = nullptr;
    if (is_sym("=")) target = "eq";
    if (is_sym("ε")) target = "element";
    if (is_sym("⊆")) target = "subset";
    if (!target) return l;
    take();
    ExprPtr r = setop();
    Span sp = join(l->span, r->span);
    if (std::strcmp(target, "element") == 0) return call("element", {hole(sp), l, r}, sp);
    return call(target, {hole(sp), l, r}, sp);
  }

  ExprPtr setop() {
    ExprPtr l = mul();
    while (is_sym("∩") || is_sym("∪")) {
      std::string op = take().text == "∩" ? "inter" : "union";
      ExprPtr r = mul();
      Span sp = join(l->span, r->span);
      l = call(op, {hole(sp), l, r}, sp);
    }
    return l;
  }

  ExprPtr mul() {
    ExprPtr l = postfix();
    while (is_sym("·")) {
      Span op = take().span;
      ExprPtr r = postfix();
      l = app(app(name_expr("mul", op), l), r);
    }
    return l;
  }

  ExprPtr postfix() {
    ExprPtr e = application();
    while (is_sym("^-1")) {
      Span op = take().span;
      e = app(name_expr("inv", op), e);
    }
    return e;
  }

  bool atom_start() const {
    const Token& t = peek();
    if (t.kind == TK::Ident) return !kKeywords.count(t.text);
    if (t.kind != TK::Sym) return false;
    static const std::set<std::string> starts = {"(", "@", "*", "Box", "_", "\\",
                                                 "forall", "exists", "exists!"};
    return starts.count(t.text) != 0;
  }

  ExprPtr application() {
    ExprPtr f = atom();
    while (atom_start()) {
      // A binder form as an argument swallows the rest of the expression.
      ExprPtr x = atom();
      f = app(f, x);
    }
    return f;
  }

  std::vector<ExprPtr> call_args() {
    expect("(");
    std::vector<ExprPtr> args;
    if (!is_sym(")")) {
      args.push_back(expr());
      while (is_sym(",")) {
        take();
        args.push_back(expr());
      }
    }
    expect(")");
    return args;
  }

  // After `(`: NAME+ `:` introduces a binder group.
  bool paren_binder() const {
    if (!is_sym("(")) return false;
    size_t j = 1;
    if (peek(j).kind != TK::Ident) return false;
    while (peek(j).kind == TK::Ident) ++j;
    return peek(j).kind == TK::Sym && peek(j).text == ":";
  }

  ExprPtr quantifier(const std::string& which, Span start) {
    std::vector<Binder> bs;
    if (!is_sym("(")) fail({"'('"});
    while (is_sym("(")) binder_group(bs, false);
    expect("=>");
    ExprPtr body = expr();
    Span sp = join(start, body->span);
    std::string target = which == "forall" ? "all" : which == "exists" ? "ex" : "ex_unique";
    for (size_t k = bs.size(); k-- > 0;) {
      auto lam = mk(Expr::K::Lam, sp);
      lam->binders = {bs[k]};
      lam->body = body;
      body = call(target, {bs[k].type, lam}, sp);
    }
    return body;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.kind == TK::Ident && !kKeywords.count(t.text)) {
      Token tok = take();
      if (is_sym("(") && !peek().space_before) {
        auto args = call_args();
        return call(tok.text, std::move(args), join(tok.span, prev_span()));
      }
      return name_expr(tok.text, tok.span);
    }
    if (is_sym("@")) {
      Span sp = take().span;
      if (peek().space_before) fail({"identifier"});
      std::string n = ident();
      std::vector<ExprPtr> args;
      if (is_sym("(") && !peek().space_before) args = call_args();
      auto e = call(n, std::move(args), join(sp, prev_span()));
      e->explicit_all = true;
      return e;
    }
    if (is_sym("*")) {
      auto e = mk(Expr::K::Sort, take().span);
      e->sort = Sort::Star;
      return e;
    }
    if (is_sym("Box")) {
      auto e = mk(Expr::K::Sort, take().span);
      e->sort = Sort::Box;
      return e;
    }
    if (is_sym("_")) return hole(take().span);
    if (is_sym("\\")) {
      Span sp = take().span;
      std::vector<Binder> bs;
      if (!is_sym("(")) fail({"'('"});
      while (is_sym("(")) binder_group(bs, false);
      expect("=>");
      ExprPtr body = expr();
      auto e = mk(Expr::K::Lam, join(sp, body->span));
      e->binders = std::move(bs);
      e->body = body;
      return e;
    }
    if (is_sym("forall") || is_sym("exists") || is_sym("exists!")) {
      Token q = take();
      return quantifier(q.text, q.span);
    }
    if (paren_binder()) {
      Span sp = peek().span;
      std::vector<Binder> bs;
      while (paren_binder()) binder_group(bs, false);
      expect("->");
      ExprPtr body = expr();
      auto e = mk(Expr::K::Pi, join(sp, body->span));
      e->binders = std::move(bs);
      e->body = body;
      return e;
    }
    if (is_sym("(")) {
      take();
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    fail({"identifier", "'('", "'@'", "'*'", "'\\'", "'_'"});
  }

  std::vector<Token> t_;
  size_t i_ = 0;
};

}  // namespace

SourceModule parse_module(const std::string& text, const std::string& path) {
  Lexer lx(text, path);
  Parser p(lx.run());
  return p.module(path);
}

ExprPtr parse_expr(const std::string& text, const std::string& path) {
  Lexer lx(text, path);
  Parser p(lx.run());
  return p.whole_expr();
}

}  // namespace ldc
