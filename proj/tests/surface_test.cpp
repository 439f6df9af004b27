#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ldcheck/corpus.hpp"
#include "ldcheck/surface.hpp"
#include "props.hpp"

using namespace ldc;

namespace {

const Environment& prelude() {
  static Environment env = load_prelude();
  return env;
}

TermPtr elab(const std::string& text) {
  Environment env = prelude();
  Elaborator el(env);
  return el.elaborate_closed(parse_expr(text));
}

std::vector<DefinitionResult> run(const std::string& text, bool with_prelude = true) {
  Environment env = with_prelude ? prelude() : Environment{};
  ElabOptions o;
  o.keep_going = true;
  Elaborator el(env, o);
  try {
    el.run_module(parse_module(text));
  } catch (const Error& e) {
    DefinitionResult r;
    r.ok = false;
    r.kind = e.kind;
    r.message = e.what();
    return {r};
  }
  return el.results();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse items") {
  SourceModule m = parse_module(
      "import \"x.ld\";\n"
      "def id (A : *) (a : A) : A := a;\n"
      "flag {S : *} (x : S) {\n"
      "  prim p : S;\n"
      "  def q : S := p;\n"
      "}\n"
      "proof t {\n"
      "  flag (A : *) (u : A) {\n"
      "    let a1 : A := u;\n"
      "    def t_1 : A := a1;\n"
      "  }\n"
      "}\n");
  REQUIRE(m.items.size() == 4);
  CHECK(m.items[0].k == Item::K::Import);
  CHECK(m.items[1].k == Item::K::Def);
  CHECK(m.items[1].binders.size() == 2);
  CHECK(m.items[2].k == Item::K::Flag);
  CHECK(m.items[2].items.size() == 2);
  CHECK(m.items[3].k == Item::K::Proof);
}

TEST_CASE("syntax errors name what was expected") {
  try {
    parse_module("def x : * := ;");
    FAIL("parsed");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::SyntaxError);
    CHECK(e.span.line == 1);
  }
}

TEST_CASE("empty module") {
  CHECK(parse_module("").items.empty());
  CHECK(parse_module("-- only a comment\n").items.empty());
  CHECK(run("", false).empty());
}

TEST_CASE("unbound names") {
  auto r = run("def x : foo := foo;", false);
  REQUIRE(r.size() == 1);
  CHECK(r[0].kind == ErrorKind::UnboundName);
}

TEST_CASE("a step used before its definition") {
  auto r = run(
      "proof early {\n"
      "  flag (A : *) (u : A) {\n"
      "    let a1 : A := a2;\n"
      "    let a2 : A := u;\n"
      "  }\n"
      "}\n");
  REQUIRE_FALSE(r.empty());
  CHECK_FALSE(r[0].ok);
  CHECK((r[0].kind == ErrorKind::UnknownConstant || r[0].kind == ErrorKind::UnboundName));
}

TEST_CASE("flags become parameter telescopes") {
  Environment env = prelude();
  Elaborator el(env);
  REQUIRE(el.run_module(parse_module(
      "flag (S : *) (x : S) {\n  def refl_again : x = x := eq_sym(eq_refl);\n}\n")));
  const Definition& d = env.get("refl_again");
  CHECK(d.params.size() == 2);
  CHECK(d.params[0].name == "S");
}

TEST_CASE("pretty printing") {
  const Definition& bot = prelude().get("Bot");
  CHECK(pretty_print(bot) == "def Bot : * := (A : *) -> A;");
  TermPtr shadow = mk_lam("x", mk_star(), mk_lam("x", mk_var(0), mk_var(1)));
  CHECK(pretty_term(shadow) == "\\(x : *) => \\(x′ : x) => x");
  TermPtr three = mk_lam("x", mk_star(), mk_lam("x", mk_star(), mk_lam("x", mk_star(), mk_var(2))));
  CHECK(pretty_term(three) == "\\(x : *) => \\(x′ : *) => \\(x″ : *) => x");
  CHECK(display_statement(prelude().get("eq_sym")).find("y = x") != std::string::npos);
}

TEST_CASE("dependent products print with their binder") {
  const Definition& d = prelude().get("and");
  CHECK(pretty_print(d) == "def and (A : *) (B : *) : * := (C : *) -> (A -> B -> C) -> C;");
}

TEST_CASE("every corpus definition survives a print and reparse") {
  auto o = props::round_trip(props::corpus_defs());
  INFO(o.line());
  CHECK(o.failures == 0);
  CHECK(o.checked == props::corpus_defs().size());
}

TEST_CASE("notations elaborate to their definitions") {
  const char* pairs[][2] = {
      {"\\(A B : *) => A /\\ B", "\\(A : *) => \\(B : *) => @and(A, B)"},
      {"\\(A B : *) => A ∧ B", "\\(A : *) => \\(B : *) => @and(A, B)"},
      {"\\(A B : *) => A \\/ B", "\\(A : *) => \\(B : *) => @or(A, B)"},
      {"\\(A B : *) => A <-> B", "\\(A : *) => \\(B : *) => @iff(A, B)"},
      {"\\(A : *) => ~A", "\\(A : *) => @not(A)"},
      {"\\(A : *) => ¬A", "\\(A : *) => @not(A)"},
      {"\\(A B : *) => A -> B", "\\(A : *) => \\(B : *) => (a : A) -> B"},
      {"(A B : *) -> A", "(A : *) -> (B : *) -> A"},
      {"\\(S : *) => \\(G : ps(S)) => \\(x : S) => x in G",
       "\\(S : *) => \\(G : @ps(S)) => \\(x : S) => @element(S, x, G)"},
      {"\\(S : *) => \\(G : ps(S)) => \\(x : S) => x ε G",
       "\\(S : *) => \\(G : @ps(S)) => \\(x : S) => @element(S, x, G)"},
      {"\\(S : *) => \\(P : S -> *) => forall (x : S) => P x",
       "\\(S : *) => \\(P : S -> *) => @all(S, \\(x : S) => P x)"},
      {"\\(S : *) => \\(P : S -> *) => exists (x : S) => P x",
       "\\(S : *) => \\(P : S -> *) => @ex(S, \\(x : S) => P x)"},
      {"\\(S : *) => \\(x y : S) => x = y", "\\(S : *) => \\(x y : S) => @eq(S, x, y)"},
  };
  for (auto& p : pairs) {
    INFO(p[0]);
    CHECK(alpha_eq(elab(p[0]), elab(p[1])));
  }
}

TEST_CASE("mutated source never crashes the parser") {
  std::string base = slurp(corpus_dir() + "/prelude/logic.ld") +
                     slurp(corpus_dir() + "/groups/subgroups.ld");
  REQUIRE(base.size() > 1000);
  const char* tokens[] = {"(", ")", "{", "}", ":", ":=", ";", "=>", "->", "\\", "@", ",",
                          "*", "Box", "def", "flag", "proof", "let", "\"", "--", "λ", "∀",
                          "x", "⁻¹", "·", "\xff", "\n", "exists!", "in", "/\\"};
  std::mt19937 rng(3);
  size_t parsed = 0, rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    if (i % 5 == 0) {
      for (int k = int(rng() % 40); k > 0; --k) s += std::string(tokens[rng() % 30]) + " ";
    } else {
      size_t at = rng() % base.size(), len = 200 + rng() % 800;
      s = base.substr(at, len);
      for (int k = 1 + int(rng() % 3); k > 0; --k) {
        size_t p = rng() % (s.size() + 1);
        if (rng() % 2)
          s.insert(p, tokens[rng() % 30]);
        else
          s.erase(p, rng() % 6);
      }
    }
    try {
      parse_module(s);
      ++parsed;
    } catch (const Error& e) {
      ++rejected;
      if (e.kind != ErrorKind::SyntaxError) FAIL_CHECK("unexpected error kind " << kind_name(e.kind));
    } catch (const std::exception& e) {
      FAIL_CHECK("parser threw " << e.what() << " on: " << s);
    }
  }
  CHECK(parsed + rejected == 10000);
  CHECK(rejected > 1000);
}
