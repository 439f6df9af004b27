#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldcheck/env.hpp"
#include "ldcheck/kernel.hpp"

namespace ldc {

// ---- syntax tree -----------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Binder {
  std::string name;
  ExprPtr type;
  bool implicit = false;
  Span span;
};

struct Expr {
  enum class K { Name, Sort, Hole, App, Call, Pi, Lam };
  K k;
  Span span;
  std::string name;        // Name, Call
  bool explicit_all = false;  // `@name(...)`
  Sort sort = Sort::Star;
  std::vector<ExprPtr> args;  // Call arguments; App: {fn, arg}
  std::vector<Binder> binders;  // Pi, Lam
  ExprPtr body;
};

struct Item {
  enum class K { Import, Def, Prim, Let, Have, Flag, Proof };
  K k;
  Span span;
  std::string name;
  std::string path;
  std::vector<Binder> binders;
  ExprPtr type;
  ExprPtr body;
  std::vector<Item> items;
};

struct SourceModule {
  std::string path;
  std::vector<Item> items;
};

// Throws SyntaxError with the expected token set in the message.
SourceModule parse_module(const std::string& text, const std::string& path = "<input>");
ExprPtr parse_expr(const std::string& text, const std::string& path = "<input>");

// ---- elaboration -----------------------------------------------------------

struct ElabOptions {
  bool check = true;       // run the kernel on every definition
  bool keep_going = false;
  uint64_t fuel = kDefaultFuel;
};

class Elaborator {
 public:
  explicit Elaborator(Environment& env, ElabOptions opts = {});
  ~Elaborator();

  // Elaborates (and checks) a module; imports are loaded relative to the
  // module path. Returns false once a definition failed and keep_going is off.
  bool run_file(const std::string& path);
  bool run_module(const SourceModule& m);
  // Treats a file as already elaborated into the environment.
  void assume_loaded(const std::string& path);

  const std::vector<DefinitionResult>& results() const { return results_; }
  const std::vector<DefPtr>& definitions() const { return defs_; }
  bool failed() const { return failed_; }

  // Elaborates a closed expression against the current environment.
  TermPtr elaborate_closed(const ExprPtr& e, const TermPtr& expected = nullptr);

  Environment& env() { return env_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Environment& env_;
  ElabOptions opts_;
  std::vector<DefinitionResult> results_;
  std::vector<DefPtr> defs_;
  bool failed_ = false;
};

// Reads a file, or all `.ld` files under a directory in sorted order.
std::vector<std::string> expand_paths(const std::vector<std::string>& paths);

// ---- printing --------------------------------------------------------------

// Fully explicit concrete syntax that parses back to the same definition.
std::string pretty_print(const Definition& d);
std::string pretty_term(const TermPtr& t, const std::vector<std::string>& names = {});

// Mathematical rendering with notations (lossy: hides implicit carriers).
std::string display_term(const TermPtr& t, const std::vector<std::string>& names = {});
// Statement of a definition: its type under its parameters, with notations.
std::string display_statement(const Definition& d);

}  // namespace ldc
