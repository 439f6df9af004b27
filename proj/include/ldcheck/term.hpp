#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ldc {

enum class Sort : uint8_t { Star, Box };

enum class Tag : uint8_t { Sort, Var, Pi, Lam, App, Const, Meta };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Nameless term. `name` is a display hint on binders and variables and the
// identity of a constant. Meta nodes only exist during elaboration; `index`
// then counts the binders between the meta's home context and the node.
struct Term {
  Tag tag;
  Sort sort = Sort::Star;
  uint32_t index = 0;
  uint32_t meta = 0;
  uint32_t loose = 0;  // one more than the largest loose variable index
  uint32_t size = 1;
  std::string name;
  TermPtr a, b;
  std::vector<TermPtr> args;
};

constexpr uint32_t kOpenMeta = UINT32_MAX;

TermPtr mk_sort(Sort s);
TermPtr mk_star();
TermPtr mk_box();
TermPtr mk_var(uint32_t index, std::string hint = "x");
TermPtr mk_pi(std::string hint, TermPtr dom, TermPtr body);
TermPtr mk_lam(std::string hint, TermPtr dom, TermPtr body);
TermPtr mk_app(TermPtr fn, TermPtr arg);
TermPtr mk_apps(TermPtr fn, const std::vector<TermPtr>& args);
TermPtr mk_const(std::string name, std::vector<TermPtr> args = {});
TermPtr mk_meta(uint32_t id, uint32_t shift = 0);
// Non-dependent product A -> B; B is shifted under the new binder.
TermPtr mk_arrow(TermPtr dom, TermPtr cod);

bool is_sort(const TermPtr& t, Sort s);
bool has_meta(const TermPtr& t);

// Adds d to every variable >= cutoff. Throws UnderflowError if a variable
// would become negative.
TermPtr shift(const TermPtr& t, int64_t d, uint32_t cutoff = 0);

// Replaces variable j by v and lowers the variables above j by one.
TermPtr subst(const TermPtr& t, uint32_t j, const TermPtr& v);

// Body under n binders, vals[0] for the outermost binder.
TermPtr instantiate(const TermPtr& body, const std::vector<TermPtr>& vals);

// Structural equality ignoring binder hints.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Head and arguments of an application spine.
TermPtr spine(const TermPtr& t, std::vector<TermPtr>& args);

bool mentions_const(const TermPtr& t, const std::string& name);
void collect_consts(const TermPtr& t, std::vector<std::string>& out);

}  // namespace ldc
