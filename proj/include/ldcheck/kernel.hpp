#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldcheck/env.hpp"

namespace ldc {

constexpr uint64_t kDefaultFuel = 1000000;

struct Stats {
  uint64_t beta = 0;
  uint64_t delta = 0;
  uint64_t fuel_used() const { return beta + delta; }
};

// Outermost binder first.
using Context = std::vector<Param>;

// Definitions already accepted at a kind instance, keyed by name and the
// positions of the `*` parameters that received kinds.
using SchemaMemo = std::set<std::string>;

class Kernel {
 public:
  explicit Kernel(const Environment& env, uint64_t fuel = kDefaultFuel,
                  std::shared_ptr<SchemaMemo> memo = nullptr);

  TermPtr delta_unfold(const TermPtr& c);
  TermPtr whnf(const TermPtr& t);
  TermPtr whnf_beta(const TermPtr& t);
  TermPtr normalize(const TermPtr& t, const std::set<std::string>& freeze = {});
  bool convertible(const TermPtr& a, const TermPtr& b);

  TermPtr infer(Context& ctx, const TermPtr& t);
  void check(Context& ctx, const TermPtr& t, const TermPtr& type);
  // Sort of a type, or SortError.
  Sort sort_of(Context& ctx, const TermPtr& type);

  // d is checked against the environment, which must not contain it yet
  // (or may contain it at a later position; only earlier entries are used).
  void check_definition(const Definition& d);

  const Environment& env() const { return env_; }
  Stats stats;
  uint64_t fuel;
  // Called after every beta or delta step taken by normalize.
  std::function<void(const char*, const TermPtr&)> trace;

 private:
  void tick_beta();
  void tick_delta();
  TermPtr reduce_head(const TermPtr& t, bool delta, const std::set<std::string>* freeze);
  TermPtr unfold_head(const TermPtr& t);
  TermPtr nf(const TermPtr& t, const std::set<std::string>& freeze);
  void check_params(Context& ctx, const Definition& d, const std::vector<bool>* kinded);
  void check_instance(const Definition& d, const std::vector<bool>& kinded);
  TermPtr infer_const(Context& ctx, const TermPtr& t);
  bool conv_args(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b);

  const Environment& env_;
  std::shared_ptr<SchemaMemo> memo_;
};

// Free-function forms of the kernel operations.
TermPtr delta_unfold(const Environment& env, const TermPtr& c);
TermPtr whnf(const Environment& env, const TermPtr& t, uint64_t fuel = kDefaultFuel);
TermPtr normalize(const Environment& env, const TermPtr& t,
                  const std::set<std::string>& freeze = {}, uint64_t fuel = kDefaultFuel);
bool convertible(const Environment& env, const TermPtr& a, const TermPtr& b,
                 uint64_t fuel = kDefaultFuel);
TermPtr infer_type(const Environment& env, const Context& ctx, const TermPtr& t,
                   uint64_t fuel = kDefaultFuel);
void check_type(const Environment& env, const Context& ctx, const TermPtr& t,
                const TermPtr& type, uint64_t fuel = kDefaultFuel);
Stats check_definition(const Environment& env, const Definition& d,
                       uint64_t fuel = kDefaultFuel);

struct DefinitionResult {
  std::string name;
  bool ok = true;
  ErrorKind kind = ErrorKind::TypeMismatch;
  std::string message;
  Span span;
  Stats stats;
};

struct EnvironmentReport {
  std::vector<DefinitionResult> results;
  bool ok() const;
  size_t failures() const;
};

// Checks defs in order, adding each accepted one to a fresh environment
// (or to `base` when given). Stops at the first failure unless keep_going.
EnvironmentReport check_environment(const std::vector<DefPtr>& defs, bool keep_going = false,
                                    uint64_t fuel = kDefaultFuel,
                                    Environment* base = nullptr);

// Debug rendering with binder hints; used in kernel error messages.
std::string show(const TermPtr& t, std::vector<std::string> names = {});

}  // namespace ldc
