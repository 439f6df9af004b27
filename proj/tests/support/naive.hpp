#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldcheck/env.hpp"
#include "ldcheck/kernel.hpp"

// Reference checker: normalizes both sides fully before every comparison and
// shares nothing with the kernel's reduction code.
namespace naive {

using ldc::TermPtr;

TermPtr lift(const TermPtr& t, long d, unsigned cutoff = 0);
TermPtr substitute(const TermPtr& t, unsigned j, const TermPtr& v);
bool same(const TermPtr& a, const TermPtr& b);

class Checker {
 public:
  explicit Checker(const ldc::Environment& env, uint64_t fuel = 50'000'000)
      : env_(env), fuel_(fuel) {}

  TermPtr normalize(const TermPtr& t);
  bool convertible(const TermPtr& a, const TermPtr& b);
  TermPtr infer(std::vector<ldc::Param>& ctx, const TermPtr& t);
  // Throws ldc::Error like the kernel.
  void check_definition(const ldc::Definition& d);

  uint64_t steps = 0;

 private:
  TermPtr whnf(const TermPtr& t);
  TermPtr unfold(const ldc::Definition& d, const std::vector<TermPtr>& args);
  ldc::Sort sort_of(std::vector<ldc::Param>& ctx, const TermPtr& ty);
  void check_params(std::vector<ldc::Param>& ctx, const ldc::Definition& d,
                    const std::vector<bool>* kinded);
  void tick();

  const ldc::Environment& env_;
  uint64_t fuel_;
  std::map<std::string, bool> instances_;
};

struct Verdict {
  std::string name;
  bool ok = true;
  ldc::ErrorKind kind = ldc::ErrorKind::TypeMismatch;
  std::string message;
};

// Checks defs in order against a fresh environment, continuing past failures.
std::vector<Verdict> check_all(const std::vector<ldc::DefPtr>& defs);

}  // namespace naive
