#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldcheck/error.hpp"
#include "ldcheck/term.hpp"

namespace ldc {

struct Param {
  std::string name;
  TermPtr type;
  bool implicit = false;
};

// A parameterized definition. A null body makes it primitive (opaque).
struct Definition {
  std::string name;
  std::vector<Param> params;
  TermPtr type;
  TermPtr body;
  Span span;

  bool primitive() const { return body == nullptr; }
};

using DefPtr = std::shared_ptr<const Definition>;

class Environment {
 public:
  // Throws DuplicateName.
  void add(DefPtr d);
  const Definition* find(const std::string& name) const;
  const Definition& get(const std::string& name) const;  // throws UnknownConstant
  // Position in definition order, or -1.
  long position(const std::string& name) const;
  size_t size() const { return defs_.size(); }
  const std::vector<DefPtr>& defs() const { return defs_; }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

 private:
  std::vector<DefPtr> defs_;
  std::unordered_map<std::string, size_t> index_;
};

// Replaces the definition's parameters by args in t, which lives under the
// parameter telescope.
TermPtr instantiate_params(const Definition& d, const TermPtr& t,
                           const std::vector<TermPtr>& args);

// Type of parameter i after substituting the first i arguments.
TermPtr param_type(const Definition& d, size_t i, const std::vector<TermPtr>& args);

}  // namespace ldc
