#include "ldcheck/env.hpp"

namespace ldc {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnderflowError: return "UnderflowError";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::Opaque: return "Opaque";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SortError: return "SortError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnresolvedImplicit: return "UnresolvedImplicit";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::MissingEntry: return "MissingEntry";
    case ErrorKind::IOError: return "IOError";
  }
  return "Error";
}

std::string Span::str() const {
  if (empty()) return "";
  return file + ":" + std::to_string(line) + ":" + std::to_string(col);
}

void Environment::add(DefPtr d) {
  if (index_.count(d->name))
    throw Error(ErrorKind::DuplicateName, "'" + d->name + "' is already defined", d->span);
  index_.emplace(d->name, defs_.size());
  defs_.push_back(std::move(d));
}

const Definition* Environment::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : defs_[it->second].get();
}

const Definition& Environment::get(const std::string& name) const {
  auto d = find(name);
  if (!d) throw Error(ErrorKind::UnknownConstant, "unknown constant '" + name + "'");
  return *d;
}

long Environment::position(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : long(it->second);
}

TermPtr instantiate_params(const Definition& d, const TermPtr& t,
                           const std::vector<TermPtr>& args) {
  return instantiate(t, args);
}

TermPtr param_type(const Definition& d, size_t i, const std::vector<TermPtr>& args) {
  std::vector<TermPtr> prefix(args.begin(), args.begin() + i);
  return instantiate(d.params[i].type, prefix);
}

}  // namespace ldc
