#pragma once

#include <stdexcept>
#include <string>

namespace ldc {

enum class ErrorKind {
  UnderflowError,
  UnknownConstant,
  ArityMismatch,
  Opaque,
  FuelExhausted,
  UnboundVariable,
  NotAFunction,
  TypeMismatch,
  SortError,
  DuplicateName,
  UnresolvedImplicit,
  SyntaxError,
  UnboundName,
  MissingEntry,
  IOError,
};

const char* kind_name(ErrorKind k);

struct Span {
  std::string file;
  size_t begin = 0;
  size_t end = 0;
  int line = 0;
  int col = 0;

  bool empty() const { return file.empty() && line == 0; }
  std::string str() const;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, Span span = {})
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
        kind(kind), message(std::move(message)), span(std::move(span)) {}

  ErrorKind kind;
  std::string message;
  Span span;
};

}  // namespace ldc
