#pragma once

#include <stdexcept>
#include <string>

namespace nec {

enum class ErrorKind {
  InvalidInput,  // malformed network, bad arguments
  GuardLimit,    // configured enumeration limit exceeded
  Invariant,     // internal consistency check failed
  Precondition,  // operation declined on its inputs
  Infeasible,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  // Short machine-readable tag such as "cycle-detected".
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& code, const std::string& detail) {
  throw Error(kind, code, detail);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Invariant, "invariant-violation", what);
}

}  // namespace nec
