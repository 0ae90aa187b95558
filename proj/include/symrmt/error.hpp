#pragma once

#include <stdexcept>
#include <string>

namespace symrmt {

enum class ErrorCode {
  InvalidArgument,   // precondition or validation failure
  ChamberBoundary,   // radial point on or outside the open Weyl chamber
  Domain,            // argument outside the analytic domain of a function
  NonSemisimple,     // degenerate Killing form where a non-degenerate one is needed
  NotAtRootValues,   // CS couplings differ from the root values
  Numerical,         // integrator / decomposition failure
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace symrmt
