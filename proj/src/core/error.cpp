#include "symrmt/error.hpp"

namespace symrmt {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::ChamberBoundary: return "chamber boundary";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::NonSemisimple: return "non-semisimple";
    case ErrorCode::NotAtRootValues: return "not at root values";
    case ErrorCode::Numerical: return "numerical failure";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace symrmt
