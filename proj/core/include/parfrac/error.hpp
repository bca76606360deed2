#pragma once

#include <stdexcept>
#include <string>

namespace parfrac {

enum class Errc {
  DuplicateShift,
  LengthMismatch,
  UnderDetermined,
  UnknownMethod,
  InvalidFunction,
  NonUnitConstant,
  SingularShift,
  ZeroPivot,
  OutOfConvergenceRadius,
  BadArgument,
};

/// Thrown by every operation in the library. `code` identifies the failure;
/// validation failures (bad arguments) map to CLI exit code 2, numerical
/// failures (singular systems, divergent bounds) to exit code 3.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

  bool is_numerical() const noexcept {
    switch (code_) {
      case Errc::SingularShift:
      case Errc::ZeroPivot:
      case Errc::OutOfConvergenceRadius:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace parfrac
