#pragma once

#include <stdexcept>
#include <string>

namespace fxlt {

enum class ErrorCode {
  InvalidArgument,
  DuplicateKey,
  BuildExhausted,
  BadMagic,
  UnsupportedVersion,
  CorruptHeader,
  CorruptBody,
  InconsistentGeometry,
};

const char* errorCodeName(ErrorCode code) noexcept;

/// All recoverable failures of the core library are reported as an Error
/// carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fxlt
