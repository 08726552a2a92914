#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vocabx {

enum class ErrorCode {
  kInvalidTerm,
  kInvalidParams,
  kUnknownModel,
  kConflict,
  kNotAccepted,
  kUnsupportedVersion,
  kMalformedPayload,
  kIo,
  kMalformedModel,
  kSessionNotFound,
};

/// Stable snake_case name used in API error bodies.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vocabx
