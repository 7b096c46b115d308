#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bioright {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateAxes,
  kParseError,
  kSchemaError,
  kEmptyDataset,
  kTooSparse,
  kAlreadyWorldUnits,
  kMissingKeypoint,
  kNoValidFrames,
  kTimeGridMismatch,
  kEmptyWindow,
  kTooShort,
  kBadWindow,
  kNoStep,
  kUnreachable,
  kSingularMass,
  kDiverged,
  kModeUnsupported,
  kMissingTorque,
  kConfigError,
};

/// Stable snake_case identifier, used as the reason code in reports.
std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bioright
