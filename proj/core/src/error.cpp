#include "bioright/error.hpp"

namespace bioright {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDegenerateAxes: return "degenerate_axes";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kSchemaError: return "schema_error";
    case ErrorCode::kEmptyDataset: return "empty_dataset";
    case ErrorCode::kTooSparse: return "too_sparse";
    case ErrorCode::kAlreadyWorldUnits: return "already_world_units";
    case ErrorCode::kMissingKeypoint: return "missing_keypoint";
    case ErrorCode::kNoValidFrames: return "no_valid_frames";
    case ErrorCode::kTimeGridMismatch: return "time_grid_mismatch";
    case ErrorCode::kEmptyWindow: return "empty_window";
    case ErrorCode::kTooShort: return "too_short";
    case ErrorCode::kBadWindow: return "bad_window";
    case ErrorCode::kNoStep: return "no_step";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kSingularMass: return "singular_mass";
    case ErrorCode::kDiverged: return "diverged";
    case ErrorCode::kModeUnsupported: return "mode_unsupported";
    case ErrorCode::kMissingTorque: return "missing_torque";
    case ErrorCode::kConfigError: return "config_error";
  }
  return "unknown";
}

}  // namespace bioright
