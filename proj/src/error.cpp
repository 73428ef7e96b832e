#include "netputsim/error.hpp"

namespace netputsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kInvalidPrice: return "invalid_price";
    case ErrorCode::kInvalidArea: return "invalid_area";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kMissingColumn: return "missing_column";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kUnknownRegion: return "unknown_region";
    case ErrorCode::kUnknownNetput: return "unknown_netput";
    case ErrorCode::kIndustryMismatch: return "industry_mismatch";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kSingularMatrix: return "singular_matrix";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kAsymmetric: return "asymmetric_matrix";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::string> details)
    : std::runtime_error(message), code_(code), details_(std::move(details)) {}

}  // namespace netputsim
