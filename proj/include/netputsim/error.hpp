#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netputsim {

// Stable codes; the CLI prints these verbatim in its JSON error records.
enum class ErrorCode {
  kDimensionMismatch,
  kInvalidPrice,
  kInvalidArea,
  kInvalidArgument,
  kMissingColumn,
  kParse,
  kValidation,
  kUnknownRegion,
  kUnknownNetput,
  kIndustryMismatch,
  kRankDeficient,
  kNotConverged,
  kSingularMatrix,
  kEmptyInput,
  kAsymmetric,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {});

  ErrorCode code() const noexcept { return code_; }
  // Offending rows, columns or trace lines, one entry each.
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace netputsim
