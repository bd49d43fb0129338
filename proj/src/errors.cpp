#include "qopt/errors.hpp"

namespace qopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::degenerate_overlap: return "degenerate_overlap";
    case ErrorCode::resource_limit: return "resource_limit";
    case ErrorCode::step_underflow: return "step_underflow";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::caustic: return "caustic";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

void raise(ErrorCode code, std::string_view module, std::string_view operation,
           const std::string& message) {
  throw Error(code, std::string(module), std::string(operation), message);
}

}  // namespace qopt
