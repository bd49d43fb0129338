#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qopt {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch,
  singular_matrix,
  degenerate_overlap,
  resource_limit,
  step_underflow,
  out_of_range,
  caustic,
  parse_error,
  io_error,
  internal,
};

std::string_view to_string(ErrorCode code);

/// Library exception. Carries the module and operation that raised it so the
/// C API and CLI can report where a failure came from.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, std::string operation,
        const std::string& message, std::string field = {})
      : std::runtime_error(message),
        code_(code),
        module_(std::move(module)),
        operation_(std::move(operation)),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }
  /// Config or JSON path of the offending input, when known.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string module_;
  std::string operation_;
  std::string field_;
};

[[noreturn]] void raise(ErrorCode code, std::string_view module,
                        std::string_view operation, const std::string& message);

}  // namespace qopt
