#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "qopt/qopt.h"

namespace qopt_cli {

/// Failure surfaced to the user as the structured error JSON.
class JobError : public std::runtime_error {
 public:
  JobError(qopt_status status, std::string module, std::string operation,
           const std::string& message, std::string field = {})
      : std::runtime_error(message),
        status_(status),
        module_(std::move(module)),
        operation_(std::move(operation)),
        field_(std::move(field)) {}

  qopt_status status() const { return status_; }
  const std::string& module() const { return module_; }
  const std::string& operation() const { return operation_; }
  const std::string& field() const { return field_; }

 private:
  qopt_status status_;
  std::string module_;
  std::string operation_;
  std::string field_;
};

[[noreturn]] inline void config_error(const std::string& field, const std::string& message) {
  throw JobError(QOPT_PARSE_ERROR, "cli", "parse_config", field + ": " + message, field);
}

/// Throws the library's last error if status is not QOPT_OK. A non-empty
/// prefix is prepended to the reported field path.
inline void check(qopt_status status, const std::string& prefix = {}) {
  if (status == QOPT_OK) return;
  std::string field = qopt_last_error_field();
  std::string message = qopt_last_error_message();
  if (!prefix.empty()) {
    if (field.empty() || field == "<root>") {
      field = prefix;
    } else {
      field = prefix + "." + field;
    }
    message = prefix + ": " + message;
  }
  throw JobError(status, qopt_last_error_module(), qopt_last_error_operation(), message, field);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Gaussian = std::shared_ptr<qopt_gaussian>;
using Cat = std::shared_ptr<qopt_cat>;
using Hamiltonian = std::shared_ptr<qopt_hamiltonian>;
using Profile = std::shared_ptr<qopt_profile>;

template <class T, void (*Free)(T*)>
using Owned = std::unique_ptr<T, Deleter<T, Free>>;

using OwnedGaussian = Owned<qopt_gaussian, qopt_gaussian_free>;
using OwnedDistribution = Owned<qopt_distribution, qopt_distribution_free>;
using OwnedFlow = Owned<qopt_flow, qopt_flow_free>;
using OwnedTrajectory = Owned<qopt_trajectory, qopt_trajectory_free>;
using OwnedSinogram = Owned<qopt_sinogram, qopt_sinogram_free>;
using OwnedWignerGrid = Owned<qopt_wigner_grid, qopt_wigner_grid_free>;

}  // namespace qopt_cli
