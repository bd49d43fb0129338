#pragma once

#include <json.hpp>

namespace qopt {

/// Runs a fast suite of invariant checks across all modules. Returns
/// {"passed": bool, "checks": [{"name", "passed", "value", "tolerance"}...]}.
nlohmann::json run_verification();

}  // namespace qopt
