#pragma once

#include <string>

#include <json.hpp>

#include "qopt/cats.hpp"
#include "qopt/dynamics.hpp"
#include "qopt/gaussian.hpp"
#include "qopt/parametric.hpp"

namespace qopt::serialization {

using nlohmann::json;

// Every reader takes the JSON path of its argument so parse errors can name
// the offending field, e.g. "state.alpha[1]".

cplx complex_from_json(const json& j, const std::string& path);
json complex_to_json(cplx z);

json gaussian_to_json(const gaussian::GaussianState& s);
/// Either {n_modes, mean, disp} or a constructor form
/// {"type": "vacuum" | "coherent" | "thermal" | "squeezed_vacuum" | "pure_gaussian", ...}.
gaussian::GaussianState gaussian_from_json(const json& j, const std::string& path);

json cat_to_json(const cats::CatState& c);
/// {"A": [[re, im], ...], "parity": "even" | "odd"}.
cats::CatState cat_from_json(const json& j, const std::string& path);

json profile_to_json(const parametric::FrequencyProfile& p);
/// {"preset": name}, {"table": [[t, w2], ...]}, {"expression": text} or a bare
/// expression string.
parametric::FrequencyProfile profile_from_json(const json& j, const std::string& path);

/// {"preset": "free", "mass", "force"}, {"preset": "oscillator", "mass",
/// "omega", "force"}, {"preset": "parametric", "omega_squared": profile} or
/// {"B": [[...]], "C": [...]}.
dynamics::QuadraticHamiltonian hamiltonian_from_json(const json& j, const std::string& path);

/// Raises ErrorCode::parse_error mentioning path.
[[noreturn]] void parse_fail(const std::string& path, const std::string& message);

double number_at(const json& j, const std::string& key, const std::string& path);
double number_or(const json& j, const std::string& key, double fallback, const std::string& path);
int integer_at(const json& j, const std::string& key, const std::string& path);
int integer_or(const json& j, const std::string& key, int fallback, const std::string& path);
std::string string_at(const json& j, const std::string& key, const std::string& path);

}  // namespace qopt::serialization
