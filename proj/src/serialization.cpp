#include "qopt/serialization.hpp"

#include <cmath>

#include "qopt/errors.hpp"

namespace qopt::serialization {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(join(path, key), "missing field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(path, "expected a finite number");
  return v;
}

VectorXd vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array of numbers");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = as_number(j[i], index(path, i));
  }
  return v;
}

VectorXcd cvector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array of complex numbers");
  VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], index(path, i));
  }
  return v;
}

template <class Matrix, class Reader>
Matrix matrix_from_json(const json& j, const std::string& path, Reader read) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) parse_fail(index(path, 0), "expected a row array");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = index(path, r);
    if (!j[r].is_array() || j[r].size() != cols) parse_fail(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read(j[r][c], index(rp, c));
    }
  }
  return m;
}

MatrixXd rmatrix_from_json(const json& j, const std::string& path) {
  return matrix_from_json<MatrixXd>(j, path, as_number);
}

MatrixXcd cmatrix_from_json(const json& j, const std::string& path) {
  return matrix_from_json<MatrixXcd>(j, path, complex_from_json);
}

// Attaches the config path to library errors raised while building a value.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.field().empty()) throw;
    throw Error(e.code(), e.module(), e.operation(), path + ": " + e.what(), path);
  }
}

}  // namespace

void parse_fail(const std::string& path, const std::string& message) {
  const std::string where = path.empty() ? std::string("<root>") : path;
  throw Error(ErrorCode::parse_error, "serialization", "parse", where + ": " + message, where);
}

double number_at(const json& j, const std::string& key, const std::string& path) {
  return as_number(field(j, key, path), join(path, key));
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number_at(j, key, path);
}

int integer_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) parse_fail(join(path, key), "expected an integer");
  return v.get<int>();
}

int integer_or(const json& j, const std::string& key, int fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return integer_at(j, key, path);
}

std::string string_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) parse_fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {as_number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {as_number(j[0], index(path, 0)), as_number(j[1], index(path, 1))};
  }
  parse_fail(path, "expected a number or [re, im]");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json gaussian_to_json(const gaussian::GaussianState& s) {
  json disp = json::array();
  for (Eigen::Index r = 0; r < s.disp().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < s.disp().cols(); ++c) row.push_back(s.disp()(r, c));
    disp.push_back(row);
  }
  json mean = json::array();
  for (Eigen::Index k = 0; k < s.mean().size(); ++k) mean.push_back(s.mean()(k));
  return {{"n_modes", s.n_modes()}, {"mean", mean}, {"disp", disp}};
}

gaussian::GaussianState gaussian_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected a state object");
  if (!j.contains("type")) {
    const int n = integer_at(j, "n_modes", path);
    const VectorXd mean = vector_from_json(field(j, "mean", path), join(path, "mean"));
    const MatrixXd disp = rmatrix_from_json(field(j, "disp", path), join(path, "disp"));
    if (mean.size() != 2 * n) parse_fail(join(path, "mean"), "length must be 2*n_modes");
    if (disp.rows() != 2 * n || disp.cols() != 2 * n) {
      parse_fail(join(path, "disp"), "must be (2*n_modes) x (2*n_modes)");
    }
    return guarded(path, [&] { return gaussian::GaussianState(mean, disp); });
  }
  const std::string type = string_at(j, "type", path);
  if (type == "vacuum") {
    const int n = integer_or(j, "n_modes", 1, path);
    return guarded(path, [&] { return gaussian::make_vacuum(n); });
  }
  if (type == "coherent") {
    const VectorXcd a = cvector_from_json(field(j, "alpha", path), join(path, "alpha"));
    return guarded(path, [&] {
      return gaussian::make_coherent(std::span<const cplx>(a.data(), static_cast<std::size_t>(a.size())));
    });
  }
  if (type == "thermal") {
    const double t = number_at(j, "temperature", path);
    const double w = number_or(j, "omega", 1.0, path);
    return guarded(path, [&] { return gaussian::make_thermal_oscillator(t, w); });
  }
  if (type == "squeezed_vacuum") {
    const double r = number_at(j, "r", path);
    return guarded(path, [&] { return gaussian::make_squeezed_vacuum(r); });
  }
  if (type == "pure_gaussian") {
    const MatrixXcd m = cmatrix_from_json(field(j, "m", path), join(path, "m"));
    VectorXcd c = VectorXcd::Zero(m.rows());
    if (j.contains("c")) c = cvector_from_json(j["c"], join(path, "c"));
    return guarded(path, [&] { return gaussian::from_pure_gaussian({m, c}); });
  }
  parse_fail(join(path, "type"), "unknown state type '" + type +
                                     "' (expected vacuum, coherent, thermal, squeezed_vacuum, "
                                     "pure_gaussian)");
}

json cat_to_json(const cats::CatState& c) {
  json a = json::array();
  for (Eigen::Index k = 0; k < c.amplitudes().size(); ++k) a.push_back(complex_to_json(c.amplitudes()(k)));
  return {{"A", a}, {"parity", c.parity() == Parity::even ? "even" : "odd"}};
}

cats::CatState cat_from_json(const json& j, const std::string& path) {
  const VectorXcd a = cvector_from_json(field(j, "A", path), join(path, "A"));
  const std::string parity = string_at(j, "parity", path);
  if (parity != "even" && parity != "odd") {
    parse_fail(join(path, "parity"), "expected \"even\" or \"odd\"");
  }
  return guarded(path, [&] {
    return cats::CatState(a, parity == "even" ? Parity::even : Parity::odd);
  });
}

json profile_to_json(const parametric::FrequencyProfile& p) {
  using parametric::ProfileKind;
  switch (p.kind()) {
    case ProfileKind::tabulated: {
      json t = json::array();
      for (const auto& [time, w2] : p.table()) t.push_back(json::array({time, w2}));
      return {{"table", t}};
    }
    case ProfileKind::expression:
      return {{"expression", p.expression_text()}};
    default:
      return {{"preset", parametric::to_string(p.kind())}};
  }
}

parametric::FrequencyProfile profile_from_json(const json& j, const std::string& path) {
  using parametric::FrequencyProfile;
  if (j.is_string()) {
    return guarded(path, [&] { return FrequencyProfile::expression(j.get<std::string>()); });
  }
  if (!j.is_object()) parse_fail(path, "expected a profile object or expression string");
  if (j.contains("preset")) {
    const std::string name = string_at(j, "preset", path);
    return guarded(join(path, "preset"), [&] { return FrequencyProfile::preset(name); });
  }
  if (j.contains("table")) {
    const MatrixXd t = rmatrix_from_json(j["table"], join(path, "table"));
    if (t.cols() != 2) parse_fail(join(path, "table"), "rows must be [t, omega^2]");
    std::vector<std::pair<double, double>> rows;
    for (Eigen::Index r = 0; r < t.rows(); ++r) rows.emplace_back(t(r, 0), t(r, 1));
    return guarded(join(path, "table"), [&] { return FrequencyProfile::tabulated(rows); });
  }
  if (j.contains("expression")) {
    const std::string text = string_at(j, "expression", path);
    return guarded(join(path, "expression"), [&] { return FrequencyProfile::expression(text); });
  }
  parse_fail(path, "profile needs one of preset, table, expression");
}

dynamics::QuadraticHamiltonian hamiltonian_from_json(const json& j, const std::string& path) {
  using dynamics::QuadraticHamiltonian;
  if (!j.is_object()) parse_fail(path, "expected a Hamiltonian object");
  if (j.contains("preset")) {
    const std::string preset = string_at(j, "preset", path);
    const double mass = number_or(j, "mass", 1.0, path);
    const double force = number_or(j, "force", 0.0, path);
    if (preset == "free") {
      return guarded(path, [&] { return QuadraticHamiltonian::free_particle(mass, force); });
    }
    if (preset == "oscillator") {
      const double omega = number_or(j, "omega", 1.0, path);
      return guarded(path, [&] { return QuadraticHamiltonian::oscillator(mass, omega, force); });
    }
    if (preset == "parametric") {
      const auto profile =
          profile_from_json(field(j, "omega_squared", path), join(path, "omega_squared"));
      return QuadraticHamiltonian::parametric(
          [profile](double t) { return profile.omega_squared(t); });
    }
    parse_fail(join(path, "preset"),
               "unknown preset '" + preset + "' (expected free, oscillator, parametric)");
  }
  const MatrixXd b = rmatrix_from_json(field(j, "B", path), join(path, "B"));
  VectorXd c;
  if (j.contains("C")) c = vector_from_json(j["C"], join(path, "C"));
  return guarded(path, [&] { return QuadraticHamiltonian::constant(b, c); });
}

}  // namespace qopt::serialization
