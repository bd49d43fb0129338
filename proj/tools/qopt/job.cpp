#include "job.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "csv.hpp"

namespace qopt_cli {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::pnd, "pnd"},
    {Command::wigner, "wigner"},
    {Command::qfunc, "qfunc"},
    {Command::evolve, "evolve"},
    {Command::epsilon, "epsilon"},
    {Command::cat, "cat"},
    {Command::tomo_forward, "tomo-forward"},
    {Command::tomo_invert, "tomo-invert"},
    {Command::verify, "verify"},
};

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json* find(const json& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& key, const std::string& path = {}) {
  const json* v = find(j, key);
  if (v == nullptr) config_error(join(path, key), "missing field");
  return *v;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) config_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error(field, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) config_error(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    config_error(field, "integer out of range");
  }
  return static_cast<int>(v);
}

double number_or(const json& j, const std::string& key, double fallback) {
  const json* v = find(j, key);
  return v == nullptr ? fallback : number(*v, key);
}

int integer_or(const json& j, const std::string& key, int fallback) {
  const json* v = find(j, key);
  return v == nullptr ? fallback : integer(*v, key);
}

double positive(double v, const std::string& field) {
  if (!(v > 0.0)) config_error(field, "must be positive");
  return v;
}

qopt_grid parse_grid(const json& j, const std::string& field) {
  if (!j.is_object()) config_error(field, "expected {\"min\", \"max\", \"count\"}");
  qopt_grid g{};
  g.min = number(require(j, "min", field), join(field, "min"));
  g.max = number(require(j, "max", field), join(field, "max"));
  g.count = integer(require(j, "count", field), join(field, "count"));
  if (g.count < 2) config_error(field, "grid needs at least 2 points");
  if (!(g.min < g.max)) config_error(field, "grid must be strictly increasing (min < max)");
  return g;
}

qopt_grid grid_at(const json& cfg, const std::string& axis) {
  const json& grid = require(cfg, "grid");
  return parse_grid(require(grid, axis, "grid"), "grid." + axis);
}

StateSpec parse_state(const json& j) {
  if (!j.is_object()) config_error("state", "expected a state object");
  StateSpec spec;
  const std::string text = j.dump();
  const json* type = find(j, "type");
  if (type != nullptr && type->is_string() && type->get<std::string>() == "cat") {
    qopt_cat* c = nullptr;
    check(qopt_cat_from_json(text.c_str(), &c), "state");
    spec.cat = Cat(c, qopt_cat_free);
    check(qopt_cat_n_modes(c, &spec.n_modes));
  } else {
    qopt_gaussian* g = nullptr;
    check(qopt_gaussian_from_json(text.c_str(), &g), "state");
    spec.gaussian = Gaussian(g, qopt_gaussian_free);
    check(qopt_gaussian_n_modes(g, &spec.n_modes));
  }
  return spec;
}

void require_single_mode(const StateSpec& s, const std::string& what) {
  if (s.n_modes != 1) {
    throw JobError(QOPT_DIMENSION_MISMATCH, "cli", "parse_config",
                   "state: " + what + " needs a single-mode state", "state");
  }
}

std::vector<std::string> index_header(int modes) {
  std::vector<std::string> h;
  for (int k = 1; k <= modes; ++k) h.push_back("n" + std::to_string(k));
  h.emplace_back("probability");
  return h;
}

std::string grid_plot(const std::string& csv, const std::string& title) {
  return "set datafile separator ','\n"
         "set xlabel 'q'\nset ylabel 'p'\n"
         "set title '" + title + "'\n"
         "set size ratio -1\n"
         "plot '" + csv + "' skip 1 using 1:2:3 with image notitle\n";
}

std::string line_plot(const std::string& csv, const std::string& columns, const std::string& style,
                      const std::string& xlabel, const std::string& ylabel) {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel '" + xlabel + "'\nset ylabel '" + ylabel + "'\n"
         "plot '" + csv + "' using " + columns + " with " + style + "\n";
}

// Writes q, p, value rows; value(i, j) is the function at (q_i, p_j).
template <class F>
std::string grid_csv(const qopt_grid& q, const qopt_grid& p, const char* name, F&& value) {
  CsvWriter w({"q", "p", name});
  const double dq = (q.max - q.min) / (q.count - 1);
  const double dp = (p.max - p.min) / (p.count - 1);
  for (int i = 0; i < q.count; ++i) {
    const double qi = i == q.count - 1 ? q.max : q.min + i * dq;
    for (int j = 0; j < p.count; ++j) {
      const double pj = j == p.count - 1 ? p.max : p.min + j * dp;
      w.cell(qi).cell(pj).cell(value(i, j, qi, pj)).end_row();
    }
  }
  return w.str();
}

std::vector<double> grid_values(const qopt_wigner_grid* g) {
  qopt_grid q{};
  qopt_grid p{};
  check(qopt_wigner_grid_axes(g, &q, &p));
  std::vector<double> v(static_cast<std::size_t>(q.count) * static_cast<std::size_t>(p.count));
  check(qopt_wigner_grid_values(g, v.data()));
  return v;
}

OwnedWignerGrid wigner_grid_of(const StateSpec& s, int mode, qopt_grid q, qopt_grid p) {
  qopt_wigner_grid* g = nullptr;
  if (s.is_cat()) {
    check(qopt_cat_wigner_grid(s.cat.get(), q, p, &g));
  } else {
    check(qopt_gaussian_wigner_grid(s.gaussian.get(), mode, q, p, &g));
  }
  return OwnedWignerGrid(g);
}

json summarize_grid(const std::vector<double>& v, const qopt_wigner_grid* g) {
  double norm = 0.0;
  check(qopt_wigner_grid_normalization(g, &norm));
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {{"normalization", norm}, {"min", *lo}, {"max", *hi}};
}

std::string distribution_csv(const qopt_distribution* d, json& diag) {
  std::size_t size = 0;
  int modes = 0;
  double mass = 0.0;
  int cap_hit = 0;
  check(qopt_distribution_size(d, &size));
  check(qopt_distribution_n_modes(d, &modes));
  check(qopt_distribution_mass(d, &mass, &cap_hit));
  CsvWriter w(index_header(modes));
  std::vector<int> idx(static_cast<std::size_t>(modes));
  for (std::size_t i = 0; i < size; ++i) {
    double prob = 0.0;
    check(qopt_distribution_entry(d, i, idx.data(), &prob));
    for (int k : idx) w.cell(static_cast<long long>(k));
    w.cell(prob).end_row();
  }
  diag["mass"] = mass;
  diag["cap_hit"] = cap_hit != 0;
  diag["entries"] = size;
  return w.str();
}

// ---- commands

ArtifactSet run_pnd(const JobConfig& cfg) {
  ArtifactSet out;
  qopt_distribution* d = nullptr;
  if (cfg.state->is_cat()) {
    check(qopt_cat_distribution(cfg.state->cat.get(), cfg.mass_target, cfg.per_mode_cap, &d));
  } else {
    check(qopt_gaussian_distribution(cfg.state->gaussian.get(), cfg.mass_target, cfg.per_mode_cap,
                                     &d));
  }
  const OwnedDistribution dist(d);
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, distribution_csv(d, out.diagnostics)});
  if (cfg.state->n_modes == 1) {
    out.files.push_back({cfg.name + ".gp", line_plot(csv, "1:2", "impulses", "n", "P(n)")});
  }
  out.tolerances = {{"mass_target", cfg.mass_target}, {"per_mode_cap", cfg.per_mode_cap}};
  return out;
}

ArtifactSet run_wigner(const JobConfig& cfg) {
  ArtifactSet out;
  const auto g = wigner_grid_of(*cfg.state, cfg.mode, cfg.q, cfg.p);
  const auto v = grid_values(g.get());
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, grid_csv(cfg.q, cfg.p, "W", [&](int i, int j, double, double) {
                         return v[static_cast<std::size_t>(i * cfg.p.count + j)];
                       })});
  out.files.push_back({cfg.name + ".gp", grid_plot(csv, "Wigner function")});
  out.diagnostics = summarize_grid(v, g.get());
  return out;
}

ArtifactSet run_qfunc(const JobConfig& cfg) {
  ArtifactSet out;
  OwnedGaussian reduced;
  if (!cfg.state->is_cat()) {
    qopt_gaussian* r = nullptr;
    check(qopt_gaussian_reduced(cfg.state->gaussian.get(), 1, &cfg.mode, &r));
    reduced.reset(r);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, grid_csv(cfg.q, cfg.p, "Q", [&](int, int, double q, double p) {
                         const qopt_complex beta{q / std::sqrt(2.0), p / std::sqrt(2.0)};
                         double v = 0.0;
                         if (reduced) {
                           check(qopt_gaussian_q(reduced.get(), &beta, &v));
                         } else {
                           check(qopt_cat_q(cfg.state->cat.get(), &beta, &v));
                         }
                         lo = std::min(lo, v);
                         hi = std::max(hi, v);
                         return v;
                       })});
  out.files.push_back({cfg.name + ".gp", grid_plot(csv, "Husimi Q function")});
  out.diagnostics = {{"min", lo}, {"max", hi}};
  return out;
}

ArtifactSet run_evolve(const JobConfig& cfg) {
  ArtifactSet out;
  qopt_flow* f = nullptr;
  check(qopt_flow_integrate(cfg.hamiltonian.get(), cfg.t_end, cfg.tolerance, cfg.samples, &f));
  const OwnedFlow flow(f);
  const int n = cfg.state->n_modes;
  const int d = 2 * n;
  std::vector<std::string> header{"t"};
  for (int k = 1; k <= n; ++k) header.push_back("mean_p" + std::to_string(k));
  for (int k = 1; k <= n; ++k) header.push_back("mean_q" + std::to_string(k));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) header.push_back("M" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  }
  header.emplace_back("purity");
  CsvWriter w(header);
  std::size_t size = 0;
  check(qopt_flow_size(f, &size));
  std::vector<double> mean(static_cast<std::size_t>(d));
  std::vector<double> disp(static_cast<std::size_t>(d * d));
  for (std::size_t s = 0; s < size; ++s) {
    double t = 0.0;
    check(qopt_flow_sample(f, s, &t, nullptr, nullptr));
    qopt_gaussian* e = nullptr;
    check(qopt_flow_evolve(f, cfg.state->gaussian.get(), t, &e));
    const OwnedGaussian evolved(e);
    double purity = 0.0;
    check(qopt_gaussian_mean(e, mean.data()));
    check(qopt_gaussian_disp(e, disp.data()));
    check(qopt_gaussian_purity(e, &purity));
    w.cell(t);
    for (double m : mean) w.cell(m);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) w.cell(disp[static_cast<std::size_t>(i * d + j)]);
    }
    w.cell(purity).end_row();
  }
  double defect = 0.0;
  check(qopt_flow_max_defect(f, &defect));
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, w.str()});
  out.files.push_back({cfg.name + ".gp",
                       line_plot(csv, "1:" + std::to_string(n + 2) + " with lines, '' using 1:2",
                                 "lines", "t", "mean quadrature")});
  out.tolerances = {{"ode", cfg.tolerance}};
  out.diagnostics = {{"max_symplectic_defect", defect}, {"samples", size}};
  return out;
}

ArtifactSet run_epsilon(const JobConfig& cfg) {
  ArtifactSet out;
  qopt_trajectory* tr = nullptr;
  check(qopt_epsilon_solve(cfg.profile.get(), cfg.t_end, cfg.tolerance, cfg.samples, &tr));
  const OwnedTrajectory traj(tr);
  std::vector<std::string> header{"t",       "eps_re",  "eps_im",  "deps_re", "deps_im",
                                  "phase",   "sigma_x", "sigma_p", "r"};
  for (int m = 0; m <= cfg.max_photons; ++m) header.push_back("P" + std::to_string(m));
  CsvWriter w(header);
  std::size_t size = 0;
  check(qopt_trajectory_size(tr, &size));
  for (std::size_t s = 0; s < size; ++s) {
    double t = 0.0;
    double phase = 0.0;
    qopt_complex eps{};
    qopt_complex deps{};
    double sx = 0.0;
    double sp = 0.0;
    double r = 0.0;
    check(qopt_trajectory_sample(tr, s, &t, &eps, &deps, &phase));
    check(qopt_trajectory_variances(tr, t, &sx, &sp, &r));
    w.cell(t).cell(eps.re).cell(eps.im).cell(deps.re).cell(deps.im).cell(phase);
    w.cell(sx).cell(sp).cell(r);
    for (int m = 0; m <= cfg.max_photons; ++m) {
      double prob = 0.0;
      check(qopt_squeezed_vacuum_pnd(tr, t, m, &prob));
      w.cell(prob);
    }
    w.end_row();
  }
  double wronskian = 0.0;
  check(qopt_trajectory_wronskian_defect(tr, &wronskian));
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, w.str()});
  out.files.push_back(
      {cfg.name + ".gp", line_plot(csv, "1:7, '' using 1:8", "lines", "t", "variance")});
  out.tolerances = {{"ode", cfg.tolerance}};
  out.diagnostics = {{"wronskian_defect", wronskian}, {"samples", size}};
  return out;
}

ArtifactSet run_cat(const JobConfig& cfg) {
  ArtifactSet out = run_pnd(cfg);
  const qopt_cat* c = cfg.state->cat.get();
  const int n = cfg.state->n_modes;
  std::vector<double> mean(static_cast<std::size_t>(n));
  std::vector<double> mandel(static_cast<std::size_t>(n));
  std::vector<double> cov(static_cast<std::size_t>(n * n));
  check(qopt_cat_moments(c, mean.data(), cov.data(), mandel.data()));
  std::vector<std::string> header{"mode", "mean_n", "mandel_q"};
  for (int k = 1; k <= n; ++k) header.push_back("cov_" + std::to_string(k));
  CsvWriter w(header);
  for (int i = 0; i < n; ++i) {
    w.cell(static_cast<long long>(i + 1)).cell(mean[static_cast<std::size_t>(i)]);
    w.cell(mandel[static_cast<std::size_t>(i)]);
    for (int k = 0; k < n; ++k) w.cell(cov[static_cast<std::size_t>(i * n + k)]);
    w.end_row();
  }
  out.files.push_back({cfg.name + "_moments.csv", w.str()});
  double norm = 0.0;
  check(qopt_cat_normalization(c, &norm));
  out.diagnostics["normalization"] = norm;
  return out;
}

std::string sinogram_csv(const qopt_sinogram* s) {
  int n_angles = 0;
  qopt_grid x{};
  check(qopt_sinogram_shape(s, &n_angles, &x));
  std::vector<double> theta(static_cast<std::size_t>(n_angles));
  std::vector<double> values(static_cast<std::size_t>(n_angles) * static_cast<std::size_t>(x.count));
  check(qopt_sinogram_data(s, theta.data(), values.data()));
  CsvWriter w({"theta", "x", "w"});
  const double dx = (x.max - x.min) / (x.count - 1);
  for (int i = 0; i < n_angles; ++i) {
    for (int j = 0; j < x.count; ++j) {
      const double xj = j == x.count - 1 ? x.max : x.min + j * dx;
      w.cell(theta[static_cast<std::size_t>(i)]).cell(xj);
      w.cell(values[static_cast<std::size_t>(i * x.count + j)]).end_row();
    }
  }
  return w.str();
}

OwnedSinogram forward(const JobConfig& cfg) {
  qopt_sinogram* s = nullptr;
  if (cfg.state->is_cat()) {
    check(qopt_sinogram_from_cat(cfg.state->cat.get(), cfg.angles, cfg.x, cfg.v_max, cfg.n_v, &s));
  } else {
    check(qopt_sinogram_from_gaussian(cfg.state->gaussian.get(), cfg.angles, cfg.x, &s));
  }
  return OwnedSinogram(s);
}

ArtifactSet run_tomo_forward(const JobConfig& cfg) {
  ArtifactSet out;
  const auto s = forward(cfg);
  double defect = 0.0;
  check(qopt_sinogram_max_slice_defect(s.get(), &defect));
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, sinogram_csv(s.get())});
  out.files.push_back({cfg.name + ".gp",
                       "set datafile separator ','\nset xlabel 'X'\nset ylabel 'theta'\n"
                       "plot '" + csv + "' skip 1 using 2:1:3 with image notitle\n"});
  if (cfg.state->is_cat()) out.tolerances = {{"v_max", cfg.v_max}, {"n_v", cfg.n_v}};
  out.diagnostics = {{"max_slice_defect", defect}};
  return out;
}

// Rebuilds a sinogram from theta,x,w rows grouped by angle.
OwnedSinogram load_sinogram(const std::string& path) {
  const CsvTable t = read_csv(path);
  const auto fail = [&](const std::string& msg) -> void {
    throw JobError(QOPT_PARSE_ERROR, "cli", "read_csv", path + ": " + msg, "sinogram");
  };
  if (t.header.size() != 3) fail("expected columns theta,x,w");
  if (t.rows.empty()) fail("no data rows");
  std::vector<double> theta;
  std::vector<double> xs;
  std::vector<double> values;
  for (const auto& row : t.rows) {
    if (theta.empty() || row[0] != theta.back()) theta.push_back(row[0]);
    if (theta.size() == 1) xs.push_back(row[1]);
    values.push_back(row[2]);
  }
  const std::size_t nx = xs.size();
  if (nx < 2 || values.size() != theta.size() * nx) fail("rows do not form a rectangular (theta, x) lattice");
  const qopt_grid x{xs.front(), xs.back(), static_cast<int>(nx)};
  const double dx = (x.max - x.min) / (x.count - 1);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double expect = x.min + static_cast<double>(r % nx) * dx;
    if (std::abs(t.rows[r][1] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      fail("x column is not the same uniform grid for every angle (row " + std::to_string(r + 2) + ")");
    }
  }
  qopt_sinogram* s = nullptr;
  check(qopt_sinogram_create(static_cast<int>(theta.size()), theta.data(), x, values.data(), &s),
        "sinogram");
  return OwnedSinogram(s);
}

ArtifactSet run_tomo_invert(const JobConfig& cfg) {
  ArtifactSet out;
  OwnedWignerGrid rec;
  qopt_wigner_grid* g = nullptr;
  if (cfg.method == "symplectic") {
    const auto source = wigner_grid_of(*cfg.state, 0, cfg.x, cfg.x);
    check(qopt_wigner_from_symplectic(source.get(), cfg.directions, cfg.x, cfg.q, cfg.p, cfg.reg_s,
                                      &g));
    rec.reset(g);
    out.tolerances = {{"reg_s", cfg.reg_s}, {"directions", cfg.directions}};
  } else {
    const OwnedSinogram s = cfg.sinogram_path.empty() ? forward(cfg) : load_sinogram(cfg.sinogram_path);
    check(qopt_inverse_radon(s.get(), cfg.q, cfg.p, cfg.reg_s, &g));
    rec.reset(g);
    out.tolerances = {{"reg_s", cfg.reg_s}};
  }
  const auto v = grid_values(rec.get());
  const std::string csv = cfg.name + ".csv";
  out.files.push_back({csv, grid_csv(cfg.q, cfg.p, "W", [&](int i, int j, double, double) {
                         return v[static_cast<std::size_t>(i * cfg.p.count + j)];
                       })});
  out.files.push_back({cfg.name + ".gp", grid_plot(csv, "reconstructed Wigner function")});
  out.diagnostics = summarize_grid(v, rec.get());
  if (cfg.state) {
    const auto exact = grid_values(wigner_grid_of(*cfg.state, 0, cfg.q, cfg.p).get());
    double err = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      err = std::max(err, std::abs(v[k] - exact[k]));
      peak = std::max(peak, std::abs(exact[k]));
    }
    out.diagnostics["reference_linf_error"] = err;
    out.diagnostics["reference_peak"] = peak;
  }
  return out;
}

ArtifactSet run_verify(const JobConfig& cfg) {
  ArtifactSet out;
  char* report = nullptr;
  int passed = 0;
  check(qopt_verify(&report, &passed));
  std::string text(report);
  qopt_string_free(report);
  out.files.push_back({cfg.name + ".json", text + "\n"});
  out.success = passed != 0;
  out.diagnostics = {{"passed", passed != 0}};
  return out;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> command_from_name(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

JobConfig parse_config(std::string_view text, std::optional<Command> command,
                       std::filesystem::path base_dir) {
  JobConfig cfg;
  try {
    cfg.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw JobError(QOPT_PARSE_ERROR, "cli", "parse_config", e.what(), "<root>");
  }
  const json& j = cfg.raw;
  if (!j.is_object()) config_error("<root>", "expected a JSON object");
  cfg.base_dir = std::move(base_dir);

  if (const json* c = find(j, "command")) {
    if (!c->is_string()) config_error("command", "expected a string");
    const auto parsed = command_from_name(c->get<std::string>());
    if (!parsed) {
      std::string names;
      for (const auto& [cmd, name] : kCommands) names += (names.empty() ? "" : ", ") + std::string(name);
      config_error("command", "unknown command '" + c->get<std::string>() + "' (expected " + names + ")");
    }
    if (command && *command != *parsed) {
      config_error("command", "config says '" + std::string(command_name(*parsed)) +
                                  "' but the command line says '" +
                                  std::string(command_name(*command)) + "'");
    }
    cfg.command = *parsed;
  } else if (command) {
    cfg.command = *command;
  } else {
    config_error("command", "missing field");
  }

  cfg.name = std::string(command_name(cfg.command));
  if (const json* n = find(j, "name")) {
    if (!n->is_string() || n->get<std::string>().empty()) config_error("name", "expected a nonempty string");
    cfg.name = n->get<std::string>();
    if (cfg.name.find_first_of("/\\") != std::string::npos) config_error("name", "must not contain path separators");
  }

  const auto load_state = [&] { cfg.state = parse_state(require(j, "state")); };
  switch (cfg.command) {
    case Command::pnd:
    case Command::cat:
      load_state();
      if (cfg.command == Command::cat && !cfg.state->is_cat()) {
        config_error("state.type", "cat jobs need a state with \"type\": \"cat\"");
      }
      cfg.mass_target = number_or(j, "mass_target", 1.0 - 1e-10);
      if (!(cfg.mass_target > 0.0 && cfg.mass_target <= 1.0)) config_error("mass_target", "must be in (0, 1]");
      cfg.per_mode_cap = integer_or(j, "per_mode_cap", 64);
      if (cfg.per_mode_cap < 1) config_error("per_mode_cap", "must be >= 1");
      break;
    case Command::wigner:
    case Command::qfunc:
      load_state();
      cfg.q = grid_at(j, "q");
      cfg.p = grid_at(j, "p");
      cfg.mode = integer_or(j, "mode", 0);
      if (cfg.mode < 0 || cfg.mode >= cfg.state->n_modes) config_error("mode", "out of range");
      if (cfg.state->is_cat()) require_single_mode(*cfg.state, "phase-space grids");
      break;
    case Command::evolve: {
      load_state();
      if (cfg.state->is_cat()) config_error("state.type", "evolve needs a Gaussian state");
      const std::string h = require(j, "hamiltonian").dump();
      qopt_hamiltonian* ham = nullptr;
      check(qopt_hamiltonian_from_json(h.c_str(), &ham), "hamiltonian");
      cfg.hamiltonian = Hamiltonian(ham, qopt_hamiltonian_free);
      int hm = 0;
      check(qopt_hamiltonian_n_modes(ham, &hm));
      if (hm != cfg.state->n_modes) {
        throw JobError(QOPT_DIMENSION_MISMATCH, "cli", "parse_config",
                       "hamiltonian: mode count differs from the state", "hamiltonian");
      }
      cfg.t_end = positive(number(require(j, "t_end"), "t_end"), "t_end");
      cfg.tolerance = positive(number_or(j, "tolerance", 1e-9), "tolerance");
      cfg.samples = integer_or(j, "samples", 200);
      if (cfg.samples < 1) config_error("samples", "must be >= 1");
      break;
    }
    case Command::epsilon: {
      const std::string p = require(j, "profile").dump();
      qopt_profile* prof = nullptr;
      check(qopt_profile_from_json(p.c_str(), &prof), "profile");
      cfg.profile = Profile(prof, qopt_profile_free);
      cfg.t_end = positive(number(require(j, "t_end"), "t_end"), "t_end");
      cfg.tolerance = positive(number_or(j, "tolerance", 1e-9), "tolerance");
      cfg.samples = integer_or(j, "samples", 0);
      if (cfg.samples < 0) config_error("samples", "must be >= 0");
      cfg.max_photons = integer_or(j, "max_photons", -1);
      if (cfg.max_photons < -1) config_error("max_photons", "must be >= 0");
      break;
    }
    case Command::tomo_forward:
      load_state();
      require_single_mode(*cfg.state, "tomography");
      cfg.angles = integer(require(j, "angles"), "angles");
      if (cfg.angles < 1) config_error("angles", "must be >= 1");
      cfg.x = grid_at(j, "x");
      cfg.v_max = positive(number_or(j, "v_max", std::max(std::abs(cfg.x.min), std::abs(cfg.x.max))), "v_max");
      cfg.n_v = integer_or(j, "n_v", 1025);
      break;
    case Command::tomo_invert: {
      cfg.q = grid_at(j, "q");
      cfg.p = grid_at(j, "p");
      cfg.reg_s = positive(number_or(j, "reg_s", 1e-2), "reg_s");
      cfg.method = "radon";
      if (const json* m = find(j, "method")) {
        if (!m->is_string() || (m->get<std::string>() != "radon" && m->get<std::string>() != "symplectic")) {
          config_error("method", "expected \"radon\" or \"symplectic\"");
        }
        cfg.method = m->get<std::string>();
      }
      const json* sino = find(j, "sinogram");
      if (sino != nullptr) {
        if (!sino->is_string()) config_error("sinogram", "expected a CSV path");
        if (cfg.method == "symplectic") config_error("sinogram", "the symplectic method needs a state");
        std::filesystem::path path(sino->get<std::string>());
        if (path.is_relative()) path = cfg.base_dir / path;
        cfg.sinogram_path = path.string();
      }
      if (find(j, "state") != nullptr) {
        load_state();
        require_single_mode(*cfg.state, "tomography");
      }
      if (sino == nullptr) {
        if (!cfg.state) config_error("state", "missing field (or give \"sinogram\")");
        cfg.x = grid_at(j, "x");
        if (cfg.method == "symplectic") {
          cfg.directions = integer_or(j, "directions", 64);
        } else {
          cfg.angles = integer(require(j, "angles"), "angles");
          cfg.v_max = positive(number_or(j, "v_max", std::max(std::abs(cfg.x.min), std::abs(cfg.x.max))), "v_max");
          cfg.n_v = integer_or(j, "n_v", 1025);
        }
      }
      break;
    }
    case Command::verify:
      break;
  }
  return cfg;
}

ArtifactSet execute_job(const JobConfig& cfg) {
  switch (cfg.command) {
    case Command::pnd: return run_pnd(cfg);
    case Command::wigner: return run_wigner(cfg);
    case Command::qfunc: return run_qfunc(cfg);
    case Command::evolve: return run_evolve(cfg);
    case Command::epsilon: return run_epsilon(cfg);
    case Command::cat: return run_cat(cfg);
    case Command::tomo_forward: return run_tomo_forward(cfg);
    case Command::tomo_invert: return run_tomo_invert(cfg);
    case Command::verify: return run_verify(cfg);
  }
  throw JobError(QOPT_INTERNAL, "cli", "execute_job", "unhandled command");
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw JobError(QOPT_IO_ERROR, "cli", "write_output", "cannot write " + path.string());
}

}  // namespace

void write_output(const JobConfig& cfg, const ArtifactSet& artifacts,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw JobError(QOPT_IO_ERROR, "cli", "write_output",
                   "cannot create " + out_dir.string() + ": " + ec.message());
  }
  json outputs = json::array();
  for (const auto& a : artifacts.files) {
    write_file(out_dir / a.filename, a.content);
    outputs.push_back(a.filename);
  }
  const json meta = {
      {"command", command_name(cfg.command)},
      {"config", cfg.raw},
      {"library_version", qopt_version()},
      {"sign_convention", qopt_sign_convention()},
      {"csv_number_format", "shortest round-trip decimal"},
      {"tolerances", artifacts.tolerances},
      {"diagnostics", artifacts.diagnostics},
      {"outputs", outputs},
  };
  write_file(out_dir / (cfg.name + ".meta.json"), meta.dump(2) + "\n");
}

json error_json(const JobError& e) {
  json err = {
      {"status", qopt_status_name(e.status())},
      {"code", static_cast<int>(e.status())},
      {"module", e.module()},
      {"operation", e.operation()},
      {"message", e.what()},
  };
  if (!e.field().empty()) err["field"] = e.field();
  return {{"error", err}};
}

}  // namespace qopt_cli
