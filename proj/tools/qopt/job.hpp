#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "capi.hpp"

namespace qopt_cli {

using nlohmann::json;

enum class Command { pnd, wigner, qfunc, evolve, epsilon, cat, tomo_forward, tomo_invert, verify };

std::string_view command_name(Command c);
std::optional<Command> command_from_name(std::string_view name);

/// Either a Gaussian or a cat state, built from a "state" object.
struct StateSpec {
  Gaussian gaussian;
  Cat cat;
  int n_modes = 1;

  bool is_cat() const { return cat != nullptr; }
};

struct JobConfig {
  Command command = Command::verify;
  /// Stem of every output file; defaults to the command name.
  std::string name;
  /// The config as read, echoed into the metadata sidecar.
  json raw;
  /// Directory of the config file; relative input paths resolve against it.
  std::filesystem::path base_dir;

  std::optional<StateSpec> state;
  Hamiltonian hamiltonian;
  Profile profile;

  qopt_grid q{};
  qopt_grid p{};
  qopt_grid x{};
  int mode = 0;
  int angles = 0;
  double t_end = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  double mass_target = 0.0;
  int per_mode_cap = 0;
  int max_photons = 0;
  double reg_s = 0.0;
  double v_max = 0.0;
  int n_v = 0;
  std::string method;
  int directions = 0;
  std::string sinogram_path;
};

/// Validates text as a job config. command is used when the config has no
/// "command" field; when both are present they must agree.
JobConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt,
                       std::filesystem::path base_dir = {});

struct Artifact {
  std::string filename;
  std::string content;
};

struct ArtifactSet {
  std::vector<Artifact> files;
  json tolerances = json::object();
  json diagnostics = json::object();
  /// False when the job ran but its result is a failure (verify).
  bool success = true;
};

ArtifactSet execute_job(const JobConfig& cfg);

/// Writes every artifact plus <name>.meta.json into out_dir.
void write_output(const JobConfig& cfg, const ArtifactSet& artifacts,
                  const std::filesystem::path& out_dir);

json error_json(const JobError& e);

}  // namespace qopt_cli
