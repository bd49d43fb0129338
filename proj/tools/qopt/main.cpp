#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "job.hpp"

namespace {

int report(const qopt_cli::JobError& e, const std::filesystem::path& out_dir) {
  const std::string text = qopt_cli::error_json(e).dump(2);
  std::cerr << text << "\n";
  if (!out_dir.empty()) {
    std::error_code ec;
    if (std::filesystem::is_directory(out_dir, ec)) {
      std::ofstream(out_dir / "error.json") << text << "\n";
    }
  }
  return e.status() == QOPT_PARSE_ERROR ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qopt: phase-space, photon statistics and tomography for Gaussian and cat states"};
  app.set_version_flag("--version", std::string(qopt_version()));

  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  bool verbose = false;

  std::vector<std::string> names;
  for (auto c : {qopt_cli::Command::pnd, qopt_cli::Command::wigner, qopt_cli::Command::qfunc,
                 qopt_cli::Command::evolve, qopt_cli::Command::epsilon, qopt_cli::Command::cat,
                 qopt_cli::Command::tomo_forward, qopt_cli::Command::tomo_invert,
                 qopt_cli::Command::verify}) {
    names.emplace_back(qopt_cli::command_name(c));
  }
  app.add_option("command", command, "Job to run")->required()->check(CLI::IsMember(names));
  app.add_option("-c,--config", config_path, "Job config (JSON); optional for verify");
  app.add_option("-o,--out-dir", out_dir, "Output directory")->capture_default_str();
  app.add_option("-t,--threads", threads, "Worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report(qopt_cli::JobError(QOPT_PARSE_ERROR, "cli", "arguments", e.what()), {});
  }

  const auto cmd = *qopt_cli::command_from_name(command);
  try {
    if (qopt_set_threads(threads) != QOPT_OK) qopt_cli::check(QOPT_INVALID_ARGUMENT);

    std::string text = "{}";
    std::filesystem::path base_dir = std::filesystem::current_path();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        throw qopt_cli::JobError(QOPT_IO_ERROR, "cli", "read_config", "cannot open " + config_path,
                                 "--config");
      }
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
      base_dir = std::filesystem::absolute(config_path).parent_path();
    } else if (cmd != qopt_cli::Command::verify) {
      throw qopt_cli::JobError(QOPT_PARSE_ERROR, "cli", "arguments",
                               "--config is required for " + command, "--config");
    }

    if (verbose) std::cerr << "qopt " << qopt_version() << ": parsing " << command << " job\n";
    const auto cfg = qopt_cli::parse_config(text, cmd, base_dir);
    if (verbose) std::cerr << "qopt: running\n";
    const auto artifacts = qopt_cli::execute_job(cfg);
    qopt_cli::write_output(cfg, artifacts, out_dir);
    if (verbose) {
      for (const auto& f : artifacts.files) std::cerr << "qopt: wrote " << f.filename << "\n";
    }
    if (!artifacts.success) {
      std::cerr << "qopt: " << command << " reported failures (see " << cfg.name << ".json)\n";
      return 1;
    }
    return 0;
  } catch (const qopt_cli::JobError& e) {
    return report(e, out_dir);
  } catch (const std::exception& e) {
    return report(qopt_cli::JobError(QOPT_INTERNAL, "cli", "main", e.what()), out_dir);
  }
}
