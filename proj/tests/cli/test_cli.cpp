#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "csv.hpp"
#include "job.hpp"

namespace fs = std::filesystem;
using qopt_cli::Command;
using qopt_cli::json;

namespace {

std::string parse_error_field(const std::string& text) {
  try {
    qopt_cli::parse_config(text);
  } catch (const qopt_cli::JobError& e) {
    return e.field();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workspace {
  fs::path dir;

  Workspace() {
    dir = fs::temp_directory_path() / ("qopt_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }

  // Runs the qopt binary and returns its exit status.
  int run(const std::string& command, const fs::path& config, const fs::path& out) const {
    std::string cmd = std::string("\"") + QOPT_CLI_PATH + "\" " + command;
    if (!config.empty()) cmd += " -c \"" + config.string() + "\"";
    cmd += " -o \"" + out.string() + "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
};

double squeezed_even_weight(double r, int m) {
  return std::pow(std::tanh(r) / 2.0, 2 * m) * std::tgamma(2 * m + 1.0) /
         (std::cosh(r) * std::pow(std::tgamma(m + 1.0), 2));
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = qopt_cli::parse_config(
      R"({"command":"pnd","state":{"type":"coherent","alpha":[1]}})");
  CHECK(cfg.command == Command::pnd);
  CHECK(cfg.name == "pnd");
  CHECK(cfg.per_mode_cap == 64);
  CHECK(cfg.state->n_modes == 1);

  CHECK(parse_error_field(R"({"command":"teleport"})") == "command");
  CHECK(parse_error_field(R"({"command":"pnd"})") == "state");
  CHECK(parse_error_field(R"({"command":"pnd","state":{"type":"coherent","alpha":[1,"x"]}})") ==
        "state.alpha[1]");
  CHECK(parse_error_field(R"({"command":"wigner","state":{"type":"vacuum"},
      "grid":{"q":{"min":1,"max":-1,"count":5},"p":{"min":-1,"max":1,"count":5}}})") == "grid.q");
  CHECK(parse_error_field(R"({"command":"wigner","state":{"type":"vacuum"},
      "grid":{"q":{"min":-1,"max":1,"count":5},"p":{"min":-1,"max":1,"count":1}}})") == "grid.p");
  CHECK(parse_error_field(R"({"command":"evolve","state":{"type":"vacuum"},"t_end":1})") ==
        "hamiltonian");
  CHECK(parse_error_field(R"({"command":"cat","state":{"type":"vacuum"}})") == "state.type");
  CHECK(parse_error_field("{oops") == "<root>");

  try {
    qopt_cli::parse_config(R"({"command":"pnd","state":{"type":"vacuum"}})", Command::wigner);
    FAIL("expected a mismatch error");
  } catch (const qopt_cli::JobError& e) {
    CHECK(e.field() == "command");
    CHECK(e.status() == QOPT_PARSE_ERROR);
  }
}

TEST_CASE("number formatting") {
  CHECK(qopt_cli::format_number(0.1) == "0.1");
  CHECK(std::stod(qopt_cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(qopt_cli::format_number(-0.0) == "-0");
}

TEST_CASE("squeezed vacuum photon statistics job") {
  Workspace ws;
  const auto cfg = ws.write("sq.json", R"({"command":"pnd","name":"sq",
      "state":{"type":"squeezed_vacuum","r":1},"per_mode_cap":128})");
  REQUIRE(ws.run("pnd", cfg, ws.dir / "out") == 0);
  const auto table = qopt_cli::read_csv((ws.dir / "out" / "sq.csv").string());
  REQUIRE(table.header == std::vector<std::string>{"n1", "probability"});
  int checked = 0;
  for (const auto& row : table.rows) {
    const int n = static_cast<int>(row[0]);
    const double expect = n % 2 == 0 ? squeezed_even_weight(1.0, n / 2) : 0.0;
    CHECK(std::abs(row[1] - expect) <= 1e-9);
    ++checked;
  }
  CHECK(checked > 30);
  const json meta = json::parse(slurp(ws.dir / "out" / "sq.meta.json"));
  CHECK(meta["command"] == "pnd");
  CHECK(meta.contains("library_version"));
  CHECK(meta.contains("tolerances"));
  CHECK(meta["config"]["state"]["r"] == 1);
}

TEST_CASE("odd cat Wigner grid has a negative region") {
  Workspace ws;
  const auto cfg = ws.write("cat.json", R"({"command":"wigner",
      "state":{"type":"cat","A":[1.5],"parity":"odd"},
      "grid":{"q":{"min":-4,"max":4,"count":41},"p":{"min":-4,"max":4,"count":41}}})");
  REQUIRE(ws.run("wigner", cfg, ws.dir / "out") == 0);
  const auto table = qopt_cli::read_csv((ws.dir / "out" / "wigner.csv").string());
  REQUIRE(table.header == std::vector<std::string>{"q", "p", "W"});
  CHECK(table.rows.size() == 41u * 41u);
  double min_w = 0.0;
  for (const auto& row : table.rows) min_w = std::min(min_w, row[2]);
  CHECK(min_w == doctest::Approx(-2.0));
  CHECK(fs::exists(ws.dir / "out" / "wigner.gp"));
}

TEST_CASE("reruns are byte-identical") {
  Workspace ws;
  const auto cfg = ws.write("e.json", R"({"command":"epsilon",
      "profile":{"expression":"1 + sin(2*t)/2"},"t_end":5,"max_photons":4})");
  REQUIRE(ws.run("epsilon", cfg, ws.dir / "a") == 0);
  REQUIRE(ws.run("epsilon", cfg, ws.dir / "b") == 0);
  const std::string a = slurp(ws.dir / "a" / "epsilon.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(ws.dir / "b" / "epsilon.csv"));
  CHECK(slurp(ws.dir / "a" / "epsilon.meta.json") == slurp(ws.dir / "b" / "epsilon.meta.json"));
}

TEST_CASE("evolve and qfunc jobs") {
  Workspace ws;
  const auto ev = ws.write("ev.json", R"({"command":"evolve",
      "state":{"type":"coherent","alpha":[[1,0]]},"hamiltonian":{"preset":"oscillator"},
      "t_end":3.141592653589793,"samples":4})");
  REQUIRE(ws.run("evolve", ev, ws.dir / "out") == 0);
  const auto t = qopt_cli::read_csv((ws.dir / "out" / "evolve.csv").string());
  REQUIRE(t.rows.size() == 5u);
  CHECK(t.header[0] == "t");
  // Half a period later the coherent amplitude has changed sign.
  CHECK(t.rows.back()[2] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));

  const auto qf = ws.write("qf.json", R"({"command":"qfunc","state":{"type":"vacuum"},
      "grid":{"q":{"min":-1,"max":1,"count":3},"p":{"min":-1,"max":1,"count":3}}})");
  REQUIRE(ws.run("qfunc", qf, ws.dir / "out") == 0);
  const auto q = qopt_cli::read_csv((ws.dir / "out" / "qfunc.csv").string());
  CHECK(q.rows[4][2] == doctest::Approx(1.0));
}

TEST_CASE("tomography jobs chain through a sinogram file") {
  Workspace ws;
  const auto fw = ws.write("fw.json", R"({"command":"tomo-forward","name":"sino",
      "state":{"type":"squeezed_vacuum","r":0.5},"angles":64,
      "grid":{"x":{"min":-8,"max":8,"count":129}}})");
  REQUIRE(ws.run("tomo-forward", fw, ws.dir) == 0);
  const auto inv = ws.write("inv.json", R"({"command":"tomo-invert","sinogram":"sino.csv",
      "grid":{"q":{"min":-2,"max":2,"count":21},"p":{"min":-2,"max":2,"count":21}}})");
  REQUIRE(ws.run("tomo-invert", inv, ws.dir / "out") == 0);
  const auto rec = qopt_cli::read_csv((ws.dir / "out" / "tomo-invert.csv").string());
  double peak = 0.0;
  for (const auto& row : rec.rows) peak = std::max(peak, row[2]);
  CHECK(peak == doctest::Approx(2.0).epsilon(0.03));

  const auto sym = ws.write("sym.json", R"({"command":"tomo-invert","method":"symplectic",
      "state":{"type":"vacuum"},"directions":48,
      "grid":{"x":{"min":-7,"max":7,"count":141},"q":{"min":-1,"max":1,"count":5},
              "p":{"min":-1,"max":1,"count":5}}})");
  REQUIRE(ws.run("tomo-invert", sym, ws.dir / "sym") == 0);
  const json meta = json::parse(slurp(ws.dir / "sym" / "tomo-invert.meta.json"));
  CHECK(meta["diagnostics"]["reference_linf_error"].get<double>() <= 0.1);
}

TEST_CASE("failures produce structured errors") {
  Workspace ws;
  const auto bad = ws.write("bad.json", R"({"command":"pnd","state":{"type":"coherent","alpha":[1,"x"]}})");
  fs::create_directories(ws.dir / "out");
  CHECK(ws.run("pnd", bad, ws.dir / "out") == 2);
  const json err = json::parse(slurp(ws.dir / "out" / "error.json"))["error"];
  CHECK(err["field"] == "state.alpha[1]");
  CHECK(err["status"] == "parse_error");
  CHECK(json::parse(slurp(ws.dir / "stderr.txt"))["error"]["field"] == "state.alpha[1]");

  const auto beyond = ws.write("c.json", R"({"command":"epsilon",
      "profile":{"table":[[0,1],[1,1]]},"t_end":2})");
  CHECK(ws.run("epsilon", beyond, ws.dir / "out") == 1);
  const json e2 = json::parse(slurp(ws.dir / "out" / "error.json"))["error"];
  CHECK(e2["module"] == "parametric");
  CHECK(e2["status"] == "out_of_range");

  CHECK(ws.run("pnd", ws.dir / "missing.json", ws.dir / "out") == 1);
  CHECK(ws.run("wigner", {}, ws.dir / "out") == 2);
}

TEST_CASE("verify job") {
  Workspace ws;
  REQUIRE(ws.run("verify", {}, ws.dir / "out") == 0);
  const json report = json::parse(slurp(ws.dir / "out" / "verify.json"));
  CHECK(report["passed"] == true);
  CHECK(report["checks"].size() == 11u);
}
