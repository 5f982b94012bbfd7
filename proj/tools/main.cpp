#include "ghostfd/error.hpp"
#include "ghostfd/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using ghostfd::Error;
using ghostfd::ErrorCode;
using nlohmann::json;

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 1;

bool is_config_error(ErrorCode code) {
  return code == ErrorCode::InvalidArgument || code == ErrorCode::UnknownDomain;
}

void report(const Error& e) {
  std::cerr << json{{"error", ghostfd::to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order ghost-point solver for convection-diffusion on level-set domains"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one grid level or a refinement sweep");
  std::string config_path, benchmark, strategy, sweep, out;
  double theta = 0.0;
  int n = 0;
  bool export_matrix = false, export_diagnostics = false, inject_exact = false, serial = false;
  run->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  run->add_option("--benchmark", benchmark, "Benchmark name");
  run->add_option("--strategy", strategy, "S1, S2, S3, S4.1, S4.2 or S4.3");
  run->add_option("--theta", theta, "Cone aperture in degrees");
  auto* n_opt = run->add_option("--n", n, "Cells per side");
  run->add_option("--sweep", sweep, "Named grid list (paper13)")->excludes(n_opt);
  run->add_flag("--export-matrix", export_matrix, "Write the global matrix in Matrix Market format");
  run->add_flag("--export-diagnostics", export_diagnostics, "Write stencil statistics");
  run->add_flag("--inject-exact", inject_exact, "Skip the solve and evaluate the analytic solution");
  run->add_flag("--serial", serial, "Use the serial reference kernels");
  run->add_option("--out", out, "Output directory");

  auto* list = app.add_subcommand("list", "List benchmark names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kConfigExit);
  }

  if (list->parsed()) {
    for (const auto& name : ghostfd::benchmark_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("cannot parse config: ") + e.what());
      }
    }
    if (!benchmark.empty()) j["benchmark"] = benchmark;
    if (!strategy.empty() || theta > 0.0) {
      if (!j.contains("strategy") || j["strategy"].is_string()) {
        json s = json::object();
        if (j.contains("strategy")) s["kind"] = j["strategy"];
        j["strategy"] = s;
      }
      if (!strategy.empty()) j["strategy"]["kind"] = strategy;
      if (theta > 0.0) j["strategy"]["theta"] = theta;
    }
    if (*n_opt) {
      j.erase("grids");
      j.erase("sweep");
      j["n"] = n;
    }
    if (!sweep.empty()) {
      j.erase("grids");
      j.erase("n");
      j["sweep"] = sweep;
    }
    if (export_matrix) j["export_matrix"] = true;
    if (export_diagnostics) j["export_diagnostics"] = true;
    if (inject_exact) j["inject_exact"] = true;
    if (serial) j["execution"] = "serial";
    if (!out.empty()) j["out"] = out;

    const auto cfg = ghostfd::RunConfig::from_json(j);
    return ghostfd::execute(cfg);
  } catch (const Error& e) {
    report(e);
    return is_config_error(e.code()) ? kConfigExit : kNumericalExit;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kConfigExit;
  }
}
