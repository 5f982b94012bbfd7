#pragma once

#include "ghostfd/analysis.hpp"
#include "ghostfd/assembly.hpp"
#include "ghostfd/benchmarks.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ghostfd {

/// Grid list of the full refinement study.
const std::vector<int>& paper13_sweep();

struct RunConfig {
  std::string benchmark = "annulus";
  StencilStrategy strategy;
  int order = 5;
  std::vector<int> grids{160};  // one entry: single run; several: sweep
  std::string sweep_name;       // informational ("paper13" when expanded from the name)
  std::filesystem::path out_dir = "out";
  bool export_matrix = false;
  bool export_diagnostics = false;
  bool inject_exact = false;    // skip the solve and use the analytic samples
  SolverKind solver = SolverKind::DirectLU;
  Execution execution = Execution::Parallel;
  BoundaryNodePolicy boundary_nodes = BoundaryNodePolicy::Exterior;

  /// Throws InvalidArgument.
  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults. Throws InvalidArgument on bad values.
  static RunConfig from_json(const nlohmann::json& j);
};

struct StageTimings {
  double classify = 0.0, stencils = 0.0, assemble = 0.0, solve = 0.0, analyze = 0.0;
};

/// Everything produced for one grid level.
struct Discretization {
  Grid grid;
  NodeClassification classification;
  std::vector<GhostRecord> ghosts;
  SparseSystem system;
};

Discretization discretize(const Benchmark& benchmark, int cells, const StencilStrategy& strategy,
                          Execution exec = Execution::Parallel, int order = 5,
                          BoundaryNodePolicy boundary_nodes = BoundaryNodePolicy::Exterior,
                          StageTimings* timings = nullptr);

struct LevelResult {
  int cells = 0;
  ErrorReport errors;
  double relative_residual = 0.0;
  SolverKind solver_used = SolverKind::DirectLU;
  int num_interior = 0;
  int num_ghost = 0;
  StencilDiagnostics diagnostics;
  std::optional<PecletNumbers> peclet;
  StageTimings timings;
};

struct LevelOptions {
  SolverKind solver = SolverKind::DirectLU;
  Execution execution = Execution::Parallel;
  int order = 5;
  bool inject_exact = false;
  BoundaryNodePolicy boundary_nodes = BoundaryNodePolicy::Exterior;
};

/// classify -> stencils -> boundary rows -> assemble -> solve -> errors.
/// `keep` receives the discretization when non-null.
LevelResult run_level(const Benchmark& benchmark, int cells, const StencilStrategy& strategy,
                      const LevelOptions& options = {}, Discretization* keep = nullptr);

std::vector<ErrorReport> error_series(const std::vector<LevelResult>& levels);

struct SweepResult {
  std::vector<LevelResult> levels;            // successful levels, increasing N
  std::vector<std::pair<int, std::string>> failures;
  std::optional<OrderFit> fit;                // absent with fewer than 3 successful levels
};

SweepResult run_sweep(const Benchmark& benchmark, const std::vector<int>& grids,
                      const StencilStrategy& strategy, const LevelOptions& options = {});

/// Runs `cfg` and writes the output files. Single grid: run.json, ghosts.csv,
/// timings.json, optional matrix.mtx / diagnostics.json. Several grids: the same
/// per level under level_<N>/ plus convergence.csv, orders.json and one
/// two-column file per norm. Returns the process exit code (0 ok, 1 numerical
/// failure); configuration problems throw.
int execute(const RunConfig& cfg);

/// "%.17g".
std::string format_double(double v);

}  // namespace ghostfd
