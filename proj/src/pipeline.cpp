#include "ghostfd/pipeline.hpp"

#include "ghostfd/error.hpp"
#include "ghostfd/geometry.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace ghostfd {

using nlohmann::json;

const std::vector<int>& paper13_sweep() {
  static const std::vector<int> grids{160, 176, 194, 213, 234, 258, 283, 312, 343, 377, 415, 456, 502};
  return grids;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string_view solver_name(SolverKind k) { return k == SolverKind::DirectLU ? "direct-lu" : "gmres"; }
std::string_view execution_name(Execution e) { return e == Execution::Serial ? "serial" : "parallel"; }
std::string_view collar_name(CollarMode m) { return m == CollarMode::ClosestPoint ? "closest" : "axis"; }

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

}  // namespace

void RunConfig::validate() const {
  if (grids.empty()) bad_config("no grid size given");
  for (std::size_t k = 0; k < grids.size(); ++k) {
    if (grids[k] < 16) bad_config("grid size must be >= 16");
    if (k > 0 && grids[k] <= grids[k - 1]) bad_config("grid list must be strictly increasing");
  }
  if (order < 2) bad_config("order must be >= 2");
  strategy.validate(order);
}

json RunConfig::to_json() const {
  return json{
      {"benchmark", benchmark},
      {"strategy",
       {{"kind", to_string(strategy.kind)},
        {"triangle_size", strategy.triangle_size},
        {"theta", strategy.aperture_deg},
        {"local_tolerance", strategy.local_tolerance},
        {"global_tolerance", strategy.global_tolerance},
        {"max_replacements", strategy.max_replacements},
        {"ratio_scope", to_string(strategy.ratio_scope)}}},
      {"order", order},
      {"grids", grids},
      {"sweep", sweep_name},
      {"out", out_dir.string()},
      {"export_matrix", export_matrix},
      {"export_diagnostics", export_diagnostics},
      {"inject_exact", inject_exact},
      {"solver", solver_name(solver)},
      {"execution", execution_name(execution)},
      {"boundary_nodes", boundary_nodes == BoundaryNodePolicy::Reject ? "reject" : "exterior"},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) bad_config("configuration must be a JSON object");
    c.benchmark = j.value("benchmark", c.benchmark);
    if (j.contains("strategy")) {
      const json& s = j.at("strategy");
      if (s.is_string()) {
        c.strategy.kind = parse_strategy(s.get<std::string>());
      } else {
        if (s.contains("kind")) c.strategy.kind = parse_strategy(s.at("kind").get<std::string>());
        c.strategy.triangle_size = s.value("triangle_size", c.strategy.triangle_size);
        c.strategy.aperture_deg = s.value("theta", c.strategy.aperture_deg);
        c.strategy.local_tolerance = s.value("local_tolerance", c.strategy.local_tolerance);
        c.strategy.global_tolerance = s.value("global_tolerance", c.strategy.global_tolerance);
        c.strategy.max_replacements = s.value("max_replacements", c.strategy.max_replacements);
        if (s.contains("ratio_scope")) {
          c.strategy.ratio_scope = parse_ratio_scope(s.at("ratio_scope").get<std::string>());
        }
      }
    }
    c.order = j.value("order", c.order);
    c.sweep_name = j.value("sweep", c.sweep_name);
    if (j.contains("grids")) {
      c.grids = j.at("grids").get<std::vector<int>>();
    } else if (j.contains("n")) {
      c.grids = {j.at("n").get<int>()};
    } else if (c.sweep_name == "paper13") {
      c.grids = paper13_sweep();
    } else if (!c.sweep_name.empty()) {
      bad_config("unknown sweep '" + c.sweep_name + "'");
    }
    c.out_dir = j.value("out", c.out_dir.string());
    c.export_matrix = j.value("export_matrix", c.export_matrix);
    c.export_diagnostics = j.value("export_diagnostics", c.export_diagnostics);
    c.inject_exact = j.value("inject_exact", c.inject_exact);
    const std::string solver = j.value("solver", std::string(solver_name(c.solver)));
    if (solver == "direct-lu") c.solver = SolverKind::DirectLU;
    else if (solver == "gmres") c.solver = SolverKind::Gmres;
    else bad_config("unknown solver '" + solver + "'");
    const std::string exec = j.value("execution", std::string(execution_name(c.execution)));
    if (exec == "serial") c.execution = Execution::Serial;
    else if (exec == "parallel") c.execution = Execution::Parallel;
    else bad_config("unknown execution mode '" + exec + "'");
    const std::string on_boundary = j.value("boundary_nodes", std::string("exterior"));
    if (on_boundary == "exterior") c.boundary_nodes = BoundaryNodePolicy::Exterior;
    else if (on_boundary == "reject") c.boundary_nodes = BoundaryNodePolicy::Reject;
    else bad_config("unknown boundary node policy '" + on_boundary + "'");
  } catch (const json::exception& e) {
    bad_config(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Discretization discretize(const Benchmark& benchmark, int cells, const StencilStrategy& strategy,
                          Execution exec, int order, BoundaryNodePolicy boundary_nodes,
                          StageTimings* timings) {
  StageTimings local;
  auto t0 = Clock::now();
  Grid grid(cells);
  NodeClassification cls = classify_nodes(grid, benchmark.level_set, boundary_nodes);
  local.classify = seconds_since(t0);

  t0 = Clock::now();
  auto ghosts = build_ghost_rows(grid, cls, benchmark.level_set, benchmark.robin, strategy, exec, order);
  local.stencils = seconds_since(t0);

  t0 = Clock::now();
  SparseSystem sys = assemble(cls, ghosts, benchmark.coefficients, grid, exec);
  local.assemble = seconds_since(t0);
  if (timings) *timings = local;
  return Discretization{std::move(grid), std::move(cls), std::move(ghosts), std::move(sys)};
}

LevelResult run_level(const Benchmark& benchmark, int cells, const StencilStrategy& strategy,
                      const LevelOptions& options, Discretization* keep) {
  LevelResult res;
  res.cells = cells;
  Discretization d = discretize(benchmark, cells, strategy, options.execution, options.order,
                                options.boundary_nodes, &res.timings);
  res.num_interior = d.classification.num_interior();
  res.num_ghost = d.classification.num_ghost();

  auto t0 = Clock::now();
  Eigen::VectorXd solution(d.system.size());
  if (options.inject_exact) {
    for (int r = 0; r < d.system.size(); ++r) {
      solution(r) = benchmark.exact.value(d.grid.node(d.classification.node_of(r)));
    }
    res.relative_residual = 0.0;
  } else {
    SolveOptions so;
    so.kind = options.solver;
    SolveReport rep = solve(d.system, so);
    solution = std::move(rep.solution);
    res.relative_residual = rep.relative_residual;
    res.solver_used = rep.used;
  }
  res.timings.solve = seconds_since(t0);

  t0 = Clock::now();
  res.errors = compute_errors(solution, benchmark.exact, d.classification, d.grid);
  res.diagnostics = stencil_diagnostics(d.ghosts);
  if (benchmark.convection) res.peclet = peclet_numbers(benchmark, d.grid);
  res.timings.analyze = seconds_since(t0);
  if (keep) *keep = std::move(d);
  return res;
}

std::vector<ErrorReport> error_series(const std::vector<LevelResult>& levels) {
  std::vector<ErrorReport> out;
  for (const auto& l : levels) out.push_back(l.errors);
  return out;
}

SweepResult run_sweep(const Benchmark& benchmark, const std::vector<int>& grids,
                      const StencilStrategy& strategy, const LevelOptions& options) {
  SweepResult out;
  for (int n : grids) {
    try {
      out.levels.push_back(run_level(benchmark, n, strategy, options));
    } catch (const Error& e) {
      out.failures.emplace_back(n, e.what());
    }
  }
  if (out.levels.size() >= 3) out.fit = fit_order(error_series(out.levels));
  return out;
}

namespace {

json error_json(const ErrorReport& e) {
  return json{{"N", e.cells},          {"h", e.h},
              {"L1", e.l1},            {"Linf", e.linf},
              {"gradL1", e.grad_l1},   {"gradLinf", e.grad_linf},
              {"zero_normalization", e.zero_normalization}};
}

json box_json(const BoxStats& b) {
  return json{{"count", b.count}, {"min", b.min},       {"q1", b.q1},
              {"median", b.median}, {"q3", b.q3}, {"max", b.max}};
}

json diagnostics_json(const StencilDiagnostics& d) {
  json hist = json::object();
  for (const auto& [size, count] : d.size_histogram) hist[std::to_string(size)] = count;
  return json{{"ghosts", d.ghosts.size()},
              {"size_histogram", hist},
              {"diameter", box_json(d.diameter)},
              {"log10_condition", box_json(d.log10_condition)},
              {"log10_ratio", box_json(d.log10_ratio)},
              {"log10_dominance", box_json(d.log10_dominance)},
              {"zero_ratio_count", d.zero_ratio_count}};
}

json level_json(const RunConfig& cfg, const LevelResult& r) {
  json j{{"config", cfg.to_json()},
         {"errors", error_json(r.errors)},
         {"relative_residual", r.relative_residual},
         {"solver", cfg.inject_exact ? "injected" : std::string(solver_name(r.solver_used))},
         {"num_interior", r.num_interior},
         {"num_ghost", r.num_ghost},
         {"stencils", diagnostics_json(r.diagnostics)}};
  if (r.peclet) {
    j["peclet"] = {{"global", r.peclet->global}, {"cell", r.peclet->cell}};
    if (r.peclet->nominal_global) j["peclet"]["nominal_global"] = *r.peclet->nominal_global;
  }
  return j;
}

json timings_json(const StageTimings& t) {
  return json{{"classify", t.classify}, {"stencils", t.stencils}, {"assemble", t.assemble},
              {"solve", t.solve},       {"analyze", t.analyze}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string ghosts_csv(const StencilDiagnostics& d) {
  std::string s = "k,N_k,diameter,chi,R_k,R_all,collar\n";
  for (const auto& g : d.ghosts) {
    s += std::to_string(g.ghost) + "," + std::to_string(g.size) + "," + format_double(g.diameter) + "," +
         format_double(g.local_condition) + "," + format_double(g.global_ratio) + "," +
         format_double(g.dominance_ratio) + "," + std::string(collar_name(g.collar_mode)) + "\n";
  }
  return s;
}

/// One level: run, then write its files into `dir`. Returns the result or the error.
LevelResult run_and_write(const Benchmark& b, const RunConfig& cfg, int n, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  LevelOptions opt{cfg.solver, cfg.execution, cfg.order, cfg.inject_exact, cfg.boundary_nodes};
  Discretization d{Grid(n), {}, {}, {}};
  LevelResult r = run_level(b, n, cfg.strategy, opt, &d);
  write_json(dir / "run.json", level_json(cfg, r));
  write_json(dir / "timings.json", timings_json(r.timings));
  write_text(dir / "ghosts.csv", ghosts_csv(r.diagnostics));
  if (cfg.export_diagnostics) write_json(dir / "diagnostics.json", diagnostics_json(r.diagnostics));
  if (cfg.export_matrix) {
    std::ofstream out(dir / "matrix.mtx", std::ios::binary);
    write_matrix_market(d.system, out);
  }
  return r;
}

json failure_json(const Error& e) {
  return json{{"error", to_string(e.code())}, {"message", e.what()}};
}

}  // namespace

int execute(const RunConfig& cfg) {
  cfg.validate();
  const Benchmark bench = make_benchmark(cfg.benchmark);
  std::filesystem::create_directories(cfg.out_dir);

  if (cfg.grids.size() == 1) {
    try {
      run_and_write(bench, cfg, cfg.grids.front(), cfg.out_dir);
      return 0;
    } catch (const Error& e) {
      write_json(cfg.out_dir / "error.json", failure_json(e));
      std::cerr << failure_json(e).dump() << "\n";
      return 1;
    }
  }

  std::vector<LevelResult> levels;
  json failures = json::array();
  for (int n : cfg.grids) {
    try {
      levels.push_back(run_and_write(bench, cfg, n, cfg.out_dir / ("level_" + std::to_string(n))));
    } catch (const Error& e) {
      json f = failure_json(e);
      f["N"] = n;
      failures.push_back(f);
      std::cerr << f.dump() << "\n";
    }
  }

  std::string csv = "N,h,L1,Linf,gradL1,gradLinf\n";
  for (const auto& r : levels) {
    const auto& e = r.errors;
    csv += std::to_string(e.cells) + "," + format_double(e.h) + "," + format_double(e.l1) + "," +
           format_double(e.linf) + "," + format_double(e.grad_l1) + "," + format_double(e.grad_linf) + "\n";
  }
  write_text(cfg.out_dir / "convergence.csv", csv);

  for (Norm norm : kAllNorms) {
    std::string dat = "# log10(h) log10(" + std::string(to_string(norm)) + ")\n";
    for (const auto& r : levels) {
      dat += format_double(std::log10(r.errors.h)) + " " + format_double(std::log10(r.errors.get(norm))) + "\n";
    }
    write_text(cfg.out_dir / ("convergence_" + std::string(to_string(norm)) + ".dat"), dat);
  }

  json orders{{"config", cfg.to_json()}, {"levels", levels.size()}, {"failed_levels", failures}};
  orders["partial"] = !failures.empty();
  try {
    const OrderFit fit = fit_order(error_series(levels));
    json slopes = json::object(), pairwise = json::object();
    for (std::size_t k = 0; k < kAllNorms.size(); ++k) {
      slopes[std::string(to_string(kAllNorms[k]))] = fit.slopes[k];
      pairwise[std::string(to_string(kAllNorms[k]))] = fit.pairwise[k];
    }
    orders["slopes"] = slopes;
    orders["pairwise"] = pairwise;
  } catch (const Error& e) {
    orders["fit_skipped"] = e.what();
    std::cerr << "warning: " << e.what() << "\n";
  }
  write_json(cfg.out_dir / "orders.json", orders);
  return failures.empty() ? 0 : 1;
}

}  // namespace ghostfd
