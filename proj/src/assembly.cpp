#include "ghostfd/assembly.hpp"

#include "ghostfd/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

namespace ghostfd {

ProblemCoefficients::ProblemCoefficients(double diffusion, VelocityField velocity, ScalarField source)
    : diffusion_(diffusion), velocity_(std::move(velocity)), source_(std::move(source)) {
  if (!(diffusion > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffusion coefficient must be > 0");
}

namespace {

// Offsets -2..2 along one axis.
constexpr std::array<double, 5> kSecondDerivative{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
constexpr std::array<double, 5> kFirstDerivative{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};

SparseRow sorted_row(std::vector<std::pair<int, double>> entries, double rhs) {
  std::sort(entries.begin(), entries.end());
  SparseRow row;
  row.rhs = rhs;
  for (const auto& [col, value] : entries) {
    if (!row.columns.empty() && row.columns.back() == col) {
      row.values.back() += value;
    } else {
      row.columns.push_back(col);
      row.values.push_back(value);
    }
  }
  return row;
}

}  // namespace

SparseRow interior_row(int node, const ProblemCoefficients& coeffs, const Grid& grid,
                       const NodeClassification& classification) {
  const auto [i, j] = grid.index(node);
  const Point x = grid.node(i, j);
  const double h = grid.spacing();
  const double k = coeffs.diffusion();
  const Point u = coeffs.velocity(x);

  std::vector<std::pair<int, double>> entries;
  entries.reserve(10);
  for (int s = -kCrossReach; s <= kCrossReach; ++s) {
    const double lap = -k * kSecondDerivative[s + 2] / (h * h);
    const std::array<std::pair<int, int>, 2> nbs{{{i + s, j}, {i, j + s}}};
    const std::array<double, 2> conv{u.x() * kFirstDerivative[s + 2] / h,
                                     u.y() * kFirstDerivative[s + 2] / h};
    for (int axis = 0; axis < 2; ++axis) {
      const auto [ii, jj] = nbs[axis];
      const int id = grid.contains(ii, jj) ? grid.id(ii, jj) : -1;
      if (id < 0 || !classification.is_active(id)) {
        throw Error(ErrorCode::MissingNeighbor,
                    "interior node " + std::to_string(node) + " references an inactive node", id);
      }
      entries.emplace_back(classification.active_index(id), lap + conv[axis]);
    }
  }
  return sorted_row(std::move(entries), coeffs.source(x));
}

SparseRow ghost_row(const BoundaryOperatorRow& row, const NodeClassification& classification) {
  std::vector<std::pair<int, double>> entries;
  entries.reserve(row.members.size());
  for (std::size_t l = 0; l < row.members.size(); ++l) {
    entries.emplace_back(classification.active_index(row.members[l]), row.coefficients[l]);
  }
  return sorted_row(std::move(entries), row.rhs);
}

namespace {

GhostRecord build_one(int ghost, const Grid& grid, const NodeClassification& classification,
                      const LevelSet& level_set, const RobinProvider& robin,
                      const StencilStrategy& strategy, const ConditioningOracle& oracle, int order) {
  const CollarPoint collar = collar_for_ghost(grid.node(ghost), level_set, grid.spacing());
  GhostRecord rec;
  const int p = strategy.triangle_size;
  switch (strategy.kind) {
    case StrategyKind::S1: rec.stencil = build_s1(ghost, collar, p, grid, classification); break;
    case StrategyKind::S2: rec.stencil = build_s2(ghost, collar, p, grid, classification); break;
    case StrategyKind::S3: rec.stencil = build_s3(ghost, collar, p, grid, classification); break;
    default:
      rec.stencil = build_s4(ghost, collar, strategy, grid, classification, level_set, oracle, order);
  }
  rec.row = make_boundary_row(rec.stencil, grid, classification, robin, order);
  rec.stencil.local_condition = rec.row.local_condition;
  rec.stencil.global_ratio = rec.row.global_ratio;
  rec.stencil.dominance_ratio = rec.row.dominance_ratio;
  return rec;
}

template <typename Body>
void for_each_index(int count, Execution exec, Body&& body) {
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int n = 0; n < count; ++n) body(n);
  } else {
    for (int n = 0; n < count; ++n) body(n);
  }
}

constexpr int kMaxClosurePasses = 4;

}  // namespace

std::vector<GhostRecord> build_ghost_rows(const Grid& grid, NodeClassification& classification,
                                          const LevelSet& level_set, const RobinProvider& robin,
                                          const StencilStrategy& strategy, Execution exec, int order) {
  strategy.validate(order);
  for (int pass = 0;; ++pass) {
    const auto oracle = make_conditioning_oracle(grid, classification, robin, order);
    const auto& ghosts = classification.ghost_nodes();
    const int count = static_cast<int>(ghosts.size());
    std::vector<GhostRecord> records(count);
    std::vector<std::optional<Error>> failures(count);

    for_each_index(count, exec, [&](int n) {
      try {
        records[n] = build_one(ghosts[n], grid, classification, level_set, robin, strategy, oracle, order);
      } catch (const Error& e) {
        failures[n] = e;
      }
    });

    std::vector<int> missing;
    for (int n = 0; n < count; ++n) {
      if (!failures[n]) continue;
      const Error& e = *failures[n];
      const bool extendable = e.code() == ErrorCode::InactiveMember && e.node() >= 0 &&
                              !strategy.is_cone() && pass < kMaxClosurePasses;
      if (!extendable) throw e;
      missing.push_back(e.node());
    }
    if (missing.empty()) return records;

    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    for (int id : missing) classification.add_ghost(id, kCrossReach + 1 + pass);
    classification.finalize();
  }
}

SparseSystem assemble(const NodeClassification& classification, const std::vector<GhostRecord>& ghosts,
                      const ProblemCoefficients& coeffs, const Grid& grid, Execution exec) {
  const int n_int = classification.num_interior();
  const int n_ghost = classification.num_ghost();
  if (static_cast<int>(ghosts.size()) != n_ghost) {
    throw Error(ErrorCode::InvalidArgument, "ghost rows do not match the classification");
  }
  std::vector<SparseRow> rows(n_int + n_ghost);
  std::vector<std::optional<Error>> failures(rows.size());
  for_each_index(n_int + n_ghost, exec, [&](int r) {
    try {
      rows[r] = r < n_int ? interior_row(classification.node_of(r), coeffs, grid, classification)
                          : ghost_row(ghosts[r - n_int].row, classification);
    } catch (const Error& e) {
      failures[r] = e;
    }
  });
  for (const auto& f : failures) {
    if (f) throw *f;
  }

  SparseSystem sys;
  sys.num_interior = n_int;
  sys.num_ghost = n_ghost;
  const int n = n_int + n_ghost;
  sys.matrix.resize(n, n);
  std::vector<int> nnz(n);
  for (int r = 0; r < n; ++r) nnz[r] = static_cast<int>(rows[r].columns.size());
  sys.matrix.reserve(nnz);
  sys.rhs.resize(n);
  for (int r = 0; r < n; ++r) {
    for (std::size_t e = 0; e < rows[r].columns.size(); ++e) {
      sys.matrix.insert(r, rows[r].columns[e]) = rows[r].values[e];
    }
    sys.rhs(r) = rows[r].rhs;
  }
  sys.matrix.makeCompressed();
  return sys;
}

namespace {

double relative_residual(const SparseSystem& sys, const Eigen::VectorXd& x) {
  const double denom = sys.rhs.norm();
  const double res = (sys.matrix * x - sys.rhs).norm();
  return denom > 0.0 ? res / denom : res;
}

std::optional<SolveReport> try_gmres(const Eigen::SparseMatrix<double>& a, const SparseSystem& sys,
                                     const SolveOptions& options) {
  Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> gmres;
  gmres.set_restart(options.gmres_restart);
  gmres.setMaxIterations(options.gmres_max_iterations);
  gmres.setTolerance(0.1 * options.residual_tolerance);
  gmres.compute(a);
  if (gmres.info() != Eigen::Success) return std::nullopt;
  SolveReport report;
  report.solution = gmres.solve(sys.rhs);
  report.used = SolverKind::Gmres;
  report.iterations = static_cast<int>(gmres.iterations());
  report.relative_residual = relative_residual(sys, report.solution);
  // The stopping test sees the preconditioned residual; tighten it until the
  // true residual meets the contract.
  double tol = gmres.tolerance();
  for (int round = 0; round < 4 && report.relative_residual > options.residual_tolerance; ++round) {
    tol *= std::max(1e-3, 0.5 * options.residual_tolerance / report.relative_residual);
    if (tol < 1e-15 || report.iterations >= options.gmres_max_iterations) break;
    gmres.setTolerance(tol);
    Eigen::VectorXd next = gmres.solveWithGuess(sys.rhs, report.solution);
    report.iterations += static_cast<int>(gmres.iterations());
    const double res = relative_residual(sys, next);
    if (!(res < report.relative_residual)) break;
    report.solution = std::move(next);
    report.relative_residual = res;
  }
  return report;
}

}  // namespace

SolveReport solve(const SparseSystem& system, const SolveOptions& options) {
  const Eigen::SparseMatrix<double> a = system.matrix;
  std::optional<SolveReport> report;
  bool factor_failed = false;

  if (options.kind == SolverKind::DirectLU) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() == Eigen::Success) {
      SolveReport r;
      r.solution = lu.solve(system.rhs);
      r.relative_residual = relative_residual(system, r.solution);
      // Iterative refinement against the rounding floor of the factorization.
      for (int step = 0; step < options.refinement_steps && r.relative_residual > 0.0; ++step) {
        const Eigen::VectorXd corrected = r.solution + lu.solve(system.rhs - system.matrix * r.solution);
        const double res = relative_residual(system, corrected);
        if (!(res < r.relative_residual)) break;
        r.solution = corrected;
        r.relative_residual = res;
      }
      report = std::move(r);
    } else {
      factor_failed = true;
    }
  }
  const bool need_iterative = options.kind == SolverKind::Gmres ||
                              ((!report || !(report->relative_residual <= options.residual_tolerance)) &&
                               options.iterative_fallback);
  if (need_iterative) {
    auto iterative = try_gmres(a, system, options);
    if (iterative && (!report || iterative->relative_residual < report->relative_residual)) {
      report = std::move(iterative);
    }
  }
  if (!report) {
    throw Error(factor_failed ? ErrorCode::SingularMatrix : ErrorCode::SolveFailed,
                "sparse solve broke down");
  }
  if (!(report->relative_residual <= options.residual_tolerance)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "relative residual %.3e above tolerance %.3e", report->relative_residual,
                  options.residual_tolerance);
    throw Error(ErrorCode::SolveFailed, buf);
  }
  return std::move(*report);
}

void write_matrix_market(const SparseSystem& system, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << system.size() << ' ' << system.size() << ' ' << system.matrix.nonZeros() << '\n';
  char buf[64];
  for (int r = 0; r < system.matrix.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(system.matrix, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << (r + 1) << ' ' << (it.col() + 1) << ' ' << buf << '\n';
    }
  }
}

}  // namespace ghostfd
