#pragma once

#include "ghostfd/boundary_ops.hpp"
#include "ghostfd/geometry.hpp"
#include "ghostfd/stencils.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <vector>

namespace ghostfd {

/// Loop execution for the per-row kernels. Both paths produce identical rows;
/// Serial is the reference implementation.
enum class Execution { Serial, Parallel };

/// Coefficients of -k lap(phi) + U . grad(phi) = f.
class ProblemCoefficients {
 public:
  using VelocityField = std::function<Point(const Point&)>;
  using ScalarField = std::function<double(const Point&)>;

  /// Throws InvalidArgument unless diffusion > 0.
  ProblemCoefficients(double diffusion, VelocityField velocity, ScalarField source);

  double diffusion() const { return diffusion_; }
  Point velocity(const Point& x) const { return velocity_(x); }
  double source(const Point& x) const { return source_(x); }

 private:
  double diffusion_;
  VelocityField velocity_;
  ScalarField source_;
};

/// Sparse row over active-node columns, sorted by column.
struct SparseRow {
  std::vector<int> columns;
  std::vector<double> values;
  double rhs = 0.0;
};

/// Fourth-order centred row for an interior node (width-5 cross). Throws
/// MissingNeighbor if a referenced node is inactive.
SparseRow interior_row(int node, const ProblemCoefficients& coeffs, const Grid& grid,
                       const NodeClassification& classification);

/// Ghost equation sum_l a_l phi_l = g(p_k).
SparseRow ghost_row(const BoundaryOperatorRow& row, const NodeClassification& classification);

/// Stencil and boundary-operator row of one ghost node.
struct GhostRecord {
  Stencil stencil;
  BoundaryOperatorRow row;
};

/// Collar point, stencil and boundary operator for every ghost. For the
/// triangle strategies, exterior nodes reached by a stencil but not yet active
/// are appended to `classification` as extra ghosts (layer 3+) and the pass is
/// repeated until closed.
std::vector<GhostRecord> build_ghost_rows(const Grid& grid, NodeClassification& classification,
                                          const LevelSet& level_set, const RobinProvider& robin,
                                          const StencilStrategy& strategy,
                                          Execution exec = Execution::Parallel, int order = 5);

/// Global system [[A_II, A_IG], [A_GI, A_GG]] Phi = [F_I; F_G].
struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
  int num_interior = 0;
  int num_ghost = 0;

  int size() const { return num_interior + num_ghost; }
};

SparseSystem assemble(const NodeClassification& classification, const std::vector<GhostRecord>& ghosts,
                      const ProblemCoefficients& coeffs, const Grid& grid,
                      Execution exec = Execution::Parallel);

enum class SolverKind { DirectLU, Gmres };

struct SolveOptions {
  SolverKind kind = SolverKind::DirectLU;
  bool iterative_fallback = true;  // retry with ILUT-preconditioned GMRES
  double residual_tolerance = 1e-10;
  int refinement_steps = 3;
  int gmres_restart = 60;
  int gmres_max_iterations = 5000;
};

struct SolveReport {
  Eigen::VectorXd solution;
  double relative_residual = 0.0;
  SolverKind used = SolverKind::DirectLU;
  int iterations = 0;  // 0 for the direct solve
};

/// Throws SingularMatrix when the factorization breaks down, SolveFailed when
/// the residual contract ||A x - F|| <= tol ||F|| cannot be met.
SolveReport solve(const SparseSystem& system, const SolveOptions& options = {});

/// Matrix Market coordinate/real/general dump with 1-based indices.
void write_matrix_market(const SparseSystem& system, std::ostream& out);

}  // namespace ghostfd
