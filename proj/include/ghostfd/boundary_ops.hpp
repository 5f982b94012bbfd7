#pragma once

#include "ghostfd/basis.hpp"
#include "ghostfd/stencils.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

namespace ghostfd {

/// Exactness constraints C a = g: C(m, l) = psi_m(x_l), g_m = B[psi_m](p_k).
/// Shape N_o x N_k.
struct ConstraintMatrix {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

ConstraintMatrix assemble_constraints(std::span<const Point> members, const CollarPoint& collar,
                                      const RobinData& robin, const BasisConfig& cfg);

/// Scaled basis centred at the ghost with scale h.
ConstraintMatrix assemble_constraints(const Stencil& stencil, const Grid& grid,
                                      const RobinData& robin, int order = 5);

/// Smallest singular-value ratio below which a constraint matrix is rank
/// deficient.
inline constexpr double kRankTolerance = 1e-13;

/// Minimum-norm a with C a = g, i.e. a = C^T (C C^T)^{-1} g, through the SVD
/// of C. Throws NotAdmissible when C does not have full row rank.
Eigen::VectorXd solve_min_norm(const ConstraintMatrix& cm);

/// 2-norm condition number sigma_max / sigma_min of C; +inf when sigma_min = 0.
/// The Gram matrix C C^T has condition number equal to its square.
double local_condition(const ConstraintMatrix& cm);

/// Everything a stencil trial needs from one SVD.
struct MinNormResult {
  bool admissible = false;
  double local_condition = 0.0;
  Eigen::VectorXd coefficients;  // empty when not admissible
};

MinNormResult analyze_constraints(const ConstraintMatrix& cm);

/// One ghost equation: sum_l a_l phi_l = g(p_k).
struct BoundaryOperatorRow {
  int ghost = -1;
  std::vector<int> members;
  std::vector<double> coefficients;
  double rhs = 0.0;
  double local_condition = 0.0;
  double global_ratio = 0.0;
  double dominance_ratio = 0.0;
};

/// R_k = max over ghost members l != k of |a_l| / |a_k|. Zero when the ghost is
/// the only ghost member, +inf when |a_k| <= 1e-14.
double global_ratio(std::span<const int> members, std::span<const double> coefficients, int ghost,
                    const NodeClassification& classification);
double global_ratio(const BoundaryOperatorRow& row, const NodeClassification& classification);

/// max over members l != k of |a_l| / |a_k|; +inf when |a_k| <= 1e-14.
double dominance_ratio(std::span<const int> members, std::span<const double> coefficients, int ghost);
double dominance_ratio(const BoundaryOperatorRow& row);

using RobinProvider = std::function<RobinData(const CollarPoint&)>;

/// Oracle used by the cone construction: assembles, solves and scores a trial.
ConditioningOracle make_conditioning_oracle(const Grid& grid, const NodeClassification& classification,
                                            RobinProvider robin, int order = 5);

/// Final row for a finished stencil. Throws NotAdmissible.
BoundaryOperatorRow make_boundary_row(const Stencil& stencil, const Grid& grid,
                                      const NodeClassification& classification,
                                      const RobinProvider& robin, int order = 5);

}  // namespace ghostfd
