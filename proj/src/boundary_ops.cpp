#include "ghostfd/boundary_ops.hpp"

#include "ghostfd/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace ghostfd {

ConstraintMatrix assemble_constraints(std::span<const Point> members, const CollarPoint& collar,
                                      const RobinData& robin, const BasisConfig& cfg) {
  const auto basis = enumerate_basis(cfg.order);
  const int rows = static_cast<int>(basis.size());
  const int cols = static_cast<int>(members.size());
  ConstraintMatrix cm{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};

  // Power tables per member: pow_x[e] = u^e, e <= order - 1.
  const int top = cfg.order;
  std::vector<double> px(top), py(top);
  for (int l = 0; l < cols; ++l) {
    const Point u = (members[l] - cfg.center) / cfg.scale;
    px[0] = py[0] = 1.0;
    for (int e = 1; e < top; ++e) {
      px[e] = px[e - 1] * u.x();
      py[e] = py[e - 1] * u.y();
    }
    for (int m = 0; m < rows; ++m) cm.matrix(m, l) = px[basis[m].ax] * py[basis[m].ay];
  }
  for (int m = 0; m < rows; ++m) cm.rhs(m) = boundary_action(basis[m], collar, robin, cfg);
  return cm;
}

ConstraintMatrix assemble_constraints(const Stencil& stencil, const Grid& grid, const RobinData& robin,
                                      int order) {
  std::vector<Point> pts;
  pts.reserve(stencil.members.size());
  for (int id : stencil.members) pts.push_back(grid.node(id));
  const BasisConfig cfg{order, grid.spacing(), grid.node(stencil.ghost)};
  return assemble_constraints(pts, stencil.collar, robin, cfg);
}

MinNormResult analyze_constraints(const ConstraintMatrix& cm) {
  MinNormResult out;
  const auto rows = cm.matrix.rows();
  if (cm.matrix.cols() < rows) {
    out.local_condition = std::numeric_limits<double>::infinity();
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(rows - 1);
  if (smin <= 0.0 || !(smax > 0.0)) {
    out.local_condition = std::numeric_limits<double>::infinity();
    return out;
  }
  const double ratio = smax / smin;
  out.local_condition = ratio;
  if (smin / smax < kRankTolerance) return out;

  out.admissible = true;
  auto pinv = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
    Eigen::VectorXd w = svd.matrixU().transpose() * rhs;
    w.array() /= sigma.array();
    return svd.matrixV() * w;
  };
  out.coefficients = pinv(cm.rhs);
  // One refinement step; the correction stays in the row space of C.
  out.coefficients += pinv(cm.rhs - cm.matrix * out.coefficients);
  return out;
}

Eigen::VectorXd solve_min_norm(const ConstraintMatrix& cm) {
  auto result = analyze_constraints(cm);
  if (!result.admissible) {
    throw Error(ErrorCode::NotAdmissible, "constraint matrix lacks full row rank");
  }
  return std::move(result.coefficients);
}

double local_condition(const ConstraintMatrix& cm) {
  const auto rows = cm.matrix.rows();
  if (cm.matrix.cols() < rows) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.matrix);
  const auto& sigma = svd.singularValues();
  if (sigma(rows - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  const double ratio = sigma(0) / sigma(rows - 1);
  return ratio;
}

double global_ratio(std::span<const int> members, std::span<const double> coefficients, int ghost,
                    const NodeClassification& classification) {
  double diag = 0.0;
  double worst = 0.0;
  bool found = false;
  for (std::size_t l = 0; l < members.size(); ++l) {
    if (members[l] == ghost) {
      diag = std::abs(coefficients[l]);
      found = true;
    } else if (classification.is_ghost(members[l])) {
      worst = std::max(worst, std::abs(coefficients[l]));
    }
  }
  if (!found || diag <= 1e-14) return std::numeric_limits<double>::infinity();
  return worst / diag;
}

double global_ratio(const BoundaryOperatorRow& row, const NodeClassification& classification) {
  return global_ratio(row.members, row.coefficients, row.ghost, classification);
}

double dominance_ratio(std::span<const int> members, std::span<const double> coefficients, int ghost) {
  double diag = 0.0;
  double worst = 0.0;
  bool found = false;
  for (std::size_t l = 0; l < members.size(); ++l) {
    if (members[l] == ghost) {
      diag = std::abs(coefficients[l]);
      found = true;
    } else {
      worst = std::max(worst, std::abs(coefficients[l]));
    }
  }
  if (!found || diag <= 1e-14) return std::numeric_limits<double>::infinity();
  return worst / diag;
}

double dominance_ratio(const BoundaryOperatorRow& row) {
  return dominance_ratio(row.members, row.coefficients, row.ghost);
}

ConditioningOracle make_conditioning_oracle(const Grid& grid, const NodeClassification& classification,
                                            RobinProvider robin, int order) {
  return [&grid, &classification, robin = std::move(robin), order](std::span<const int> members,
                                                                  const CollarPoint& collar) {
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (int id : members) pts.push_back(grid.node(id));
    const BasisConfig cfg{order, grid.spacing(), collar.ghost};
    const auto cm = assemble_constraints(pts, collar, robin(collar), cfg);
    auto result = analyze_constraints(cm);

    TrialEvaluation eval;
    eval.admissible = result.admissible;
    eval.local_condition = result.local_condition;
    if (result.admissible) {
      const std::span<const double> coeffs(result.coefficients.data(), result.coefficients.size());
      eval.global_ratio = global_ratio(members, coeffs, members.front(), classification);
      eval.dominance_ratio = dominance_ratio(members, coeffs, members.front());
      eval.coefficients = std::move(result.coefficients);
    }
    return eval;
  };
}

BoundaryOperatorRow make_boundary_row(const Stencil& stencil, const Grid& grid,
                                      const NodeClassification& classification,
                                      const RobinProvider& robin, int order) {
  const RobinData data = robin(stencil.collar);
  const auto cm = assemble_constraints(stencil, grid, data, order);
  auto result = analyze_constraints(cm);
  if (!result.admissible) {
    throw Error(ErrorCode::NotAdmissible, "stencil of ghost " + std::to_string(stencil.ghost) +
                                              " is not admissible");
  }
  BoundaryOperatorRow row;
  row.ghost = stencil.ghost;
  row.members = stencil.members;
  row.coefficients.assign(result.coefficients.data(),
                          result.coefficients.data() + result.coefficients.size());
  row.rhs = data.value;
  row.local_condition = result.local_condition;
  row.global_ratio = global_ratio(row, classification);
  row.dominance_ratio = dominance_ratio(row);
  return row;
}

}  // namespace ghostfd
