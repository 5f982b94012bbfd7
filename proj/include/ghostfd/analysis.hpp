#pragma once

#include "ghostfd/assembly.hpp"
#include "ghostfd/benchmarks.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace ghostfd {

/// Fourth-order centred gradient at every interior node, in row order.
/// `solution` is indexed by active row. Throws MissingNeighbor.
std::vector<Point> reconstruct_gradient(const Eigen::VectorXd& solution,
                                        const NodeClassification& classification, const Grid& grid);

enum class Norm { L1, Linf, GradL1, GradLinf };
inline constexpr std::array<Norm, 4> kAllNorms{Norm::L1, Norm::Linf, Norm::GradL1, Norm::GradLinf};
std::string_view to_string(Norm norm);

struct ErrorReport {
  int cells = 0;
  double h = 0.0;
  double l1 = 0.0;        // relative unless zero_normalization
  double linf = 0.0;      // absolute
  double grad_l1 = 0.0;   // relative unless zero_normalization
  double grad_linf = 0.0; // absolute
  bool zero_normalization = false;  // an L1 norm is reported absolute

  double get(Norm norm) const;
};

/// Errors over the interior nodes.
ErrorReport compute_errors(const Eigen::VectorXd& solution, const ExactSolution& exact,
                           const NodeClassification& classification, const Grid& grid);

/// Least-squares slope of log(error) against log(h). Throws DegenerateFit with
/// fewer than 3 levels, non-positive errors or coincident h.
double fit_slope(const std::vector<double>& h, const std::vector<double>& error);

struct OrderFit {
  std::array<double, 4> slopes{};                  // indexed like kAllNorms
  std::array<std::vector<double>, 4> pairwise{};   // consecutive-level orders
};

OrderFit fit_order(const std::vector<ErrorReport>& series);

/// Strictly decreasing as h decreases (series ordered by increasing N).
bool strictly_decreasing(const std::vector<ErrorReport>& series, Norm norm);

struct BoxStats {
  int count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Quartiles by linear interpolation between order statistics; whiskers are the extremes.
BoxStats box_stats(std::vector<double> values);

struct GhostDiagnostic {
  int ghost = -1;
  int size = 0;
  double diameter = 0.0;
  double local_condition = 0.0;
  double global_ratio = 0.0;
  double dominance_ratio = 0.0;
  CollarMode collar_mode = CollarMode::ClosestPoint;
};

struct StencilDiagnostics {
  std::vector<GhostDiagnostic> ghosts;
  std::map<int, int> size_histogram;
  BoxStats diameter;
  BoxStats log10_condition;
  BoxStats log10_ratio;      // ghost-member ratio, over R_k > 0
  BoxStats log10_dominance;  // all-member ratio
  int zero_ratio_count = 0;
};

StencilDiagnostics stencil_diagnostics(const std::vector<GhostRecord>& records);

}  // namespace ghostfd
