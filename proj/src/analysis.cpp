#include "ghostfd/analysis.hpp"

#include "ghostfd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ghostfd {

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::L1: return "L1";
    case Norm::Linf: return "Linf";
    case Norm::GradL1: return "gradL1";
    case Norm::GradLinf: return "gradLinf";
  }
  return "?";
}

double ErrorReport::get(Norm norm) const {
  switch (norm) {
    case Norm::L1: return l1;
    case Norm::Linf: return linf;
    case Norm::GradL1: return grad_l1;
    case Norm::GradLinf: return grad_linf;
  }
  return 0.0;
}

std::vector<Point> reconstruct_gradient(const Eigen::VectorXd& solution,
                                        const NodeClassification& classification, const Grid& grid) {
  const double h = grid.spacing();
  auto value = [&](int i, int j) {
    const int id = grid.contains(i, j) ? grid.id(i, j) : -1;
    if (id < 0 || !classification.is_active(id)) {
      throw Error(ErrorCode::MissingNeighbor, "gradient stencil leaves the active set", id);
    }
    return solution(classification.active_index(id));
  };
  std::vector<Point> out(classification.num_interior());
  for (int r = 0; r < classification.num_interior(); ++r) {
    const auto [i, j] = grid.index(classification.node_of(r));
    out[r] = Point((-value(i + 2, j) + 8 * value(i + 1, j) - 8 * value(i - 1, j) + value(i - 2, j)) / (12 * h),
                   (-value(i, j + 2) + 8 * value(i, j + 1) - 8 * value(i, j - 1) + value(i, j - 2)) / (12 * h));
  }
  return out;
}

ErrorReport compute_errors(const Eigen::VectorXd& solution, const ExactSolution& exact,
                           const NodeClassification& classification, const Grid& grid) {
  const auto grads = reconstruct_gradient(solution, classification, grid);
  ErrorReport rep;
  rep.cells = grid.cells();
  rep.h = grid.spacing();
  double sum_e = 0, sum_ref = 0, sum_ge = 0, sum_gref = 0;
  for (int r = 0; r < classification.num_interior(); ++r) {
    const Point x = grid.node(classification.node_of(r));
    const double ref = exact.value(x);
    const Point gref = exact.gradient(x);
    const double e = std::abs(solution(r) - ref);
    const double ge = (grads[r] - gref).norm();
    sum_e += e;
    sum_ref += std::abs(ref);
    sum_ge += ge;
    sum_gref += gref.norm();
    rep.linf = std::max(rep.linf, e);
    rep.grad_linf = std::max(rep.grad_linf, ge);
  }
  rep.zero_normalization = !(sum_ref > 0.0) || !(sum_gref > 0.0);
  rep.l1 = sum_ref > 0.0 ? sum_e / sum_ref : sum_e;
  rep.grad_l1 = sum_gref > 0.0 ? sum_ge / sum_gref : sum_ge;
  return rep;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size() || h.size() < 3) {
    throw Error(ErrorCode::DegenerateFit, "a slope fit needs at least 3 levels");
  }
  const std::size_t n = h.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(h[k] > 0.0) || !(error[k] > 0.0) || !std::isfinite(error[k])) {
      throw Error(ErrorCode::DegenerateFit, "errors and spacings must be positive");
    }
    lx[k] = std::log(h[k]);
    ly[k] = std::log(error[k]);
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 1e-300)) throw Error(ErrorCode::DegenerateFit, "all spacings coincide");
  return sxy / sxx;
}

OrderFit fit_order(const std::vector<ErrorReport>& series) {
  OrderFit fit;
  std::vector<double> h;
  for (const auto& r : series) h.push_back(r.h);
  for (std::size_t n = 0; n < kAllNorms.size(); ++n) {
    std::vector<double> e;
    for (const auto& r : series) e.push_back(r.get(kAllNorms[n]));
    fit.slopes[n] = fit_slope(h, e);
    for (std::size_t k = 1; k < series.size(); ++k) {
      fit.pairwise[n].push_back(std::log(e[k] / e[k - 1]) / std::log(h[k] / h[k - 1]));
    }
  }
  return fit;
}

bool strictly_decreasing(const std::vector<ErrorReport>& series, Norm norm) {
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (!(series[k].get(norm) < series[k - 1].get(norm))) return false;
  }
  return true;
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats b;
  b.count = static_cast<int>(values.size());
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * (values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - lo) * (values[hi] - values[lo]);
  };
  b.min = values.front();
  b.max = values.back();
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  return b;
}

StencilDiagnostics stencil_diagnostics(const std::vector<GhostRecord>& records) {
  StencilDiagnostics d;
  std::vector<double> diam, cond, ratio, dominance;
  for (const auto& rec : records) {
    GhostDiagnostic g;
    g.ghost = rec.stencil.ghost;
    g.size = static_cast<int>(rec.stencil.size());
    g.diameter = rec.stencil.diameter;
    g.local_condition = rec.row.local_condition;
    g.global_ratio = rec.row.global_ratio;
    g.dominance_ratio = rec.row.dominance_ratio;
    g.collar_mode = rec.stencil.collar.mode;
    d.ghosts.push_back(g);
    ++d.size_histogram[g.size];
    diam.push_back(g.diameter);
    cond.push_back(std::log10(g.local_condition));
    dominance.push_back(std::log10(g.dominance_ratio));
    if (g.global_ratio > 0.0) {
      ratio.push_back(std::log10(g.global_ratio));
    } else {
      ++d.zero_ratio_count;
    }
  }
  d.diameter = box_stats(std::move(diam));
  d.log10_condition = box_stats(std::move(cond));
  d.log10_ratio = box_stats(std::move(ratio));
  d.log10_dominance = box_stats(std::move(dominance));
  return d;
}

}  // namespace ghostfd
