#include "ghostfd/geometry.hpp"

#include "ghostfd/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace ghostfd {

Grid::Grid(int cells_per_side) : cells_(cells_per_side), spacing_(2.0 / cells_per_side) {
  if (cells_per_side < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells");
}

NodeClassification::NodeClassification(const Grid& grid)
    : kind_(grid.num_nodes(), NodeKind::Inactive), active_index_(grid.num_nodes(), -1) {}

void NodeClassification::add_interior(int node) {
  kind_[node] = NodeKind::Interior;
  interior_.push_back(node);
}

void NodeClassification::add_ghost(int node, int layer) {
  kind_[node] = NodeKind::Ghost;
  ghosts_.push_back(node);
  layers_.push_back(layer);
}

void NodeClassification::finalize() {
  std::sort(interior_.begin(), interior_.end());
  std::vector<std::size_t> order(ghosts_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ghosts_[a] < ghosts_[b]; });
  std::vector<int> ghosts, layers;
  ghosts.reserve(order.size());
  layers.reserve(order.size());
  for (auto i : order) {
    ghosts.push_back(ghosts_[i]);
    layers.push_back(layers_[i]);
  }
  ghosts_ = std::move(ghosts);
  layers_ = std::move(layers);

  std::fill(active_index_.begin(), active_index_.end(), -1);
  int row = 0;
  for (int n : interior_) active_index_[n] = row++;
  for (int n : ghosts_) active_index_[n] = row++;
}

NodeClassification classify_nodes(const Grid& grid, const LevelSet& level_set, BoundaryNodePolicy policy) {
  constexpr double kOnBoundary = 1e-14;
  const int n_side = grid.nodes_per_side();
  std::vector<double> phi(grid.num_nodes());
  for (int j = 0; j < n_side; ++j) {
    for (int i = 0; i < n_side; ++i) {
      double v = level_set(grid.node(i, j));
      if (std::abs(v) <= kOnBoundary) {
        if (policy == BoundaryNodePolicy::Reject) {
          throw Error(ErrorCode::NodeOnBoundary,
                      "node (" + std::to_string(i) + "," + std::to_string(j) + ") lies on the boundary",
                      grid.id(i, j));
        }
        v = kOnBoundary;
      }
      phi[grid.id(i, j)] = v;
    }
  }

  NodeClassification out(grid);
  for (int id = 0; id < grid.num_nodes(); ++id) {
    if (phi[id] < 0.0) out.add_interior(id);
  }
  if (out.num_interior() == 0) throw Error(ErrorCode::EmptyInterior, "level set has no interior node");

  // Ghost layer = smallest axis offset through which an interior node reaches it.
  std::vector<int> layer(grid.num_nodes(), 0);
  static constexpr std::array<std::array<int, 2>, 4> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (int id : out.interior_nodes()) {
    auto [i, j] = grid.index(id);
    for (const auto& d : kDirs) {
      for (int s = 1; s <= kCrossReach; ++s) {
        const int ii = i + s * d[0], jj = j + s * d[1];
        if (!grid.contains(ii, jj)) {
          throw Error(ErrorCode::InvalidArgument, "domain reaches the edge of the grid box");
        }
        const int nb = grid.id(ii, jj);
        if (phi[nb] > 0.0 && (layer[nb] == 0 || s < layer[nb])) layer[nb] = s;
      }
    }
  }
  for (int id = 0; id < grid.num_nodes(); ++id) {
    if (layer[id] > 0) out.add_ghost(id, layer[id]);
  }
  out.finalize();
  return out;
}

namespace {

Point unit_normal(const LevelSet& level_set, const Point& p) {
  const Point g = level_set.gradient(p);
  const double norm = g.norm();
  if (!(norm >= 1e-14)) throw Error(ErrorCode::ZeroGradient, "vanishing level-set gradient");
  return g / norm;
}

}  // namespace

Point newton_to_boundary(const Point& x, const LevelSet& level_set, const ProjectionOptions& options) {
  Point p = x;
  double f = level_set(p);
  for (int it = 0; it < options.max_iterations && std::abs(f) > options.tolerance; ++it) {
    const Point g = level_set.gradient(p);
    const double g2 = g.squaredNorm();
    if (!(std::sqrt(g2) >= 1e-14)) throw Error(ErrorCode::ZeroGradient, "vanishing level-set gradient");
    const Point step = (f / g2) * g;
    double t = 1.0;
    Point q = p - step;
    double fq = level_set(q);
    while (!(std::abs(fq) < std::abs(f)) && t > 1e-10) {
      t *= 0.5;
      q = p - t * step;
      fq = level_set(q);
    }
    p = q;
    f = fq;
  }
  if (!(std::abs(f) <= options.tolerance)) {
    throw Error(ErrorCode::ProjectionDiverged, "boundary residual did not converge");
  }
  return p;
}

CollarPoint project_to_boundary(const Point& x, const LevelSet& level_set,
                                const ProjectionOptions& options) {
  constexpr double kAlignment = 1e-10;  // rad
  Point p = newton_to_boundary(x, level_set, options);

  auto misalignment = [&](const Point& q, Point& tangential) {
    const Point n = unit_normal(level_set, q);
    const Point v = x - q;
    tangential = v - v.dot(n) * n;
    const double len = v.norm();
    return len > 0.0 ? tangential.norm() / len : 0.0;
  };

  Point t;
  double angle = misalignment(p, t);
  int it = 0;
  for (; it < options.max_iterations && angle > kAlignment; ++it) {
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 12; ++halving, step *= 0.5) {
      Point q;
      try {
        q = newton_to_boundary(p + step * t, level_set, options);
      } catch (const Error&) {
        continue;
      }
      Point tq;
      const double aq = misalignment(q, tq);
      if (aq < angle) {
        p = q;
        t = tq;
        angle = aq;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (angle > kAlignment) {
    throw Error(ErrorCode::ProjectionDiverged, "closest-point alignment did not converge");
  }
  return CollarPoint{x, p, unit_normal(level_set, p), CollarMode::ClosestPoint};
}

CollarPoint axis_projection(const Point& x, const LevelSet& level_set, double max_distance,
                            const ProjectionOptions& options) {
  constexpr int kSamples = 24;
  static const std::array<Point, 4> kRays{Point(1, 0), Point(-1, 0), Point(0, 1), Point(0, -1)};

  double best = std::numeric_limits<double>::infinity();
  Point best_point;
  for (const Point& dir : kRays) {
    double lo = 0.0, hi = -1.0;
    for (int s = 1; s <= kSamples; ++s) {
      const double t = max_distance * s / kSamples;
      if (level_set(x + t * dir) < 0.0) {
        hi = t;
        break;
      }
      lo = t;
    }
    if (hi < 0.0 || lo >= best) continue;
    double mid = 0.5 * (lo + hi);
    double f = level_set(x + mid * dir);
    for (int it = 0; it < 200 && std::abs(f) > options.tolerance && hi - lo > 0.0; ++it) {
      if (f > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      const double next = 0.5 * (lo + hi);
      if (next == mid) break;
      mid = next;
      f = level_set(x + mid * dir);
    }
    if (mid < best) {
      best = mid;
      best_point = x + mid * dir;
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::NoAxisIntersection, "no axis ray reaches the boundary");
  }
  return CollarPoint{x, best_point, unit_normal(level_set, best_point), CollarMode::AxisProjected};
}

CollarPoint collar_for_ghost(const Point& x, const LevelSet& level_set, double spacing) {
  const double reach = 3.0 * spacing;
  try {
    CollarPoint c = project_to_boundary(x, level_set);
    if ((c.point - x).norm() <= reach) return c;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ProjectionDiverged && e.code() != ErrorCode::ZeroGradient) throw;
  }
  return axis_projection(x, level_set, reach);
}

}  // namespace ghostfd
