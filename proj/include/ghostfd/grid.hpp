#pragma once

#include <Eigen/Core>

#include <utility>

namespace ghostfd {

using Point = Eigen::Vector2d;

/// Uniform node lattice over the box [-1,1]^2 with N cells per side.
///
/// Nodes are numbered row-major: id = j * (N+1) + i, with x_i = -1 + i h.
class Grid {
 public:
  explicit Grid(int cells_per_side);

  int cells() const { return cells_; }
  int nodes_per_side() const { return cells_ + 1; }
  int num_nodes() const { return nodes_per_side() * nodes_per_side(); }
  double spacing() const { return spacing_; }

  bool contains(int i, int j) const {
    return i >= 0 && j >= 0 && i <= cells_ && j <= cells_;
  }
  int id(int i, int j) const { return j * nodes_per_side() + i; }
  std::pair<int, int> index(int id) const {
    return {id % nodes_per_side(), id / nodes_per_side()};
  }

  double x(int i) const { return -1.0 + i * spacing_; }
  Point node(int i, int j) const { return {x(i), x(j)}; }
  Point node(int id) const {
    auto [i, j] = index(id);
    return node(i, j);
  }

 private:
  int cells_;
  double spacing_;
};

}  // namespace ghostfd
