#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/level_set.hpp"

#include <cstdint>
#include <vector>

namespace ghostfd {

enum class NodeKind : std::uint8_t { Inactive, Interior, Ghost };

/// Partition of the lattice into interior nodes (phi < 0), ghost nodes and
/// inactive nodes. Active nodes are numbered interior-first, then ghosts, both
/// in lattice order; that numbering is the row/column order of the global
/// system.
class NodeClassification {
 public:
  NodeClassification() = default;
  explicit NodeClassification(const Grid& grid);

  int num_interior() const { return static_cast<int>(interior_.size()); }
  int num_ghost() const { return static_cast<int>(ghosts_.size()); }
  int num_active() const { return num_interior() + num_ghost(); }

  NodeKind kind(int node) const { return kind_[node]; }
  bool is_active(int node) const { return kind_[node] != NodeKind::Inactive; }
  bool is_interior(int node) const { return kind_[node] == NodeKind::Interior; }
  bool is_ghost(int node) const { return kind_[node] == NodeKind::Ghost; }

  /// Row of `node` in the global system, or -1 for inactive nodes.
  int active_index(int node) const { return active_index_[node]; }
  /// Lattice id of active row `row`.
  int node_of(int row) const {
    return row < num_interior() ? interior_[row] : ghosts_[row - num_interior()];
  }

  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& ghost_nodes() const { return ghosts_; }
  /// Ghost layer (1, 2, or 3+ for nodes added by stencil closure), indexed
  /// like ghost_nodes().
  const std::vector<int>& ghost_layers() const { return layers_; }

  void add_interior(int node);
  void add_ghost(int node, int layer);
  /// Rebuilds active numbering; call after adding nodes.
  void finalize();

 private:
  std::vector<NodeKind> kind_;
  std::vector<int> active_index_;
  std::vector<int> interior_;
  std::vector<int> ghosts_;
  std::vector<int> layers_;
};

/// Offsets used by the fourth-order interior rows (width-5 cross).
inline constexpr int kCrossReach = 2;

/// Handling of lattice nodes with |phi| <= 1e-14.
enum class BoundaryNodePolicy : std::uint8_t {
  Reject,    // throw NodeOnBoundary
  Exterior,  // treat as outside the domain (ghost with a zero-length displacement)
};

/// Interior = {phi < 0}; ghosts = exterior nodes referenced by some interior
/// node's width-5 cross. Throws NodeOnBoundary / EmptyInterior.
NodeClassification classify_nodes(const Grid& grid, const LevelSet& level_set,
                                  BoundaryNodePolicy policy = BoundaryNodePolicy::Reject);

enum class CollarMode : std::uint8_t { ClosestPoint, AxisProjected };

/// Boundary point paired with a ghost node.
struct CollarPoint {
  Point ghost;
  Point point;
  Point normal;  // outward unit normal at `point`
  CollarMode mode = CollarMode::ClosestPoint;

  /// x_k - p_k
  Point displacement() const { return ghost - point; }
};

struct ProjectionOptions {
  double tolerance = 1e-12;
  int max_iterations = 100;
};

/// Closest boundary point. A damped Newton iteration
/// x <- x - phi grad(phi) / |grad(phi)|^2 reaches the zero set, then a
/// tangential correction loop removes the component of x_k - p orthogonal to
/// the normal. Throws ProjectionDiverged when either stage fails to converge
/// within `max_iterations`, ZeroGradient on a vanishing gradient.
CollarPoint project_to_boundary(const Point& x, const LevelSet& level_set,
                                const ProjectionOptions& options = {});

/// Newton stage only: a point on the zero set reached from `x`.
Point newton_to_boundary(const Point& x, const LevelSet& level_set,
                         const ProjectionOptions& options = {});

/// Boundary crossing along the four axis rays from `x` (nearest one wins).
/// Roots are bracketed on a sub-lattice of the search radius and bisected.
/// Throws NoAxisIntersection when no ray crosses within `max_distance`.
CollarPoint axis_projection(const Point& x, const LevelSet& level_set, double max_distance,
                            const ProjectionOptions& options = {});

/// Closest-point collar with axis-projection fallback when the iteration
/// fails (non-smooth boundary points, high curvature).
CollarPoint collar_for_ghost(const Point& x, const LevelSet& level_set, double spacing);

}  // namespace ghostfd
