#pragma once

#include "ghostfd/geometry.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace ghostfd {

enum class StrategyKind { S1, S2, S3, S4_1, S4_2, S4_3 };

std::string_view to_string(StrategyKind kind);
/// Accepts "S4.3" and "S4_3" spellings. Throws InvalidArgument.
StrategyKind parse_strategy(std::string_view name);

/// Which coefficients the S4.2 / S4.3 ratio test looks at. AllMembers measures
/// max_{l != k} |a_l| / |a_k| over the whole stencil (dominance ratio);
/// GhostMembers restricts the max to ghost members (global_ratio).
enum class RatioScope { AllMembers, GhostMembers };

std::string_view to_string(RatioScope scope);
/// "all" or "ghosts". Throws InvalidArgument.
RatioScope parse_ratio_scope(std::string_view name);

struct StencilStrategy {
  StrategyKind kind = StrategyKind::S4_3;
  int triangle_size = 4;           // p: triangle legs span p nodes
  double aperture_deg = 60.0;      // cone aperture
  double local_tolerance = 1e6;    // Lambda_LOC on chi
  double global_tolerance = 10.0;  // Lambda_GLO on R_k
  int max_replacements = 3;
  RatioScope ratio_scope = RatioScope::AllMembers;

  bool is_cone() const {
    return kind == StrategyKind::S4_1 || kind == StrategyKind::S4_2 || kind == StrategyKind::S4_3;
  }
  /// Throws InvalidArgument when parameters are out of range for `order`.
  void validate(int order) const;
};

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Stencil attached to one ghost node. Members are lattice ids; for the
/// triangle strategies and for every cone stencil the ghost itself is
/// members.front().
struct Stencil {
  int ghost = -1;
  std::vector<int> members;
  CollarPoint collar;

  double local_condition = kUnset;
  double global_ratio = kUnset;
  double dominance_ratio = kUnset;
  double diameter = kUnset;

  // Cone-construction log.
  int widenings = 0;
  double final_aperture_deg = kUnset;
  std::vector<int> removed;        // members dropped by the replacement loop, in order
  bool collar_rebuilt = false;     // collar moved to the axis projection

  std::size_t size() const { return members.size(); }
};

/// Result of trying a candidate member set against the boundary operator.
struct TrialEvaluation {
  bool admissible = false;
  double local_condition = std::numeric_limits<double>::infinity();
  double global_ratio = std::numeric_limits<double>::infinity();
  double dominance_ratio = std::numeric_limits<double>::infinity();
  Eigen::VectorXd coefficients;

  double ratio(RatioScope scope) const {
    return scope == RatioScope::AllMembers ? dominance_ratio : global_ratio;
  }
};

/// Evaluates a trial stencil whose first member is the ghost; supplied by the
/// boundary-operator module. Must be re-entrant.
using ConditioningOracle =
    std::function<TrialEvaluation(std::span<const int> members, const CollarPoint& collar)>;

/// p_k - x_k, or the inward normal when the ghost lies on the boundary.
Point inward_direction(const CollarPoint& collar);

/// Inward unit steps (sign of p_k - x_k per axis, sign(0) = +1).
std::pair<int, int> inward_signs(const CollarPoint& collar);

/// Right triangle with the right angle at the ghost, legs pointing inward.
/// Throws InactiveMember.
Stencil build_s1(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification);

/// Right triangle whose right-angle vertex is p nodes inward along the dominant
/// displacement axis; the ghost is the acute vertex. Throws InactiveMember.
Stencil build_s2(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification);

/// S2 with the triangle pushed inward along the dominant axis, one column at a
/// time, until the ghost is its only ghost member. Throws InactiveMember.
Stencil build_s3(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification);

/// Active nodes inside the cone of aperture `aperture_deg` around the ghost->collar
/// axis, ordered by distance to the ghost then by (i, j) lexicographic order, ghost
/// first. Returns at most `max_count` entries; the result is always an exact
/// prefix of the full ordered list.
std::vector<int> cone_candidates(int ghost, const CollarPoint& collar, double aperture_deg,
                                 const Grid& grid, const NodeClassification& classification,
                                 std::size_t max_count = std::numeric_limits<std::size_t>::max());

/// Cone stencils S4.1 / S4.2 / S4.3. Throws NotAdmissible when no admissible
/// stencil exists even with a full 360-degree cone.
Stencil build_s4(int ghost, const CollarPoint& collar, const StencilStrategy& strategy,
                 const Grid& grid, const NodeClassification& classification,
                 const LevelSet& level_set, const ConditioningOracle& oracle, int order = 5);

/// Maximum pairwise member distance in units of h.
double stencil_diameter(std::span<const int> members, const Grid& grid);

}  // namespace ghostfd
