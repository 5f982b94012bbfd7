#include "ghostfd/stencils.hpp"

#include "ghostfd/basis.hpp"
#include "ghostfd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace ghostfd {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::S1: return "S1";
    case StrategyKind::S2: return "S2";
    case StrategyKind::S3: return "S3";
    case StrategyKind::S4_1: return "S4.1";
    case StrategyKind::S4_2: return "S4.2";
    case StrategyKind::S4_3: return "S4.3";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '.');
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto k : {StrategyKind::S1, StrategyKind::S2, StrategyKind::S3, StrategyKind::S4_1,
                 StrategyKind::S4_2, StrategyKind::S4_3}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown stencil strategy '" + std::string(name) + "'");
}

std::string_view to_string(RatioScope scope) {
  return scope == RatioScope::AllMembers ? "all" : "ghosts";
}

RatioScope parse_ratio_scope(std::string_view name) {
  if (name == "all") return RatioScope::AllMembers;
  if (name == "ghosts") return RatioScope::GhostMembers;
  throw Error(ErrorCode::InvalidArgument, "unknown ratio scope '" + std::string(name) + "'");
}

void StencilStrategy::validate(int order) const {
  if (triangle_size < 1) throw Error(ErrorCode::InvalidArgument, "triangle size must be >= 1");
  if (!is_cone() && (triangle_size + 1) * (triangle_size + 2) / 2 < basis_size(order)) {
    throw Error(ErrorCode::InvalidArgument, "triangle too small for the polynomial order");
  }
  if (!(aperture_deg > 0.0 && aperture_deg <= 360.0)) {
    throw Error(ErrorCode::InvalidArgument, "cone aperture must lie in (0, 360]");
  }
  if (!(local_tolerance > 0.0) || !(global_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "conditioning tolerances must be positive");
  }
  if (max_replacements < 0) throw Error(ErrorCode::InvalidArgument, "max replacements must be >= 0");
}

Point inward_direction(const CollarPoint& collar) {
  const Point d = collar.point - collar.ghost;
  return d.norm() > 1e-12 ? Point(d) : Point(-collar.normal);
}

std::pair<int, int> inward_signs(const CollarPoint& collar) {
  const Point d = inward_direction(collar);
  return {d.x() >= 0.0 ? 1 : -1, d.y() >= 0.0 ? 1 : -1};
}

namespace {

int member_id(int i, int j, const Grid& grid, const NodeClassification& classification) {
  if (!grid.contains(i, j) || !classification.is_active(grid.id(i, j))) {
    throw Error(ErrorCode::InactiveMember,
                "stencil node (" + std::to_string(i) + "," + std::to_string(j) + ") is not active",
                grid.contains(i, j) ? grid.id(i, j) : -1);
  }
  return grid.id(i, j);
}

bool x_dominant(const CollarPoint& collar) {
  const Point d = inward_direction(collar);
  return std::abs(d.x()) >= std::abs(d.y());
}

// Offsets (in lattice steps) of the S2 triangle relative to the ghost, ghost first.
std::vector<std::pair<int, int>> s2_offsets(const CollarPoint& collar, int p) {
  const auto [sx, sy] = inward_signs(collar);
  std::vector<std::pair<int, int>> out{{0, 0}};
  const bool along_x = x_dominant(collar);
  for (int l = 0; l <= p; ++l) {
    for (int m = 0; l + m <= p; ++m) {
      std::pair<int, int> off = along_x ? std::pair{(p - l) * sx, m * sy}
                                        : std::pair{l * sx, (p - m) * sy};
      if (off != std::pair{0, 0}) out.push_back(off);
    }
  }
  return out;
}

Stencil finish(int ghost, const CollarPoint& collar, std::vector<int> members, const Grid& grid) {
  Stencil s;
  s.ghost = ghost;
  s.collar = collar;
  s.members = std::move(members);
  s.diameter = stencil_diameter(s.members, grid);
  return s;
}

}  // namespace

Stencil build_s1(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification) {
  const auto [sx, sy] = inward_signs(collar);
  const auto [gi, gj] = grid.index(ghost);
  std::vector<int> members;
  for (int l = 0; l <= p; ++l) {
    for (int m = 0; l + m <= p; ++m) {
      members.push_back(member_id(gi + l * sx, gj + m * sy, grid, classification));
    }
  }
  return finish(ghost, collar, std::move(members), grid);
}

Stencil build_s2(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification) {
  const auto [gi, gj] = grid.index(ghost);
  std::vector<int> members;
  for (auto [di, dj] : s2_offsets(collar, p)) {
    members.push_back(member_id(gi + di, gj + dj, grid, classification));
  }
  return finish(ghost, collar, std::move(members), grid);
}

Stencil build_s3(int ghost, const CollarPoint& collar, int p, const Grid& grid,
                 const NodeClassification& classification) {
  const auto [gi, gj] = grid.index(ghost);
  const auto [sx, sy] = inward_signs(collar);
  const bool along_x = x_dominant(collar);
  const auto offsets = s2_offsets(collar, p);
  const int first_jump = collar.displacement().norm() > grid.spacing() ? 1 : 0;

  for (int jump = first_jump; jump <= p; ++jump) {
    const int ji = along_x ? jump * sx : 0;
    const int jj = along_x ? 0 : jump * sy;
    std::vector<int> members{ghost};
    bool exclusive = true;
    for (std::size_t n = 1; n < offsets.size() && exclusive; ++n) {
      const int i = gi + offsets[n].first + ji, j = gj + offsets[n].second + jj;
      exclusive = grid.contains(i, j) && classification.is_interior(grid.id(i, j));
      if (exclusive) members.push_back(grid.id(i, j));
    }
    if (exclusive) return finish(ghost, collar, std::move(members), grid);
  }
  throw Error(ErrorCode::InactiveMember,
              "no ghost-exclusive S3 stencil for ghost " + std::to_string(ghost));
}

std::vector<int> cone_candidates(int ghost, const CollarPoint& collar, double aperture_deg,
                                 const Grid& grid, const NodeClassification& classification,
                                 std::size_t max_count) {
  struct Entry {
    int r2, i, j, id;
  };
  const auto [gi, gj] = grid.index(ghost);
  const Point axis = inward_direction(collar).normalized();
  const bool full = aperture_deg >= 360.0;
  const double cos_half = std::cos(0.5 * aperture_deg * std::numbers::pi / 180.0) - 1e-12;

  std::vector<Entry> found;
  for (int w = 6;; w *= 2) {
    found.clear();
    for (int dj = -w; dj <= w; ++dj) {
      for (int di = -w; di <= w; ++di) {
        const int r2 = di * di + dj * dj;
        if (r2 == 0 || r2 > w * w) continue;
        const int i = gi + di, j = gj + dj;
        if (!grid.contains(i, j)) continue;
        const int id = grid.id(i, j);
        if (!classification.is_active(id)) continue;
        if (!full && Point(di, dj).dot(axis) < cos_half * std::sqrt(static_cast<double>(r2))) continue;
        found.push_back({r2, i, j, id});
      }
    }
    if (found.size() + 1 >= max_count || w >= grid.nodes_per_side()) break;
  }
  std::sort(found.begin(), found.end(), [](const Entry& a, const Entry& b) {
    if (a.r2 != b.r2) return a.r2 < b.r2;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<int> out{ghost};
  for (const auto& e : found) {
    if (out.size() >= max_count) break;
    out.push_back(e.id);
  }
  return out;
}

namespace {

constexpr std::size_t kMaxMembers = 40;
constexpr double kWidenStepDeg = 15.0;

/// Incremental cone-stencil construction for one ghost and one collar point.
class ConeBuilder {
 public:
  ConeBuilder(int ghost, const CollarPoint& collar, const StencilStrategy& strategy, const Grid& grid,
              const NodeClassification& classification, const ConditioningOracle& oracle)
      : ghost_(ghost),
        collar_(collar),
        strategy_(strategy),
        grid_(grid),
        classification_(classification),
        oracle_(oracle),
        aperture_(strategy.aperture_deg) {}

  /// S4.1: first N_o candidates, then append until admissible and chi < Lambda_LOC.
  void build_local(int basis_count) {
    while (members_.size() < static_cast<std::size_t>(basis_count)) append_next();
    grow();
  }

  /// S4.2: swap out the dominant coefficient while the ratio is >= Lambda_GLO.
  void improve_global() {
    const bool ghosts_only = strategy_.ratio_scope == RatioScope::GhostMembers;
    for (int it = 0; it < strategy_.max_replacements; ++it) {
      if (eval_.ratio(strategy_.ratio_scope) < strategy_.global_tolerance) return;
      std::size_t worst = 0;
      double worst_value = -1.0;
      for (std::size_t l = 1; l < members_.size(); ++l) {
        if (ghosts_only && !classification_.is_ghost(members_[l])) continue;
        const double v = std::abs(eval_.coefficients(static_cast<Eigen::Index>(l)));
        if (v > worst_value) {
          worst_value = v;
          worst = l;
        }
      }
      if (worst == 0) return;
      removed_.push_back(members_[worst]);
      members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
      append_next();
      grow();
    }
  }

  const TrialEvaluation& evaluation() const { return eval_; }

  Stencil result() const {
    Stencil s;
    s.ghost = ghost_;
    s.collar = collar_;
    s.members = members_;
    s.local_condition = eval_.local_condition;
    s.global_ratio = eval_.global_ratio;
    s.dominance_ratio = eval_.dominance_ratio;
    s.diameter = stencil_diameter(members_, grid_);
    s.widenings = widenings_;
    s.final_aperture_deg = aperture_;
    s.removed = removed_;
    return s;
  }

 private:
  void grow() {
    eval_ = oracle_(members_, collar_);
    while (!(eval_.admissible && eval_.local_condition < strategy_.local_tolerance)) {
      if (members_.size() >= kMaxMembers) {
        throw Error(ErrorCode::NotAdmissible,
                    "cone stencil of ghost " + std::to_string(ghost_) + " exceeds member cap");
      }
      append_next();
      eval_ = oracle_(members_, collar_);
    }
  }

  bool used(int id) const {
    return std::find(members_.begin(), members_.end(), id) != members_.end() ||
           std::find(removed_.begin(), removed_.end(), id) != removed_.end();
  }

  void append_next() {
    for (;;) {
      while (next_ < candidates_.size()) {
        const int id = candidates_[next_++];
        if (!used(id)) {
          members_.push_back(id);
          return;
        }
      }
      if (!complete_) {
        const std::size_t want = std::max<std::size_t>(64, 2 * candidates_.size());
        candidates_ = cone_candidates(ghost_, collar_, aperture_, grid_, classification_, want);
        complete_ = candidates_.size() < want;
        continue;
      }
      if (aperture_ >= 360.0) {
        throw Error(ErrorCode::NotAdmissible,
                    "candidates exhausted for ghost " + std::to_string(ghost_));
      }
      // Exhausted cone: widen and rescan, keeping the members chosen so far.
      aperture_ = std::min(360.0, aperture_ + kWidenStepDeg);
      ++widenings_;
      candidates_.clear();
      next_ = 0;
      complete_ = false;
    }
  }

  int ghost_;
  CollarPoint collar_;
  const StencilStrategy& strategy_;
  const Grid& grid_;
  const NodeClassification& classification_;
  const ConditioningOracle& oracle_;

  double aperture_;
  int widenings_ = 0;
  std::vector<int> candidates_;
  std::size_t next_ = 0;
  bool complete_ = false;
  std::vector<int> members_;
  std::vector<int> removed_;
  TrialEvaluation eval_;
};

Stencil build_cone(int ghost, const CollarPoint& collar, const StencilStrategy& strategy,
                   const Grid& grid, const NodeClassification& classification,
                   const ConditioningOracle& oracle, int order, bool replace) {
  ConeBuilder builder(ghost, collar, strategy, grid, classification, oracle);
  builder.build_local(basis_size(order));
  if (replace) builder.improve_global();
  return builder.result();
}

}  // namespace

Stencil build_s4(int ghost, const CollarPoint& collar, const StencilStrategy& strategy,
                 const Grid& grid, const NodeClassification& classification,
                 const LevelSet& level_set, const ConditioningOracle& oracle, int order) {
  if (!strategy.is_cone()) throw Error(ErrorCode::InvalidArgument, "build_s4 needs a cone strategy");
  const bool replace = strategy.kind != StrategyKind::S4_1;
  Stencil s = build_cone(ghost, collar, strategy, grid, classification, oracle, order, replace);
  const double ratio = strategy.ratio_scope == RatioScope::AllMembers ? s.dominance_ratio : s.global_ratio;
  if (strategy.kind != StrategyKind::S4_3 || ratio < strategy.global_tolerance) return s;

  CollarPoint axis;
  try {
    axis = axis_projection(collar.ghost, level_set, 3.0 * grid.spacing());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoAxisIntersection || e.code() == ErrorCode::ZeroGradient) return s;
    throw;
  }
  if ((axis.point - collar.point).norm() <= 1e-14) return s;
  Stencil rebuilt = build_cone(ghost, axis, strategy, grid, classification, oracle, order, true);
  rebuilt.collar_rebuilt = true;
  return rebuilt;
}

double stencil_diameter(std::span<const int> members, const Grid& grid) {
  int best = 0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    const auto [ia, ja] = grid.index(members[a]);
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto [ib, jb] = grid.index(members[b]);
      best = std::max(best, (ia - ib) * (ia - ib) + (ja - jb) * (ja - jb));
    }
  }
  return std::sqrt(static_cast<double>(best));
}

}  // namespace ghostfd
