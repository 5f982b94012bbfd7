#include "ghostfd/benchmarks.hpp"
#include "ghostfd/boundary_ops.hpp"
#include "ghostfd/error.hpp"
#include "ghostfd/stencils.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace ghostfd;

namespace {

using Offsets = std::set<std::pair<int, int>>;

Offsets offsets_of(const Stencil& s, const Grid& g) {
  const auto [gi, gj] = g.index(s.ghost);
  Offsets out;
  for (int m : s.members) {
    auto [i, j] = g.index(m);
    out.insert({i - gi, j - gj});
  }
  return out;
}

struct AnnulusSetup {
  LevelSet ls = annulus_level_set(kAnnulusInner, kAnnulusOuter);
  Grid grid;
  NodeClassification cls;
  Benchmark bench = annulus_homogeneous();

  explicit AnnulusSetup(int n) : grid(n), cls(classify_nodes(grid, ls, BoundaryNodePolicy::Exterior)) {}

  CollarPoint collar(int ghost) const { return collar_for_ghost(grid.node(ghost), ls, grid.spacing()); }
};

int count_ghost_members(const Stencil& s, const NodeClassification& cls) {
  return static_cast<int>(std::count_if(s.members.begin(), s.members.end(), [&](int m) { return cls.is_ghost(m); }));
}

}  // namespace

TEST_SUITE("stencils") {

TEST_CASE("strategy names and validation") {
  CHECK(parse_strategy("S4.3") == StrategyKind::S4_3);
  CHECK(parse_strategy("s4_1") == StrategyKind::S4_1);
  CHECK_THROWS_AS(parse_strategy("S5"), Error);
  StencilStrategy s;
  CHECK(s.kind == StrategyKind::S4_3);
  CHECK(s.aperture_deg == 60.0);
  CHECK(s.local_tolerance == 1e6);
  CHECK(s.global_tolerance == 10.0);
  CHECK(s.max_replacements == 3);
  CHECK(s.triangle_size == 4);
  s.kind = StrategyKind::S1;
  s.triangle_size = 3;
  CHECK_THROWS_AS(s.validate(5), Error);  // 10 < 15 nodes
  s.triangle_size = 4;
  s.aperture_deg = 0.0;
  CHECK_THROWS_AS(s.validate(5), Error);
}

TEST_CASE("S1 triangle offsets") {
  Grid g(32);
  const auto cls = testing::all_interior(g);
  const int ghost = g.id(16, 16);
  const Point x = g.node(ghost);
  const double h = g.spacing();

  auto s = build_s1(ghost, testing::collar_at(x, x + Point(0.3 * h, 0.2 * h), Point(-1, -1)), 4, g, cls);
  Offsets expected;
  for (int l = 0; l <= 4; ++l)
    for (int m = 0; l + m <= 4; ++m) expected.insert({l, m});
  CHECK(s.size() == 15);
  CHECK(offsets_of(s, g) == expected);
  CHECK(s.members.front() == ghost);

  s = build_s1(ghost, testing::collar_at(x, x + Point(-0.3 * h, 0.2 * h), Point(1, -1)), 2, g, cls);
  expected.clear();
  for (int l = 0; l <= 2; ++l)
    for (int m = 0; l + m <= 2; ++m) expected.insert({-l, m});
  CHECK(s.size() == 6);
  CHECK(offsets_of(s, g) == expected);
}

TEST_CASE("S1 triangles") {
  AnnulusSetup a(160);
  for (int ghost : a.cls.ghost_nodes()) {
    const auto s = build_s1(ghost, a.collar(ghost), 4, a.grid, a.cls);
    CHECK(s.size() == 15);
  }
  // A disc a few cells across: triangles leave the active set.
  Grid g(160);
  const auto ls = circle_level_set(Point(0.0011, 0.0023), 0.031);
  const auto cls = classify_nodes(g, ls);
  int inactive = 0;
  for (int ghost : cls.ghost_nodes()) {
    try {
      build_s1(ghost, collar_for_ghost(g.node(ghost), ls, g.spacing()), 4, g, cls);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InactiveMember);
      CHECK(e.node() >= 0);
      CHECK_FALSE(cls.is_active(e.node()));
      ++inactive;
    }
  }
  CHECK(inactive > 0);
}

TEST_CASE("S2 vertex placement") {
  Grid g(32);
  const auto cls = testing::all_interior(g);
  const int ghost = g.id(10, 16);
  const Point x = g.node(ghost);
  const double h = g.spacing();

  // x-dominant, inward +x: right angle at x_k + (4h, 0).
  auto s = build_s2(ghost, testing::collar_at(x, x + Point(0.4 * h, 0.1 * h), Point(-1, 0)), 4, g, cls);
  Offsets expected;
  for (int l = 0; l <= 4; ++l)
    for (int m = 0; l + m <= 4; ++m) expected.insert({4 - l, m});
  CHECK(s.size() == 15);
  CHECK(offsets_of(s, g) == expected);
  CHECK(s.members.front() == ghost);

  // |dx| == |dy| exactly: x branch.
  auto tie = build_s2(ghost, testing::collar_at(x, x + Point(0.25 * h, 0.25 * h), Point(-1, -1)), 4, g, cls);
  CHECK(offsets_of(tie, g) == expected);

  // y-dominant, inward -y.
  s = build_s2(ghost, testing::collar_at(x, x + Point(0.1 * h, -0.5 * h), Point(0, 1)), 4, g, cls);
  expected.clear();
  for (int l = 0; l <= 4; ++l)
    for (int m = 0; l + m <= 4; ++m) expected.insert({l, -(4 - m)});
  CHECK(offsets_of(s, g) == expected);
}

TEST_CASE("S3 keeps only the ghost as ghost member") {
  AnnulusSetup a(160);
  int near = 0, layer2 = 0;
  for (std::size_t k = 0; k < a.cls.ghost_nodes().size(); ++k) {
    const int ghost = a.cls.ghost_nodes()[k];
    const auto c = a.collar(ghost);
    const auto s3 = build_s3(ghost, c, 4, a.grid, a.cls);
    CHECK(s3.size() == 15);
    CHECK(count_ghost_members(s3, a.cls) == 1);
    CHECK(s3.members.front() == ghost);
    if (c.displacement().norm() <= a.grid.spacing()) {
      bool s2_ok = true;
      Stencil s2;
      try {
        s2 = build_s2(ghost, c, 4, a.grid, a.cls);
      } catch (const Error&) {
        s2_ok = false;
      }
      if (s2_ok && count_ghost_members(s2, a.cls) == 1) {
        CHECK(offsets_of(s2, a.grid) == offsets_of(s3, a.grid));
        ++near;
      }
    }
    if (a.cls.ghost_layers()[k] == 2) ++layer2;
  }
  CHECK(near > 0);
  CHECK(layer2 > 0);
}

TEST_CASE("cone candidates agree with a brute-force angular filter") {
  AnnulusSetup a(160);
  const double theta = 45.0;
  int tested = 0;
  for (std::size_t k = 0; k < a.cls.ghost_nodes().size(); k += 37) {
    const int ghost = a.cls.ghost_nodes()[k];
    const auto c = a.collar(ghost);
    const auto got = cone_candidates(ghost, c, theta, a.grid, a.cls, 60);

    const Point axis = (c.point - c.ghost).normalized();
    const auto [gi, gj] = a.grid.index(ghost);
    struct E { int r2, i, j, id; };
    std::vector<E> all;
    for (int id = 0; id < a.grid.num_nodes(); ++id) {
      if (id == ghost || !a.cls.is_active(id)) continue;
      auto [i, j] = a.grid.index(id);
      const Point d(i - gi, j - gj);
      const double angle = std::acos(std::clamp(d.normalized().dot(axis), -1.0, 1.0));
      if (angle <= 0.5 * theta * std::numbers::pi / 180.0 + 1e-12) all.push_back({(i - gi) * (i - gi) + (j - gj) * (j - gj), i, j, id});
    }
    std::sort(all.begin(), all.end(), [](const E& x, const E& y) {
      return std::tie(x.r2, x.i, x.j) < std::tie(y.r2, y.i, y.j);
    });
    std::vector<int> expected{ghost};
    for (const auto& e : all) {
      if (expected.size() >= 60) break;
      expected.push_back(e.id);
    }
    CHECK(got == expected);
    ++tested;
  }
  CHECK(tested > 10);
}

TEST_CASE("full cone lists every active node by distance") {
  Grid g(24);
  const auto cls = classify_nodes(g, circle_level_set(Point(0.013, -0.021), 0.5));
  const int ghost = cls.ghost_nodes().front();
  const auto c = collar_for_ghost(g.node(ghost), circle_level_set(Point(0.013, -0.021), 0.5), g.spacing());
  const auto got = cone_candidates(ghost, c, 360.0, g, cls);
  CHECK(got.size() == static_cast<std::size_t>(cls.num_active()));
  for (std::size_t n = 2; n < got.size(); ++n) {
    CHECK((g.node(got[n]) - g.node(ghost)).norm() >= (g.node(got[n - 1]) - g.node(ghost)).norm() - 1e-12);
  }
}

TEST_CASE("60 degree cone stays within 30 degrees of the axis") {
  Grid g(64);
  const auto cls = testing::all_interior(g);
  const int ghost = g.id(10, 32);
  const Point x = g.node(ghost);
  const auto c = testing::collar_at(x, x + Point(0.5 * g.spacing(), 0.0), Point(-1, 0));
  const auto got = cone_candidates(ghost, c, 60.0, g, cls, 200);
  CHECK(got.size() == 200);
  for (std::size_t n = 1; n < got.size(); ++n) {
    const Point d = g.node(got[n]) - x;
    CHECK(std::abs(std::atan2(d.y(), d.x())) <= std::numbers::pi / 6 + 1e-12);
  }
}

TEST_CASE("cone stencils on the annulus") {
  AnnulusSetup a(160);
  const auto oracle = make_conditioning_oracle(a.grid, a.cls, a.bench.robin);
  StencilStrategy s41, s42, s43;
  s41.kind = StrategyKind::S4_1;
  s42.kind = StrategyKind::S4_2;
  int swapped = 0, untouched = 0;
  for (int ghost : a.cls.ghost_nodes()) {
    const auto c = a.collar(ghost);
    const auto t1 = build_s4(ghost, c, s41, a.grid, a.cls, a.ls, oracle);
    const auto t2 = build_s4(ghost, c, s42, a.grid, a.cls, a.ls, oracle);
    const auto t3 = build_s4(ghost, c, s43, a.grid, a.cls, a.ls, oracle);
    for (const auto* t : {&t1, &t2, &t3}) {
      CHECK(t->members.front() == ghost);
      CHECK(t->size() >= 15);
      CHECK(t->size() <= 25);
      CHECK(t->local_condition < 1e6);
      for (int m : t->members) CHECK(a.cls.is_active(m));
      // Cone membership for the final aperture.
      const Point axis = inward_direction(t->collar).normalized();
      for (std::size_t n = 1; n < t->size(); ++n) {
        const Point d = (a.grid.node(t->members[n]) - a.grid.node(ghost)).normalized();
        CHECK(d.dot(axis) >= std::cos(0.5 * t->final_aperture_deg * std::numbers::pi / 180.0) - 1e-9);
      }
    }
    CHECK(t1.removed.empty());
    if (t1.dominance_ratio < 10.0) {
      CHECK(t2.members == t1.members);
      CHECK(t3.members == t1.members);
      ++untouched;
    } else {
      CHECK(t2.removed.size() <= 3);
      CHECK_FALSE(t2.removed.empty());
      // The first swap removes a member of the S4.1 stencil.
      const int first = t2.removed.front();
      CHECK(std::find(t1.members.begin(), t1.members.end(), first) != t1.members.end());
      for (int r : t2.removed) CHECK(std::find(t2.members.begin(), t2.members.end(), r) == t2.members.end());
      ++swapped;
    }
    if (t2.dominance_ratio < 10.0) CHECK(t3.members == t2.members);
  }
  CHECK(untouched > 0);
  CHECK(swapped > 0);
}

TEST_CASE("ghost-member ratio scope only removes ghost members") {
  AnnulusSetup a(160);
  const auto oracle = make_conditioning_oracle(a.grid, a.cls, a.bench.robin);
  StencilStrategy s;
  s.kind = StrategyKind::S4_2;
  s.ratio_scope = RatioScope::GhostMembers;
  for (int ghost : a.cls.ghost_nodes()) {
    const auto t = build_s4(ghost, a.collar(ghost), s, a.grid, a.cls, a.ls, oracle);
    for (int r : t.removed) CHECK(a.cls.is_ghost(r));
  }
}

TEST_CASE("stencil construction is deterministic") {
  AnnulusSetup a(160);
  const auto oracle = make_conditioning_oracle(a.grid, a.cls, a.bench.robin);
  StencilStrategy s;
  for (std::size_t k = 0; k < a.cls.ghost_nodes().size(); k += 11) {
    const int ghost = a.cls.ghost_nodes()[k];
    const auto c = a.collar(ghost);
    CHECK(build_s4(ghost, c, s, a.grid, a.cls, a.ls, oracle).members ==
          build_s4(ghost, c, s, a.grid, a.cls, a.ls, oracle).members);
  }
}

TEST_CASE("stencil diameter") {
  Grid g(32);
  const std::vector<int> pair{g.id(3, 3), g.id(4, 3)};
  CHECK(stencil_diameter(pair, g) == 1.0);
  const auto cls = testing::all_interior(g);
  const int ghost = g.id(8, 8);
  const Point x = g.node(ghost);
  const auto s = build_s1(ghost, testing::collar_at(x, x + Point(0.01, 0.01), Point(-1, -1)), 4, g, cls);
  CHECK(s.diameter == doctest::Approx(std::sqrt(32.0)).epsilon(1e-15));
}

}  // TEST_SUITE
