#include "ghostfd/assembly.hpp"
#include "ghostfd/benchmarks.hpp"
#include "ghostfd/boundary_ops.hpp"
#include "ghostfd/error.hpp"

#include "support.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace ghostfd;

namespace {

ConstraintMatrix build(const std::vector<Point>& pts, const CollarPoint& c, RobinData r, int order, double h) {
  return assemble_constraints(pts, c, r, BasisConfig{order, h, c.ghost});
}

}  // namespace

TEST_SUITE("boundary_ops") {

TEST_CASE("constraint matrix shapes and right-hand side") {
  const Point xk(0.1, 0.2);
  const double h = 0.05;
  auto c = testing::collar_at(xk, xk, Point(1, 0));
  auto cm = build({xk}, c, {1, 0, 0}, 2, h);
  REQUIRE(cm.matrix.rows() == 3);
  REQUIRE(cm.matrix.cols() == 1);
  CHECK(cm.matrix(0, 0) == 1.0);
  CHECK(cm.matrix(1, 0) == 0.0);
  CHECK(cm.matrix(2, 0) == 0.0);

  std::vector<Point> pts;
  for (int l = 0; l <= 4; ++l)
    for (int m = 0; l + m <= 4; ++m) pts.push_back(xk + h * Point(l, m));
  cm = build(pts, c, {1, 0, 0}, 5, h);
  CHECK(cm.matrix.rows() == 15);
  CHECK(cm.matrix.cols() == 15);
  CHECK(cm.rhs(0) == 1.0);
  for (int m = 1; m < 15; ++m) CHECK(cm.rhs(m) == 0.0);
}

TEST_CASE("hand-solved minimum-norm coefficients") {
  const Point xk(0.1, 0.2);
  const double h = 0.05;
  const std::vector<Point> pts{xk, xk + Point(h, 0), xk + Point(0, h)};

  auto a = solve_min_norm(build(pts, testing::collar_at(xk, xk, Point(1, 0)), {1, 0, 0}, 2, h));
  CHECK(a(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(a(1)) < 1e-14);
  CHECK(std::abs(a(2)) < 1e-14);

  a = solve_min_norm(build(pts, testing::collar_at(xk, xk + Point(h / 2, 0), Point(1, 0)), {1, 0, 0}, 2, h));
  CHECK(a(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a(1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(a(2)) < 1e-14);
}

TEST_CASE("rank deficiency") {
  const Point xk(0.0, 0.0);
  const double h = 0.1;
  const std::vector<Point> dup{xk, xk + Point(h, 0), xk + Point(h, 0)};
  const auto cm = build(dup, testing::collar_at(xk, xk, Point(1, 0)), {1, 0, 0}, 2, h);
  CHECK(std::isinf(local_condition(cm)));
  CHECK_FALSE(analyze_constraints(cm).admissible);
  CHECK_THROWS_AS(solve_min_norm(cm), Error);
}

TEST_CASE("condition number of orthonormal rows") {
  ConstraintMatrix cm;
  cm.matrix = Eigen::MatrixXd::Zero(3, 5);
  cm.matrix(0, 1) = 1;
  cm.matrix(1, 3) = 1;
  cm.matrix(2, 4) = 1;
  cm.rhs = Eigen::VectorXd::Ones(3);
  CHECK(local_condition(cm) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("global and dominance ratios") {
  Grid g(16);
  NodeClassification cls(g);
  cls.add_interior(g.id(5, 5));
  cls.add_interior(g.id(6, 5));
  cls.add_ghost(g.id(4, 5), 1);
  cls.add_ghost(g.id(3, 5), 2);
  cls.finalize();
  const std::vector<int> members{g.id(4, 5), g.id(3, 5), g.id(5, 5), g.id(6, 5)};
  std::vector<double> a{1.0, -2.5, 7.0, 0.5};
  CHECK(global_ratio(members, a, members[0], cls) == doctest::Approx(2.5));
  CHECK(dominance_ratio(members, a, members[0]) == doctest::Approx(7.0));

  const std::vector<int> only{g.id(4, 5), g.id(5, 5), g.id(6, 5)};
  const std::vector<double> b{0.5, 3.0, 1.0};
  CHECK(global_ratio(only, b, only[0], cls) == 0.0);
  CHECK(dominance_ratio(only, b, only[0]) == doctest::Approx(6.0));

  a[0] = 1e-15;
  CHECK(std::isinf(global_ratio(members, a, members[0], cls)));
  CHECK(std::isinf(dominance_ratio(members, a, members[0])));
}

TEST_CASE("raw and scaled bases give the same coefficients") {
  const double h = 1.0 / 80;
  const Point xk(0.31, -0.12);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point> pts{xk};
    for (int l = 0; l <= 4; ++l)
      for (int m = 0; l + m <= 4; ++m)
        if (l + m > 0) pts.push_back(xk + h * Point(l, m));
    pts.push_back(xk + h * Point(5, 0));
    pts.push_back(xk + h * Point(2, 3));
    const Point p = xk + h * Point(0.5 + u(rng), 0.5 + u(rng));
    const auto c = testing::collar_at(xk, p, Point(-1, -0.4));
    const RobinData r{0.7, 0.3, 0.0};
    const auto scaled = solve_min_norm(assemble_constraints(pts, c, r, BasisConfig{5, h, xk}));
    const auto raw = solve_min_norm(assemble_constraints(pts, c, r, BasisConfig{5, 1.0, xk}));
    CHECK((scaled - raw).norm() <= 1e-8 * scaled.norm());
  }
}

TEST_CASE("boundary rows reproduce quartics exactly") {
  std::mt19937 rng(17);
  // S3 finds no ghost-exclusive triangle at the leaf tips below N=234.
  for (const auto& [name, cells] : {std::pair{"annulus", 160}, {"flower", 160}, {"leaf", 234}}) {
    const auto b = make_benchmark(name);
    for (auto kind : {StrategyKind::S3, StrategyKind::S4_1, StrategyKind::S4_3}) {
      Grid g(cells);
      auto cls = classify_nodes(g, b.level_set, BoundaryNodePolicy::Exterior);
      StencilStrategy st;
      st.kind = kind;
      const auto rows = build_ghost_rows(g, cls, b.level_set, b.robin, st);
      for (std::size_t k = 0; k < rows.size(); k += 5) {
        const auto& row = rows[k].row;
        const auto& collar = rows[k].stencil.collar;
        const RobinData r = b.robin(collar);
        const testing::Quartic q(rng);
        double lhs = 0, scale = 0;
        for (std::size_t l = 0; l < row.members.size(); ++l) {
          const double v = row.coefficients[l] * q(g.node(row.members[l]));
          lhs += v;
          scale += std::abs(v);
        }
        const double rhs = r.dirichlet * q(collar.point) + r.neumann * q.gradient(collar.point).dot(collar.normal);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("minimum-norm solution is orthogonal to the null space") {
  const auto b = annulus_homogeneous();
  Grid g(160);
  auto cls = classify_nodes(g, b.level_set, BoundaryNodePolicy::Exterior);
  const auto rows = build_ghost_rows(g, cls, b.level_set, b.robin, StencilStrategy{});
  int square = 0, wide = 0;
  for (const auto& rec : rows) {
    const auto cm = assemble_constraints(rec.stencil, g, b.robin(rec.stencil.collar));
    const Eigen::Map<const Eigen::VectorXd> a(rec.row.coefficients.data(),
                                              static_cast<Eigen::Index>(rec.row.coefficients.size()));
    CHECK((cm.matrix * a - cm.rhs).norm() <= 1e-10 * cm.rhs.norm());
    const auto n_o = cm.matrix.rows(), n_k = cm.matrix.cols();
    if (n_k > n_o) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.matrix, Eigen::ComputeFullV);
      const Eigen::MatrixXd null = svd.matrixV().rightCols(n_k - n_o);
      CHECK((null.transpose() * a).norm() <= 1e-10 * a.norm());
      // Perturbing along the null space only increases the norm.
      const Eigen::VectorXd z = null.col(0);
      CHECK((a + 1e-3 * z).norm() > a.norm());
      CHECK((a - 1e-3 * z).norm() > a.norm());
      ++wide;
    } else {
      const Eigen::VectorXd direct = cm.matrix.fullPivLu().solve(cm.rhs);
      CHECK((direct - a).norm() <= 1e-11 * std::max(1.0, a.norm()));
      ++square;
    }
  }
  CHECK(square > 0);
  CHECK(wide > 0);
}

TEST_CASE("rotating a Dirichlet configuration by 90 degrees rotates the coefficients") {
  Grid g(160);
  const auto ls = circle_level_set(Point::Zero(), 0.61);
  const auto cls = classify_nodes(g, ls);
  const RobinProvider robin = [](const CollarPoint&) { return RobinData{1.0, 0.0, 0.0}; };
  const auto oracle = make_conditioning_oracle(g, cls, robin);
  const int n = g.cells();
  auto rotate = [&](int id) {
    auto [i, j] = g.index(id);
    return g.id(n - j, i);  // (x, y) -> (-y, x)
  };
  int tested = 0;
  for (std::size_t k = 0; k < cls.ghost_nodes().size(); k += 13) {
    const int ghost = cls.ghost_nodes()[k];
    const auto c = collar_for_ghost(g.node(ghost), ls, g.spacing());
    const auto s = build_s4(ghost, c, StencilStrategy{}, g, cls, ls, oracle);
    const auto row = make_boundary_row(s, g, cls, robin);

    Stencil r;
    r.ghost = rotate(ghost);
    for (int m : s.members) r.members.push_back(rotate(m));
    const Eigen::Matrix2d rot{{0.0, -1.0}, {1.0, 0.0}};
    r.collar = testing::collar_at(g.node(r.ghost), rot * s.collar.point, rot * s.collar.normal);
    const auto rrow = make_boundary_row(r, g, cls, robin);
    for (std::size_t l = 0; l < row.coefficients.size(); ++l) {
      CHECK(rrow.coefficients[l] == doctest::Approx(row.coefficients[l]).epsilon(1e-10).scale(1.0));
    }
    ++tested;
  }
  CHECK(tested > 5);
}

}  // TEST_SUITE
