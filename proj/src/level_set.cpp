#include "ghostfd/level_set.hpp"

#include "ghostfd/error.hpp"

#include <cmath>
#include <numbers>

namespace ghostfd {

namespace {

Point radial_unit(const Point& d) {
  const double r = d.norm();
  if (r == 0.0) return Point(1.0, 0.0);
  return d / r;
}

// Shift shared by the flower and hourglass domains keeps lattice lines away
// from their symmetry axes.
const Point kShiftedOrigin(0.03 * std::sqrt(3.0), 0.04 * std::sqrt(2.0));

}  // namespace

LevelSet circle_level_set(const Point& center, double radius) {
  return LevelSet(
      "circle", [center, radius](const Point& x) { return (x - center).norm() - radius; },
      [center](const Point& x) { return radial_unit(x - center); });
}

LevelSet annulus_level_set(double inner_radius, double outer_radius) {
  return LevelSet(
      "annulus",
      [=](const Point& x) {
        const double r = x.norm();
        return std::max(inner_radius - r, r - outer_radius);
      },
      [=](const Point& x) -> Point {
        const double r = x.norm();
        const Point e = radial_unit(x);
        return (inner_radius - r >= r - outer_radius) ? Point(-e) : e;
      });
}

LevelSet square_level_set(double half_width) {
  return LevelSet(
      "square",
      [half_width](const Point& x) { return std::max(std::abs(x.x()), std::abs(x.y())) - half_width; },
      [](const Point& x) -> Point {
        if (std::abs(x.x()) >= std::abs(x.y())) return Point(x.x() >= 0 ? 1.0 : -1.0, 0.0);
        return Point(0.0, x.y() >= 0 ? 1.0 : -1.0);
      });
}

LevelSet leaf_level_set() {
  constexpr double kRadius = 0.7;
  const double c = std::cos(std::numbers::pi / 4);
  const double s = std::sin(std::numbers::pi / 4);
  const Point c1(-0.25 * c, -0.25 * s);
  const Point c2(0.25 * c, 0.25 * s);
  return LevelSet(
      "leaf",
      [=](const Point& x) { return std::max((x - c1).norm() - kRadius, (x - c2).norm() - kRadius); },
      [=](const Point& x) -> Point {
        const double p1 = (x - c1).norm() - kRadius;
        const double p2 = (x - c2).norm() - kRadius;
        return p1 >= p2 ? radial_unit(x - c1) : radial_unit(x - c2);
      });
}

LevelSet flower_level_set() {
  return LevelSet(
      "flower",
      [](const Point& x) {
        const double X = x.x() - kShiftedOrigin.x();
        const double Y = x.y() - kShiftedOrigin.y();
        const double R = std::hypot(X, Y);
        const double X2 = X * X, Y2 = Y * Y;
        const double numerator = Y2 * Y2 * Y + 5.0 * X2 * X2 * Y - 10.0 * X2 * Y2 * Y;
        return R - 0.5 - numerator / (5.0 * std::pow(R, 5));
      },
      [](const Point& x) -> Point {
        // In polar form phi = R - 0.5 - sin(5 theta)/5.
        const double X = x.x() - kShiftedOrigin.x();
        const double Y = x.y() - kShiftedOrigin.y();
        const double R = std::hypot(X, Y);
        const double theta = std::atan2(Y, X);
        const double dtheta = -std::cos(5.0 * theta) / R;
        const double ct = X / R, st = Y / R;
        return Point(ct - st * dtheta, st + ct * dtheta);
      });
}

LevelSet hourglass_level_set() {
  return LevelSet(
      "hourglass",
      [](const Point& x) {
        const double X = x.x() - kShiftedOrigin.x();
        const double Y = x.y() - kShiftedOrigin.y();
        const double X2 = X * X, Y2 = Y * Y;
        return 256.0 * Y2 * Y2 - 16.0 * X2 * X2 - 128.0 * Y2 + 36.0 * X2;
      },
      [](const Point& x) -> Point {
        const double X = x.x() - kShiftedOrigin.x();
        const double Y = x.y() - kShiftedOrigin.y();
        return Point(-64.0 * X * X * X + 72.0 * X, 1024.0 * Y * Y * Y - 256.0 * Y);
      });
}

}  // namespace ghostfd
