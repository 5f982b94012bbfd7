#pragma once

#include "ghostfd/geometry.hpp"

#include <random>

namespace ghostfd::testing {

/// Every lattice node interior; handy for row-level checks away from any boundary.
inline NodeClassification all_interior(const Grid& grid) {
  NodeClassification cls(grid);
  for (int id = 0; id < grid.num_nodes(); ++id) cls.add_interior(id);
  cls.finalize();
  return cls;
}

inline CollarPoint collar_at(const Point& ghost, const Point& point, const Point& normal) {
  CollarPoint c;
  c.ghost = ghost;
  c.point = point;
  c.normal = normal.normalized();
  return c;
}

/// Random polynomial of total degree <= 4 in raw coordinates.
struct Quartic {
  double c[5][5] = {};

  explicit Quartic(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) c[a][b] = u(rng);
  }
  double operator()(const Point& x) const {
    double s = 0;
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) s += c[a][b] * std::pow(x.x(), a) * std::pow(x.y(), b);
    return s;
  }
  Point gradient(const Point& x) const {
    Point g = Point::Zero();
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        if (a > 0) g.x() += c[a][b] * a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
        if (b > 0) g.y() += c[a][b] * b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
      }
    }
    return g;
  }
};

}  // namespace ghostfd::testing
