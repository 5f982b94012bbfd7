#include "ghostfd/basis.hpp"

#include "ghostfd/error.hpp"

namespace ghostfd {

namespace {

double ipow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

std::vector<MultiIndex> enumerate_basis(int order) {
  if (order < 2) throw Error(ErrorCode::InvalidArgument, "basis order must be >= 2");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(order));
  for (int degree = 0; degree < order; ++degree) {
    for (int ax = degree; ax >= 0; --ax) out.push_back({ax, degree - ax});
  }
  return out;
}

double eval_monomial(const MultiIndex& alpha, const Point& x, const BasisConfig& cfg) {
  const Point u = (x - cfg.center) / cfg.scale;
  return ipow(u.x(), alpha.ax) * ipow(u.y(), alpha.ay);
}

Point monomial_gradient(const MultiIndex& alpha, const Point& x, const BasisConfig& cfg) {
  const Point u = (x - cfg.center) / cfg.scale;
  const double dx = alpha.ax == 0 ? 0.0 : alpha.ax * ipow(u.x(), alpha.ax - 1) * ipow(u.y(), alpha.ay);
  const double dy = alpha.ay == 0 ? 0.0 : alpha.ay * ipow(u.x(), alpha.ax) * ipow(u.y(), alpha.ay - 1);
  return Point(dx, dy) / cfg.scale;
}

double boundary_action(const MultiIndex& alpha, const CollarPoint& collar, const RobinData& robin,
                       const BasisConfig& cfg) {
  double out = 0.0;
  if (robin.dirichlet != 0.0) out += robin.dirichlet * eval_monomial(alpha, collar.point, cfg);
  if (robin.neumann != 0.0) {
    out += robin.neumann * monomial_gradient(alpha, collar.point, cfg).dot(collar.normal);
  }
  return out;
}

}  // namespace ghostfd
