#pragma once

#include "ghostfd/geometry.hpp"

#include <vector>

namespace ghostfd {

/// Exponent pair of a bivariate monomial.
struct MultiIndex {
  int ax = 0;
  int ay = 0;

  int degree() const { return ax + ay; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Number of monomials of total degree <= order - 1.
constexpr int basis_size(int order) { return order * (order + 1) / 2; }

/// All multi-indices with |alpha| <= order - 1, ordered by total degree and
/// then by descending x exponent: (0,0), (1,0), (0,1), (2,0), (1,1), ...
std::vector<MultiIndex> enumerate_basis(int order);

/// Shifted, scaled monomials ((x - center) / scale)^alpha. With scale = 1 the
/// basis is the raw shifted monomial basis.
struct BasisConfig {
  int order = 5;
  double scale = 1.0;
  Point center = Point::Zero();
};

double eval_monomial(const MultiIndex& alpha, const Point& x, const BasisConfig& cfg);
Point monomial_gradient(const MultiIndex& alpha, const Point& x, const BasisConfig& cfg);

/// Robin data a_D phi + a_N dphi/dn = g at a boundary point.
struct RobinData {
  double dirichlet = 1.0;
  double neumann = 0.0;
  double value = 0.0;
};

/// a_D psi_alpha(p) + a_N grad(psi_alpha)(p) . n(p) at the collar point.
double boundary_action(const MultiIndex& alpha, const CollarPoint& collar, const RobinData& robin,
                       const BasisConfig& cfg);

}  // namespace ghostfd
