#pragma once

#include "ghostfd/assembly.hpp"
#include "ghostfd/boundary_ops.hpp"
#include "ghostfd/level_set.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ghostfd {

inline constexpr double kAnnulusInner = 0.44721359549995793928;  // sqrt(5)/5
inline constexpr double kAnnulusOuter = 0.86602540378443864676;  // sqrt(3)/2

/// Analytic solution with first and second derivatives.
struct ExactSolution {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Eigen::Matrix2d(const Point&)> hessian;
};

enum class ConvectionCase { General, PureDiffusion, Balanced };

struct ConvectionParameters {
  double kappa = 1.0;
  double u0 = 0.0;
  ConvectionCase kind = ConvectionCase::PureDiffusion;
  // phi(r) = r/(u0 - kappa) + offset + scale * r^(u0/kappa)            (General)
  //        = -(r + offset * log r)/kappa + scale                        (PureDiffusion)
  //        = -(r log r - offset)/kappa + scale * r                      (Balanced)
  double offset = 0.0;
  double scale = 0.0;
  std::optional<double> nominal_peclet;  // rounded value quoted for the layer cases
};

struct Benchmark {
  std::string name;
  LevelSet level_set;
  ProblemCoefficients coefficients;
  ExactSolution exact;
  RobinProvider robin;
  std::optional<ConvectionParameters> convection;

  /// -k tr(H) + U . grad - f of the analytic solution at x.
  double pde_residual(const Point& x) const;
  /// a_D phi + a_N grad(phi) . n - g of the analytic solution on a collar point.
  double boundary_residual(const CollarPoint& collar) const;
};

/// Laplace problem on the annulus, Dirichlet 0 inside, Neumann 1 outside,
/// exact solution R2 log(r / R1).
Benchmark annulus_homogeneous();

/// Same annulus and boundary split with a fixed quartic manufactured solution,
/// k = 1 and U = (1, 1). The discrete scheme reproduces it to rounding error.
Benchmark annulus_quartic();

/// "leaf", "flower" or "hourglass" with manufactured solution sin(2x) sin(5y),
/// Dirichlet where the collar point has x >= 0, Neumann elsewhere. Throws
/// UnknownDomain.
Benchmark complex_domain(const std::string& name);

/// Radial convection-diffusion on the annulus, U = u0 (x, y)/r^2, f = 1/r,
/// homogeneous Dirichlet on both circles. Throws InvalidArgument unless kappa > 0.
Benchmark convection_diffusion(double kappa, double u0);

struct PecletNumbers {
  double global = 0.0;                   // u0 R2 / kappa
  double cell = 0.0;                     // u0 h / kappa
  std::optional<double> nominal_global;  // rounded value, when one is quoted
};

/// Throws InvalidArgument if `benchmark` is not a convection-diffusion instance.
PecletNumbers peclet_numbers(const Benchmark& benchmark, const Grid& grid);

/// Catalog lookup: annulus, annulus-quartic, leaf, flower, hourglass,
/// convdiff-case1 (kappa 2, u0 1), convdiff-case2 (1, 0), convdiff-case3 (1, 1),
/// layer-10 (1, 10), layer-25 (1, 25), and convdiff:<kappa>:<u0>. Throws
/// UnknownDomain.
Benchmark make_benchmark(const std::string& name);
std::vector<std::string> benchmark_names();

struct SelfCheck {
  double max_pde_residual = 0.0;
  double max_boundary_residual = 0.0;
  int interior_samples = 0;
  int boundary_samples = 0;
};

/// Evaluates the analytic solution's PDE residual at `samples` random interior
/// points and its boundary residual at the projections of random points near the
/// boundary. Deterministic for a fixed seed.
SelfCheck self_check(const Benchmark& benchmark, int samples = 100, unsigned seed = 12345);

/// PDE residual at `samples` random radii in (R1, R2) along random directions;
/// radial benchmarks only.
double radial_self_check(const Benchmark& benchmark, int samples = 100, unsigned seed = 12345);

}  // namespace ghostfd
