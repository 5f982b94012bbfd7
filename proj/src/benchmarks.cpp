#include "ghostfd/benchmarks.hpp"

#include "ghostfd/error.hpp"
#include "ghostfd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace ghostfd {

double Benchmark::pde_residual(const Point& x) const {
  const Eigen::Matrix2d hess = exact.hessian(x);
  return -coefficients.diffusion() * hess.trace() + coefficients.velocity(x).dot(exact.gradient(x)) -
         coefficients.source(x);
}

double Benchmark::boundary_residual(const CollarPoint& collar) const {
  const RobinData data = robin(collar);
  const Point& p = collar.point;
  return data.dirichlet * exact.value(p) + data.neumann * exact.gradient(p).dot(collar.normal) - data.value;
}

namespace {

Point zero_velocity(const Point&) { return Point::Zero(); }

/// Radially symmetric solution from phi(r), phi'(r), phi''(r).
struct RadialProfile {
  std::function<double(double)> f, df, d2f;
};

ExactSolution radial_solution(RadialProfile prof) {
  ExactSolution s;
  s.value = [f = prof.f](const Point& x) { return f(x.norm()); };
  s.gradient = [df = prof.df](const Point& x) -> Point {
    const double r = x.norm();
    return df(r) / r * x;
  };
  s.hessian = [df = prof.df, d2f = prof.d2f](const Point& x) -> Eigen::Matrix2d {
    const double r = x.norm();
    const Point e = x / r;
    const Eigen::Matrix2d rr = e * e.transpose();
    return d2f(r) * rr + df(r) / r * (Eigen::Matrix2d::Identity() - rr);
  };
  return s;
}

bool on_inner_circle(const CollarPoint& c) {
  return c.point.norm() < 0.5 * (kAnnulusInner + kAnnulusOuter);
}

/// Bivariate polynomial as a list of (coefficient, x power, y power).
struct Term {
  double c;
  int ax, ay;
};

double ipow(double v, int n) { return n <= 0 ? 1.0 : std::pow(v, n); }

ExactSolution polynomial_solution(std::vector<Term> terms) {
  ExactSolution s;
  s.value = [terms](const Point& p) {
    double v = 0.0;
    for (const auto& t : terms) v += t.c * ipow(p.x(), t.ax) * ipow(p.y(), t.ay);
    return v;
  };
  s.gradient = [terms](const Point& p) -> Point {
    Point g = Point::Zero();
    for (const auto& t : terms) {
      if (t.ax > 0) g.x() += t.c * t.ax * ipow(p.x(), t.ax - 1) * ipow(p.y(), t.ay);
      if (t.ay > 0) g.y() += t.c * t.ay * ipow(p.x(), t.ax) * ipow(p.y(), t.ay - 1);
    }
    return g;
  };
  s.hessian = [terms](const Point& p) -> Eigen::Matrix2d {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (const auto& t : terms) {
      if (t.ax > 1) h(0, 0) += t.c * t.ax * (t.ax - 1) * ipow(p.x(), t.ax - 2) * ipow(p.y(), t.ay);
      if (t.ay > 1) h(1, 1) += t.c * t.ay * (t.ay - 1) * ipow(p.x(), t.ax) * ipow(p.y(), t.ay - 2);
      if (t.ax > 0 && t.ay > 0) {
        const double v = t.c * t.ax * t.ay * ipow(p.x(), t.ax - 1) * ipow(p.y(), t.ay - 1);
        h(0, 1) += v;
        h(1, 0) += v;
      }
    }
    return h;
  };
  return s;
}

/// Dirichlet/Neumann data taken from an exact solution.
RobinProvider split_robin(ExactSolution exact, std::function<bool(const CollarPoint&)> dirichlet) {
  return [exact = std::move(exact), dirichlet = std::move(dirichlet)](const CollarPoint& c) {
    if (dirichlet(c)) return RobinData{1.0, 0.0, exact.value(c.point)};
    return RobinData{0.0, 1.0, exact.gradient(c.point).dot(c.normal)};
  };
}

}  // namespace

Benchmark annulus_homogeneous() {
  const double r1 = kAnnulusInner, r2 = kAnnulusOuter;
  ExactSolution exact = radial_solution({[=](double r) { return r2 * std::log(r / r1); },
                                         [=](double r) { return r2 / r; },
                                         [=](double r) { return -r2 / (r * r); }});
  RobinProvider robin = [](const CollarPoint& c) {
    return on_inner_circle(c) ? RobinData{1.0, 0.0, 0.0} : RobinData{0.0, 1.0, 1.0};
  };
  return Benchmark{"annulus", annulus_level_set(r1, r2),
                   ProblemCoefficients(1.0, zero_velocity, [](const Point&) { return 0.0; }),
                   std::move(exact), std::move(robin), std::nullopt};
}

Benchmark annulus_quartic() {
  ExactSolution exact = polynomial_solution({{1.0, 4, 0},
                                             {-2.0, 3, 1},
                                             {3.0, 2, 2},
                                             {1.0, 1, 3},
                                             {-1.0, 0, 4},
                                             {0.5, 3, 0},
                                             {-1.0, 0, 3},
                                             {1.0, 2, 1},
                                             {0.75, 1, 1},
                                             {1.0, 1, 0},
                                             {-2.0, 0, 1},
                                             {1.0, 0, 0}});
  const Point u(1.0, 1.0);
  ProblemCoefficients coeffs(
      1.0, [u](const Point&) { return u; },
      [exact, u](const Point& x) { return -exact.hessian(x).trace() + u.dot(exact.gradient(x)); });
  RobinProvider robin = split_robin(exact, on_inner_circle);
  return Benchmark{"annulus-quartic", annulus_level_set(kAnnulusInner, kAnnulusOuter), std::move(coeffs),
                   std::move(exact), std::move(robin), std::nullopt};
}

Benchmark complex_domain(const std::string& name) {
  std::optional<LevelSet> ls;
  if (name == "leaf") ls = leaf_level_set();
  else if (name == "flower") ls = flower_level_set();
  else if (name == "hourglass") ls = hourglass_level_set();
  else throw Error(ErrorCode::UnknownDomain, "no complex domain named '" + name + "'");

  ExactSolution exact;
  exact.value = [](const Point& p) { return std::sin(2 * p.x()) * std::sin(5 * p.y()); };
  exact.gradient = [](const Point& p) -> Point {
    return {2 * std::cos(2 * p.x()) * std::sin(5 * p.y()), 5 * std::sin(2 * p.x()) * std::cos(5 * p.y())};
  };
  exact.hessian = [](const Point& p) -> Eigen::Matrix2d {
    const double sx = std::sin(2 * p.x()), cx = std::cos(2 * p.x());
    const double sy = std::sin(5 * p.y()), cy = std::cos(5 * p.y());
    Eigen::Matrix2d h;
    h << -4 * sx * sy, 10 * cx * cy, 10 * cx * cy, -25 * sx * sy;
    return h;
  };
  ProblemCoefficients coeffs(1.0, zero_velocity,
                             [](const Point& p) { return 29 * std::sin(2 * p.x()) * std::sin(5 * p.y()); });
  RobinProvider robin = split_robin(exact, [](const CollarPoint& c) { return c.point.x() >= 0.0; });
  return Benchmark{name, std::move(*ls), std::move(coeffs), std::move(exact), std::move(robin), std::nullopt};
}

Benchmark convection_diffusion(double kappa, double u0) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be > 0");
  const double r1 = kAnnulusInner, r2 = kAnnulusOuter;
  ConvectionParameters par;
  par.kappa = kappa;
  par.u0 = u0;
  RadialProfile prof;

  if (u0 == 0.0) {
    par.kind = ConvectionCase::PureDiffusion;
    par.offset = -(r2 - r1) / (std::log(r2) - std::log(r1));
    par.scale = (r1 + par.offset * std::log(r1)) / kappa;
    const double r0 = par.offset, c = par.scale;
    prof = {[=](double r) { return -(r + r0 * std::log(r)) / kappa + c; },
            [=](double r) { return -(1.0 + r0 / r) / kappa; },
            [=](double r) { return r0 / (r * r) / kappa; }};
  } else if (u0 == kappa) {
    par.kind = ConvectionCase::Balanced;
    // phi(R) = 0 at both radii: (R log R - r0)/kappa = C R.
    par.offset = r1 * r2 * (std::log(r1) - std::log(r2)) / (r2 - r1);
    par.scale = (r1 * std::log(r1) - par.offset) / (kappa * r1);
    const double r0 = par.offset, c = par.scale;
    prof = {[=](double r) { return -(r * std::log(r) - r0) / kappa + c * r; },
            [=](double r) { return -(std::log(r) + 1.0) / kappa + c; },
            [=](double r) { return -1.0 / (kappa * r); }};
  } else {
    par.kind = ConvectionCase::General;
    const double beta = u0 / kappa;
    const double c = (r2 - r1) / ((kappa - u0) * (std::pow(r2, beta) - std::pow(r1, beta)));
    const double a = -r1 / (u0 - kappa) - c * std::pow(r1, beta);
    par.offset = a;
    par.scale = c;
    prof = {[=](double r) { return r / (u0 - kappa) + a + c * std::pow(r, beta); },
            [=](double r) { return 1.0 / (u0 - kappa) + c * beta * std::pow(r, beta - 1.0); },
            [=](double r) { return c * beta * (beta - 1.0) * std::pow(r, beta - 2.0); }};
  }
  if (kappa == 1.0 && u0 == 10.0) par.nominal_peclet = 8.0;
  if (kappa == 1.0 && u0 == 25.0) par.nominal_peclet = 20.0;

  ExactSolution exact = radial_solution(std::move(prof));
  ProblemCoefficients coeffs(
      kappa, [u0](const Point& x) -> Point { return u0 / x.squaredNorm() * x; },
      [](const Point& x) { return 1.0 / x.norm(); });
  RobinProvider robin = [](const CollarPoint&) { return RobinData{1.0, 0.0, 0.0}; };
  char name[64];
  std::snprintf(name, sizeof name, "convdiff:%g:%g", kappa, u0);
  return Benchmark{name, annulus_level_set(r1, r2), std::move(coeffs), std::move(exact), std::move(robin),
                   par};
}

PecletNumbers peclet_numbers(const Benchmark& benchmark, const Grid& grid) {
  if (!benchmark.convection) {
    throw Error(ErrorCode::InvalidArgument, "'" + benchmark.name + "' is not a convection-diffusion benchmark");
  }
  const auto& c = *benchmark.convection;
  return {c.u0 * kAnnulusOuter / c.kappa, c.u0 * grid.spacing() / c.kappa, c.nominal_peclet};
}

namespace {

struct CatalogEntry {
  const char* name;
  std::function<Benchmark()> make;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"annulus", annulus_homogeneous},
      {"annulus-quartic", annulus_quartic},
      {"leaf", [] { return complex_domain("leaf"); }},
      {"flower", [] { return complex_domain("flower"); }},
      {"hourglass", [] { return complex_domain("hourglass"); }},
      {"convdiff-case1", [] { return convection_diffusion(2.0, 1.0); }},
      {"convdiff-case2", [] { return convection_diffusion(1.0, 0.0); }},
      {"convdiff-case3", [] { return convection_diffusion(1.0, 1.0); }},
      {"layer-10", [] { return convection_diffusion(1.0, 10.0); }},
      {"layer-25", [] { return convection_diffusion(1.0, 25.0); }},
  };
  return entries;
}

}  // namespace

Benchmark make_benchmark(const std::string& name) {
  for (const auto& e : catalog()) {
    if (name == e.name) {
      Benchmark b = e.make();
      b.name = name;
      return b;
    }
  }
  if (name.rfind("convdiff:", 0) == 0) {
    const auto sep = name.find(':', 9);
    if (sep != std::string::npos) {
      try {
        std::size_t used1 = 0, used2 = 0;
        const std::string k = name.substr(9, sep - 9), u = name.substr(sep + 1);
        const double kappa = std::stod(k, &used1);
        const double u0 = std::stod(u, &used2);
        if (used1 == k.size() && used2 == u.size()) return convection_diffusion(kappa, u0);
      } catch (const std::logic_error&) {
      }
    }
  }
  throw Error(ErrorCode::UnknownDomain, "unknown benchmark '" + name + "'");
}

std::vector<std::string> benchmark_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.emplace_back(e.name);
  return out;
}

SelfCheck self_check(const Benchmark& benchmark, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  SelfCheck out;
  for (int tries = 0; out.interior_samples < samples && tries < 1000 * samples; ++tries) {
    const Point x(coord(rng), coord(rng));
    if (!(benchmark.level_set(x) < 0.0)) continue;
    out.max_pde_residual = std::max(out.max_pde_residual, std::abs(benchmark.pde_residual(x)));
    ++out.interior_samples;
  }
  for (int tries = 0; out.boundary_samples < samples && tries < 1000 * samples; ++tries) {
    const Point x(coord(rng), coord(rng));
    if (std::abs(benchmark.level_set(x)) > 0.05) continue;
    try {
      const CollarPoint c = project_to_boundary(x, benchmark.level_set);
      out.max_boundary_residual = std::max(out.max_boundary_residual, std::abs(benchmark.boundary_residual(c)));
      ++out.boundary_samples;
    } catch (const Error&) {
      // non-smooth parts of the boundary are skipped
    }
  }
  return out;
}

double radial_self_check(const Benchmark& benchmark, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(kAnnulusInner, kAnnulusOuter);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double r = radius(rng), t = angle(rng);
    worst = std::max(worst, std::abs(benchmark.pde_residual(Point(r * std::cos(t), r * std::sin(t)))));
  }
  return worst;
}

}  // namespace ghostfd
