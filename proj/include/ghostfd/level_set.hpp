#pragma once

#include "ghostfd/grid.hpp"

#include <functional>
#include <string>

namespace ghostfd {

/// Implicit domain description: negative inside, positive outside, with an
/// analytic gradient.
class LevelSet {
 public:
  using Field = std::function<double(const Point&)>;
  using GradientField = std::function<Point(const Point&)>;

  LevelSet(std::string name, Field value, GradientField gradient)
      : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)) {}

  double operator()(const Point& x) const { return value_(x); }
  Point gradient(const Point& x) const { return gradient_(x); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Field value_;
  GradientField gradient_;
};

/// |x - center| - radius.
LevelSet circle_level_set(const Point& center, double radius);

/// max(R1 - r, r - R2): one field covering both annulus boundaries.
LevelSet annulus_level_set(double inner_radius, double outer_radius);

/// max(|x|, |y|) - half_width.
LevelSet square_level_set(double half_width);

/// Intersection of two discs of radius 0.7 centred at +-0.25 along the diagonal.
LevelSet leaf_level_set();

/// Five-petal flower r = 0.5 + sin(5 theta)/5 around a shifted origin.
LevelSet flower_level_set();

/// Quartic hourglass with a saddle point at the shifted origin.
LevelSet hourglass_level_set();

}  // namespace ghostfd
