#pragma once

#include <span>
#include <vector>

#include "savkin/grid.hpp"

namespace savkin {

// Pointwise complementarity solve lambda >= 0, f >= eps, lambda (f - eps) = 0
// for (f - predicted) / dt_eff = lambda.
struct Projection {
  std::vector<double> f;
  std::vector<double> lambda;
  std::size_t clipped = 0;
};

Projection kkt_project(std::span<const double> predicted, double dt_eff, double eps);
Projection kkt_project(const Density& predicted, double dt_eff, double eps);

struct MultiplierOptions {
  double tolerance = 1e-12;  // relative to the target mass
  int max_iterations = 100;
};

struct MultiplierResult {
  double xi = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Root of F(xi) = cell_area * sum max(predicted + dt_eff * xi, eps) - target,
// found by a bracketed secant iteration started at 0 and -dt_eff.
MultiplierResult solve_mass_multiplier(std::span<const double> predicted, double cell_area,
                                       double target_mass, double dt_eff, double eps,
                                       MultiplierOptions options = {});
MultiplierResult solve_mass_multiplier(const Density& predicted, double target_mass, double dt_eff,
                                       double eps, MultiplierOptions options = {});

// 2 f^n - f^{n-1}.
Density extrapolate_ab(const Density& current, const Density& previous);

// 2 f^n - f^{n-1} where f^n >= f^{n-1}, 1 / (2/f^n - 1/f^{n-1}) elsewhere.
// Throws NonPositiveDensity unless both inputs are strictly positive.
Density extrapolate_positive(const Density& current, const Density& previous);

}  // namespace savkin
