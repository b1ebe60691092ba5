#include "savkin/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace savkin {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Density maxwellian(const VelocityGrid& grid, double rho, Vec2 u, double temperature) {
  if (!(rho > 0.0) || !(temperature > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "Maxwellian needs rho > 0 and T > 0");
  }
  Density f(grid);
  const int n = grid.size();
  const double peak = rho / (kTwoPi * temperature);
  for (int i = 0; i < n; ++i) {
    double dx = grid.node(i) - u[0];
    for (int j = 0; j < n; ++j) {
      double dy = grid.node(j) - u[1];
      f(i, j) = peak * std::exp(-(dx * dx + dy * dy) / (2.0 * temperature));
    }
  }
  return f;
}

double maxwellian_entropy(double rho, double temperature) {
  return rho * std::log(rho / (kTwoPi * temperature)) - rho;
}

double bkw_k(double t) { return 1.0 - 0.5 * std::exp(-t / 8.0); }

double bkw_value(double t, double speed_squared) {
  const double k = bkw_k(t);
  return std::exp(-speed_squared / (2.0 * k)) / (kTwoPi * k) *
         ((2.0 * k - 1.0) / k + (1.0 - k) / (2.0 * k * k) * speed_squared);
}

Density bkw(const VelocityGrid& grid, double t) {
  if (!(bkw_k(t) > 0.5)) {
    throw Error(ErrorKind::negative_region,
                "BKW profile needs K(t) > 1/2, t = " + std::to_string(t));
  }
  Density f(grid);
  const int n = grid.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double vx = grid.node(i), vy = grid.node(j);
      f(i, j) = bkw_value(t, vx * vx + vy * vy);
    }
  }
  return f;
}

Density bi_maxwellian(const VelocityGrid& grid, const BiMaxwellianParams& p) {
  Density f = maxwellian(grid, p.rho1, p.v1, p.t1);
  Density g = maxwellian(grid, p.rho2, p.v2, p.t2);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] += g.values[i];
  return f;
}

Vec2 mixture_velocity(const BiMaxwellianParams& p) {
  const double rho = p.rho1 + p.rho2;
  return {(p.rho1 * p.v1[0] + p.rho2 * p.v2[0]) / rho, (p.rho1 * p.v1[1] + p.rho2 * p.v2[1]) / rho};
}

double mixture_temperature(const BiMaxwellianParams& p) {
  const Vec2 u = mixture_velocity(p);
  auto sq = [&](const Vec2& v) {
    return (v[0] - u[0]) * (v[0] - u[0]) + (v[1] - u[1]) * (v[1] - u[1]);
  };
  return (p.rho1 * (p.t1 + 0.5 * sq(p.v1)) + p.rho2 * (p.t2 + 0.5 * sq(p.v2))) / (p.rho1 + p.rho2);
}

double max_norm_error(const Density& f, const Density& g) {
  require_same_grid(f.grid, g.grid);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    err = std::max(err, std::abs(f.values[i] - g.values[i]));
  }
  return err;
}

}  // namespace savkin
