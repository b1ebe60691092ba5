#pragma once

#include <array>

#include "savkin/grid.hpp"

namespace savkin {

using Vec2 = std::array<double, 2>;

/// Maxwellian rho / (2 pi T) exp(-|v - u|^2 / (2T)) on the grid.
Density maxwellian(const VelocityGrid& grid, double rho, Vec2 u, double temperature);

/// Integral of M log M for a 2D Maxwellian: rho log(rho / (2 pi T)) - rho.
double maxwellian_entropy(double rho, double temperature);

/// BKW similarity parameter K(t) = 1 - exp(-t/8) / 2.
double bkw_k(double t);

/// Pointwise BKW value at speed^2 = |v|^2.
double bkw_value(double t, double speed_squared);

/// 2D BKW solution at time t. Throws NegativeRegion when K(t) <= 1/2.
Density bkw(const VelocityGrid& grid, double t);

struct BiMaxwellianParams {
  double rho1 = 0.5;
  double rho2 = 0.5;
  double t1 = 1.0;
  double t2 = 1.0;
  Vec2 v1{-1.0, 2.0};
  Vec2 v2{3.0, -3.0};
};

Density bi_maxwellian(const VelocityGrid& grid, const BiMaxwellianParams& p);

/// Temperature of the mixture: sum rho_i (T_i + |V_i - u|^2 / 2) / sum rho_i.
double mixture_temperature(const BiMaxwellianParams& p);
Vec2 mixture_velocity(const BiMaxwellianParams& p);

/// max_j |f_j - g_j|.
double max_norm_error(const Density& f, const Density& g);

}  // namespace savkin
