#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace oracle {

using savkin::Density;
using savkin::SchemeTag;
using savkin::VelocityGrid;

namespace {

// int_0^R rho J0(a rho) J0(b rho) d rho (Lommel integrals).
double lommel(double a, double b, double radius) {
  const auto j0 = [](double x) { return std::cyl_bessel_j(0.0, x); };
  const auto j1 = [](double x) { return std::cyl_bessel_j(1.0, x); };
  if (std::abs(a - b) <= 1e-12 * std::max(1.0, a + b)) {
    const double x = a * radius;
    return 0.5 * radius * radius * (j0(x) * j0(x) + j1(x) * j1(x));
  }
  return radius * (a * j1(a * radius) * j0(b * radius) - b * j0(a * radius) * j1(b * radius)) /
         (a * a - b * b);
}

}  // namespace

double boltzmann_weight_exact(const VelocityGrid& grid, double kernel_constant, double radius,
                              int lx, int ly, int mx, int my) {
  const double w = std::numbers::pi / grid.half_width();
  const double a = 0.5 * w * std::hypot(lx + mx, ly + my);
  const double b = 0.5 * w * std::hypot(lx - mx, ly - my);
  return kernel_constant * 4.0 * std::numbers::pi * std::numbers::pi * lommel(a, b, radius);
}

double bkw_point(double t, double vx, double vy) {
  const double k = 1.0 - 0.5 * std::exp(-t / 8.0);
  const double v2 = vx * vx + vy * vy;
  return std::exp(-v2 / (2.0 * k)) / (2.0 * std::numbers::pi * k) *
         ((2.0 * k - 1.0) / k + (1.0 - k) / (2.0 * k * k) * v2);
}

Density bkw_field(const VelocityGrid& grid, double t) {
  Density f(grid);
  const int n = grid.size();
  const double h = 2.0 * grid.half_width() / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      f(i, j) = bkw_point(t, -grid.half_width() + i * h, -grid.half_width() + j * h);
    }
  }
  return f;
}

double mass_defect(const std::vector<double>& p, double dv, double target, double dt_eff,
                   double eps, double xi) {
  double s = 0.0;
  for (double x : p) s += std::max(x + dt_eff * xi, eps);
  return dv * s - target;
}

double bisect_multiplier(const std::vector<double>& p, double dv, double target, double dt_eff,
                         double eps) {
  double lo = -1.0, hi = 1.0;
  while (mass_defect(p, dv, target, dt_eff, eps, lo) > 0.0) lo *= 2.0;
  while (mass_defect(p, dv, target, dt_eff, eps, hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass_defect(p, dv, target, dt_eff, eps, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DissipationCheck dissipation(const savkin::StepReport& rep) {
  const double a = rep.r, b = rep.r_old, dt = rep.dt;
  const double rate = rep.production / rep.reference_entropy;
  DissipationCheck c;
  double lhs = 0.0, rhs = 0.0;
  switch (rep.taken) {
    case SchemeTag::sav1:
    case SchemeTag::sav1_l:
    case SchemeTag::sav1_lm:
      c.before = b * b;
      c.after = a * a;
      lhs = c.after - c.before + (a - b) * (a - b);
      rhs = dt * a * a * rate;
      break;
    case SchemeTag::sav1_pb:
      c.before = b * b;
      c.after = a * a;
      lhs = c.after - c.before + (a - b) * (a - b);
      rhs = dt * a * a * rate / (1.0 + dt * rep.beta);
      break;
    case SchemeTag::sav2_cn:
      c.before = b * b;
      c.after = a * a;
      lhs = c.after - c.before;
      rhs = dt * (a + b) * (a + b) * rate / 4.0;
      break;
    case SchemeTag::sav2_bdf:
    case SchemeTag::sav2_l:
    case SchemeTag::sav2_lm: {
      const double c0 = rep.r_older.value_or(std::nan(""));
      c.before = 0.5 * b * b + 0.5 * (2.0 * b - c0) * (2.0 * b - c0);
      c.after = 0.5 * a * a + 0.5 * (2.0 * a - b) * (2.0 * a - b);
      const double inc = a - 2.0 * b + c0;
      lhs = c.after - c.before + 0.5 * inc * inc;
      rhs = dt * a * a * rate;
      break;
    }
  }
  c.relative_residual = std::abs(lhs - rhs) / std::max(c.before, c.after);
  return c;
}

Density RelaxationOperator::apply(const Density& f) const {
  Density q(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) q.values[i] = target_.values[i] - f.values[i];
  return q;
}

Density RelaxationOperator::gain(const Density&) const { return target_; }

Density RelaxationOperator::loss_factor(const Density& f) const { return constant_field(f.grid, 1.0); }

Density RelaxationOperator::exact(const Density& f0, double elapsed) const {
  Density f(f0.grid);
  const double e = std::exp(-elapsed);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.values[i] = target_.values[i] + (f0.values[i] - target_.values[i]) * e;
  }
  return f;
}

Density constant_field(const VelocityGrid& grid, double c) {
  Density f(grid);
  std::fill(f.values.begin(), f.values.end(), c);
  return f;
}

Density random_positive_field(const VelocityGrid& grid, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Density f(grid);
  for (double& x : f.values) x = u(rng);
  return f;
}

Density random_smooth_density(const VelocityGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c1 = 0.3 * u(rng), c2 = 0.3 * u(rng), c3 = 0.2 * u(rng);
  const double ux = 0.3 * u(rng), uy = 0.3 * u(rng);
  const double temp = 0.8 + 0.2 * u(rng);
  Density f(grid);
  const int n = grid.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = grid.node(i), y = grid.node(j);
      const double g = std::exp(-((x - ux) * (x - ux) + (y - uy) * (y - uy)) / (2.0 * temp));
      f(i, j) = g * (1.0 + c1 * std::cos(x) * std::sin(0.5 * y) + c2 * std::sin(x + y) +
                     c3 * std::cos(1.5 * x - y)) /
                (2.0 * std::numbers::pi * temp);
    }
  }
  return f;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::shared_ptr<const savkin::CollisionOperator> cached_operator(const savkin::RunConfig& cfg) {
  using Key = std::tuple<int, int, double, double, double, double, double, int, int>;
  static std::map<Key, std::shared_ptr<const savkin::CollisionOperator>> cache;
  const Key key{static_cast<int>(cfg.equation), cfg.n, cfg.s, cfg.boltzmann.constant,
                cfg.boltzmann.radius, cfg.landau.constant, cfg.landau.gamma,
                cfg.quadrature.radial, cfg.quadrature.angular};
  auto& slot = cache[key];
  if (!slot) slot = savkin::make_operator(cfg);
  return slot;
}

}  // namespace oracle
