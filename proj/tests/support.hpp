#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "savkin/collision.hpp"
#include "savkin/harness.hpp"
#include "savkin/schemes.hpp"

namespace oracle {

// Closed-form Boltzmann weight for the constant kernel with unit angular
// factor: 2 pi C_B int_0^R rho J0(a rho) J0(b rho) d rho, where
// a = |xi_l + xi_m| / 2 and b = |xi_l - xi_m| / 2.
double boltzmann_weight_exact(const savkin::VelocityGrid& grid, double kernel_constant,
                              double radius, int lx, int ly, int mx, int my);

// BKW value written out independently of the library.
double bkw_point(double t, double vx, double vy);
savkin::Density bkw_field(const savkin::VelocityGrid& grid, double t);

// Mass defect F(xi) = dv sum max(p + dt xi, eps) - target.
double mass_defect(const std::vector<double>& p, double dv, double target, double dt_eff,
                   double eps, double xi);
// Plain bisection on the monotone mass defect.
double bisect_multiplier(const std::vector<double>& p, double dv, double target, double dt_eff,
                         double eps);

// Residual of the discrete dissipation law for one recorded step, divided
// by the larger of the two modified entropies.
struct DissipationCheck {
  double before = 0.0;  // modified entropy at level n
  double after = 0.0;   // modified entropy at level n+1
  double relative_residual = 0.0;
};
DissipationCheck dissipation(const savkin::StepReport& rep);

// Linear relaxation Q(f) = target - f, written as gain = target and loss = 1.
// Its flow f(t) = target + (f0 - target) exp(-(t - t0)) is the exact
// reference for manufactured convergence studies.
class RelaxationOperator final : public savkin::CollisionOperator {
 public:
  explicit RelaxationOperator(savkin::Density target) : target_(std::move(target)) {}
  const savkin::VelocityGrid& grid() const override { return target_.grid; }
  savkin::Density apply(const savkin::Density& f) const override;
  bool has_split() const noexcept override { return true; }
  savkin::Density gain(const savkin::Density& f) const override;
  savkin::Density loss_factor(const savkin::Density& f) const override;

  savkin::Density exact(const savkin::Density& f0, double elapsed) const;

 private:
  savkin::Density target_;
};

// Returns a fixed field whatever the input.
class FixedOperator final : public savkin::CollisionOperator {
 public:
  explicit FixedOperator(savkin::Density q) : q_(std::move(q)) {}
  const savkin::VelocityGrid& grid() const override { return q_.grid; }
  savkin::Density apply(const savkin::Density&) const override { return q_; }

 private:
  savkin::Density q_;
};

savkin::Density constant_field(const savkin::VelocityGrid& grid, double c);
savkin::Density random_positive_field(const savkin::VelocityGrid& grid, std::mt19937_64& rng,
                                      double lo, double hi);
// Smooth positive bump built from a few low Fourier modes on a Gaussian.
savkin::Density random_smooth_density(const savkin::VelocityGrid& grid, std::mt19937_64& rng);

double max_abs(const std::vector<double>& v);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

// Operators built once per process and shared between test cases.
std::shared_ptr<const savkin::CollisionOperator> cached_operator(const savkin::RunConfig& cfg);

}  // namespace oracle
