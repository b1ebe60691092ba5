#include "savkin/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace savkin {

Projection kkt_project(std::span<const double> predicted, double dt_eff, double eps) {
  if (!(dt_eff > 0.0)) throw Error(ErrorKind::invalid_argument, "dt_eff must be positive");
  if (!(eps >= 0.0)) throw Error(ErrorKind::invalid_argument, "eps must be nonnegative");
  Projection out;
  out.f.resize(predicted.size());
  out.lambda.assign(predicted.size(), 0.0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double p = predicted[i];
    if (p >= eps) {
      out.f[i] = p;
    } else {
      out.f[i] = eps;
      out.lambda[i] = (eps - p) / dt_eff;
      ++out.clipped;
    }
  }
  return out;
}

Projection kkt_project(const Density& predicted, double dt_eff, double eps) {
  return kkt_project(std::span<const double>(predicted.values), dt_eff, eps);
}

namespace {

class MassDefect {
 public:
  MassDefect(std::span<const double> predicted, double cell_area, double target, double dt_eff,
             double eps)
      : predicted_(predicted), cell_area_(cell_area), target_(target), dt_eff_(dt_eff), eps_(eps) {}

  double operator()(double xi) const {
    double sum = 0.0;
    for (double p : predicted_) sum += std::max(p + dt_eff_ * xi, eps_);
    return cell_area_ * sum - target_;
  }

 private:
  std::span<const double> predicted_;
  double cell_area_, target_, dt_eff_, eps_;
};

}  // namespace

MultiplierResult solve_mass_multiplier(std::span<const double> predicted, double cell_area,
                                       double target_mass, double dt_eff, double eps,
                                       MultiplierOptions options) {
  if (!(target_mass > 0.0)) throw Error(ErrorKind::invalid_argument, "target mass must be positive");
  if (!(dt_eff > 0.0) || !(cell_area > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "dt_eff and cell area must be positive");
  }
  for (double p : predicted) {
    if (!std::isfinite(p)) throw Error(ErrorKind::invalid_argument, "predicted field is not finite");
  }
  const MassDefect defect(predicted, cell_area, target_mass, dt_eff, eps);
  const double tol = options.tolerance * target_mass;

  // F is nondecreasing, so every evaluation tightens one side of a bracket.
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  auto record = [&](double x, double fx) {
    if (fx < 0.0) lo = std::max(lo, x);
    else hi = std::min(hi, x);
  };
  auto bracketed = [&] { return std::isfinite(lo) && std::isfinite(hi); };

  double x0 = 0.0, f0 = defect(x0);
  record(x0, f0);
  if (std::abs(f0) <= tol) return {x0, f0, 0};
  double x1 = -dt_eff, f1 = defect(x1);
  record(x1, f1);
  bool bisect_next = false;

  for (int it = 1; it <= options.max_iterations; ++it) {
    if (std::abs(f1) <= tol) return {x1, f1, it};

    double x2 = std::numeric_limits<double>::quiet_NaN();
    if (!bisect_next && f1 != f0) {
      const double slope = (x1 - x0) / (f1 - f0);
      x2 = std::abs(f0) < std::abs(f1) ? x0 - f0 * slope : x1 - f1 * slope;
    }
    const bool usable = std::isfinite(x2) && (!bracketed() || (x2 > lo && x2 < hi));
    if (!usable) {
      if (bracketed()) {
        x2 = 0.5 * (lo + hi);
      } else {
        // Expand geometrically towards the missing side of the bracket.
        const double step = std::max({std::abs(x1 - x0), dt_eff, std::abs(x1)});
        x2 = std::isfinite(lo) ? lo + 2.0 * step : hi - 2.0 * step;
      }
    }
    const double f2 = defect(x2);
    record(x2, f2);
    bisect_next = usable && std::abs(f2) > 0.5 * std::abs(f1);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (bracketed() && hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo))) {
      if (std::abs(f1) <= tol) return {x1, f1, it};
      break;
    }
  }
  throw Error(ErrorKind::no_convergence,
              "mass multiplier did not converge, last residual " + std::to_string(f1));
}

MultiplierResult solve_mass_multiplier(const Density& predicted, double target_mass, double dt_eff,
                                       double eps, MultiplierOptions options) {
  return solve_mass_multiplier(predicted.values, predicted.grid.cell_area(), target_mass, dt_eff,
                               eps, options);
}

Density extrapolate_ab(const Density& current, const Density& previous) {
  require_same_grid(current.grid, previous.grid);
  Density out(current.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] = 2.0 * current.values[i] - previous.values[i];
  }
  return out;
}

Density extrapolate_positive(const Density& current, const Density& previous) {
  require_same_grid(current.grid, previous.grid);
  Density out(current.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = current.values[i], b = previous.values[i];
    if (!(a > 0.0) || !(b > 0.0)) {
      throw Error(ErrorKind::non_positive_density,
                  "positive extrapolation needs strictly positive history");
    }
    out.values[i] = a >= b ? 2.0 * a - b : 1.0 / (2.0 / a - 1.0 / b);
  }
  return out;
}

}  // namespace savkin
