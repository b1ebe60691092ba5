#include "savkin/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace savkin {

namespace detail {

// The FFTW planner is not thread-safe; execution through the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftPlans {
  explicit FftPlans(int n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    inverse = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

}  // namespace detail

VelocityGrid::VelocityGrid(int n, double half_width) : n_(n), half_width_(half_width) {
  if (n < 8 || n % 2 != 0) {
    throw Error(ErrorKind::invalid_argument,
                "grid size must be even and at least 8, got " + std::to_string(n));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error(ErrorKind::invalid_argument, "grid half-width must be positive");
  }
  plans_ = std::make_shared<const detail::FftPlans>(n);
}

double VelocityGrid::wavenumber(int k) const noexcept {
  return std::numbers::pi * k / half_width_;
}

void VelocityGrid::fft_forward(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void VelocityGrid::fft_inverse(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->inverse, p, p);
}

VelocityGrid make_grid(int n, double half_width) { return VelocityGrid(n, half_width); }

Density::Density(VelocityGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.point_count()) {
    throw Error(ErrorKind::grid_mismatch, "value count does not match the grid");
  }
}

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::grid_mismatch, "fields live on different grids");
  }
}

double integrate(const VelocityGrid& grid, std::span<const double> g) {
  if (g.size() != grid.point_count()) {
    throw Error(ErrorKind::grid_mismatch, "field size does not match the grid");
  }
  double sum = 0.0;
  for (double x : g) sum += x;
  return sum * grid.cell_area();
}

double integrate(const Density& f) { return integrate(f.grid, f.values); }

std::array<double, 2> momentum(const Density& f) {
  const auto& g = f.grid;
  const int n = g.size();
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = f(i, j);
      mx += v * g.node(i);
      my += v * g.node(j);
    }
  }
  return {mx * g.cell_area(), my * g.cell_area()};
}

double kinetic_energy(const Density& f) {
  const auto& g = f.grid;
  const int n = g.size();
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double vx = g.node(i), vy = g.node(j);
      e += f(i, j) * (vx * vx + vy * vy);
    }
  }
  return e * g.cell_area();
}

MomentSet moments(const Density& f) {
  MomentSet m;
  m.rho = integrate(f);
  if (!(m.rho > 0.0)) {
    throw Error(ErrorKind::non_positive_mass, "mass is not positive");
  }
  auto p = momentum(f);
  m.u = {p[0] / m.rho, p[1] / m.rho};
  m.energy = kinetic_energy(f);
  const auto& g = f.grid;
  const int n = g.size();
  double spread = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dx = g.node(i) - m.u[0], dy = g.node(j) - m.u[1];
      spread += f(i, j) * (dx * dx + dy * dy);
    }
  }
  m.temperature = spread * g.cell_area() / (2.0 * m.rho);
  return m;
}

double entropy(const Density& f, double offset, double floor) {
  double sum = 0.0;
  for (double x : f.values) {
    if (x < -floor) {
      throw Error(ErrorKind::negative_density,
                  "density entry " + std::to_string(x) + " is below the log floor");
    }
    sum += x * std::log(std::max(x, floor));
  }
  return sum * f.grid.cell_area() + offset;
}

std::vector<Complex> spectral_transform(const VelocityGrid& grid, std::span<const double> g) {
  if (g.size() != grid.point_count()) {
    throw Error(ErrorKind::grid_mismatch, "field size does not match the grid");
  }
  std::vector<Complex> modes(g.begin(), g.end());
  grid.fft_forward(modes);
  const double scale = 1.0 / static_cast<double>(grid.point_count());
  for (auto& c : modes) c *= scale;
  return modes;
}

std::vector<Complex> inverse_spectral_transform_complex(const VelocityGrid& grid,
                                                        std::span<const Complex> modes) {
  if (modes.size() != grid.point_count()) {
    throw Error(ErrorKind::grid_mismatch, "mode count does not match the grid");
  }
  std::vector<Complex> out(modes.begin(), modes.end());
  grid.fft_inverse(out);
  return out;
}

std::vector<double> inverse_spectral_transform(const VelocityGrid& grid,
                                               std::span<const Complex> modes) {
  auto c = inverse_spectral_transform_complex(grid, modes);
  std::vector<double> out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), [](const Complex& z) { return z.real(); });
  return out;
}

void apply_derivative(const VelocityGrid& grid, std::span<Complex> modes, int axis) {
  const int n = grid.size();
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) {
      int k = grid.signed_mode(axis == 0 ? jx : jy);
      double w = (k == -n / 2) ? 0.0 : grid.wavenumber(k);
      modes[grid.index(jx, jy)] *= Complex(0.0, w);
    }
  }
}

std::array<std::vector<double>, 2> spectral_gradient(const VelocityGrid& grid,
                                                     std::span<const double> g) {
  auto modes = spectral_transform(grid, g);
  auto dx = modes;
  apply_derivative(grid, dx, 0);
  apply_derivative(grid, modes, 1);
  return {inverse_spectral_transform(grid, dx), inverse_spectral_transform(grid, modes)};
}

std::vector<double> spectral_divergence(const VelocityGrid& grid, std::span<const double> gx,
                                        std::span<const double> gy) {
  auto mx = spectral_transform(grid, gx);
  auto my = spectral_transform(grid, gy);
  apply_derivative(grid, mx, 0);
  apply_derivative(grid, my, 1);
  for (std::size_t i = 0; i < mx.size(); ++i) mx[i] += my[i];
  return inverse_spectral_transform(grid, mx);
}

}  // namespace savkin
