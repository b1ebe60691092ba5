#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "savkin/errors.hpp"

namespace savkin {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

// Uniform periodic N x N grid on [-L, L)^2. Nodes use the cell-left
// convention v_j = -L + j * 2L/N, so -L is a node and +L is not.
//
// Mode arrays are stored in FFT order: index j in [0, N) stands for the
// signed wavenumber index k = j for j < N/2 and k = j - N otherwise.
// Grid values are row-major with the v_x index outermost.
class VelocityGrid {
 public:
  VelocityGrid(int n, double half_width);

  int size() const noexcept { return n_; }
  std::size_t point_count() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  double cell_area() const noexcept { return spacing() * spacing(); }

  double node(int j) const noexcept { return -half_width_ + j * spacing(); }
  int signed_mode(int j) const noexcept { return j < n_ / 2 ? j : j - n_; }
  // Wavenumber pi*k/L of the signed mode index k.
  double wavenumber(int k) const noexcept;
  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(ix) * n_ + iy;
  }

  // Unnormalized 2D DFT (sign -1) and its inverse (sign +1), no scaling.
  void fft_forward(std::span<Complex> data) const;
  void fft_inverse(std::span<Complex> data) const;

  friend bool operator==(const VelocityGrid& a, const VelocityGrid& b) noexcept {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  int n_;
  double half_width_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

VelocityGrid make_grid(int n, double half_width);

// Phase-space density sampled on a grid.
struct Density {
  explicit Density(VelocityGrid g) : grid(std::move(g)), values(grid.point_count(), 0.0) {}
  Density(VelocityGrid g, std::vector<double> v);

  double& operator()(int ix, int iy) { return values[grid.index(ix, iy)]; }
  double operator()(int ix, int iy) const { return values[grid.index(ix, iy)]; }
  std::size_t size() const noexcept { return values.size(); }

  VelocityGrid grid;
  std::vector<double> values;
};

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b);

struct MomentSet {
  double rho = 0.0;
  std::array<double, 2> u{0.0, 0.0};
  double temperature = 0.0;
  double energy = 0.0;  // integral of f |v|^2
};

// dv * sum_j g_j.
double integrate(const VelocityGrid& grid, std::span<const double> g);
double integrate(const Density& f);

// First moments of f (mass, momentum) without the rho > 0 requirement.
std::array<double, 2> momentum(const Density& f);
double kinetic_energy(const Density& f);

MomentSet moments(const Density& f);

inline constexpr double kDefaultLogFloor = 1e-300;

// integral of f log(max(f, floor)) + offset. Throws NegativeDensity if any
// entry is below -floor.
double entropy(const Density& f, double offset, double floor = kDefaultLogFloor);

// Normalized modes g_hat with g(v_j) = sum_k g_hat_k exp(2 pi i k.j / N),
// which is exp(i xi_k . (v_j + L)) in physical variables.
std::vector<Complex> spectral_transform(const VelocityGrid& grid, std::span<const double> g);
std::vector<Complex> inverse_spectral_transform_complex(const VelocityGrid& grid,
                                                        std::span<const Complex> modes);
// Real part of the inverse transform.
std::vector<double> inverse_spectral_transform(const VelocityGrid& grid,
                                               std::span<const Complex> modes);

// Multiplies modes by i*xi_k along one axis (0 = v_x, 1 = v_y). The -N/2
// mode gets weight zero.
void apply_derivative(const VelocityGrid& grid, std::span<Complex> modes, int axis);

std::array<std::vector<double>, 2> spectral_gradient(const VelocityGrid& grid,
                                                     std::span<const double> g);
std::vector<double> spectral_divergence(const VelocityGrid& grid, std::span<const double> gx,
                                        std::span<const double> gy);

}  // namespace savkin
