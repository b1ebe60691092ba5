#include <cmath>

#include "savkin/collision.hpp"

namespace savkin {

void validate(const LandauKernel& kernel) {
  if (!(kernel.constant > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "Landau kernel constant must be positive");
  }
  if (!(kernel.gamma >= -2.0 && kernel.gamma <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "Landau gamma must lie in [-2, 1]");
  }
}

Matrix2 landau_matrix(const LandauKernel& kernel, double qx, double qy) {
  const double q2 = qx * qx + qy * qy;
  if (q2 == 0.0) return {};
  const double s = kernel.constant * (kernel.gamma == 0.0 ? 1.0 : std::pow(q2, 0.5 * kernel.gamma));
  return {s * qy * qy, -s * qx * qy, s * qx * qx};
}

ModesMetadata landau_metadata(const VelocityGrid& grid, const LandauKernel& kernel) {
  ModesMetadata m;
  m.kind = OperatorKind::landau;
  m.n = grid.size();
  m.half_width = grid.half_width();
  m.kernel_constant = kernel.constant;
  m.gamma = kernel.gamma;
  return m;
}

LandauModes::LandauModes(VelocityGrid grid, ModesMetadata meta, std::vector<Complex> a11,
                         std::vector<Complex> a12, std::vector<Complex> a22)
    : grid_(std::move(grid)),
      meta_(meta),
      a11_(std::move(a11)),
      a12_(std::move(a12)),
      a22_(std::move(a22)) {
  if (meta_.n != grid_.size() || meta_.half_width != grid_.half_width()) {
    throw Error(ErrorKind::grid_mismatch, "modes metadata does not describe this grid");
  }
  const auto np = grid_.point_count();
  if (a11_.size() != np || a12_.size() != np || a22_.size() != np) {
    throw Error(ErrorKind::invalid_argument, "Landau table sizes do not match the grid");
  }
}

LandauModes precompute_landau_modes(const VelocityGrid& grid, const LandauKernel& kernel) {
  validate(kernel);
  const int n = grid.size();
  const double h = grid.spacing();
  std::vector<Complex> a11(grid.point_count()), a12(grid.point_count()), a22(grid.point_count());
  // Offsets wrap into [-L, L): FFT index j stands for q = signed(j) * h.
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) {
      const auto a = landau_matrix(kernel, grid.signed_mode(jx) * h, grid.signed_mode(jy) * h);
      const auto p = grid.index(jx, jy);
      a11[p] = a.a11;
      // The offsets -L and +L coincide on the torus, where the images of
      // a12 differ in sign; the unpaired row and column take their mean.
      a12[p] = (jx == n / 2 || jy == n / 2) ? 0.0 : a.a12;
      a22[p] = a.a22;
    }
  }
  const double dv = grid.cell_area();
  for (auto* t : {&a11, &a12, &a22}) {
    grid.fft_forward(*t);
    for (auto& z : *t) z *= dv;
  }
  return LandauModes(grid, landau_metadata(grid, kernel), std::move(a11), std::move(a12),
                     std::move(a22));
}

Density landau_apply(const LandauModes& modes, const Density& f) {
  require_same_grid(modes.grid(), f.grid);
  const auto& grid = f.grid;
  const std::size_t np = grid.point_count();

  // Unnormalized spectra keep the convolution scaling explicit: the
  // discrete convolution is IFFT(a_hat * FFT(f)) / N^2.
  std::vector<Complex> fhat(f.values.begin(), f.values.end());
  grid.fft_forward(fhat);
  const double inv = 1.0 / static_cast<double>(np);

  std::vector<Complex> dx = fhat, dy = fhat;
  for (auto& z : dx) z *= inv;
  for (auto& z : dy) z *= inv;
  apply_derivative(grid, dx, 0);
  apply_derivative(grid, dy, 1);

  const auto& a11 = modes.a11();
  const auto& a12 = modes.a12();
  const auto& a22 = modes.a22();
  std::vector<Complex> c11(np), c12(np), c22(np), b1(np), b2(np);
  for (std::size_t i = 0; i < np; ++i) {
    const Complex fi = fhat[i] * inv;
    c11[i] = a11[i] * fi;
    c12[i] = a12[i] * fi;
    c22[i] = a22[i] * fi;
    // (A * grad f)_i = sum_j A_ij * d_j f
    b1[i] = a11[i] * dx[i] + a12[i] * dy[i];
    b2[i] = a12[i] * dx[i] + a22[i] * dy[i];
  }
  for (auto* t : {&dx, &dy, &c11, &c12, &c22, &b1, &b2}) grid.fft_inverse(*t);

  std::vector<double> flux_x(np), flux_y(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double gx = dx[i].real(), gy = dy[i].real();
    const double fv = f.values[i];
    flux_x[i] = c11[i].real() * gx + c12[i].real() * gy - b1[i].real() * fv;
    flux_y[i] = c12[i].real() * gx + c22[i].real() * gy - b2[i].real() * fv;
  }
  return Density(grid, spectral_divergence(grid, flux_x, flux_y));
}

LandauOperator::LandauOperator(std::shared_ptr<const LandauModes> modes) : modes_(std::move(modes)) {
  if (!modes_) throw Error(ErrorKind::invalid_argument, "null Landau modes");
}

Density LandauOperator::apply(const Density& f) const { return landau_apply(*modes_, f); }

}  // namespace savkin
