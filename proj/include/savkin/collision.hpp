#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <numbers>
#include <vector>

#include "savkin/grid.hpp"

namespace savkin {

// B(q, sigma) = constant * |q|^gamma * angular, truncated to |q| <= radius.
struct BoltzmannKernel {
  double constant = 1.0 / (2.0 * std::numbers::pi);
  double gamma = 0.0;
  double angular = 1.0;
  double radius = 0.0;
};

// A(q) = constant * |q|^gamma * (|q|^2 I - q (x) q).
struct LandauKernel {
  double constant = 1.0 / 16.0;
  double gamma = 0.0;
};

void validate(const BoltzmannKernel& kernel);
void validate(const LandauKernel& kernel);

struct QuadratureOrders {
  int radial = 0;
  int angular = 0;
};

// Orders large enough that doubling either one moves no weight by more than
// about 1e-12 (see the grid-dependent argument bound in boltzmann.cpp).
QuadratureOrders default_quadrature(const VelocityGrid& grid, const BoltzmannKernel& kernel);

enum class OperatorKind : std::uint32_t { boltzmann = 1, landau = 2 };

struct ModesMetadata {
  OperatorKind kind = OperatorKind::boltzmann;
  int n = 0;
  double half_width = 0.0;
  double kernel_constant = 0.0;
  double gamma = 0.0;
  double angular = 0.0;
  double radius = 0.0;
  int radial_order = 0;
  int angular_order = 0;

  friend bool operator==(const ModesMetadata&, const ModesMetadata&) = default;
};

// Spectral weights of the truncated Boltzmann operator.
//
// beta(l, m) = int_{|q|<=R} int_{S^1} B exp(-i (xi_l . q+ + xi_m . q-)) dsigma dq
//
// For a constant angular factor the two angular integrals separate into
// Bessel functions, so beta is real and depends on |l + m|^2 and |l - m|^2
// only. The coupling table stores beta(l, k - l) for every output mode k and
// every l such that l and k - l lie in the symmetric index set
// {-N/2+1, ..., N/2-1}^2; the unpaired -N/2 modes are filtered out of the
// operator so that the discrete mass integral of Q vanishes identically.
class BoltzmannModes {
 public:
  BoltzmannModes(VelocityGrid grid, ModesMetadata meta, std::vector<double> coupling,
                 std::vector<double> loss);

  const VelocityGrid& grid() const noexcept { return grid_; }
  const ModesMetadata& metadata() const noexcept { return meta_; }

  // beta(l, m) for signed indices with l, m and l + m inside the symmetric set.
  double beta(int lx, int ly, int mx, int my) const;
  // beta(m, m), indexed by signed mode.
  double loss_weight(int mx, int my) const;

  const std::vector<double>& coupling() const noexcept { return coupling_; }
  const std::vector<double>& loss() const noexcept { return loss_; }

  // Range of admissible l along one axis for output component k.
  int range_lo(int k) const noexcept;
  int range_len(int k) const noexcept;
  std::size_t offset(int kx, int ky) const noexcept;

  static std::size_t coupling_size(int n);

 private:
  VelocityGrid grid_;
  ModesMetadata meta_;
  std::vector<double> coupling_;
  std::vector<double> loss_;  // FFT order, zero on the -N/2 rows/columns
  std::vector<std::size_t> offsets_;
};

// Single weight computed from scratch with the given quadrature orders.
double boltzmann_weight(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                        QuadratureOrders orders, int lx, int ly, int mx, int my);

BoltzmannModes precompute_boltzmann_modes(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                                          QuadratureOrders orders);
BoltzmannModes precompute_boltzmann_modes(const VelocityGrid& grid, const BoltzmannKernel& kernel);

Density boltzmann_gain(const BoltzmannModes& modes, const Density& f);
Density boltzmann_loss_factor(const BoltzmannModes& modes, const Density& f);
Density boltzmann_apply(const BoltzmannModes& modes, const Density& f);

// DFT of the periodized Landau matrix kernel sampled at grid offsets,
// scaled by the cell area so that IFFT(a_hat * FFT(f)) / N^2 is the
// discrete periodic convolution A * f.
class LandauModes {
 public:
  LandauModes(VelocityGrid grid, ModesMetadata meta, std::vector<Complex> a11,
              std::vector<Complex> a12, std::vector<Complex> a22);

  const VelocityGrid& grid() const noexcept { return grid_; }
  const ModesMetadata& metadata() const noexcept { return meta_; }
  const std::vector<Complex>& a11() const noexcept { return a11_; }
  const std::vector<Complex>& a12() const noexcept { return a12_; }
  const std::vector<Complex>& a22() const noexcept { return a22_; }

 private:
  VelocityGrid grid_;
  ModesMetadata meta_;
  std::vector<Complex> a11_, a12_, a22_;
};

struct Matrix2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
};
Matrix2 landau_matrix(const LandauKernel& kernel, double qx, double qy);

LandauModes precompute_landau_modes(const VelocityGrid& grid, const LandauKernel& kernel);

// Q_L = div[(A * f) grad f - (A * grad f) f].
Density landau_apply(const LandauModes& modes, const Density& f);

// Collision operator seen by the time integrators.
class CollisionOperator {
 public:
  virtual ~CollisionOperator() = default;

  virtual const VelocityGrid& grid() const = 0;
  virtual Density apply(const Density& f) const = 0;

  // Operators with a gain/loss split satisfy apply = gain - loss_factor * f.
  virtual bool has_split() const noexcept { return false; }
  virtual Density gain(const Density& f) const;
  virtual Density loss_factor(const Density& f) const;
};

class BoltzmannOperator final : public CollisionOperator {
 public:
  explicit BoltzmannOperator(std::shared_ptr<const BoltzmannModes> modes);

  const VelocityGrid& grid() const override { return modes_->grid(); }
  Density apply(const Density& f) const override;
  bool has_split() const noexcept override { return true; }
  Density gain(const Density& f) const override;
  Density loss_factor(const Density& f) const override;

  const BoltzmannModes& modes() const noexcept { return *modes_; }

 private:
  std::shared_ptr<const BoltzmannModes> modes_;
};

class LandauOperator final : public CollisionOperator {
 public:
  explicit LandauOperator(std::shared_ptr<const LandauModes> modes);

  const VelocityGrid& grid() const override { return modes_->grid(); }
  Density apply(const Density& f) const override;

  const LandauModes& modes() const noexcept { return *modes_; }

 private:
  std::shared_ptr<const LandauModes> modes_;
};

// Mode-cache files. Layout (little-endian):
//   "KSAVMODE" | u32 version | u32 operator tag | u32 N | f64 L |
//   f64 kernel constant | f64 gamma | f64 angular factor | f64 radius |
//   u32 radial order | u32 angular order | u64 table value count |
//   u64 FNV-1a checksum of the table bytes | complex<f64> tables...
// Boltzmann tables: coupling (output-mode major) then loss weights.
// Landau tables: a11, a12, a22, each in FFT order.
inline constexpr std::uint32_t kModesFormatVersion = 1;

ModesMetadata boltzmann_metadata(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                                 QuadratureOrders orders);
ModesMetadata landau_metadata(const VelocityGrid& grid, const LandauKernel& kernel);

void save_modes(const BoltzmannModes& modes, const std::filesystem::path& path);
void save_modes(const LandauModes& modes, const std::filesystem::path& path);

// Throw MetadataMismatch when the file was built for another configuration
// and CorruptFile on truncation or checksum failure.
BoltzmannModes load_boltzmann_modes(const std::filesystem::path& path, const VelocityGrid& grid,
                                    const ModesMetadata& expected);
LandauModes load_landau_modes(const std::filesystem::path& path, const VelocityGrid& grid,
                              const ModesMetadata& expected);

}  // namespace savkin
