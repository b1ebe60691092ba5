#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "savkin/collision.hpp"

namespace savkin {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights mapped to [0, radius].
void radial_rule(int order, double radius, std::vector<double>& nodes,
                 std::vector<double>& weights) {
  auto zeros = boost::math::legendre_p_zeros<double>(order);
  nodes.clear();
  weights.clear();
  auto push = [&](double x) {
    double dp = boost::math::legendre_p_prime(order, x);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes.push_back(0.5 * radius * (x + 1.0));
    weights.push_back(0.5 * radius * w);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) push(-*it);
  }
  for (double x : zeros) push(x);
}

// Squared norms a^2 + b^2 with 0 <= a, b <= limit, mapped to dense indices.
struct NormIndex {
  explicit NormIndex(int limit) : compact(2 * limit * limit + 1, -1) {
    for (int a = 0; a <= limit; ++a) {
      for (int b = 0; b <= limit; ++b) {
        int& slot = compact[a * a + b * b];
        if (slot < 0) slot = count++;
      }
    }
  }
  std::vector<int> compact;
  int count = 0;
};

// Evaluates beta as a function of (|l+m|^2, |l-m|^2).
//
//   beta = C b (2 pi)^2 int_0^R rho^(1+gamma) J0(rho |s|/2) J0(rho |d|/2) drho
//
// with J0(z) = (1/2pi) int cos(z cos theta) dtheta taken by the uniform
// angular rule and the radial integral by Gauss-Legendre.
class WeightEvaluator {
 public:
  WeightEvaluator(const VelocityGrid& grid, const BoltzmannKernel& kernel, QuadratureOrders orders,
                  bool memoize)
      : norms_(grid.size() - 2), step_(kPi / grid.half_width() / 2.0) {
    radial_rule(orders.radial, kernel.radius, nodes_, weights_);
    const double prefactor = kernel.constant * kernel.angular * 4.0 * kPi * kPi;
    for (std::size_t p = 0; p < nodes_.size(); ++p) {
      weights_[p] *= prefactor * std::pow(nodes_[p], 1.0 + kernel.gamma);
    }
    const int m = orders.angular;
    for (int j = 0; 2 * j <= m; ++j) {
      cosines_.push_back(std::cos(2.0 * kPi * j / m));
      double w = (j == 0 || 2 * j == m) ? 1.0 : 2.0;
      angle_weights_.push_back(w / m);
    }
    j0_.assign(static_cast<std::size_t>(norms_.count) * nodes_.size(),
               std::numeric_limits<double>::quiet_NaN());
    if (memoize) {
      memo_.assign(static_cast<std::size_t>(norms_.count) * norms_.count,
                   std::numeric_limits<double>::quiet_NaN());
    }
  }

  double weight(int ns, int nd) {
    if (ns > nd) std::swap(ns, nd);
    const std::size_t cs = slot(ns), cd = slot(nd);
    if (memo_.empty()) return integrate(cs, ns, cd, nd);
    double& memo = memo_[cs * norms_.count + cd];
    if (std::isnan(memo)) memo = integrate(cs, ns, cd, nd);
    return memo;
  }

 private:
  double integrate(std::size_t cs, int ns, std::size_t cd, int nd) {
    const double* js = bessel_row(cs, ns);
    const double* jd = bessel_row(cd, nd);
    double sum = 0.0;
    for (std::size_t p = 0; p < nodes_.size(); ++p) sum += weights_[p] * js[p] * jd[p];
    return sum;
  }

  std::size_t slot(int n) const {
    if (n < 0 || n >= static_cast<int>(norms_.compact.size()) || norms_.compact[n] < 0) {
      throw Error(ErrorKind::invalid_argument, "mode pair outside the coupling range");
    }
    return static_cast<std::size_t>(norms_.compact[n]);
  }

  const double* bessel_row(std::size_t c, int n) {
    double* row = &j0_[c * nodes_.size()];
    if (std::isnan(row[0])) {
      const double scale = step_ * std::sqrt(static_cast<double>(n));
      for (std::size_t p = 0; p < nodes_.size(); ++p) {
        const double z = nodes_[p] * scale;
        double s = 0.0;
        for (std::size_t j = 0; j < cosines_.size(); ++j) {
          s += angle_weights_[j] * std::cos(z * cosines_[j]);
        }
        row[p] = s;
      }
    }
    return row;
  }

  NormIndex norms_;
  double step_;
  std::vector<double> nodes_, weights_;
  std::vector<double> cosines_, angle_weights_;
  std::vector<double> j0_;
  std::vector<double> memo_;
};

void check_orders(QuadratureOrders orders) {
  if (orders.radial < 8 || orders.angular < 8) {
    throw Error(ErrorKind::invalid_argument, "quadrature orders must be at least 8");
  }
}

bool in_set(int k, int half) { return k > -half && k < half; }

}  // namespace

void validate(const BoltzmannKernel& kernel) {
  if (!(kernel.constant > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "Boltzmann kernel constant must be positive");
  }
  if (!(kernel.gamma > -2.0 && kernel.gamma <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "Boltzmann gamma must lie in (-2, 1]");
  }
  if (!(kernel.radius > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "truncation radius must be positive");
  }
}

QuadratureOrders default_quadrature(const VelocityGrid& grid, const BoltzmannKernel& kernel) {
  // Largest Bessel argument reached by any weight.
  const double zmax = kernel.radius * kPi * std::sqrt(2.0) * (grid.size() - 2) /
                      (2.0 * grid.half_width());
  QuadratureOrders q;
  q.radial = std::max(grid.size(), static_cast<int>(std::ceil(zmax)) + 32);
  q.angular = std::max(16, 4 * static_cast<int>(std::ceil((2.0 * zmax + 16.0) / 4.0)));
  return q;
}

ModesMetadata boltzmann_metadata(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                                 QuadratureOrders orders) {
  ModesMetadata m;
  m.kind = OperatorKind::boltzmann;
  m.n = grid.size();
  m.half_width = grid.half_width();
  m.kernel_constant = kernel.constant;
  m.gamma = kernel.gamma;
  m.angular = kernel.angular;
  m.radius = kernel.radius;
  m.radial_order = orders.radial;
  m.angular_order = orders.angular;
  return m;
}

BoltzmannModes::BoltzmannModes(VelocityGrid grid, ModesMetadata meta, std::vector<double> coupling,
                               std::vector<double> loss)
    : grid_(std::move(grid)), meta_(meta), coupling_(std::move(coupling)), loss_(std::move(loss)) {
  const int n = grid_.size();
  if (meta_.n != n || meta_.half_width != grid_.half_width()) {
    throw Error(ErrorKind::grid_mismatch, "modes metadata does not describe this grid");
  }
  if (coupling_.size() != coupling_size(n) || loss_.size() != grid_.point_count()) {
    throw Error(ErrorKind::invalid_argument, "Boltzmann table sizes do not match the grid");
  }
  const int h = n / 2;
  offsets_.resize(static_cast<std::size_t>(n - 1) * (n - 1) + 1);
  std::size_t acc = 0, idx = 0;
  for (int kx = -h + 1; kx < h; ++kx) {
    for (int ky = -h + 1; ky < h; ++ky) {
      offsets_[idx++] = acc;
      acc += static_cast<std::size_t>(range_len(kx)) * range_len(ky);
    }
  }
  offsets_[idx] = acc;
}

std::size_t BoltzmannModes::coupling_size(int n) {
  std::size_t per_axis = 0;
  for (int k = -n / 2 + 1; k < n / 2; ++k) per_axis += static_cast<std::size_t>(n - 1 - std::abs(k));
  return per_axis * per_axis;
}

int BoltzmannModes::range_lo(int k) const noexcept {
  const int h = grid_.size() / 2;
  return std::max(-h + 1, k - h + 1);
}

int BoltzmannModes::range_len(int k) const noexcept { return grid_.size() - 1 - std::abs(k); }

std::size_t BoltzmannModes::offset(int kx, int ky) const noexcept {
  const int h = grid_.size() / 2;
  return offsets_[static_cast<std::size_t>(kx + h - 1) * (grid_.size() - 1) + (ky + h - 1)];
}

double BoltzmannModes::beta(int lx, int ly, int mx, int my) const {
  const int h = grid_.size() / 2;
  const int kx = lx + mx, ky = ly + my;
  if (!in_set(lx, h) || !in_set(ly, h) || !in_set(mx, h) || !in_set(my, h) || !in_set(kx, h) ||
      !in_set(ky, h)) {
    throw Error(ErrorKind::invalid_argument, "mode pair outside the stored coupling range");
  }
  const std::size_t p = offset(kx, ky) +
                        static_cast<std::size_t>(lx - range_lo(kx)) * range_len(ky) +
                        (ly - range_lo(ky));
  return coupling_[p];
}

double BoltzmannModes::loss_weight(int mx, int my) const {
  const int n = grid_.size();
  const int jx = mx < 0 ? mx + n : mx, jy = my < 0 ? my + n : my;
  return loss_[grid_.index(jx, jy)];
}

double boltzmann_weight(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                        QuadratureOrders orders, int lx, int ly, int mx, int my) {
  validate(kernel);
  check_orders(orders);
  WeightEvaluator eval(grid, kernel, orders, false);
  const int sx = lx + mx, sy = ly + my, dx = lx - mx, dy = ly - my;
  return eval.weight(sx * sx + sy * sy, dx * dx + dy * dy);
}

BoltzmannModes precompute_boltzmann_modes(const VelocityGrid& grid, const BoltzmannKernel& kernel,
                                          QuadratureOrders orders) {
  validate(kernel);
  check_orders(orders);
  if (kernel.radius > 2.0 * grid.half_width()) {
    throw Error(ErrorKind::invalid_argument,
                "truncation radius exceeds 2L; the collision sphere would alias");
  }
  const int n = grid.size();
  const int h = n / 2;
  WeightEvaluator eval(grid, kernel, orders, true);

  std::vector<double> coupling;
  coupling.reserve(BoltzmannModes::coupling_size(n));
  auto lo = [&](int k) { return std::max(-h + 1, k - h + 1); };
  auto hi = [&](int k) { return std::min(h - 1, k + h - 1); };
  for (int kx = -h + 1; kx < h; ++kx) {
    for (int ky = -h + 1; ky < h; ++ky) {
      const int ns = kx * kx + ky * ky;
      for (int lx = lo(kx); lx <= hi(kx); ++lx) {
        const int dx = 2 * lx - kx;
        for (int ly = lo(ky); ly <= hi(ky); ++ly) {
          const int dy = 2 * ly - ky;
          coupling.push_back(eval.weight(ns, dx * dx + dy * dy));
        }
      }
    }
  }

  std::vector<double> loss(grid.point_count(), 0.0);
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) {
      const int mx = grid.signed_mode(jx), my = grid.signed_mode(jy);
      if (mx == -h || my == -h) continue;
      loss[grid.index(jx, jy)] = eval.weight(4 * (mx * mx + my * my), 0);
    }
  }
  return BoltzmannModes(grid, boltzmann_metadata(grid, kernel, orders), std::move(coupling),
                        std::move(loss));
}

BoltzmannModes precompute_boltzmann_modes(const VelocityGrid& grid, const BoltzmannKernel& kernel) {
  return precompute_boltzmann_modes(grid, kernel, default_quadrature(grid, kernel));
}

namespace {

// Coefficients of f over the symmetric index set, split into real and
// imaginary planes, row (lx + h - 1), column (ly + h - 1).
struct CenteredModes {
  std::vector<double> re, im;
};

CenteredModes centered(const VelocityGrid& grid, std::span<const Complex> modes) {
  const int n = grid.size(), h = n / 2, w = n - 1;
  CenteredModes c;
  c.re.resize(static_cast<std::size_t>(w) * w);
  c.im.resize(c.re.size());
  for (int lx = -h + 1; lx < h; ++lx) {
    for (int ly = -h + 1; ly < h; ++ly) {
      const auto& z = modes[grid.index(lx < 0 ? lx + n : lx, ly < 0 ? ly + n : ly)];
      const std::size_t p = static_cast<std::size_t>(lx + h - 1) * w + (ly + h - 1);
      c.re[p] = z.real();
      c.im[p] = z.imag();
    }
  }
  return c;
}

std::vector<double> gain_values(const BoltzmannModes& modes, std::span<const Complex> fhat) {
  const auto& grid = modes.grid();
  const int n = grid.size(), h = n / 2, w = n - 1;
  const auto c = centered(grid, fhat);
  const double* table = modes.coupling().data();
  std::vector<Complex> out(grid.point_count(), Complex(0.0, 0.0));
  for (int kx = -h + 1; kx < h; ++kx) {
    const int lox = modes.range_lo(kx), lenx = modes.range_len(kx);
    for (int ky = -h + 1; ky < h; ++ky) {
      const int loy = modes.range_lo(ky), leny = modes.range_len(ky);
      const double* b = table + modes.offset(kx, ky);
      double re = 0.0, im = 0.0;
      for (int lx = lox; lx < lox + lenx; ++lx) {
        const std::size_t rl = static_cast<std::size_t>(lx + h - 1) * w + (loy + h - 1);
        const std::size_t rm = static_cast<std::size_t>(kx - lx + h - 1) * w + (ky - loy + h - 1);
        const double* ar = &c.re[rl];
        const double* ai = &c.im[rl];
        const double* br = &c.re[rm];
        const double* bi = &c.im[rm];
        for (int j = 0; j < leny; ++j) {
          const double wt = b[j];
          re += wt * (ar[j] * br[-j] - ai[j] * bi[-j]);
          im += wt * (ar[j] * bi[-j] + ai[j] * br[-j]);
        }
        b += leny;
      }
      out[grid.index(kx < 0 ? kx + n : kx, ky < 0 ? ky + n : ky)] = Complex(re, im);
    }
  }
  return inverse_spectral_transform(grid, out);
}

std::vector<double> loss_values(const BoltzmannModes& modes, std::span<const Complex> fhat) {
  std::vector<Complex> out(fhat.begin(), fhat.end());
  const auto& loss = modes.loss();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= loss[i];
  return inverse_spectral_transform(modes.grid(), out);
}

}  // namespace

Density boltzmann_gain(const BoltzmannModes& modes, const Density& f) {
  require_same_grid(modes.grid(), f.grid);
  auto fhat = spectral_transform(f.grid, f.values);
  return Density(f.grid, gain_values(modes, fhat));
}

Density boltzmann_loss_factor(const BoltzmannModes& modes, const Density& f) {
  require_same_grid(modes.grid(), f.grid);
  auto fhat = spectral_transform(f.grid, f.values);
  return Density(f.grid, loss_values(modes, fhat));
}

Density boltzmann_apply(const BoltzmannModes& modes, const Density& f) {
  require_same_grid(modes.grid(), f.grid);
  auto fhat = spectral_transform(f.grid, f.values);
  auto q = gain_values(modes, fhat);
  auto loss = loss_values(modes, fhat);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] -= loss[i] * f.values[i];
  return Density(f.grid, std::move(q));
}

Density CollisionOperator::gain(const Density&) const {
  throw Error(ErrorKind::operator_without_split, "operator has no gain/loss split");
}

Density CollisionOperator::loss_factor(const Density&) const {
  throw Error(ErrorKind::operator_without_split, "operator has no gain/loss split");
}

BoltzmannOperator::BoltzmannOperator(std::shared_ptr<const BoltzmannModes> modes)
    : modes_(std::move(modes)) {
  if (!modes_) throw Error(ErrorKind::invalid_argument, "null Boltzmann modes");
}

Density BoltzmannOperator::apply(const Density& f) const { return boltzmann_apply(*modes_, f); }
Density BoltzmannOperator::gain(const Density& f) const { return boltzmann_gain(*modes_, f); }
Density BoltzmannOperator::loss_factor(const Density& f) const {
  return boltzmann_loss_factor(*modes_, f);
}

}  // namespace savkin
