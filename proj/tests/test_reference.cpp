#include <doctest.h>

#include <cmath>
#include <numbers>

#include "savkin/reference.hpp"
#include "support.hpp"

using namespace savkin;

namespace {
const double kPi = std::numbers::pi;
const double kBoltzmannL = (3.0 * std::sqrt(2.0) + 1.0) * 3.3 / 2.0;
}  // namespace

TEST_CASE("Maxwellian peak value and positivity") {
  const auto g = make_grid(16, 4.0);
  const auto f = maxwellian(g, 2.0, {g.node(9), g.node(5)}, 0.5);
  CHECK(f(9, 5) == doctest::Approx(2.0 / (2.0 * kPi * 0.5)).epsilon(1e-14));
  for (double x : f.values) CHECK(x > 0.0);
  CHECK_THROWS_AS(maxwellian(g, 0.0, {0, 0}, 1.0), Error);
  CHECK_THROWS_AS(maxwellian(g, 1.0, {0, 0}, -1.0), Error);
}

TEST_CASE("Maxwellian entropy closed form against quadrature") {
  const auto g = make_grid(64, 10.0);
  for (auto [rho, temp] : {std::pair{1.0, 1.0}, {2.0, 0.7}, {0.5, 1.5}}) {
    const auto f = maxwellian(g, rho, {0.3, -0.2}, temp);
    CHECK(std::abs(entropy(f, 0.0) - maxwellian_entropy(rho, temp)) < 1e-9);
  }
}

TEST_CASE("BKW similarity parameter and centre value") {
  const double k = bkw_k(0.5);
  CHECK(k == doctest::Approx(0.530293).epsilon(1e-6));
  CHECK(k == doctest::Approx(1.0 - 0.5 * std::exp(-0.0625)).epsilon(1e-15));
  CHECK(bkw_value(0.5, 0.0) == doctest::Approx(0.034291).epsilon(1e-5));
  CHECK(bkw_value(0.5, 0.0) == doctest::Approx((2 * k - 1) / (2 * kPi * k * k)).epsilon(1e-14));
}

TEST_CASE("BKW matches the independent formula and tends to the Maxwellian") {
  const auto g = make_grid(32, kBoltzmannL);
  const auto f = bkw(g, 0.5);
  CHECK(oracle::max_abs_diff(f.values, oracle::bkw_field(g, 0.5).values) < 1e-15);
  for (double x : f.values) CHECK(x > 0.0);
  const auto late = bkw(g, 400.0);
  const auto m = maxwellian(g, 1.0, {0, 0}, 1.0);
  CHECK(max_norm_error(late, m) < 1e-15);
}

TEST_CASE("BKW has unit mass and temperature at any time") {
  const auto g = make_grid(64, kBoltzmannL);
  for (double t : {0.5, 1.0, 3.0, 10.0}) {
    const auto m = moments(bkw(g, t));
    CHECK(std::abs(m.rho - 1.0) < 1e-10);
    CHECK(std::abs(m.temperature - 1.0) < 1e-10);
  }
}

TEST_CASE("BKW rejects times with K <= 1/2") {
  const auto g = make_grid(8, 4.0);
  try {
    bkw(g, 0.0);
    FAIL("expected NegativeRegion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::negative_region);
  }
}

TEST_CASE("bi-Maxwellian with the default parameters") {
  const auto g = make_grid(64, 2.0 * 7.5);
  const BiMaxwellianParams p;
  const auto f = bi_maxwellian(g, p);
  const auto m = moments(f);
  CHECK(std::abs(m.rho - 1.0) < 1e-8);
  const auto u = mixture_velocity(p);
  CHECK(u[0] == doctest::Approx(1.0));
  CHECK(u[1] == doctest::Approx(-0.5));
  CHECK(std::abs(m.u[0] - 1.0) < 1e-8);
  CHECK(std::abs(m.u[1] + 0.5) < 1e-8);
  // |V_i - u|^2 = 10.25 for both components.
  CHECK(mixture_temperature(p) == doctest::Approx(1.0 + 10.25 / 2.0).epsilon(1e-14));
  CHECK(std::abs(m.temperature - mixture_temperature(p)) < 1e-6);
  for (double x : f.values) CHECK(x > 0.0);
}

TEST_CASE("bi-Maxwellian with equal components is a single Maxwellian") {
  const auto g = make_grid(32, 6.0);
  BiMaxwellianParams p;
  p.rho1 = 0.3;
  p.rho2 = 0.9;
  p.t1 = p.t2 = 0.8;
  p.v1 = p.v2 = {0.5, -0.25};
  CHECK(max_norm_error(bi_maxwellian(g, p), maxwellian(g, 1.2, {0.5, -0.25}, 0.8)) < 1e-15);
}

TEST_CASE("max-norm error") {
  const auto g = make_grid(32, kBoltzmannL);
  const auto f = bkw(g, 0.5);
  CHECK(max_norm_error(f, f) == 0.0);
  auto shifted = f;
  for (double& x : shifted.values) x += 0.25;
  CHECK(max_norm_error(shifted, f) == doctest::Approx(0.25).epsilon(1e-14));
  const double e = max_norm_error(bkw(g, 0.6), f);
  CHECK(e > 0.0);
  const auto a = oracle::bkw_field(g, 0.6);
  const auto b = oracle::bkw_field(g, 0.5);
  CHECK(std::abs(e - oracle::max_abs_diff(a.values, b.values)) < 1e-12);
  CHECK_THROWS_AS(max_norm_error(f, Density(make_grid(32, 1.0))), Error);
}
