#include <doctest.h>

#include <cmath>
#include <random>

#include "savkin/projection.hpp"
#include "support.hpp"

using namespace savkin;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("projection leaves admissible values alone") {
  const std::vector<double> p{0.5, 1.0, 1e-16, 3.0};
  const auto r = kkt_project(p, 0.1, 1e-16);
  CHECK(r.f == p);
  for (double l : r.lambda) CHECK(l == 0.0);
  CHECK(r.clipped == 0);
}

TEST_CASE("projection clips negative values with the cut-off multiplier") {
  const auto r = kkt_project(std::vector<double>{-0.3, 0.2}, 0.1, 0.0);
  CHECK(r.f[0] == 0.0);
  CHECK(r.lambda[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.f[1] == 0.2);
  CHECK(r.lambda[1] == 0.0);
  CHECK(r.clipped == 1);
}

TEST_CASE("projection lifts values below the floor") {
  const double eps = 1e-16, dt = 0.05;
  const auto r = kkt_project(std::vector<double>{0.5 * eps}, dt, eps);
  CHECK(r.f[0] == eps);
  CHECK(r.lambda[0] == doctest::Approx(0.5 * eps / dt).epsilon(1e-14));
}

TEST_CASE("projection rejects invalid step sizes and floors") {
  const std::vector<double> p{1.0};
  CHECK(kind_of([&] { kkt_project(p, 0.0, 0.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { kkt_project(p, 1.0, -1.0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("multiplier is zero when the prediction already has the target mass") {
  const auto g = make_grid(8, 1.0);
  std::mt19937_64 rng(1);
  const auto f = oracle::random_positive_field(g, rng, 0.1, 1.0);
  const auto m = solve_mass_multiplier(f, integrate(f), 0.01, 1e-16);
  CHECK(m.xi == 0.0);
}

TEST_CASE("two-cell example") {
  const std::vector<double> p{1.2, -0.2};
  const auto m = solve_mass_multiplier(p, 1.0, 1.0, 1.0, 0.0);
  // 1.2 is not a double, so the exact root of the stored data is 1 - fl(1.2),
  // which the subtraction below forms without rounding.
  CHECK(m.xi == 1.0 - p[0]);
  CHECK(m.xi == doctest::Approx(-0.2).epsilon(1e-15));
  std::vector<double> shifted{p[0] + m.xi, p[1] + m.xi};
  const auto r = kkt_project(shifted, 1.0, 0.0);
  CHECK(r.f[0] == 1.0);
  CHECK(r.f[1] == 0.0);
  CHECK(r.lambda[0] == 0.0);
  CHECK(r.lambda[1] == -(p[1] + m.xi));
  CHECK(r.lambda[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(r.f[0] + r.f[1] == 1.0);
  CHECK(oracle::bisect_multiplier(p, 1.0, 1.0, 1.0, 0.0) == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("random instances: secant against bisection, complementarity and mass") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> size(2, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int worst_iterations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    const double dt = std::pow(10.0, -3.0 + 3.0 * u(rng));
    const double eps = trial % 3 == 0 ? 0.0 : 1e-16;
    const double dv = 0.1 + u(rng);
    std::vector<double> p(n);
    double positive = 0.0;
    while (positive == 0.0) {
      for (double& x : p) x = -0.5 + 1.5 * u(rng);
      for (double x : p) positive += std::max(x, 0.0);
    }
    // Targets between a fifth of and a little above the clipped mass.
    const double target = dv * positive * (0.2 + 1.0 * u(rng)) + dv * n * eps;

    const auto m = solve_mass_multiplier(p, dv, target, dt, eps);
    worst_iterations = std::max(worst_iterations, m.iterations);
    const double oracle_xi = oracle::bisect_multiplier(p, dv, target, dt, eps);
    CHECK(std::abs(m.xi - oracle_xi) <= 1e-10 * std::max(1.0, std::abs(oracle_xi)));

    std::vector<double> shifted(p);
    for (double& x : shifted) x += dt * m.xi;
    const auto r = kkt_project(shifted, dt, eps);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(r.f[i] >= eps);
      CHECK(r.lambda[i] >= 0.0);
      CHECK(r.lambda[i] * (r.f[i] - eps) == 0.0);
      mass += r.f[i];
    }
    CHECK(std::abs(dv * mass - target) <= 1e-12 * target);
  }
  CHECK(worst_iterations <= 100);
}

TEST_CASE("multiplier is nonpositive when the prediction conserves mass") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.2, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(30);
    for (double& x : p) x = u(rng);
    double mass = 0.0;
    for (double x : p) mass += x;
    if (mass <= 0.0) continue;
    const auto m = solve_mass_multiplier(p, 1.0, mass, 0.1, 1e-16);
    CHECK(m.xi <= 1e-12);
  }
}

TEST_CASE("multiplier solve rejects bad input and unattainable targets") {
  const std::vector<double> p{0.5, 0.5};
  CHECK(kind_of([&] { solve_mass_multiplier(p, 1.0, -1.0, 1.0, 0.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { solve_mass_multiplier(p, 1.0, 1.0, 0.0, 0.0); }) == ErrorKind::invalid_argument);
  const std::vector<double> nan{0.5, std::nan("")};
  CHECK(kind_of([&] { solve_mass_multiplier(nan, 1.0, 1.0, 1.0, 0.0); }) == ErrorKind::invalid_argument);
  // The floor alone carries mass 0.2, above the target.
  MultiplierOptions opts;
  opts.max_iterations = 30;
  CHECK(kind_of([&] { solve_mass_multiplier(p, 1.0, 0.1, 1.0, 0.1, opts); }) == ErrorKind::no_convergence);
}

TEST_CASE("extrapolations") {
  const auto g = make_grid(8, 1.0);
  const auto two = oracle::constant_field(g, 2.0);
  const auto one = oracle::constant_field(g, 1.0);
  for (double x : extrapolate_ab(two, one).values) CHECK(x == 3.0);
  for (double x : extrapolate_ab(two, two).values) CHECK(x == 2.0);
  for (double x : extrapolate_positive(two, one).values) CHECK(x == 3.0);
  for (double x : extrapolate_positive(one, two).values) CHECK(x == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double x : extrapolate_positive(two, two).values) CHECK(x == 2.0);

  // Linear-in-time data is extrapolated exactly.
  std::mt19937_64 rng(2);
  const auto a = oracle::random_positive_field(g, rng, 0.0, 1.0);
  const auto b = oracle::random_positive_field(g, rng, -1.0, 1.0);
  const double dt = 0.1, t = 0.7;
  Density prev(g), cur(g);
  for (std::size_t i = 0; i < a.size(); ++i) {
    prev.values[i] = a.values[i] + b.values[i] * (t - dt);
    cur.values[i] = a.values[i] + b.values[i] * t;
  }
  const auto next = extrapolate_ab(cur, prev);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(next.values[i] == doctest::Approx(a.values[i] + b.values[i] * (t + dt)).epsilon(1e-14));
  }

  std::mt19937_64 rng2(3);
  const auto p = oracle::random_positive_field(g, rng2, 1e-8, 1.0);
  const auto q = oracle::random_positive_field(g, rng2, 1e-8, 1.0);
  for (double x : extrapolate_positive(p, q).values) CHECK(x > 0.0);

  auto bad = one;
  bad.values[5] = 0.0;
  CHECK(kind_of([&] { extrapolate_positive(bad, one); }) == ErrorKind::non_positive_density);
  CHECK(kind_of([&] { extrapolate_positive(one, bad); }) == ErrorKind::non_positive_density);
  CHECK(kind_of([&] { extrapolate_ab(one, Density(make_grid(8, 2.0))); }) == ErrorKind::grid_mismatch);
}
