#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bolab/norms.hpp"
#include "oracles.hpp"

using namespace bolab;
using std::numbers::pi;

namespace {

const Grid<double> kGrid(64, 2 * pi);

SpectralField<double> of(double (*fn)(double), const Grid<double>& g = kGrid) {
  return forward(sample(g, fn));
}

}  // namespace

TEST_CASE("norms of cos x") {
  const auto u = of([](double x) { return std::cos(x); });
  CHECK(l2_norm_sq(u) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(sobolev_norm_sq(u, 0.5) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-14));
  CHECK(homogeneous_norm_sq(u, 0.5) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(homogeneous_norm_sq(u, 1.5) == doctest::Approx(pi).epsilon(1e-14));
}

TEST_CASE("sobolev norm properties") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = oracle::random_field(kGrid, 25, rng);
    CHECK(sobolev_norm_sq(u, 0.0) == l2_norm_sq(u));
    double prev = 0;
    for (double s = 0; s <= 2.0; s += 0.125) {
      const double v = sobolev_norm_sq(u, s);
      CHECK(v >= prev);
      prev = v;
    }
  }
  const auto u = oracle::random_field(kGrid, 5, rng);
  CHECK_THROWS_AS(sobolev_norm_sq(u, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(sobolev_norm_sq(u, 2.5), std::invalid_argument);
}

TEST_CASE("Fourier-sum norm agrees with refined quadrature") {
  std::mt19937_64 rng(2);
  const Grid<double> g(32, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = oracle::random_field(g, 15, rng);
    const double quad = oracle::trapezoid(g.length(), 4 * g.size(), [&](double x) {
      const double v = oracle::synthesize(u, x);
      return v * v;
    });
    CHECK(std::abs(l2_norm_sq(u) - quad) <= 1e-12 * quad);
  }
}

TEST_CASE("energy functional") {
  CHECK(energy(SpectralField<double>(kGrid)) == 0.0);
  CHECK(energy(of([](double x) { return std::cos(x); })) == doctest::Approx(pi / 2).epsilon(1e-14));

  // int (1 + cos x)^3 = 2 pi + 3 pi; checked against the 4x quadrature oracle too.
  const auto u = of([](double x) { return 1 + std::cos(x); });
  const double cubic = oracle::trapezoid(2 * pi, 4 * 64, [](double x) { return std::pow(1 + std::cos(x), 3); });
  CHECK(cubic == doctest::Approx(5 * pi).epsilon(1e-14));
  CHECK(energy(u) == doctest::Approx(pi / 2 + 5 * pi / 6).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = oracle::random_field(kGrid, 31, rng);
    const double cubic_oracle = oracle::trapezoid(2 * pi, 4 * 64, [&](double x) {
      return std::pow(oracle::synthesize(v, x), 3);
    });
    const double expected = homogeneous_norm_sq(v, 0.5) / 2 + cubic_oracle / 6;
    CHECK(std::abs(energy(v) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("u^2 u_xx integral against quadrature oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto v = oracle::random_field(kGrid, 31, rng);
    const auto vxx = dx(dx(v));
    const double expected = oracle::trapezoid(2 * pi, 4 * 64, [&](double x) {
      const double a = oracle::synthesize(v, x);
      return a * a * oracle::synthesize(vxx, x);
    });
    CHECK(std::abs(u2_uxx_integral(v) - expected) <= 1e-11 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("diagnostics sample invariants") {
  std::mt19937_64 rng(5);
  const auto u = oracle::random_field(kGrid, 20, rng);
  const auto d = diagnose(u, 0.25);
  CHECK(d.t == 0.25);
  CHECK(d.hhalf_sq >= d.l2_sq);
  CHECK(d.l2_sq >= 0);
  CHECK(d.dhalf_sq >= 0);
  CHECK(d.d32_sq >= 0);
  CHECK(d.energy == doctest::Approx(d.dhalf_sq / 2 + d.cubic / 6));
  CHECK(d.linf == doctest::Approx(inverse(u).samples.cwiseAbs().maxCoeff()));
}

TEST_CASE("interpolation inequality check") {
  const auto c = gn_inequality_check(of([](double x) { return std::cos(x); }));
  CHECK(c.lhs == doctest::Approx(1.0));
  CHECK(c.rhs == doctest::Approx(2 * pi));
  CHECK(c.ratio <= 1.0);

  const auto flat = gn_inequality_check(of([](double) { return 3.0; }));
  CHECK(flat.ratio == doctest::Approx(0.5));

  CHECK_THROWS_AS(gn_inequality_check(SpectralField<double>(kGrid)), std::invalid_argument);

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<Index> band(1, 31);
  std::uniform_real_distribution<double> len(0.5, 50.0);
  int violations = 0;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Grid<double> g(64, len(rng));
    const auto check = gn_inequality_check(oracle::random_field(g, band(rng), rng));
    worst = std::max(worst, check.ratio);
    if (check.ratio > 1.0) ++violations;
  }
  CHECK(violations == 0);
  MESSAGE("worst interpolation ratio over 1000 random fields: " << worst);
}
