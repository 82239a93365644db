#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "bolab/lab.hpp"

using namespace bolab;
using C = std::complex<double>;
using Points = std::vector<std::pair<double, double>>;

namespace {

SimConfig config(double eps, Index n, double t_final, double dt) {
  SimConfig cfg;
  cfg.epsilon = eps;
  cfg.n_points = n;
  cfg.t_final = t_final;
  cfg.dt = dt;
  return cfg;
}

SweepConfig small_sweep() {
  SweepConfig cfg;
  cfg.base = config(0.0, 64, 0.5, 2e-3);
  cfg.epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  return cfg;
}

}  // namespace

TEST_CASE("fit_rate recovers power laws") {
  const Points exact{{0.1, 0.3}, {0.01, 0.03}, {0.001, 0.003}};
  const auto fit = fit_rate(exact);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);

  Points third;
  for (double e : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) third.emplace_back(e, 2 * std::cbrt(e));
  CHECK(fit_rate(third).slope == doctest::Approx(1.0 / 3).epsilon(1e-12));

  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 0.05);
  Points noisy;
  for (int i = 0; i < 12; ++i) {
    const double e = std::pow(10.0, -1.0 - 3.0 * i / 11.0);
    noisy.emplace_back(e, std::sqrt(e) * std::exp(noise(rng)));
  }
  const auto nf = fit_rate(noisy);
  CHECK(nf.slope >= 0.45);
  CHECK(nf.slope <= 0.55);
  CHECK(nf.residual > 0);
}

TEST_CASE("fit_rate rejects unusable data") {
  CHECK_THROWS_AS(fit_rate(Points{{0.1, 1.0}, {0.01, 0.1}}), std::invalid_argument);
  try {
    fit_rate(Points{{0.1, 1.0}, {0.01, 0.0}, {0.001, 0.01}});
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("0.01") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_rate(Points{{0.1, 1.0}, {0.01, -2.0}, {0.001, 0.01}}), std::invalid_argument);
}

TEST_CASE("reference solutions") {
  const auto ref = reference_solution(config(0.3, 128, 1.0, 1e-3));
  CHECK(ref.config.epsilon == 0.0);
  const auto drift = conservation_drift(ref);
  CHECK(drift.l2 <= kReferenceL2Drift);
  CHECK(drift.energy <= kReferenceEnergyDrift);

  auto zero = config(0.0, 32, 0.5, 1e-2);
  zero.initial_condition.data = std::vector<ModeCoefficient>{};
  const auto z = reference_solution(zero);
  CHECK(conservation_drift(z).l2 == 0.0);
  CHECK(conservation_drift(z).energy == 0.0);

  auto coarse = config(0.0, 64, 1.0, 0.05);
  coarse.initial_condition.data = Preset::two_mode;
  CHECK_THROWS_AS(reference_solution(coarse), ReferenceRejected);
}

TEST_CASE("monotonicity report") {
  const auto viscous = integrate(config(0.01, 64, 0.5, 1e-3));
  const auto rep = monotonicity_report(viscous);
  CHECK(rep.pass);
  CHECK(rep.max_uptick <= 0.0);
  CHECK(rep.tolerance == doctest::Approx(1e-10 * viscous.diagnostics.front().l2_sq));

  const auto inviscid = integrate(config(0.0, 64, 0.5, 1e-3));
  const auto ri = monotonicity_report(inviscid);
  CHECK(ri.pass);
  CHECK(ri.tolerance == doctest::Approx(1e-8 * inviscid.diagnostics.front().l2_sq));

  // Fault injection: anti-diffusion must be caught.
  auto bad = config(-0.01, 32, 0.5, 1e-3);
  const auto rb = monotonicity_report(detail::integrate_unchecked(bad, {}));
  CHECK_FALSE(rb.pass);
  CHECK(rb.max_uptick > rb.tolerance);
}

TEST_CASE("small sweep against the inviscid reference") {
  const auto cfg = small_sweep();
  const auto res = run_sweep(cfg, 1);
  REQUIRE(res.records.size() == 5);
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    CHECK(r.epsilon == cfg.epsilons[i]);
    CHECK(r.sup_l2_err <= r.sup_hhalf_err);
    CHECK(r.monotonicity.pass);
    CHECK(std::abs(r.l2_deficit - r.dissipation) <= 1e-5 * r.l2_deficit);
    if (i > 0) {
      CHECK(r.sup_hhalf_err < res.records[i - 1].sup_hhalf_err);
      CHECK(r.energy_drift < res.records[i - 1].energy_drift);
    }
  }
  REQUIRE(res.hhalf_rate);
  REQUIRE(res.energy_rate);
  MESSAGE("hhalf slope " << res.hhalf_rate->slope << ", energy slope " << res.energy_rate->slope);
  CHECK(res.hhalf_rate->slope > 0);
  CHECK(res.energy_rate->slope > 0);
  CHECK(res.warnings.empty());
}

TEST_CASE("sweep results do not depend on the worker count") {
  const auto cfg = small_sweep();
  const auto a = run_sweep(cfg, 1), b = run_sweep(cfg, 4);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].sup_hhalf_err == b.records[i].sup_hhalf_err);
    CHECK(a.records[i].sup_l2_err == b.records[i].sup_l2_err);
    CHECK(a.records[i].energy_drift == b.records[i].energy_drift);
    CHECK(a.records[i].l2_deficit == b.records[i].l2_deficit);
  }
  CHECK(a.hhalf_rate->slope == b.hhalf_rate->slope);
}

TEST_CASE("refined and same-resolution references agree") {
  auto cfg = small_sweep();
  cfg.base.n_points = 128;
  cfg.epsilons = {1e-2, 1e-3};
  const auto same = run_sweep(cfg, 2);
  cfg.reference = ReferenceMode::refined;
  const auto refined = run_sweep(cfg, 2);
  for (std::size_t i = 0; i < same.records.size(); ++i)
    CHECK(std::abs(same.records[i].sup_hhalf_err - refined.records[i].sup_hhalf_err) <= 1e-7);
}

TEST_CASE("short ladders report no rate") {
  auto cfg = small_sweep();
  cfg.epsilons = {1e-2};
  const auto res = run_sweep(cfg, 1);
  CHECK_FALSE(res.hhalf_rate);
  CHECK_FALSE(res.energy_rate);
  CHECK(res.warnings.size() == 2);
}

TEST_CASE("sweep configuration is validated") {
  auto field_of = [](const SweepConfig& cfg) -> std::string {
    try {
      validate(cfg);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "";
  };
  auto cfg = small_sweep();
  CHECK(field_of(cfg) == "");
  cfg.epsilons = {};
  CHECK(field_of(cfg) == "epsilons");
  cfg.epsilons = {1e-2, 1e-1};
  CHECK(field_of(cfg) == "epsilons");
  cfg.epsilons = {1e-1, 0.0};
  CHECK(field_of(cfg) == "epsilons");
  cfg = small_sweep();
  cfg.error_times = {0.0, 2.0};
  CHECK(field_of(cfg) == "error_times");
  cfg = small_sweep();
  cfg.base.n_points = 31;
  CHECK(field_of(cfg) == "n_points");
}

TEST_CASE("manufactured problem") {
  CHECK(mms_sup_error(0.0, 64, 1.0, 1e-3) <= 1e-8);
  CHECK(mms_sup_error(0.1, 64, 1.0, 1e-3) <= 1e-8);

  const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
  const auto study = mms_order_study(0.1, 64, 1.0, dts);
  MESSAGE("temporal order " << study.fit.slope);
  CHECK(study.fit.slope >= 3.5);
  CHECK(study.fit.slope <= 4.5);
  CHECK(study.errors.size() == dts.size());
}

TEST_CASE("refined reference differs from the same-resolution one by less than 1e-7") {
  std::map<Index, SpectralField<double>> coarse, fine;
  reference_solution(config(0.0, 256, 1.0, 1e-3), [&](Index step, double, const SpectralField<double>& u) {
    if (step % 10 == 0) coarse.emplace(step, u);
  });
  reference_solution(config(0.0, 512, 1.0, 5e-4), [&](Index step, double, const SpectralField<double>& u) {
    if (step % 20 == 0) fine.emplace(step / 2, u);
  });
  REQUIRE(coarse.size() == 101);
  double worst = 0;
  for (const auto& [step, u] : coarse)
    worst = std::max(worst, std::sqrt(sobolev_norm_sq(u - resample(fine.at(step), 256), 0.5)));
  MESSAGE("sup H1/2 distance " << worst);
  CHECK(worst <= 1e-7);
}
