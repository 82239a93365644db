// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Stated runtime budgets are part of each verdict.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "bolab/cli.hpp"
#include "bolab/identities.hpp"
#include "bolab/lab.hpp"
#include "oracles.hpp"

using namespace bolab;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = budget_s <= 0 || elapsed < budget_s;
  const bool pass = v.pass && in_budget;
  if (!pass) ++failures;
  std::printf("%s criterion %2d  %-26s %s  [%.2f s%s]\n", pass ? "PASS" : "FAIL", id, name,
              v.detail.c_str(), elapsed, in_budget ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

SimConfig two_mode(double eps, Index n, double t_final, double dt) {
  SimConfig cfg;
  cfg.epsilon = eps;
  cfg.n_points = n;
  cfg.t_final = t_final;
  cfg.dt = dt;
  cfg.initial_condition.data = Preset::two_mode;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main() {
  criterion(1, "operator exactness", 1.0, [] {
    const Grid<double> g(64, 2 * pi);
    double worst = 0;
    auto diff = [&](const RealField<double>& a, auto&& fn) {
      for (Index m = 0; m < g.size(); ++m) worst = std::max(worst, std::abs(a.samples[m] - fn(g.point(m))));
    };
    diff(inverse(hilbert(forward(sample(g, [](double x) { return std::cos(x); })))),
         [](double x) { return std::sin(x); });
    diff(inverse(frac_deriv(forward(sample(g, [](double x) { return std::cos(2 * x); })), 0.5)),
         [](double x) { return std::sqrt(2.0) * std::cos(2 * x); });
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
      const auto u = oracle::random_field(g, 31, rng, true);
      worst = std::max(worst, (hilbert(hilbert(u)).coeffs + u.coeffs).cwiseAbs().maxCoeff());
    }
    return Verdict{worst <= 1e-13, "max error " + fmt("%.2e", worst) + " (tol 1e-13)"};
  });

  criterion(2, "manufactured solution", 30.0, [] {
    const double e0 = mms_sup_error(0.0, 64, 1.0, 1e-3);
    const double e1 = mms_sup_error(0.1, 64, 1.0, 1e-3);
    const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
    const auto study = mms_order_study(0.1, 64, 1.0, dts);
    const bool ok = e0 <= 1e-8 && e1 <= 1e-8 && study.fit.slope >= 3.5 && study.fit.slope <= 4.5;
    return Verdict{ok, "sup error eps=0 " + fmt("%.2e", e0) + ", eps=0.1 " + fmt("%.2e", e1) +
                           " (tol 1e-8); order at eps=0.1 " + fmt("%.3f", study.fit.slope) +
                           " (range [3.5, 4.5]; eps=0 is reproduced exactly)"};
  });

  criterion(3, "BO conservation", 30.0, [] {
    const auto drift = conservation_drift(integrate(two_mode(0.0, 256, 5.0, 1e-3)));
    return Verdict{drift.l2 <= 1e-8 && drift.energy <= 1e-6,
                   "L2 drift " + fmt("%.2e", drift.l2) + " (tol 1e-8), energy drift " +
                       fmt("%.2e", drift.energy) + " (tol 1e-6)"};
  });

  double l2_coarse = 0, l2_fine = 0, e_coarse = 0, e_fine = 0;
  criterion(4, "L2 dissipation identity", 60.0, [&] {
    const auto a = integrate(two_mode(0.01, 256, 1.0, 1e-3));
    const auto b = integrate(two_mode(0.01, 256, 1.0, 5e-4));
    l2_coarse = l2_identity_residual(a).max_abs_relative();
    l2_fine = l2_identity_residual(b).max_abs_relative();
    e_coarse = energy_identity_residual(a).max_abs_relative();
    e_fine = energy_identity_residual(b).max_abs_relative();
    return Verdict{l2_coarse <= 1e-5 && l2_coarse / l2_fine >= 3.0,
                   "residual " + fmt("%.2e", l2_coarse) + " (tol 1e-5), halving dt gains " +
                       fmt("%.2f", l2_coarse / l2_fine) + "x (need >= 3)"};
  });

  criterion(5, "energy identity", 60.0, [&] {
    return Verdict{e_coarse > 0 && e_coarse <= 1e-4 && e_fine < e_coarse,
                   "residual " + fmt("%.2e", e_coarse) + " (tol 1e-4), " + fmt("%.2e", e_fine) +
                       " at dt/2"};
  });

  SweepConfig sweep;
  sweep.base = two_mode(0.0, 512, 1.0, 1e-3);
  SweepResult result;
  double sweep_seconds = 0;
  {
    const auto start = std::chrono::steady_clock::now();
    try {
      result = run_sweep(sweep, workers());
    } catch (const std::exception& e) {
      std::printf("sweep aborted: %s\n", e.what());
    }
    sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const bool have_sweep = result.records.size() == sweep.epsilons.size();

  criterion(6, "L2 monotonicity", 0, [&] {
    if (!have_sweep) return Verdict{false, "sweep did not complete"};
    double worst = -INFINITY;
    bool ok = true;
    for (const auto& r : result.records) {
      ok = ok && r.monotonicity.pass;
      worst = std::max(worst, r.monotonicity.max_uptick / (r.monotonicity.tolerance / 1e-10));
    }
    return Verdict{ok, "largest uptick / |u0|^2 " + fmt("%.2e", worst) + " (tol 1e-10)"};
  });

  criterion(7, "inviscid limit", 0, [&] {
    if (!have_sweep) return Verdict{false, "sweep did not complete"};
    bool strict = true;
    for (std::size_t i = 1; i < result.records.size(); ++i)
      strict = strict && result.records[i].sup_hhalf_err < result.records[i - 1].sup_hhalf_err;
    const double largest = result.records.front().sup_hhalf_err;
    const double smallest = result.records.back().sup_hhalf_err;
    const bool ok = strict && sweep_seconds < 300 && smallest <= largest / 4;
    std::string detail = "sup H1/2 error " + fmt("%.3e", largest) + " -> " + fmt("%.3e", smallest) +
                         (strict ? ", strictly decreasing" : ", NOT strictly decreasing") +
                         ", sweep " + fmt("%.1f", sweep_seconds) + " s (budget 300 s)";
    if (result.hhalf_rate) detail += ", empirical rate " + fmt("%.3f", result.hhalf_rate->slope);
    return Verdict{ok, detail};
  });

  criterion(8, "energy drift rate", 0, [&] {
    if (!have_sweep || !result.energy_rate) return Verdict{false, "no energy rate fitted"};
    const auto& f = *result.energy_rate;
    return Verdict{f.slope >= 0.33 && f.residual <= 0.2,
                   "slope " + fmt("%.3f", f.slope) + " (need >= 0.33), log residual " +
                       fmt("%.3f", f.residual) + " (tol 0.2)"};
  });

  criterion(9, "dissipation budget", 0, [&] {
    if (!have_sweep) return Verdict{false, "sweep did not complete"};
    double worst = 0;
    for (const auto& r : result.records)
      worst = std::max(worst, std::abs(r.l2_deficit - r.dissipation) / r.l2_deficit);
    return Verdict{worst <= 1e-5, "max relative mismatch " + fmt("%.2e", worst) + " (tol 1e-5)"};
  });

  criterion(10, "determinism", 0, [] {
    const fs::path dir = fs::temp_directory_path() / "bolab_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "sim.json")
        << R"({"epsilon": 0.01, "n_points": 128, "t_final": 0.5, "dt": 1e-3, "initial_condition": "two-mode"})";
    std::ofstream(dir / "sweep.json")
        << R"({"n_points": 128, "t_final": 0.5, "dt": 1e-3, "initial_condition": "two-mode"})";
    std::ostringstream sink;
    auto ctx_for = [&](const char* config, const char* out) {
      cli::Context ctx;
      ctx.config = dir / config;
      ctx.out_dir = dir / out;
      ctx.workers = workers();
      ctx.out = &sink;
      ctx.err = &sink;
      return ctx;
    };
    int codes = 0;
    for (const char* run : {"a", "b"}) {
      codes += cli::cmd_simulate(ctx_for("sim.json", run));
      codes += cli::cmd_sweep(ctx_for("sweep.json", run));
      codes += cli::cmd_plot(dir / run / "sweep.csv", dir / run / "sweep.svg", ctx_for("sweep.json", run));
    }
    bool same = codes == 0;
    for (const char* file : {"diagnostics.csv", "snapshots.txt", "sweep.csv", "sweep.svg"})
      same = same && slurp(dir / "a" / file) == slurp(dir / "b" / file) && !slurp(dir / "a" / file).empty();
    return Verdict{same, same ? "diagnostics, snapshots, sweep CSV and SVG byte-identical"
                              : "outputs differ or a run failed"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
