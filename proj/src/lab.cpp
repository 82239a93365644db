#include "bolab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/QR>

#include "bolab/identities.hpp"

namespace bolab {

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  const auto n = static_cast<Index>(points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Index i = 0; i < n; ++i) {
    const auto [x, y] = points[static_cast<std::size_t>(i)];
    if (!(y > 0)) {
      std::ostringstream msg;
      msg << "fit_rate: non-positive value " << y << " at x = " << x;
      throw std::invalid_argument(msg.str());
    }
    if (!(x > 0)) throw std::invalid_argument("fit_rate: abscissae must be positive");
    design(i, 0) = std::log(x);
    design(i, 1) = 1.0;
    rhs[i] = std::log(y);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd res = design * coef - rhs;
  return {coef[0], coef[1], std::sqrt(res.squaredNorm() / static_cast<double>(n))};
}

ConservationDrift conservation_drift(const Trajectory& traj) {
  ConservationDrift drift;
  if (traj.diagnostics.empty()) return drift;
  const auto& first = traj.diagnostics.front();
  const double l2_0 = std::sqrt(first.l2_sq);
  const double e0 = first.energy;
  for (const auto& d : traj.diagnostics) {
    const double dl = std::abs(std::sqrt(d.l2_sq) - l2_0);
    const double de = std::abs(d.energy - e0);
    drift.l2 = std::max(drift.l2, l2_0 > 0 ? dl / l2_0 : dl);
    drift.energy = std::max(drift.energy, e0 != 0 ? de / std::abs(e0) : de);
  }
  return drift;
}

Trajectory reference_solution(SimConfig cfg, const StepObserver& observer) {
  cfg.epsilon = 0;
  Trajectory traj = integrate(cfg, observer);
  const ConservationDrift drift = conservation_drift(traj);
  if (drift.l2 > kReferenceL2Drift || drift.energy > kReferenceEnergyDrift) {
    std::ostringstream msg;
    msg << "reference rejected: L2 drift " << drift.l2 << " (tol " << kReferenceL2Drift
        << "), energy drift " << drift.energy << " (tol " << kReferenceEnergyDrift
        << "); increase n_points or reduce dt";
    throw ReferenceRejected(msg.str());
  }
  return traj;
}

MonotonicityReport monotonicity_report(const Trajectory& traj) {
  MonotonicityReport rep;
  if (traj.diagnostics.empty()) return rep;
  const double l2_0 = traj.diagnostics.front().l2_sq;
  rep.tolerance = (traj.config.epsilon > 0 ? 1e-10 : 1e-8) * l2_0;
  for (std::size_t i = 1; i < traj.diagnostics.size(); ++i)
    rep.max_uptick =
        std::max(rep.max_uptick, traj.diagnostics[i].l2_sq - traj.diagnostics[i - 1].l2_sq);
  rep.pass = rep.max_uptick <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

void validate(const SweepConfig& cfg) {
  SimConfig base = cfg.base;
  base.epsilon = 0;
  validate(base);
  if (cfg.epsilons.empty()) throw ConfigError("epsilons", "must not be empty");
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    const double e = cfg.epsilons[i];
    if (!(std::isfinite(e) && e > 0)) throw ConfigError("epsilons", "entries must be > 0");
    if (i > 0 && !(e < cfg.epsilons[i - 1]))
      throw ConfigError("epsilons", "must be strictly decreasing");
  }
  for (double t : cfg.error_times)
    if (!(t >= 0 && t <= cfg.base.t_final))
      throw ConfigError("error_times", "entries must lie in [0, t_final]");
}

namespace {

using SnapshotMap = std::map<Index, SpectralField<double>>;

/// Step indices nearest to the requested sampling times.
std::vector<Index> error_steps(const SweepConfig& cfg, const StepPlan& plan) {
  std::vector<double> times = cfg.error_times;
  if (times.empty()) {
    for (Index i = 0; i < kDefaultErrorSamples; ++i)
      times.push_back(cfg.base.t_final * static_cast<double>(i) /
                      static_cast<double>(kDefaultErrorSamples - 1));
  }
  std::vector<Index> steps;
  for (double t : times)
    steps.push_back(std::clamp<Index>(std::llround(t / plan.dt), 0, plan.steps));
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

StepObserver capture(const std::vector<Index>& steps, Index stride, SnapshotMap& out) {
  return [&steps, stride, &out](Index step, double, const SpectralField<double>& u) {
    if (step % stride != 0) return;
    if (std::binary_search(steps.begin(), steps.end(), step / stride))
      out.emplace(step / stride, u);
  };
}

SweepRecord run_member(const SweepConfig& cfg, double epsilon, const StepPlan& plan,
                       const std::vector<Index>& steps, const SnapshotMap& reference) {
  SimConfig sim = cfg.base;
  sim.epsilon = epsilon;
  sim.dt = plan.dt;
  sim.cfl.reset();
  // Only the captured states are needed.
  sim.snapshot_stride = plan.steps;

  SnapshotMap states;
  Trajectory traj;
  try {
    traj = integrate(sim, capture(steps, 1, states));
  } catch (const BlowUpError& e) {
    throw SweepMemberBlowUp(epsilon, e.last_valid_time());
  }

  SweepRecord rec;
  rec.epsilon = epsilon;
  for (const auto& [step, u] : states) {
    const SpectralField<double>& ref = reference.at(step);
    const SpectralField<double> diff = u - (ref.grid == u.grid ? ref : resample(ref, u.grid.size()));
    rec.sup_hhalf_err = std::max(rec.sup_hhalf_err, std::sqrt(sobolev_norm_sq(diff, 0.5)));
    rec.sup_l2_err = std::max(rec.sup_l2_err, std::sqrt(l2_norm_sq(diff)));
  }
  const double e0 = traj.diagnostics.front().energy;
  for (const auto& d : traj.diagnostics)
    rec.energy_drift = std::max(rec.energy_drift, std::abs(d.energy - e0));
  rec.l2_deficit = traj.diagnostics.front().l2_sq - traj.diagnostics.back().l2_sq;
  rec.dissipation = dissipation_integral(traj);
  rec.monotonicity = monotonicity_report(traj);
  return rec;
}

std::optional<RateFit> try_fit(const SweepResult& res, double SweepRecord::*field,
                               const std::string& name, std::vector<std::string>& warnings) {
  if (res.records.size() < 3) {
    warnings.push_back(name + " rate not fitted: fewer than 3 epsilon values");
    return std::nullopt;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : res.records) pts.emplace_back(r.epsilon, r.*field);
  try {
    return fit_rate(pts);
  } catch (const std::invalid_argument& e) {
    warnings.push_back(name + " rate not fitted: " + e.what());
    return std::nullopt;
  }
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, unsigned workers) {
  validate(cfg);
  const StepPlan plan = plan_steps(cfg.base);
  const std::vector<Index> steps = error_steps(cfg, plan);

  SimConfig ref_cfg = cfg.base;
  ref_cfg.snapshot_stride = plan.steps;
  Index ref_stride = 1;
  if (cfg.reference == ReferenceMode::refined) {
    ref_cfg.n_points *= 2;
    ref_cfg.dt = plan.dt / 2;
    ref_cfg.cfl.reset();
    ref_stride = 2;
  } else {
    ref_cfg.dt = plan.dt;
    ref_cfg.cfl.reset();
  }
  SnapshotMap reference;
  const Trajectory ref = reference_solution(ref_cfg, capture(steps, ref_stride, reference));

  SweepResult result;
  result.reference_drift = conservation_drift(ref);
  const std::size_t members = cfg.epsilons.size();
  result.records.resize(members);
  std::vector<std::exception_ptr> errors(members);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < members; i = next++) {
      try {
        result.records[i] = run_member(cfg, cfg.epsilons[i], plan, steps, reference);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(members));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  result.hhalf_rate = try_fit(result, &SweepRecord::sup_hhalf_err, "hhalf", result.warnings);
  result.energy_rate = try_fit(result, &SweepRecord::energy_drift, "energy", result.warnings);
  return result;
}

// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar mms_sup_error(Scalar epsilon, Index n_points, Scalar t_final, Scalar dt, bool dealiased) {
  const Grid<Scalar> grid(n_points, 2 * std::numbers::pi_v<Scalar>);
  const Index steps = std::max<Index>(1, std::llround(static_cast<double>(t_final / dt)));
  const Scalar h = t_final / Scalar(steps);
  const Etdrk4Stepper<Scalar> stepper(grid, h, epsilon,
                                      {dealiased, true, Forcing::traveling_sine});
  SpectralField<Scalar> u = forward(mms_exact(Forcing::traveling_sine, Scalar(0), grid));
  for (Index i = 0; i < steps; ++i) u = stepper.step(u, Scalar(i) * h);
  const RealField<Scalar> exact = mms_exact(Forcing::traveling_sine, t_final, grid);
  return (inverse(u).samples - exact.samples).cwiseAbs().maxCoeff();
}

template double mms_sup_error<double>(double, Index, double, double, bool);
template long double mms_sup_error<long double>(long double, Index, long double, long double,
                                                bool);

OrderStudy mms_order_study(double epsilon, Index n_points, double t_final,
                           std::span<const double> dts) {
  OrderStudy study;
  std::vector<std::pair<double, double>> pts;
  for (double dt : dts) {
    const auto err = static_cast<double>(mms_sup_error<long double>(
        epsilon, n_points, t_final, static_cast<long double>(dt)));
    study.dts.push_back(dt);
    study.errors.push_back(err);
    pts.emplace_back(dt, err);
  }
  study.fit = fit_rate(pts);
  return study;
}

}  // namespace bolab
