#include "bolab/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace bolab {

void validate(const SimConfig& cfg) {
  if (!std::isfinite(cfg.epsilon) || cfg.epsilon < 0)
    throw ConfigError("epsilon", "must be a finite number >= 0");
  if (cfg.n_points < 8 || cfg.n_points % 2 != 0)
    throw ConfigError("n_points", "must be an even integer >= 8");
  if (!std::isfinite(cfg.length) || cfg.length <= 0)
    throw ConfigError("length", "must be positive");
  if (!std::isfinite(cfg.t_final) || cfg.t_final <= 0)
    throw ConfigError("t_final", "must be positive");
  if (cfg.dt && cfg.cfl) throw ConfigError("dt", "give either dt or cfl, not both");
  if (cfg.dt && !(std::isfinite(*cfg.dt) && *cfg.dt > 0))
    throw ConfigError("dt", "must be positive");
  if (cfg.cfl && !(std::isfinite(*cfg.cfl) && *cfg.cfl > 0))
    throw ConfigError("cfl", "must be positive");
  if (cfg.snapshot_stride < 1) throw ConfigError("snapshot_stride", "must be >= 1");

  const auto& ic = cfg.initial_condition;
  if (const auto* modes = std::get_if<std::vector<ModeCoefficient>>(&ic.data)) {
    for (const auto& mc : *modes) {
      if (mc.mode < 0 || mc.mode >= cfg.n_points / 2)
        throw ConfigError("coefficients", "mode " + std::to_string(mc.mode) +
                                              " outside [0, n_points/2)");
      if (!std::isfinite(mc.value.real()) || !std::isfinite(mc.value.imag()))
        throw ConfigError("coefficients", "non-finite coefficient");
      if (mc.mode == 0 && mc.value.imag() != 0)
        throw ConfigError("coefficients", "mode 0 must be real");
    }
  } else if (std::get<Preset>(ic.data) == Preset::lump) {
    if (!(std::isfinite(ic.lump_amplitude)))
      throw ConfigError("lump_amplitude", "must be finite");
    if (!(std::isfinite(ic.lump_width) && ic.lump_width > 0))
      throw ConfigError("lump_width", "must be positive");
  }
  if (cfg.forcing != Forcing::none &&
      std::abs(cfg.length - 2 * std::numbers::pi) > 1e-12 * 2 * std::numbers::pi)
    throw ConfigError("forcing", "manufactured solution requires length = 2 pi");
}

double nominal_dt(const SimConfig& cfg) {
  if (cfg.dt) return *cfg.dt;
  const Grid<double> grid(cfg.n_points, cfg.length);
  double max_rate = 0;
  for (Index m = 0; m < grid.size(); ++m)
    max_rate = std::max(max_rate, std::abs(linear_symbol(grid.wavenumber(m), cfg.epsilon).imag()));
  return cfg.cfl.value_or(kDefaultCfl) / max_rate;
}

StepPlan plan_steps(const SimConfig& cfg) {
  const double dt = nominal_dt(cfg);
  // Ratios within rounding of an integer must not gain an extra tiny step.
  const double ratio = cfg.t_final / dt;
  auto steps = static_cast<Index>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  steps = std::max<Index>(steps, 1);
  return {steps, cfg.t_final / static_cast<double>(steps)};
}

SpectralField<double> initial_field(const SimConfig& cfg) {
  const Grid<double> grid(cfg.n_points, cfg.length);
  const auto& ic = cfg.initial_condition;
  SpectralField<double> u(grid);

  if (const auto* modes = std::get_if<std::vector<ModeCoefficient>>(&ic.data)) {
    for (const auto& mc : *modes) {
      u(mc.mode) = mc.value;
      if (mc.mode != 0) u(-mc.mode) = std::conj(mc.value);
    }
    return u;
  }

  const double two_pi = 2 * std::numbers::pi;
  switch (std::get<Preset>(ic.data)) {
    case Preset::cosine:
      u = forward(sample(grid, [&](double x) { return std::cos(two_pi * x / cfg.length); }));
      break;
    case Preset::two_mode:
      u = forward(sample(grid, [&](double x) {
        const double y = two_pi * x / cfg.length;
        return std::cos(y) + 0.5 * std::cos(2 * y);
      }));
      break;
    case Preset::lump: {
      const double a = ic.lump_amplitude, w = ic.lump_width, mid = cfg.length / 2;
      u = forward(sample(grid, [&](double x) {
        const double s = (x - mid) / w;
        return a / (1 + s * s);
      }));
      u.coeffs[0] = 0;
      break;
    }
  }
  u.coeffs[grid.nyquist_slot()] = 0;
  return u;
}

SpectralField<double> step_etdrk4(const SpectralField<double>& u, double dt, const SimConfig& cfg,
                                  double t) {
  const Etdrk4Stepper<double> stepper(u.grid, dt, cfg.epsilon, rhs_options(cfg));
  return stepper.step(u, t);
}

namespace detail {

Trajectory integrate_unchecked(const SimConfig& cfg, const StepObserver& observer) {
  const StepPlan plan = plan_steps(cfg);
  const Grid<double> grid(cfg.n_points, cfg.length);
  const Etdrk4Stepper<double> stepper(grid, plan.dt, cfg.epsilon, rhs_options(cfg));

  Trajectory traj;
  traj.config = cfg;
  traj.dt = plan.dt;
  traj.diagnostics.reserve(static_cast<std::size_t>(plan.steps + 1));

  SpectralField<double> u = initial_field(cfg);
  auto record = [&](Index step, double t) {
    traj.diagnostics.push_back(diagnose(u, t));
    if (step % cfg.snapshot_stride == 0 || step == plan.steps) {
      traj.times.push_back(t);
      traj.snapshots.push_back(inverse(u));
    }
    if (observer) observer(step, t, u);
  };

  record(0, 0.0);
  for (Index step = 1; step <= plan.steps; ++step) {
    const double t_prev = static_cast<double>(step - 1) * plan.dt;
    u = stepper.step(u, t_prev);
    const double t = step == plan.steps ? cfg.t_final : static_cast<double>(step) * plan.dt;
    record(step, t);
  }
  return traj;
}

}  // namespace detail

Trajectory integrate(const SimConfig& cfg, const StepObserver& observer) {
  validate(cfg);
  return detail::integrate_unchecked(cfg, observer);
}

}  // namespace bolab
