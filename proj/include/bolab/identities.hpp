#pragma once

// Residuals of the dissipation identities along a recorded trajectory:
//
//   d/dt ||u||^2 + 2 eps ||u_x||^2 = 0
//   d/dt E(u) + eps ||D^{3/2} u||^2 = (eps/2) int u^2 u_xx
//
// Time derivatives come from three-point differences on the recorded step
// grid: centred inside, second-order one-sided at the two ends.

#include <span>
#include <vector>

#include "bolab/dynamics.hpp"

namespace bolab {

struct ResidualSeries {
  std::vector<double> times;
  std::vector<double> raw;
  /// raw / scale(t): eps times the dissipation term when eps > 0, the
  /// initial value of the conserved quantity when eps = 0.
  std::vector<double> relative;

  double max_abs_relative() const;
};

/// Second-order derivative of samples on a (possibly non-uniform) grid.
std::vector<double> time_derivative(std::span<const double> t, std::span<const double> f);

/// int f dt: trapezoid rule with the Euler-Maclaurin h^2 end correction on
/// uniform grids.
double time_integral(std::span<const double> t, std::span<const double> f);

ResidualSeries l2_identity_residual(const Trajectory& traj);
ResidualSeries energy_identity_residual(const Trajectory& traj);

/// 2 eps int_0^T ||u_x||^2 dt from the recorded diagnostics.
double dissipation_integral(const Trajectory& traj);

}  // namespace bolab
