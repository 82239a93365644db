#pragma once

// Inviscid-limit experiments: eps = 0 reference solves, eps sweeps against
// the reference, log-log rate fits, L2 monotonicity checks and the
// manufactured-solution accuracy study.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bolab/dynamics.hpp"

namespace bolab {

// ---------------------------------------------------------------------------
// Rate fitting

struct RateFit {
  double slope = 0;
  double intercept = 0;
  /// RMS of the log-space residuals.
  double residual = 0;
};

/// Least-squares line through (log x, log y). Needs >= 3 points, all y > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

// ---------------------------------------------------------------------------
// Reference and monotonicity

/// Relative conservation tolerances an eps = 0 reference must meet.
inline constexpr double kReferenceL2Drift = 1e-8;
inline constexpr double kReferenceEnergyDrift = 1e-6;

class ReferenceRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConservationDrift {
  /// max_t | ||u(t)|| - ||u_0|| | / ||u_0||
  double l2 = 0;
  /// max_t |E(u(t)) - E(u_0)| / |E(u_0)|
  double energy = 0;
};

ConservationDrift conservation_drift(const Trajectory& traj);

/// eps = 0 solve of cfg; throws ReferenceRejected when its conservation
/// drift shows the resolution is inadequate.
Trajectory reference_solution(SimConfig cfg, const StepObserver& observer = {});

struct MonotonicityReport {
  double max_uptick = 0;
  double tolerance = 0;
  bool pass = true;
};

/// Largest step-to-step increase of ||u||^2. Allowed: 1e-10 ||u_0||^2 for
/// eps > 0, 1e-8 ||u_0||^2 (conservation drift) for eps = 0.
MonotonicityReport monotonicity_report(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Sweeps

enum class ReferenceMode { same_resolution, refined };

inline constexpr Index kDefaultErrorSamples = 101;

struct SweepConfig {
  SimConfig base;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  ReferenceMode reference = ReferenceMode::same_resolution;
  /// Empty: kDefaultErrorSamples uniform samples of [0, t_final].
  std::vector<double> error_times;
};

void validate(const SweepConfig& cfg);

struct SweepRecord {
  double epsilon = 0;
  double sup_hhalf_err = 0;
  double sup_l2_err = 0;
  double energy_drift = 0;
  double l2_deficit = 0;
  /// 2 eps int_0^T ||u_x||^2 dt; matches l2_deficit.
  double dissipation = 0;
  MonotonicityReport monotonicity;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::optional<RateFit> hhalf_rate;
  std::optional<RateFit> energy_rate;
  std::vector<std::string> warnings;
  ConservationDrift reference_drift;
};

/// A member run of a sweep blew up.
class SweepMemberBlowUp : public BlowUpError {
 public:
  SweepMemberBlowUp(double epsilon, double last_valid_time)
      : BlowUpError(last_valid_time), epsilon_(epsilon),
        message_("sweep member eps = " + std::to_string(epsilon) + ": " + BlowUpError::what()) {}
  double epsilon() const { return epsilon_; }
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  double epsilon_;
  std::string message_;
};

/// Runs every eps of the ladder (up to `workers` at a time) against one
/// reference solve. Results are reduced in ladder order, so the table does
/// not depend on scheduling.
SweepResult run_sweep(const SweepConfig& cfg, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Manufactured-solution study

/// Sup-norm error at t_final of a forced run started from the exact
/// traveling_sine solution.
template <typename Scalar>
Scalar mms_sup_error(Scalar epsilon, Index n_points, Scalar t_final, Scalar dt,
                     bool dealiased = true);

extern template double mms_sup_error<double>(double, Index, double, double, bool);
extern template long double mms_sup_error<long double>(long double, Index, long double,
                                                       long double, bool);

struct OrderStudy {
  std::vector<double> dts;
  std::vector<double> errors;
  RateFit fit;
};

/// Temporal convergence order on the manufactured problem. Runs in long
/// double: the truncation error drops below double round-off at the dt
/// values of interest.
OrderStudy mms_order_study(double epsilon, Index n_points, double t_final,
                           std::span<const double> dts);

}  // namespace bolab
