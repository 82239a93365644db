#pragma once

// Benjamin-Ono(-Burgers) dynamics on the periodic grid:
//
//   u_t + H u_xx - eps u_xx + u u_x = f,
//
// written in Fourier variables as c_t = lambda(k) c - F[u u_x] + F[f] with
// lambda(k) = -i k|k| - eps k^2. eps = 0 is the inviscid (BO) equation.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bolab/norms.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

/// Fourier symbol of the linear part, lambda(k) = -i k|k| - eps k^2.
template <typename Scalar>
std::complex<Scalar> linear_symbol(Scalar k, Scalar epsilon) {
  return {-epsilon * k * k, -k * std::abs(k)};
}

/// Linear symbol as applied on a grid slot. The Nyquist mode is a real
/// cosine on the grid and cannot carry the dispersive phase, so it only
/// feels the dissipative part.
template <typename Scalar>
std::complex<Scalar> slot_symbol(const Grid<Scalar>& grid, Index slot, Scalar epsilon) {
  const auto lambda = linear_symbol(grid.wavenumber(slot), epsilon);
  return slot == grid.nyquist_slot() ? std::complex<Scalar>(lambda.real()) : lambda;
}

/// u u_x, formed as (1/2) d/dx (u^2) with the square taken in physical
/// space; optionally 2/3-dealiased before differentiating.
template <typename Scalar>
SpectralField<Scalar> nonlinear_term(const SpectralField<Scalar>& u, bool dealiased) {
  RealField<Scalar> sq = inverse(u);
  sq.samples = sq.samples.cwiseAbs2() / Scalar(2);
  SpectralField<Scalar> sq_hat = forward(sq);
  if (dealiased) sq_hat = dealias(std::move(sq_hat));
  return dx(sq_hat);
}

/// Exact linear flow, c_j -> exp(lambda(k_j) dt) c_j.
template <typename Scalar>
SpectralField<Scalar> propagate_linear(const SpectralField<Scalar>& f, Scalar dt, Scalar epsilon) {
  if (!(dt >= Scalar(0))) throw std::invalid_argument("propagate_linear: dt must be >= 0");
  if (!(epsilon >= Scalar(0))) throw std::invalid_argument("propagate_linear: epsilon must be >= 0");
  SpectralField<Scalar> out(f.grid);
  for (Index m = 0; m < f.grid.size(); ++m)
    out.coeffs[m] = std::exp(slot_symbol(f.grid, m, epsilon) * dt) * f.coeffs[m];
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(double last_valid_time)
      : std::runtime_error("non-finite solution after t = " + std::to_string(last_valid_time)),
        last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

enum class Preset { cosine, two_mode, lump };

struct ModeCoefficient {
  Index mode = 0;
  std::complex<double> value;
};

struct InitialCondition {
  std::variant<Preset, std::vector<ModeCoefficient>> data = Preset::cosine;
  double lump_amplitude = 1.0;
  double lump_width = 1.0;
};

/// Manufactured-solution presets. traveling_sine is u(x, t) = sin(x - t)
/// on L = 2 pi.
enum class Forcing { none, traveling_sine };

struct SimConfig {
  double epsilon = 0.0;
  Index n_points = 256;
  double length = 2 * std::numbers::pi;
  double t_final = 1.0;
  std::optional<double> dt;
  std::optional<double> cfl;
  InitialCondition initial_condition;
  bool dealias = true;
  Index snapshot_stride = 100;
  Forcing forcing = Forcing::none;
  /// Disables u u_x; used for linear verification runs.
  bool nonlinear = true;
};

inline constexpr double kDefaultCfl = 1.0;

/// Throws ConfigError naming the first offending field.
void validate(const SimConfig& cfg);

/// Nominal step: the configured dt, or cfl / max |Im lambda| in cfl mode.
double nominal_dt(const SimConfig& cfg);

struct StepPlan {
  Index steps;
  double dt;
};
/// Uniform steps covering [0, t_final]; dt is shrunk so they land on t_final.
StepPlan plan_steps(const SimConfig& cfg);

SpectralField<double> initial_field(const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Manufactured solution

template <typename Scalar>
RealField<Scalar> mms_exact(Forcing tag, Scalar t, const Grid<Scalar>& grid) {
  if (tag != Forcing::traveling_sine) throw std::invalid_argument("mms: unknown forcing tag");
  return sample(grid, [t](Scalar x) { return std::sin(x - t); });
}

/// Forcing f(., t) for which the preset solves the forced equation:
/// for u = sin(x - t), f = eps sin(x - t) + 1/2 sin(2(x - t)).
template <typename Scalar>
RealField<Scalar> mms_forcing(Forcing tag, Scalar t, const Grid<Scalar>& grid, Scalar epsilon) {
  if (tag != Forcing::traveling_sine) throw std::invalid_argument("mms: unknown forcing tag");
  const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  if (std::abs(grid.length() - two_pi) > Scalar(1e-12) * two_pi)
    throw std::invalid_argument("mms: traveling_sine requires L = 2 pi");
  return sample(grid, [t, epsilon](Scalar x) {
    return epsilon * std::sin(x - t) + std::sin(Scalar(2) * (x - t)) / Scalar(2);
  });
}

// ---------------------------------------------------------------------------
// ETDRK4 (Cox-Matthews) with contour-averaged phi-functions

struct RhsOptions {
  bool dealias = true;
  bool nonlinear = true;
  Forcing forcing = Forcing::none;
};

inline constexpr int kContourPoints = 32;

template <typename Scalar = double>
class Etdrk4Stepper {
 public:
  using Complex = std::complex<Scalar>;

  Etdrk4Stepper(Grid<Scalar> grid, Scalar dt, Scalar epsilon, RhsOptions opts = {})
      : grid_(grid), dt_(dt), epsilon_(epsilon), opts_(opts) {
    if (!(dt > Scalar(0))) throw std::invalid_argument("etdrk4: dt must be positive");
    const Index n = grid.size();
    e_.resize(n);
    e2_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (Index m = 0; m <= n / 2; ++m) fill_slot(m);
    for (Index j = 1; j < n / 2; ++j) {
      const Index neg = grid.slot(-j);
      e_[neg] = std::conj(e_[j]);
      e2_[neg] = std::conj(e2_[j]);
      q_[neg] = std::conj(q_[j]);
      f1_[neg] = std::conj(f1_[j]);
      f2_[neg] = std::conj(f2_[j]);
      f3_[neg] = std::conj(f3_[j]);
    }
  }

  const Grid<Scalar>& grid() const { return grid_; }
  Scalar dt() const { return dt_; }
  Scalar epsilon() const { return epsilon_; }

  /// Everything in c_t = lambda c + N(c, t) except the linear part.
  ComplexVector<Scalar> nonlinear_rhs(const ComplexVector<Scalar>& c, Scalar t) const {
    ComplexVector<Scalar> out = ComplexVector<Scalar>::Zero(grid_.size());
    if (opts_.nonlinear)
      out = -nonlinear_term(SpectralField<Scalar>(grid_, c), opts_.dealias).coeffs;
    if (opts_.forcing != Forcing::none)
      out += forward(mms_forcing(opts_.forcing, t, grid_, epsilon_)).coeffs;
    return out;
  }

  /// Advances u from t to t + dt. Throws BlowUpError(t) on non-finite output.
  SpectralField<Scalar> step(const SpectralField<Scalar>& u, Scalar t = 0) const {
    if (!(u.grid == grid_)) throw std::invalid_argument("etdrk4: grid mismatch");
    try {
      return step_stages(u.coeffs, t);
    } catch (const std::domain_error&) {
      // A stage overflowed before the final check; the transforms reject it.
      throw BlowUpError(static_cast<double>(t));
    }
  }

 private:
  SpectralField<Scalar> step_stages(const ComplexVector<Scalar>& v, Scalar t) const {
    const Scalar half = dt_ / 2;

    const ComplexVector<Scalar> nv = nonlinear_rhs(v, t);
    const ComplexVector<Scalar> a = e2_.cwiseProduct(v) + q_.cwiseProduct(nv);
    const ComplexVector<Scalar> na = nonlinear_rhs(a, t + half);
    const ComplexVector<Scalar> b = e2_.cwiseProduct(v) + q_.cwiseProduct(na);
    const ComplexVector<Scalar> nb = nonlinear_rhs(b, t + half);
    const ComplexVector<Scalar> c =
        e2_.cwiseProduct(a) + q_.cwiseProduct(Scalar(2) * nb - nv);
    const ComplexVector<Scalar> nc = nonlinear_rhs(c, t + dt_);

    SpectralField<Scalar> out(grid_);
    out.coeffs = e_.cwiseProduct(v) + f1_.cwiseProduct(nv) +
                 Scalar(2) * f2_.cwiseProduct(na + nb) + f3_.cwiseProduct(nc);
    if (!out.all_finite()) throw BlowUpError(static_cast<double>(t));
    return out;
  }

  void fill_slot(Index m) {
    const Complex z0 = slot_symbol(grid_, m, epsilon_) * dt_;
    e_[m] = std::exp(z0);
    e2_[m] = std::exp(z0 / Scalar(2));

    // Mean of each phi-combination over a unit circle centred at z0; the
    // functions are entire, so the mean equals the value at z0 without the
    // cancellation of the closed forms near z = 0.
    Complex q = 0, f1 = 0, f2 = 0, f3 = 0;
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    for (int p = 0; p < kContourPoints; ++p) {
      const Scalar angle = two_pi * (Scalar(p) + Scalar(0.5)) / Scalar(kContourPoints);
      const Complex z = z0 + std::polar(Scalar(1), angle);
      const Complex ez = std::exp(z);
      const Complex z3 = z * z * z;
      q += (std::exp(z / Scalar(2)) - Scalar(1)) / z;
      f1 += (Scalar(-4) - z + ez * (Scalar(4) - Scalar(3) * z + z * z)) / z3;
      f2 += (Scalar(2) + z + ez * (z - Scalar(2))) / z3;
      f3 += (Scalar(-4) - Scalar(3) * z - z * z + ez * (Scalar(4) - z)) / z3;
    }
    const Scalar scale = dt_ / Scalar(kContourPoints);
    q_[m] = q * scale;
    f1_[m] = f1 * scale;
    f2_[m] = f2 * scale;
    f3_[m] = f3 * scale;
  }

  Grid<Scalar> grid_;
  Scalar dt_;
  Scalar epsilon_;
  RhsOptions opts_;
  ComplexVector<Scalar> e_, e2_, q_, f1_, f2_, f3_;
};

inline RhsOptions rhs_options(const SimConfig& cfg) {
  return {cfg.dealias, cfg.nonlinear, cfg.forcing};
}

/// One ETDRK4 step of the configured equation from time t.
SpectralField<double> step_etdrk4(const SpectralField<double>& u, double dt, const SimConfig& cfg,
                                  double t = 0);

// ---------------------------------------------------------------------------
// Full solves

struct Trajectory {
  SimConfig config;
  double dt = 0;
  std::vector<double> times;
  std::vector<RealField<double>> snapshots;
  /// One sample per accepted step, including t = 0.
  std::vector<DiagnosticsSample> diagnostics;
};

/// Called with (step index, time, state) after every accepted step and once
/// for the initial state.
using StepObserver = std::function<void(Index, double, const SpectralField<double>&)>;

/// Solves the configured initial value problem through t_final.
Trajectory integrate(const SimConfig& cfg, const StepObserver& observer = {});

namespace detail {
/// integrate() without validate(); lets test harnesses inject otherwise
/// rejected parameters such as a negative epsilon.
Trajectory integrate_unchecked(const SimConfig& cfg, const StepObserver& observer);
}  // namespace detail

}  // namespace bolab
