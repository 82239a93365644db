#include "bolab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bolab {

double ResidualSeries::max_abs_relative() const {
  double worst = 0;
  for (double r : relative) worst = std::max(worst, std::abs(r));
  return worst;
}

std::vector<double> time_derivative(std::span<const double> t, std::span<const double> f) {
  const std::size_t n = t.size();
  if (n < 3) throw std::invalid_argument("time_derivative: need at least 3 samples");
  if (f.size() != n) throw std::invalid_argument("time_derivative: size mismatch");

  std::vector<double> d(n);
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
           h1 / (h2 * (h1 + h2)) * f[2];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
    d[n - 1] = (2 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               h2 / (h1 * (h1 + h2)) * f[n - 3];
  }
  return d;
}

double time_integral(std::span<const double> t, std::span<const double> f) {
  const std::size_t n = t.size();
  if (n < 2 || f.size() != n) throw std::invalid_argument("time_integral: bad samples");
  double sum = 0;
  for (std::size_t i = 1; i < n; ++i) sum += (t[i] - t[i - 1]) * (f[i] + f[i - 1]) / 2;

  if (n < 3) return sum;
  const double h = (t[n - 1] - t[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * h) return sum;
  const auto df = time_derivative(t, f);
  return sum - h * h / 12 * (df[n - 1] - df[0]);
}

namespace {

struct Columns {
  std::vector<double> t, l2, dx, d32, energy, u2uxx;
};

Columns columns(const Trajectory& traj) {
  if (traj.diagnostics.size() < 3)
    throw std::invalid_argument("residual: trajectory needs at least 3 recorded steps");
  Columns c;
  for (const auto& d : traj.diagnostics) {
    c.t.push_back(d.t);
    c.l2.push_back(d.l2_sq);
    c.dx.push_back(d.dx_sq);
    c.d32.push_back(d.d32_sq);
    c.energy.push_back(d.energy);
    c.u2uxx.push_back(d.u2_uxx);
  }
  return c;
}

ResidualSeries finish(std::vector<double> t, std::vector<double> raw,
                      const std::vector<double>& scale) {
  ResidualSeries r;
  r.relative.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    r.relative[i] = raw[i] / (scale[i] > 0 ? scale[i] : 1.0);
  r.times = std::move(t);
  r.raw = std::move(raw);
  return r;
}

}  // namespace

ResidualSeries l2_identity_residual(const Trajectory& traj) {
  const Columns c = columns(traj);
  const double eps = traj.config.epsilon;
  const auto dl2 = time_derivative(c.t, c.l2);

  std::vector<double> raw(c.t.size()), scale(c.t.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = dl2[i] + 2 * eps * c.dx[i];
    scale[i] = eps > 0 ? eps * c.dx[i] : std::abs(c.l2.front());
  }
  return finish(c.t, std::move(raw), scale);
}

ResidualSeries energy_identity_residual(const Trajectory& traj) {
  const Columns c = columns(traj);
  const double eps = traj.config.epsilon;
  const auto de = time_derivative(c.t, c.energy);

  std::vector<double> raw(c.t.size()), scale(c.t.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = de[i] + eps * c.d32[i] - eps / 2 * c.u2uxx[i];
    scale[i] = eps > 0 ? eps * c.d32[i] : std::abs(c.energy.front());
  }
  return finish(c.t, std::move(raw), scale);
}

double dissipation_integral(const Trajectory& traj) {
  std::vector<double> t, dx;
  for (const auto& d : traj.diagnostics) {
    t.push_back(d.t);
    dx.push_back(d.dx_sq);
  }
  return 2 * traj.config.epsilon * time_integral(t, dx);
}

}  // namespace bolab
