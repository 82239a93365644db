#pragma once

// Sobolev-type norms, the energy functional and the pointwise diagnostics
// recorded along a trajectory. Norm conventions on [0, L):
//
//   ||u||^2_{L2}     = L sum |c_j|^2
//   ||u||^2_{H^s}    = L sum (1 + k_j^2)^s |c_j|^2
//   ||D^s u||^2_{L2} = L sum |k_j|^{2s} |c_j|^2

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bolab/spectral.hpp"

namespace bolab {

template <typename Scalar, typename Weight>
Scalar weighted_norm_sq(const SpectralField<Scalar>& u, Weight&& weight) {
  Scalar sum = 0;
  for (Index m = 0; m < u.grid.size(); ++m)
    sum += weight(u.grid.wavenumber(m)) * std::norm(u.coeffs[m]);
  return u.grid.length() * sum;
}

template <typename Scalar>
Scalar l2_norm_sq(const SpectralField<Scalar>& u) {
  return u.grid.length() * u.coeffs.squaredNorm();
}

/// Inhomogeneous H^s norm squared, s in [0, 2].
template <typename Scalar>
Scalar sobolev_norm_sq(const SpectralField<Scalar>& u, Scalar s) {
  if (!(s >= Scalar(0) && s <= Scalar(2)))
    throw std::invalid_argument("sobolev_norm_sq: s must lie in [0, 2]");
  if (s == Scalar(0)) return l2_norm_sq(u);
  return weighted_norm_sq(u, [s](Scalar k) { return std::pow(Scalar(1) + k * k, s); });
}

/// Homogeneous seminorm ||D^s u||^2.
template <typename Scalar>
Scalar homogeneous_norm_sq(const SpectralField<Scalar>& u, Scalar s) {
  if (!(s >= Scalar(0))) throw std::invalid_argument("homogeneous_norm_sq: s must be >= 0");
  if (s == Scalar(0)) return l2_norm_sq(u);
  return weighted_norm_sq(u, [s](Scalar k) { return std::pow(std::abs(k), Scalar(2) * s); });
}

/// Trapezoid sum of f over the 2n-point refinement of f's grid. Exact for
/// products of up to three fields resolved on the original grid.
template <typename Scalar, typename Fn>
Scalar padded_quadrature(const SpectralField<Scalar>& u, Fn&& integrand) {
  const Index fine = 2 * u.grid.size();
  const RealField<Scalar> v = inverse(resample(u, fine));
  Scalar sum = 0;
  for (Index m = 0; m < fine; ++m) sum += integrand(m, v.samples[m]);
  return u.grid.length() * sum / Scalar(fine);
}

template <typename Scalar>
Scalar cubic_integral(const SpectralField<Scalar>& u) {
  return padded_quadrature(u, [](Index, Scalar v) { return v * v * v; });
}

/// Integral of u^2 u_xx, the forcing term of the energy identity.
template <typename Scalar>
Scalar u2_uxx_integral(const SpectralField<Scalar>& u) {
  const Index fine = 2 * u.grid.size();
  const RealField<Scalar> uxx = inverse(resample(dx(dx(u)), fine));
  return padded_quadrature(u, [&uxx](Index m, Scalar v) { return v * v * uxx.samples[m]; });
}

/// E(u) = 1/2 ||D^{1/2} u||^2 + 1/6 int u^3.
template <typename Scalar>
Scalar energy(const SpectralField<Scalar>& u) {
  return homogeneous_norm_sq(u, Scalar(0.5)) / Scalar(2) + cubic_integral(u) / Scalar(6);
}

template <typename Scalar>
Scalar linf_norm(const SpectralField<Scalar>& u) {
  return inverse(u).samples.cwiseAbs().maxCoeff();
}

struct DiagnosticsSample {
  double t = 0;
  double l2_sq = 0;
  double hhalf_sq = 0;
  double dhalf_sq = 0;
  double dx_sq = 0;
  double d32_sq = 0;
  double energy = 0;
  double cubic = 0;
  double linf = 0;
  /// int u^2 u_xx, needed by the energy identity residual.
  double u2_uxx = 0;
};

template <typename Scalar>
DiagnosticsSample diagnose(const SpectralField<Scalar>& u, Scalar t) {
  DiagnosticsSample d;
  d.t = static_cast<double>(t);
  d.l2_sq = static_cast<double>(l2_norm_sq(u));
  d.hhalf_sq = static_cast<double>(sobolev_norm_sq(u, Scalar(0.5)));
  d.dhalf_sq = static_cast<double>(homogeneous_norm_sq(u, Scalar(0.5)));
  d.dx_sq = static_cast<double>(homogeneous_norm_sq(u, Scalar(1)));
  d.d32_sq = static_cast<double>(homogeneous_norm_sq(u, Scalar(1.5)));
  d.cubic = static_cast<double>(cubic_integral(u));
  d.energy = d.dhalf_sq / 2 + d.cubic / 6;
  d.linf = static_cast<double>(linf_norm(u));
  d.u2_uxx = static_cast<double>(u2_uxx_integral(u));
  return d;
}

/// Interpolation inequality ||u||_inf^2 <= C ||u||_{L2} ||u_x||_{L2} + 2 mean^2.
/// For mean-free periodic v one has ||v||_inf^2 <= ||v|| ||v_x||, so C = 2
/// covers the split u = mean + v. The constant is a fixed audit value, not
/// a sharp bound.
struct InequalityCheck {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};

inline constexpr double kInterpolationConstant = 2.0;

template <typename Scalar>
InequalityCheck gn_inequality_check(const SpectralField<Scalar>& u) {
  const Scalar linf = linf_norm(u);
  if (linf == Scalar(0)) throw std::invalid_argument("gn_inequality_check: zero field");
  const Scalar mean = std::real(u.coeffs[0]);
  InequalityCheck c;
  c.lhs = static_cast<double>(linf * linf);
  c.rhs = static_cast<double>(Scalar(kInterpolationConstant) * std::sqrt(l2_norm_sq(u)) *
                                  std::sqrt(homogeneous_norm_sq(u, Scalar(1))) +
                              Scalar(2) * mean * mean);
  c.ratio = c.lhs / c.rhs;
  return c;
}

}  // namespace bolab
