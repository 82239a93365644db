#pragma once

// Periodic Fourier grid, spectral/physical field types and the Fourier
// multiplier operators (Hilbert transform, derivatives, dealias mask).
//
// Coefficients are stored in FFT slot order: slot m holds integer mode
// j = m for m < n/2 and j = m - n otherwise, so slot n/2 is the single
// Nyquist mode j = -n/2. They are analysis coefficients,
//
//   c_j = (1/n) sum_m u(x_m) exp(-i k_j x_m),    k_j = 2 pi j / L,
//
// so the coefficient of exp(i k_j x) is exactly 1.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace bolab {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Uniform periodic grid on [0, L) with an even number of points.
template <typename Scalar = double>
class Grid {
 public:
  Grid(Index n_points, Scalar length) : n_(n_points), length_(length) {
    if (n_points < 8 || n_points % 2 != 0)
      throw std::invalid_argument("grid: n_points must be even and >= 8, got " +
                                  std::to_string(n_points));
    if (!(length > Scalar(0)) || !std::isfinite(static_cast<double>(length)))
      throw std::invalid_argument("grid: length must be positive and finite");
  }

  Index size() const { return n_; }
  Scalar length() const { return length_; }
  Index nyquist_slot() const { return n_ / 2; }
  Index dealias_cutoff() const { return n_ / 3; }

  /// Integer mode number j stored in FFT slot m.
  Index mode(Index slot) const { return slot < n_ / 2 ? slot : slot - n_; }
  /// FFT slot that stores integer mode j, for -n/2 <= j < n/2.
  Index slot(Index j) const { return j >= 0 ? j : j + n_; }

  Scalar wavenumber(Index slot) const {
    return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(mode(slot)) / length_;
  }
  Vector<Scalar> wavenumbers() const {
    Vector<Scalar> k(n_);
    for (Index m = 0; m < n_; ++m) k[m] = wavenumber(m);
    return k;
  }

  Scalar point(Index m) const { return length_ * Scalar(m) / Scalar(n_); }
  Vector<Scalar> points() const {
    Vector<Scalar> x(n_);
    for (Index m = 0; m < n_; ++m) x[m] = point(m);
    return x;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  Index n_;
  Scalar length_;
};

template <typename Scalar>
Grid<Scalar> make_grid(Index n_points, Scalar length) {
  return Grid<Scalar>(n_points, length);
}

template <typename Scalar = double>
struct RealField {
  Grid<Scalar> grid;
  Vector<Scalar> samples;

  RealField(Grid<Scalar> g, Vector<Scalar> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.size())
      throw std::invalid_argument("real field: sample count does not match grid");
  }
  explicit RealField(Grid<Scalar> g) : grid(g), samples(Vector<Scalar>::Zero(g.size())) {}

  bool all_finite() const { return samples.allFinite(); }
};

template <typename Scalar = double>
struct SpectralField {
  Grid<Scalar> grid;
  ComplexVector<Scalar> coeffs;

  SpectralField(Grid<Scalar> g, ComplexVector<Scalar> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size())
      throw std::invalid_argument("spectral field: coefficient count does not match grid");
  }
  explicit SpectralField(Grid<Scalar> g)
      : grid(g), coeffs(ComplexVector<Scalar>::Zero(g.size())) {}

  std::complex<Scalar>& operator()(Index j) { return coeffs[grid.slot(j)]; }
  const std::complex<Scalar>& operator()(Index j) const { return coeffs[grid.slot(j)]; }

  bool all_finite() const { return coeffs.allFinite(); }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    coeffs += o.coeffs;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    coeffs -= o.coeffs;
    return *this;
  }
  SpectralField& operator*=(Scalar a) {
    coeffs *= a;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(Scalar a, SpectralField f) { return f *= a; }

 private:
  void check_same_grid(const SpectralField& o) const {
    if (!(grid == o.grid)) throw std::invalid_argument("spectral field: grid mismatch");
  }
};

/// Largest violation of c_{-j} = conj(c_j), Im c_0 = 0 and Im c_{-n/2} = 0.
template <typename Scalar>
Scalar hermitian_defect(const SpectralField<Scalar>& f) {
  const Index n = f.grid.size();
  Scalar worst = std::abs(f.coeffs[0].imag());
  worst = std::max(worst, std::abs(f.coeffs[n / 2].imag()));
  for (Index j = 1; j < n / 2; ++j)
    worst = std::max(worst, std::abs(f(-j) - std::conj(f(j))));
  return worst;
}

namespace detail {

// Eigen::FFT keeps a mutable twiddle cache; one engine per thread.
template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}

}  // namespace detail

template <typename Scalar>
SpectralField<Scalar> forward(const RealField<Scalar>& f) {
  if (!f.all_finite()) throw std::domain_error("forward: non-finite sample");
  const Index n = f.grid.size();
  SpectralField<Scalar> out(f.grid);
  detail::fft_engine<Scalar>().fwd(out.coeffs.data(), f.samples.data(), n);
  out.coeffs /= Scalar(n);
  return out;
}

/// Real synthesis. Only slots 0..n/2 are read, so the result is real by
/// construction; the negative-mode half must agree with Hermitian symmetry.
template <typename Scalar>
RealField<Scalar> inverse(const SpectralField<Scalar>& f) {
  if (!f.all_finite()) throw std::domain_error("inverse: non-finite coefficient");
  RealField<Scalar> out(f.grid);
  detail::fft_engine<Scalar>().inv(out.samples.data(), f.coeffs.data(), f.grid.size());
  return out;
}

/// Applies c_j -> symbol(slot, k_j) * c_j.
template <typename Scalar, typename Symbol>
SpectralField<Scalar> apply_multiplier(const SpectralField<Scalar>& f, Symbol&& symbol) {
  SpectralField<Scalar> out(f.grid);
  for (Index m = 0; m < f.grid.size(); ++m)
    out.coeffs[m] = symbol(m, f.grid.wavenumber(m)) * f.coeffs[m];
  return out;
}

/// Hilbert transform, multiplier -i sgn(k) with sgn(0) = 0. The Nyquist
/// mode is dropped: -i sgn(k) there would make its coefficient imaginary.
template <typename Scalar>
SpectralField<Scalar> hilbert(const SpectralField<Scalar>& f) {
  using C = std::complex<Scalar>;
  const Index nyq = f.grid.nyquist_slot();
  return apply_multiplier(f, [nyq](Index slot, Scalar k) {
    if (slot == nyq || k == Scalar(0)) return C(0);
    return k > Scalar(0) ? C(0, -1) : C(0, 1);
  });
}

/// Fractional derivative D^s, multiplier |k|^s.
template <typename Scalar>
SpectralField<Scalar> frac_deriv(const SpectralField<Scalar>& f, Scalar s) {
  if (!(s >= Scalar(0))) throw std::invalid_argument("frac_deriv: order must be >= 0");
  if (s == Scalar(0)) return f;
  return apply_multiplier(f, [s](Index, Scalar k) {
    return std::complex<Scalar>(std::pow(std::abs(k), s));
  });
}

/// d/dx, multiplier i k with the Nyquist mode zeroed.
template <typename Scalar>
SpectralField<Scalar> dx(const SpectralField<Scalar>& f) {
  const Index nyq = f.grid.nyquist_slot();
  return apply_multiplier(f, [nyq](Index slot, Scalar k) {
    return slot == nyq ? std::complex<Scalar>(0) : std::complex<Scalar>(0, k);
  });
}

/// 2/3 rule: zero every mode with |j| > floor(n/3).
template <typename Scalar>
SpectralField<Scalar> dealias(SpectralField<Scalar> f) {
  const Index cutoff = f.grid.dealias_cutoff();
  for (Index m = 0; m < f.grid.size(); ++m)
    if (std::abs(f.grid.mode(m)) > cutoff) f.coeffs[m] = 0;
  return f;
}

/// Spectral interpolation onto a grid of the same length and a different
/// resolution. When refining, the Nyquist coefficient is split evenly
/// between +n/2 and -n/2; when coarsening, modes beyond the target Nyquist
/// are dropped and +-n'/2 fold onto the target Nyquist slot.
template <typename Scalar>
SpectralField<Scalar> resample(const SpectralField<Scalar>& f, Index n_points) {
  const Grid<Scalar> target(n_points, f.grid.length());
  SpectralField<Scalar> out(target);
  const Index n = f.grid.size();
  const Index keep = std::min(n, n_points) / 2;
  for (Index j = -keep + 1; j < keep; ++j) out(j) = f(j);
  if (n_points > n) {
    const auto half = f(-n / 2) / Scalar(2);
    out(-n / 2) = half;
    out(n / 2) = half;
  } else if (n_points == n) {
    out(-n / 2) = f(-n / 2);
  } else {
    out(-n_points / 2) = f(-n_points / 2) + f(n_points / 2);
  }
  return out;
}

/// Samples fn(x) on the collocation points.
template <typename Scalar, typename Fn>
RealField<Scalar> sample(const Grid<Scalar>& grid, Fn&& fn) {
  RealField<Scalar> out(grid);
  for (Index m = 0; m < grid.size(); ++m) out.samples[m] = fn(grid.point(m));
  return out;
}

}  // namespace bolab
