#pragma once
//
// Equispaced grids on the unit circle, discrete Fourier analysis/synthesis,
// spectral calculus and monotone lifts of circle diffeomorphisms.
//
// Every periodic quantity in weldkit is sampled on a CircleGrid and handled
// through its trigonometric interpolant; the trapezoidal rule on such a grid
// is the only quadrature used by the library.

#include <weldkit/error.hpp>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace weldkit {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// N equispaced nodes t_j = 2 pi j / N on [0, 2 pi); N even and at least 16.
class CircleGrid {
 public:
  explicit CircleGrid(int n) : n_(n) {
    if (n < 16 || n % 2 != 0) {
      throw DomainError("CircleGrid: node count must be even and >= 16, got " + std::to_string(n));
    }
  }

  int size() const noexcept { return n_; }
  double step() const noexcept { return kTwoPi / n_; }
  double node(int j) const noexcept { return kTwoPi * j / n_; }
  /// e^{i t_j}
  cplx point(int j) const noexcept { return std::polar(1.0, node(j)); }

  std::vector<double> nodes() const {
    std::vector<double> t(n_);
    for (int j = 0; j < n_; ++j) t[j] = node(j);
    return t;
  }

  bool operator==(const CircleGrid&) const = default;

 private:
  int n_;
};

/// Complex function values at the nodes of a grid.
struct PeriodicSamples {
  CircleGrid grid;
  std::vector<cplx> values;

  PeriodicSamples(CircleGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.size()) {
      throw DomainError("PeriodicSamples: " + std::to_string(values.size()) +
                        " values for a grid of " + std::to_string(grid.size()));
    }
  }

  template <class F>
  static PeriodicSamples tabulate(CircleGrid g, F&& fn) {
    std::vector<cplx> v(g.size());
    for (int j = 0; j < g.size(); ++j) v[j] = fn(g.node(j));
    return PeriodicSamples(g, std::move(v));
  }

  static PeriodicSamples from_real(CircleGrid g, std::span<const double> v) {
    return PeriodicSamples(g, std::vector<cplx>(v.begin(), v.end()));
  }

  int size() const noexcept { return grid.size(); }
  const cplx& operator[](int j) const { return values[j]; }
};

/// Discrete Fourier coefficients c_k, k = -N/2 .. N/2-1, with
/// v(t_j) = sum_k c_k e^{i k t_j}.
class LaurentCoeffs {
 public:
  explicit LaurentCoeffs(std::vector<cplx> natural_order) : c_(std::move(natural_order)) {}

  int size() const noexcept { return static_cast<int>(c_.size()); }
  int min_index() const noexcept { return -size() / 2; }
  int max_index() const noexcept { return size() / 2 - 1; }

  /// Coefficient of index k; zero outside the stored band.
  cplx operator[](int k) const {
    if (k < min_index() || k > max_index()) return {0.0, 0.0};
    return c_[k + size() / 2];
  }
  cplx& at(int k) { return c_.at(k + size() / 2); }

  const std::vector<cplx>& data() const noexcept { return c_; }

  /// Trigonometric interpolant at an arbitrary angle; the Nyquist term is
  /// split symmetrically so that real data interpolates to real values.
  cplx interpolate(double x) const {
    const int n = size();
    cplx sum = c_[0] * std::cos(0.5 * n * x);
    for (int k = min_index() + 1; k <= max_index(); ++k) sum += (*this)[k] * std::polar(1.0, k * x);
    return sum;
  }

  /// Boundary-value synthesis sum_k c_k z^k restricted to k >= 0, i.e. the
  /// analytic continuation into the disk of samples that have no negative modes.
  cplx taylor_eval(cplx z) const {
    cplx acc{0.0, 0.0};
    for (int k = max_index(); k >= 0; --k) acc = acc * z + (*this)[k];
    return acc;
  }
  cplx taylor_derivative(cplx z) const {
    cplx acc{0.0, 0.0};
    for (int k = max_index(); k >= 1; --k) acc = acc * z + static_cast<double>(k) * (*this)[k];
    return acc;
  }

 private:
  std::vector<cplx> c_;
};

inline LaurentCoeffs analyze(const PeriodicSamples& samples) {
  const int n = samples.size();
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, samples.values);
  std::vector<cplx> natural(n);
  for (int k = -n / 2; k < n / 2; ++k) natural[k + n / 2] = spectrum[(k + n) % n] / static_cast<double>(n);
  return LaurentCoeffs(std::move(natural));
}

inline PeriodicSamples synthesize(const LaurentCoeffs& coeffs, const CircleGrid& grid) {
  const int n = grid.size();
  if (coeffs.size() != n) throw DomainError("synthesize: coefficient count does not match grid");
  std::vector<cplx> spectrum(n);
  for (int k = -n / 2; k < n / 2; ++k) spectrum[(k + n) % n] = coeffs[k] * static_cast<double>(n);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> values;
  fft.inv(values, spectrum);
  for (auto& v : values) v /= static_cast<double>(n);
  return PeriodicSamples(grid, std::move(values));
}

/// d/dt of the trigonometric interpolant, sampled on the same grid.
/// The Nyquist mode has no well-defined derivative on the grid and is dropped.
inline PeriodicSamples spectral_derivative(const PeriodicSamples& samples) {
  LaurentCoeffs c = analyze(samples);
  const int n = samples.size();
  c.at(-n / 2) = 0.0;
  for (int k = -n / 2 + 1; k < n / 2; ++k) c.at(k) *= cplx(0.0, k);
  return synthesize(c, samples.grid);
}

/// Antiderivative of the zero-mean part of the samples, normalized to vanish at t = 0.
/// Returns the mean separately so that callers can add the linear term.
inline PeriodicSamples periodic_antiderivative(const PeriodicSamples& samples, cplx* mean = nullptr) {
  LaurentCoeffs c = analyze(samples);
  const int n = samples.size();
  if (mean) *mean = c[0];
  c.at(0) = 0.0;
  c.at(-n / 2) = 0.0;
  for (int k = -n / 2 + 1; k < n / 2; ++k)
    if (k != 0) c.at(k) /= cplx(0.0, k);
  PeriodicSamples out = synthesize(c, samples.grid);
  const cplx base = out.values[0];
  for (auto& v : out.values) v -= base;
  return out;
}

/// Trapezoidal (1/2pi) * integral over [0, 2pi) of the samples.
inline cplx circle_mean(const PeriodicSamples& samples) {
  cplx s{0.0, 0.0};
  for (const auto& v : samples.values) s += v;
  return s / static_cast<double>(samples.size());
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

/// An orientation-preserving circle diffeomorphism, stored through its lift
/// tau(x) = x + p(x) with p periodic and sampled on a grid.
class CircleDiffeo {
 public:
  CircleDiffeo(CircleGrid grid, std::vector<double> periodic_part)
      : grid_(grid), p_(std::move(periodic_part)), coeffs_(std::vector<cplx>{}), dcoeffs_(std::vector<cplx>{}) {
    if (static_cast<int>(p_.size()) != grid_.size()) throw DomainError("CircleDiffeo: sample count mismatch");
    coeffs_ = analyze(PeriodicSamples::from_real(grid_, p_));
    std::vector<cplx> d = coeffs_.data();
    const int n = grid_.size();
    d[0] = 0.0;
    for (int k = -n / 2 + 1; k < n / 2; ++k) d[k + n / 2] *= cplx(0.0, k);
    dcoeffs_ = LaurentCoeffs(std::move(d));
    for (int j = 0; j < n; ++j) {
      if (derivative_at_node(j) <= 0.0) {
        throw ValidationError("CircleDiffeo: lift is not increasing at node " + std::to_string(j));
      }
    }
  }

  static CircleDiffeo identity(CircleGrid grid) { return {grid, std::vector<double>(grid.size(), 0.0)}; }
  static CircleDiffeo rotation(CircleGrid grid, double angle) {
    return {grid, std::vector<double>(grid.size(), angle)};
  }

  const CircleGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& periodic_part() const noexcept { return p_; }

  double periodic(double x) const { return coeffs_.interpolate(x).real(); }
  double operator()(double x) const { return x + periodic(x); }
  double derivative(double x) const { return 1.0 + dcoeffs_.interpolate(x).real(); }

  double at_node(int j) const { return grid_.node(j) + p_[j]; }
  double derivative_at_node(int j) const { return 1.0 + dcoeffs_.interpolate(grid_.node(j)).real(); }

  /// tau(t_j) for all nodes.
  std::vector<double> lift_samples() const {
    std::vector<double> tau(grid_.size());
    for (int j = 0; j < grid_.size(); ++j) tau[j] = at_node(j);
    return tau;
  }

  /// The circle map itself, e^{ix} -> e^{i tau(x)}.
  cplx apply(double x) const { return std::polar(1.0, (*this)(x)); }

  /// Post-composition with the rotation by `angle`.
  CircleDiffeo rotated(double angle) const {
    std::vector<double> p = p_;
    for (auto& v : p) v += angle;
    return {grid_, std::move(p)};
  }

 private:
  CircleGrid grid_;
  std::vector<double> p_;
  LaurentCoeffs coeffs_;
  LaurentCoeffs dcoeffs_;
};

/// Continuous argument unwrapping of unit-modulus samples into a monotone lift.
inline CircleDiffeo lift_circle_map(const PeriodicSamples& samples) {
  const int n = samples.size();
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::abs(samples[j]) - 1.0) > 1e-8) {
      throw DomainError("lift_circle_map: sample " + std::to_string(j) + " is not on the unit circle");
    }
  }
  std::vector<double> tau(n + 1);
  tau[0] = std::arg(samples[0]);
  for (int j = 1; j <= n; ++j) {
    const double step = wrap_angle(std::arg(samples[j % n]) - std::arg(samples[j - 1]));
    if (step <= 0.0) {
      throw ValidationError("lift_circle_map: argument decreases between nodes " + std::to_string(j - 1) +
                            " and " + std::to_string(j % n) + "; map is not orientation preserving on this grid");
    }
    tau[j] = tau[j - 1] + step;
  }
  if (std::abs(tau[n] - tau[0] - kTwoPi) > 1e-9) {
    throw ValidationError("lift_circle_map: samples do not describe a degree-one circle map");
  }
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = tau[j] - samples.grid.node(j);
  return {samples.grid, std::move(p)};
}

/// Solves tau(y) = x for y by bracketed Newton with bisection fallback.
inline double solve_lift(const CircleDiffeo& d, double x, double tol = 1e-12) {
  const auto [pmin, pmax] = std::minmax_element(d.periodic_part().begin(), d.periodic_part().end());
  double lo = x - *pmax - 0.25;
  double hi = x - *pmin + 0.25;
  while (d(lo) > x) lo -= 1.0;
  while (d(hi) < x) hi += 1.0;
  double y = std::clamp(x - d.periodic(x), lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double r = d(y) - x;
    if (std::abs(r) <= tol) return y;
    if (r > 0) hi = y; else lo = y;
    double next = y - r / d.derivative(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    y = next;
    if (hi - lo < 1e-15) return y;
  }
  return y;
}

inline CircleDiffeo invert_diffeo(const CircleDiffeo& d) {
  const CircleGrid& g = d.grid();
  std::vector<double> q(g.size());
  for (int j = 0; j < g.size(); ++j) q[j] = solve_lift(d, g.node(j)) - g.node(j);
  return {g, std::move(q)};
}

/// Lift of outer o inner, sampled on the grid of `inner`.
inline CircleDiffeo compose(const CircleDiffeo& outer, const CircleDiffeo& inner) {
  const CircleGrid& g = inner.grid();
  std::vector<double> p(g.size());
  for (int j = 0; j < g.size(); ++j) p[j] = outer(inner.at_node(j)) - g.node(j);
  return {g, std::move(p)};
}

/// Sup over nodes of |tau(t_j) - t_j - shift|.
inline double distance_to_rotation(const CircleDiffeo& d, double shift = 0.0) {
  double m = 0.0;
  for (double p : d.periodic_part()) m = std::max(m, std::abs(p - shift));
  return m;
}

}  // namespace weldkit
