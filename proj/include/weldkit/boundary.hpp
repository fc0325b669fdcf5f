#pragma once
//
// How a conformal map f of the unit disk enters the toolkit, plus the
// closed-form catalog used as oracles: identity, Moebius maps, the
// elliptic-sine map onto an ellipse with foci +-1, the Joukowski exterior map
// of that ellipse and the quadratic-differential kernel functions.

#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/kernel_function.hpp>
#include <weldkit/specialfn.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace weldkit {

enum class MapSource { closed_form, taylor, samples };

/// class_s: f(0) = 0, f'(0) = 1.  catalog: f(0) = 0 with the catalog entry's own scale.
enum class Normalization { class_s, catalog };

class BoundaryMap {
 public:
  using Fn = std::function<cplx(cplx)>;

  BoundaryMap(std::string id, Fn f, Fn df, MapSource source, Normalization norm)
      : id_(std::move(id)), f_(std::move(f)), df_(std::move(df)), source_(source), norm_(norm) {}

  cplx operator()(cplx z) const { return f_(z); }
  cplx derivative(cplx z) const { return df_(z); }

  const std::string& id() const noexcept { return id_; }
  MapSource source() const noexcept { return source_; }
  Normalization normalization() const noexcept { return norm_; }

  PeriodicSamples boundary(const CircleGrid& grid) const {
    std::vector<cplx> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = f_(grid.point(j));
    return {grid, std::move(v)};
  }
  PeriodicSamples boundary_derivative(const CircleGrid& grid) const {
    std::vector<cplx> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = df_(grid.point(j));
    return {grid, std::move(v)};
  }

 private:
  std::string id_;
  Fn f_;
  Fn df_;
  MapSource source_;
  Normalization norm_;
};

namespace detail {

inline double orientation(cplx a, cplx b, cplx c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

inline bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = orientation(q1, q2, p1);
  const double d2 = orientation(q1, q2, p2);
  const double d3 = orientation(p1, p2, q1);
  const double d4 = orientation(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace detail

/// Winding number of the closed polygon through `curve` about `p`.
inline int winding_number(std::span<const cplx> curve, cplx p) {
  double total = 0.0;
  const std::size_t n = curve.size();
  for (std::size_t j = 0; j < n; ++j) total += wrap_angle(std::arg(curve[(j + 1) % n] - p) - std::arg(curve[j] - p));
  return static_cast<int>(std::lround(total / kTwoPi));
}

/// True when no two non-adjacent edges of the closed polygon intersect.
inline bool polygon_is_simple(std::span<const cplx> curve) {
  const std::size_t n = curve.size();
  std::vector<std::array<double, 4>> box(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = curve[j], b = curve[(j + 1) % n];
    box[j] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()), std::min(a.imag(), b.imag()),
              std::max(a.imag(), b.imag())};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (box[i][1] < box[j][0] || box[j][1] < box[i][0] || box[i][3] < box[j][2] || box[j][3] < box[i][2]) continue;
      if (detail::segments_cross(curve[i], curve[(i + 1) % n], curve[j], curve[(j + 1) % n])) return false;
    }
  }
  return true;
}

struct MapDiagnostics {
  double origin_value = 0.0;        // |f(0)|
  double derivative_defect = 0.0;   // |f'(0) - 1| (class S only)
  double min_boundary_derivative = 0.0;  // min_j |f'(s_j)| / max_j |f'(s_j)|
  bool probes_wound_once = true;
  bool boundary_simple = true;
};

inline MapDiagnostics diagnose(const BoundaryMap& f, const CircleGrid& grid) {
  MapDiagnostics d;
  d.origin_value = std::abs(f(0.0));
  if (f.normalization() == Normalization::class_s) d.derivative_defect = std::abs(f.derivative(0.0) - 1.0);
  const PeriodicSamples curve = f.boundary(grid);
  const PeriodicSamples deriv = f.boundary_derivative(grid);
  double lo = INFINITY, hi = 0.0;
  for (const auto& v : deriv.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  d.min_boundary_derivative = hi > 0.0 ? lo / hi : 0.0;
  for (int k = 0; k < 8; ++k) {
    const cplx probe = f(std::polar(0.5, kTwoPi * k / 8.0));
    if (winding_number(curve.values, probe) != 1) d.probes_wound_once = false;
  }
  d.boundary_simple = polygon_is_simple(curve.values);
  return d;
}

/// Throws ValidationError unless f satisfies the BoundaryMap invariants on `grid`.
inline void validate(const BoundaryMap& f, const CircleGrid& grid, double normalization_tol = 1e-10) {
  const MapDiagnostics d = diagnose(f, grid);
  if (d.origin_value > normalization_tol) throw ValidationError(f.id() + ": f(0) != 0");
  if (d.derivative_defect > normalization_tol) throw ValidationError(f.id() + ": f'(0) != 1");
  if (d.min_boundary_derivative < 1e-10) throw ValidationError(f.id() + ": f' vanishes on the boundary grid");
  if (!d.probes_wound_once) throw ValidationError(f.id() + ": boundary winding check failed");
  if (!d.boundary_simple) throw ValidationError(f.id() + ": boundary curve self-intersects");
}

inline BoundaryMap identity_map() {
  return {"identity", [](cplx z) { return z; }, [](cplx) { return cplx(1.0, 0.0); }, MapSource::closed_form,
          Normalization::class_s};
}

/// f(z) = z + c_2 z^2 + ... ; requires c_0 = 0, c_1 = 1 and a simple boundary curve.
inline BoundaryMap from_taylor(std::vector<cplx> coeffs, const CircleGrid& check_grid = CircleGrid(512)) {
  if (coeffs.size() < 2 || std::abs(coeffs[0]) > 1e-12 || std::abs(coeffs[1] - 1.0) > 1e-12) {
    throw ValidationError("from_taylor: coefficients must start with c0 = 0, c1 = 1");
  }
  const Polynomial p(coeffs);
  const Polynomial dp = p.derivative();
  BoundaryMap f("taylor", [p](cplx z) { return p(z); }, [dp](cplx z) { return dp(z); }, MapSource::taylor,
                Normalization::class_s);
  validate(f, check_grid);
  return f;
}

/// Analytic continuation of boundary samples through their nonnegative Fourier modes.
inline BoundaryMap from_samples(const PeriodicSamples& boundary, Normalization norm = Normalization::class_s,
                                double normalization_tol = 1e-10) {
  const LaurentCoeffs c = analyze(boundary);
  double neg = 0.0, scale = 0.0;
  for (int k = c.min_index(); k <= c.max_index(); ++k) {
    scale = std::max(scale, std::abs(c[k]));
    if (k < 0) neg = std::max(neg, std::abs(c[k]));
  }
  if (neg > 1e-8 * scale) {
    throw ValidationError("from_samples: boundary samples carry negative Fourier modes (" + std::to_string(neg) +
                          "); not the trace of a function analytic in the disk");
  }
  BoundaryMap f("samples", [c](cplx z) { return c.taylor_eval(z); }, [c](cplx z) { return c.taylor_derivative(z); },
                MapSource::samples, norm);
  validate(f, boundary.grid, normalization_tol);
  return f;
}

/// f(z) = z / (1 - c z); the image is a disk.
inline BoundaryMap moebius_map(cplx c) {
  if (!(std::abs(c) < 1.0)) throw DomainError("moebius_map: |c| must be < 1");
  return {"moebius", [c](cplx z) { return z / (1.0 - c * z); },
          [c](cplx z) {
            const cplx d = 1.0 - c * z;
            return 1.0 / (d * d);
          },
          MapSource::closed_form, Normalization::class_s};
}

/// f(z) = sin(pi F(z/r, r^2) / (2 K(r^2))), mapping the disk onto the interior
/// of an ellipse with foci +-1 and sending the critical points +-r to the foci.
/// Keeps the catalog normalization (f'(0) = pi / (2 r K(r^2)) > 0).
inline BoundaryMap ellipse_map(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("ellipse_map: r must lie in (0, 1)");
  const double k = r * r;
  const double big_k = elliptic_k(k);
  const double scale = kPi / (2.0 * big_k);
  auto f = [=](cplx z) {
    const cplx q = z / r;
    if (q * q == 1.0) return q;  // the critical points map to the foci
    return std::sin(scale * elliptic_f(q, k));
  };
  auto df = [=](cplx z) {
    const cplx q = z / r;
    const cplx x = 1.0 - q * q;
    const cplx y = 1.0 - k * k * q * q;
    if (std::abs(x) < 1e-14) {
      // limit of cos(scale F) * F'(q) at q = +-1
      return cplx(scale * scale / ((1.0 - k * k) * r), 0.0);
    }
    const cplx big_f = z == 0.0 ? cplx(0.0) : q * carlson_rf(x, y, 1.0);
    return std::cos(scale * big_f) * scale / (std::sqrt(x) * std::sqrt(y) * r);
  };
  return {"ellipse", f, df, MapSource::closed_form, Normalization::catalog};
}

/// phi(zeta) = beta_1 zeta + beta_0 + sum_{k>=1} beta_{-k} zeta^{-k}, analytic
/// outside the closed disk with a simple pole at infinity.
class ExteriorMap {
 public:
  /// beta[i] is the coefficient of zeta^{1-i}.
  explicit ExteriorMap(std::vector<cplx> beta) : beta_(std::move(beta)) {
    if (beta_.empty() || beta_[0] == 0.0) throw ValidationError("ExteriorMap: capacity beta_1 must be nonzero");
  }

  /// Keeps the indices k <= 1 of boundary Fourier coefficients.
  static ExteriorMap from_laurent(const LaurentCoeffs& c) {
    std::vector<cplx> beta;
    for (int k = 1; k >= c.min_index(); --k) beta.push_back(c[k]);
    return ExteriorMap(std::move(beta));
  }

  cplx capacity() const noexcept { return beta_[0]; }
  int lowest_index() const noexcept { return 2 - static_cast<int>(beta_.size()); }
  cplx coefficient(int k) const {
    if (k > 1 || k < lowest_index()) return {0.0, 0.0};
    return beta_[1 - k];
  }
  const std::vector<cplx>& beta() const noexcept { return beta_; }

  cplx operator()(cplx zeta) const {
    cplx acc{0.0, 0.0};
    const cplx inv = 1.0 / zeta;
    for (std::size_t i = beta_.size(); i-- > 1;) acc = acc * inv + beta_[i];
    return acc + beta_[0] * zeta;
  }

  PeriodicSamples boundary(const CircleGrid& grid) const {
    std::vector<cplx> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = (*this)(grid.point(j));
    return {grid, std::move(v)};
  }

 private:
  std::vector<cplx> beta_;
};

/// phi(zeta) = (c zeta + 1/(c zeta)) / 2 with c = (1 + sqrt(1 - lambda^2)) / lambda:
/// the exterior map of the ellipse with foci +-1 and eccentricity lambda.
inline ExteriorMap joukowski_exterior(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("joukowski_exterior: lambda must lie in (0, 1)");
  const double c = (1.0 + std::sqrt(1.0 - lambda * lambda)) / lambda;
  return ExteriorMap({0.5 * c, 0.0, 0.5 / c});
}

/// v0(z) = 2 K(r^2) |r^2 - z^2| / pi, the kernel function of ellipse_map(r).
inline KernelFunction ellipse_kernel(double r, const CircleGrid& grid) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("ellipse_kernel: r must lie in (0, 1)");
  const double c = 2.0 * elliptic_k(r * r) / kPi;
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const cplx z = grid.point(j);
    v[j] = c * std::abs(r * r - z * z);
  }
  return {grid, std::move(v)};
}

namespace detail {
inline std::vector<double> quad_diff_product(int n, double r, const CircleGrid& grid) {
  if (n < 1) throw DomainError("quad_diff_kernel: n must be >= 1");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("quad_diff_kernel: r must lie in (0, 1)");
  std::vector<double> prod(grid.size(), 1.0);
  for (int j = 0; j < grid.size(); ++j) {
    const cplx z = grid.point(j);
    for (int k = 0; k < n; ++k) prod[j] *= std::abs(z - std::polar(r, kTwoPi * k / n));
  }
  return prod;
}
}  // namespace detail

/// The constant kappa of Z(z) dz^2 fixed by int dt / v0 = 2 pi.
inline double quad_diff_kappa(int n, double r, const CircleGrid& grid) {
  const std::vector<double> prod = detail::quad_diff_product(n, r, grid);
  double mean_inv = 0.0;
  for (double p : prod) mean_inv += 1.0 / p;
  mean_inv /= grid.size();
  // sqrt(kappa / r^n) = mean_inv
  return std::pow(r, n) * mean_inv * mean_inv;
}

/// v0(z) = sqrt(kappa / r^n) prod_k |z - r e^{2 pi i k / n}| on the unit circle.
inline KernelFunction quad_diff_kernel(int n, double r, const CircleGrid& grid) {
  std::vector<double> v = detail::quad_diff_product(n, r, grid);
  const double factor = std::sqrt(quad_diff_kappa(n, r, grid) / std::pow(r, n));
  for (double& x : v) x *= factor;
  return {grid, std::move(v), true};
}

/// Circle through three points: center and radius.
struct Circle {
  cplx center;
  double radius;
};

inline Circle circumcircle(cplx a, cplx b, cplx c) {
  const double d = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                          c.real() * (a.imag() - b.imag()));
  if (d == 0.0) throw DomainError("circumcircle: points are collinear");
  const double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
  const double ux = (a2 * (b.imag() - c.imag()) + b2 * (c.imag() - a.imag()) + c2 * (a.imag() - b.imag())) / d;
  const double uy = (a2 * (c.real() - b.real()) + b2 * (a.real() - c.real()) + c2 * (b.real() - a.real())) / d;
  const cplx m(ux, uy);
  return {m, std::abs(a - m)};
}

}  // namespace weldkit
