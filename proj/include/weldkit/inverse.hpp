#pragma once
//
// Reconstruction of f from a kernel function that is a trigonometric
// polynomial of degree n,
//
//   v0(z) = a_0 + sum_k (a_k z^k + conj(a_k) z^{-k})
//         = kappa prod_k (e^{-i t_k} / z)(r_k e^{i t_k} - z)(z - e^{i t_k} / r_k),
//
// through the images w_k = f(z_k) of the roots inside the disk and the
// separable equation w^{n-1} dw / P(w) = z^{n-1} dz / Q(z), Q(z) = z^n v0(z),
// P(w) = prod (w - w_k).

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/kernel.hpp>
#include <weldkit/kernel_function.hpp>
#include <weldkit/specialfn.hpp>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace weldkit {

/// Degree-n trigonometric polynomial kernel function in coefficient and root form.
struct TrigPolyV0 {
  int n;
  /// a_0 (real) .. a_n; a_{-k} = conj(a_k) is implied.
  std::vector<cplx> a;
  /// The roots z_k of Q inside the disk, in the order they were given or found.
  std::vector<cplx> roots;
  double kappa;
  /// Q(z) = z^n v0(z), degree 2n.
  Polynomial q_poly;
  CircleGrid grid;
  /// Factor applied to the input coefficients to reach int dt / v0 = 2 pi (1 when already normalized).
  double rescale = 1.0;

  /// v0(e^{it})
  double value(double t) const {
    double s = a[0].real();
    for (int k = 1; k <= n; ++k) s += 2.0 * (a[k] * std::polar(1.0, k * t)).real();
    return s;
  }

  KernelFunction kernel() const {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = value(grid.node(j));
    return {grid, std::move(v), true};
  }

  static TrigPolyV0 from_coeffs(std::vector<cplx> a, const CircleGrid& grid);
  static TrigPolyV0 from_roots(const std::vector<cplx>& roots, const CircleGrid& grid);
};

namespace detail {

inline Polynomial q_from_coeffs(const std::vector<cplx>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<cplx> q(2 * n + 1);
  q[n] = a[0].real();
  for (int k = 1; k <= n; ++k) {
    q[n + k] = a[k];
    q[n - k] = std::conj(a[k]);
  }
  return Polynomial(std::move(q));
}

/// Mean over the grid of 1 / v0.
inline double mean_inverse(const TrigPolyV0& v) {
  double s = 0.0;
  for (int j = 0; j < v.grid.size(); ++j) s += 1.0 / v.value(v.grid.node(j));
  return s / v.grid.size();
}

}  // namespace detail

inline TrigPolyV0 TrigPolyV0::from_coeffs(std::vector<cplx> a, const CircleGrid& grid) {
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  if (a.size() < 2) throw DomainError("TrigPolyV0: degree must be at least 1 (constant v0 is the rotation case)");
  if (std::abs(a[0].imag()) > 1e-12 * std::max(1.0, std::abs(a[0]))) {
    throw ValidationError("TrigPolyV0: a_0 must be real");
  }
  a[0] = a[0].real();
  const int n = static_cast<int>(a.size()) - 1;
  TrigPolyV0 v{n, a, {}, 0.0, detail::q_from_coeffs(a), grid, 1.0};

  for (int j = 0; j < grid.size(); ++j) {
    if (!(v.value(grid.node(j)) > 0.0)) {
      throw ValidationError("TrigPolyV0: v0 is not positive at node " + std::to_string(j));
    }
  }

  const RootSet all = poly_roots(v.q_poly);
  for (const cplx& z : all.roots) {
    if (std::abs(std::abs(z) - 1.0) < 1e-6) throw ValidationError("TrigPolyV0: a root of Q lies on the unit circle");
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all.roots[i] - all.roots[j]) < 1e-6) {
        throw ValidationError("TrigPolyV0: Q has a multiple root; only simple roots are supported");
      }
  for (const cplx& z : all.roots)
    if (std::abs(z) < 1.0) v.roots.push_back(z);
  if (static_cast<int>(v.roots.size()) != n) throw ValidationError("TrigPolyV0: roots of Q are not paired across the circle");
  v.kappa = std::abs(a[n]);

  const double m = detail::mean_inverse(v);
  if (std::abs(kTwoPi * m - kTwoPi) > 1e-9) {
    for (auto& c : v.a) c *= m;
    v.q_poly = detail::q_from_coeffs(v.a);
    v.kappa *= m;
    v.rescale = m;
  }
  return v;
}

inline TrigPolyV0 TrigPolyV0::from_roots(const std::vector<cplx>& roots, const CircleGrid& grid) {
  const int n = static_cast<int>(roots.size());
  if (n < 1) throw DomainError("TrigPolyV0: at least one root is required");
  for (const cplx& z : roots) {
    if (!(std::abs(z) > 0.0 && std::abs(z) < 1.0)) throw DomainError("TrigPolyV0: roots must satisfy 0 < |z_k| < 1");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6) throw DomainError("TrigPolyV0: coincident roots");

  // kappa from the normalization quadrature of prod |z - z_k|^2 / r_k
  double mean_inv = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    double p = 1.0;
    for (const cplx& zk : roots) p *= std::norm(grid.point(j) - zk) / std::abs(zk);
    mean_inv += 1.0 / p;
  }
  const double kappa = mean_inv / grid.size();

  std::vector<cplx> all(roots);
  cplx lead = kappa * (n % 2 == 0 ? 1.0 : -1.0);
  for (const cplx& zk : roots) {
    all.push_back(1.0 / std::conj(zk));
    lead *= std::conj(zk) / std::abs(zk);
  }
  const Polynomial q = Polynomial::from_roots(all, lead);
  std::vector<cplx> a(n + 1);
  for (int k = 0; k <= n; ++k) a[k] = q.coeffs()[n + k];
  a[0] = a[0].real();
  return TrigPolyV0{n, a, roots, kappa, detail::q_from_coeffs(a), grid, 1.0};
}

/// A_k = Res_{z = z_k} z^{n-1} / Q(z).
inline std::vector<cplx> residues(const TrigPolyV0& v) {
  std::vector<cplx> out;
  for (const cplx& z : v.roots) out.push_back(simple_residue(v.n - 1, v.q_poly, z));
  return out;
}

struct WkOptions {
  int attempts = 32;
  std::uint64_t seed = 42;
  int max_iterations = 80;
};

namespace detail {

/// Residuals of w_k^{n-1} / prod_{j != k}(w_k - w_j) - A_k for every k.
inline std::vector<cplx> wk_equations(const std::vector<cplx>& w, const std::vector<cplx>& a) {
  const std::size_t n = w.size();
  std::vector<cplx> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx den = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) den *= w[k] - w[j];
    g[k] = std::pow(w[k], static_cast<int>(n) - 1) / den - a[k];
  }
  return g;
}

inline cplx product(const std::vector<cplx>& w) {
  cplx p = 1.0;
  for (const cplx& x : w) p *= x;
  return p;
}

/// Equations 1..n-1 of the residue system plus the product constraint scaled by its target.
inline Eigen::VectorXcd wk_system(const std::vector<cplx>& w, const std::vector<cplx>& a, cplx target) {
  const int n = static_cast<int>(w.size());
  const std::vector<cplx> g = wk_equations(w, a);
  Eigen::VectorXcd f(n);
  for (int k = 0; k < n - 1; ++k) f(k) = g[k];
  f(n - 1) = product(w) / target - 1.0;
  return f;
}

inline Eigen::MatrixXcd wk_jacobian(const std::vector<cplx>& w, const std::vector<cplx>& a, cplx target) {
  const int n = static_cast<int>(w.size());
  const std::vector<cplx> g = wk_equations(w, a);
  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    const cplx gk = g[k] + a[k];
    cplx diag = static_cast<double>(n - 1) / w[k];
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      diag -= 1.0 / (w[k] - w[j]);
      jac(k, j) = gk / (w[k] - w[j]);
    }
    jac(k, k) = gk * diag;
  }
  const cplx p = product(w) / target;
  for (int j = 0; j < n; ++j) jac(n - 1, j) = p / w[j];
  return jac;
}

inline bool newton_wk(std::vector<cplx>& w, const std::vector<cplx>& a, cplx target, int max_iterations) {
  const int n = static_cast<int>(w.size());
  Eigen::VectorXcd f = wk_system(w, a, target);
  double norm = f.norm();
  for (int it = 0; it < max_iterations && std::isfinite(norm); ++it) {
    if (norm <= 1e-14) return true;
    const Eigen::VectorXcd step = wk_jacobian(w, a, target).partialPivLu().solve(f);
    if (!step.allFinite()) return false;
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      std::vector<cplx> trial(w);
      for (int k = 0; k < n; ++k) trial[k] -= lambda * step(k);
      const Eigen::VectorXcd ft = wk_system(trial, a, target);
      if (ft.allFinite() && ft.norm() < norm) {
        w = std::move(trial);
        f = ft;
        norm = ft.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return norm <= 1e-12;
}

}  // namespace detail

/// Newton solutions of the residue system from multi-start guesses, each
/// checked against every residue equation (1e-9), the product constraint
/// (1e-8) and mutual distinctness; labels are kept, so permutations of one
/// solution are distinct candidates.
inline std::vector<std::vector<cplx>> solve_wk(const TrigPolyV0& v, const WkOptions& opts = {}) {
  const int n = v.n;
  const std::vector<cplx> a = residues(v);
  const cplx target = (n % 2 == 0 ? 1.0 : -1.0) * v.q_poly(0.0);
  const double scale = std::pow(std::abs(target), 1.0 / n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  const std::array<double, 3> radii{0.5, 1.0, 2.0};

  std::vector<std::vector<cplx>> found;
  for (int attempt = 0; attempt < std::max(opts.attempts, 1); ++attempt) {
    std::vector<cplx> w(n);
    const double rho = radii[attempt % 3] * scale;
    for (int k = 0; k < n; ++k) {
      w[k] = rho * v.roots[k] / std::abs(v.roots[k]);
      if (attempt >= 3) w[k] += 0.5 * scale * cplx(nd(rng), nd(rng));
    }
    if (!detail::newton_wk(w, a, target, opts.max_iterations)) continue;

    bool ok = true;
    for (const cplx& g : detail::wk_equations(w, a)) ok = ok && std::abs(g) <= 1e-9;
    ok = ok && std::abs(detail::product(w) - target) <= 1e-8 * std::max(1.0, std::abs(target));
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = std::abs(w[i] - w[j]) > 1e-6 * scale;
    if (!ok) continue;

    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const std::vector<cplx>& u) {
      for (int k = 0; k < n; ++k)
        if (std::abs(u[k] - w[k]) > 1e-6) return false;
      return true;
    });
    if (!duplicate) found.push_back(std::move(w));
  }
  if (found.empty()) {
    throw NumericalError("solve_wk: no solution of the residue system after " + std::to_string(opts.attempts) +
                         " starts");
  }
  std::sort(found.begin(), found.end(), [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k].real() != y[k].real()) return x[k].real() < y[k].real();
      if (x[k].imag() != y[k].imag()) return x[k].imag() < y[k].imag();
    }
    return false;
  });
  return found;
}

/// Coefficients c_2, c_3 of w = z + c_2 z^2 + c_3 z^3 + ... solving the
/// separable equation near the origin.
struct SeriesSeed {
  cplx c2;
  cplx c3;
};

namespace detail {

/// Taylor coefficients of 1 / p at the origin.
inline std::vector<cplx> reciprocal_series(const Polynomial& p, int terms) {
  const auto& c = p.coeffs();
  if (c[0] == 0.0) throw NumericalError("reciprocal_series: polynomial vanishes at the origin");
  std::vector<cplx> r(terms);
  r[0] = 1.0 / c[0];
  for (int j = 1; j < terms; ++j) {
    cplx s = 0.0;
    for (int i = 1; i <= std::min<int>(j, p.degree()); ++i) s += c[i] * r[j - i];
    r[j] = -s / c[0];
  }
  return r;
}

/// sum_j s_j x^{n+j} / (n+j): the first integral of x^{n-1} times the series s.
inline cplx first_integral(const std::vector<cplx>& s, int n, cplx x) {
  cplx acc = 0.0;
  for (std::size_t j = s.size(); j-- > 0;) acc = acc * x + s[j] / static_cast<double>(n + static_cast<int>(j));
  return acc * std::pow(x, n);
}

}  // namespace detail

inline SeriesSeed series_coeffs(const TrigPolyV0& v, const std::vector<cplx>& w) {
  const Polynomial p = Polynomial::from_roots(w);
  const auto pi = detail::reciprocal_series(p, 3);
  const auto q = detail::reciprocal_series(v.q_poly, 3);
  const double n = v.n;
  const cplx c2 = (q[1] - pi[1]) / ((n + 1) * pi[0]);
  const cplx c3 = ((q[2] - pi[2]) / (n + 2) - pi[1] * c2) / pi[0] - 0.5 * (n - 1) * c2 * c2;
  return {c2, c3};
}

enum class PathMode {
  /// One radial ray per node, detouring along the unit circle when the ray meets a root of Q.
  radial,
  /// A single safe ray to the circle followed by one sweep around it.
  sweep
};

namespace detail {

class SeparableOde {
 public:
  SeparableOde(const TrigPolyV0& v, const std::vector<cplx>& w)
      : v_(v), w_(w), p_(Polynomial::from_roots(w)) {
    double rz = 1.0, rw = std::numeric_limits<double>::infinity();
    for (const cplx& z : v.roots) rz = std::min(rz, std::abs(z));
    for (const cplx& x : w) rw = std::min(rw, std::abs(x));
    seed_radius_ = 0.05 * std::min({1.0, rz, rw});
    pi_ = reciprocal_series(p_, 60);
    q_ = reciprocal_series(v.q_poly, 60);
    seed_ = series_coeffs(v, w);
  }

  double seed_radius() const noexcept { return seed_radius_; }

  /// dw/dz
  cplx slope(cplx z, cplx w) const {
    const int n = v_.n;
    return std::pow(z, n - 1) * p_(w) / (v_.q_poly(z) * std::pow(w, n - 1));
  }

  /// f(z) for |z| = seed radius: series value polished by Newton on the first integral.
  cplx seed(cplx z) const {
    cplx w = z * (1.0 + z * (seed_.c2 + z * seed_.c3));
    const cplx target = first_integral(q_, v_.n, z);
    for (int it = 0; it < 50; ++it) {
      const cplx step = (first_integral(pi_, v_.n, w) - target) * p_(w) / std::pow(w, v_.n - 1);
      w -= step;
      if (std::abs(step) <= 1e-16 * std::abs(w)) break;
    }
    return w;
  }

  /// Integrates along z(s), s in [0, 1], from w0, reporting w at each requested s.
  std::vector<cplx> integrate(const std::function<cplx(double)>& path, const std::function<cplx(double)>& dpath,
                              cplx w0, std::vector<double> times) const {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    auto rhs = [&](const State& y, State& dy, double s) {
      const cplx d = slope(path(s), cplx(y[0], y[1])) * dpath(s);
      dy[0] = d.real();
      dy[1] = d.imag();
    };
    std::vector<cplx> out;
    out.reserve(times.size());
    State y{w0.real(), w0.imag()};
    try {
      odeint::integrate_times(odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>()), rhs, y,
                              times.begin(), times.end(), 1e-3,
                              [&](const State& s, double) { out.emplace_back(s[0], s[1]); },
                              odeint::max_step_checker(200000));
    } catch (const std::exception& e) {
      throw NumericalError(std::string("integrate_f: path integration failed (") + e.what() + ")");
    }
    for (const cplx& x : out)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw NumericalError("integrate_f: solution diverged");
    return out;
  }

  /// Smallest distance from the ray at angle theta (from the seed radius to 1) to a root z_k.
  double ray_clearance(double theta) const {
    const cplx dir = std::polar(1.0, theta);
    double m = std::numeric_limits<double>::infinity();
    for (const cplx& z : v_.roots) {
      const double s = std::clamp((z * std::conj(dir)).real(), seed_radius_, 1.0);
      m = std::min(m, std::abs(z - s * dir));
    }
    return m;
  }

  /// Nearest angle to theta whose ray keeps a clearance of at least `clearance`.
  double safe_angle(double theta, double clearance) const {
    if (ray_clearance(theta) >= clearance) return theta;
    for (int k = 1; k <= 200; ++k) {
      for (double sign : {1.0, -1.0}) {
        const double t = theta + sign * 0.01 * k;
        if (ray_clearance(t) >= clearance) return t;
      }
    }
    throw NumericalError("integrate_f: no ray avoids the roots of Q");
  }

  /// w at e^{i theta} along the ray at angle `ray`, then along the unit circle to theta.
  cplx along_ray(double ray, double theta) const {
    const double r0 = seed_radius_;
    const cplx dir = std::polar(1.0, ray);
    const cplx start = seed(r0 * dir);
    const cplx end = integrate([&](double s) { return (r0 + s * (1.0 - r0)) * dir; },
                               [&](double) { return (1.0 - r0) * dir; }, start, {0.0, 1.0})
                         .back();
    if (ray == theta) return end;
    const double span = theta - ray;
    return integrate([&](double s) { return std::polar(1.0, ray + s * span); },
                     [&](double s) { return cplx(0.0, span) * std::polar(1.0, ray + s * span); }, end, {0.0, 1.0})
        .back();
  }

 private:
  const TrigPolyV0& v_;
  std::vector<cplx> w_;
  Polynomial p_;
  double seed_radius_;
  std::vector<cplx> pi_, q_;
  SeriesSeed seed_;
};

/// Analytic continuation of boundary samples without the univalence gate.
inline BoundaryMap continue_boundary(const PeriodicSamples& boundary, std::string id) {
  const LaurentCoeffs c = analyze(boundary);
  return {std::move(id), [c](cplx z) { return c.taylor_eval(z); }, [c](cplx z) { return c.taylor_derivative(z); },
          MapSource::samples, Normalization::class_s};
}

/// Rays closer than this to a root of Q are replaced by a detour.
inline constexpr double kRayClearance = 0.05;

}  // namespace detail

/// Boundary samples of f on v.grid by integrating the separable equation from
/// a series seed near the origin, continued into the disk by their Taylor part.
inline BoundaryMap integrate_f(const TrigPolyV0& v, const std::vector<cplx>& w, PathMode mode = PathMode::radial) {
  if (static_cast<int>(w.size()) != v.n) throw DomainError("integrate_f: need one w_k per root");
  const detail::SeparableOde ode(v, w);
  const CircleGrid& g = v.grid;
  std::vector<cplx> samples(g.size());
  if (mode == PathMode::radial) {
    for (int j = 0; j < g.size(); ++j) {
      const double theta = g.node(j);
      samples[j] = ode.along_ray(ode.safe_angle(theta, detail::kRayClearance), theta);
    }
  } else {
    const double ray = ode.safe_angle(0.5 * g.step(), detail::kRayClearance);
    const cplx start = ode.along_ray(ray, ray);
    // sweep s in [0, 1] maps to angle ray + 2 pi s; node j sits at s_j
    std::vector<double> times;
    for (int k = 0; k < g.size(); ++k) {
      double s = (g.node(k) - ray) / kTwoPi;
      s -= std::floor(s);
      times.push_back(s);
    }
    std::vector<int> order(g.size());
    for (int k = 0; k < g.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return times[x] < times[y]; });
    std::vector<double> sorted{0.0};
    for (int k : order) sorted.push_back(times[k]);
    const auto out = ode.integrate([&](double s) { return std::polar(1.0, ray + kTwoPi * s); },
                                   [&](double s) { return cplx(0.0, kTwoPi) * std::polar(1.0, ray + kTwoPi * s); },
                                   start, sorted);
    for (int k = 0; k < g.size(); ++k) samples[order[k]] = out[k + 1];
  }
  std::ostringstream id;
  id << "inverse(n=" << v.n << ")";
  return detail::continue_boundary(PeriodicSamples(g, std::move(samples)), id.str());
}

struct InverseOptions {
  WkOptions wk{};
  KernelOptions kernel{};
  /// Maximum sup distance between solve_v0 of the recovered f and the input v0.
  double residual_tol = 1e-5;
};

struct CandidateReport {
  std::vector<cplx> w;
  bool integrated = false;
  bool univalent = false;
  /// sup_j |v0_hat - v0|; infinity when not computed
  double residual = std::numeric_limits<double>::infinity();
  /// max_k |f(z_k) - w_k|
  double label_defect = std::numeric_limits<double>::infinity();
  std::string note;
};

struct InverseSolution {
  std::vector<cplx> w;
  Polynomial p_poly;
  BoundaryMap f_map;
  bool univalent;
  double residual;
  double label_defect;
  std::vector<CandidateReport> candidates;
};

namespace detail {

inline bool is_univalent(const BoundaryMap& f, const CircleGrid& grid) {
  const LaurentCoeffs c = analyze(f.boundary(grid));
  double neg = 0.0, scale = 0.0;
  for (int k = c.min_index(); k <= c.max_index(); ++k) {
    scale = std::max(scale, std::abs(c[k]));
    if (k < 0) neg = std::max(neg, std::abs(c[k]));
  }
  if (!(neg <= 1e-8 * scale)) return false;
  const MapDiagnostics d = diagnose(f, grid);
  return d.probes_wound_once && d.boundary_simple && d.min_boundary_derivative > 1e-10 &&
         d.origin_value <= 1e-8 && d.derivative_defect <= 1e-8;
}

}  // namespace detail

/// solve_wk, integrate each candidate, keep the univalent ones whose kernel
/// function reproduces v0, and return the unique survivor.
inline InverseSolution reconstruct(const TrigPolyV0& v, const InverseOptions& opts = {}) {
  const std::vector<std::vector<cplx>> candidates = solve_wk(v, opts.wk);
  const KernelFunction target = v.kernel();
  std::vector<CandidateReport> reports;
  std::vector<BoundaryMap> maps;
  std::vector<std::size_t> survivors;

  for (const auto& w : candidates) {
    CandidateReport rep;
    rep.w = w;
    try {
      BoundaryMap f = integrate_f(v, w);
      rep.integrated = true;
      rep.univalent = detail::is_univalent(f, v.grid);
      if (rep.univalent) {
        const KernelFunction vh = solve_v0(f, v.grid, opts.kernel);
        rep.residual = 0.0;
        for (int j = 0; j < v.grid.size(); ++j) rep.residual = std::max(rep.residual, std::abs(vh[j] - target[j]));
        rep.label_defect = 0.0;
        for (int k = 0; k < v.n; ++k) rep.label_defect = std::max(rep.label_defect, std::abs(f(v.roots[k]) - w[k]));
      }
      maps.push_back(std::move(f));
    } catch (const Error& e) {
      rep.note = e.what();
      maps.push_back(identity_map());
    }
    if (rep.univalent && rep.residual <= opts.residual_tol) survivors.push_back(reports.size());
    reports.push_back(std::move(rep));
  }

  // permuted labelings share P(w) and hence the map; keep the best-labeled one
  std::sort(survivors.begin(), survivors.end(), [&](std::size_t x, std::size_t y) {
    if (reports[x].label_defect != reports[y].label_defect) return reports[x].label_defect < reports[y].label_defect;
    return reports[x].residual < reports[y].residual;
  });
  std::vector<std::size_t> distinct;
  for (std::size_t s : survivors) {
    const PeriodicSamples b = maps[s].boundary(v.grid);
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](std::size_t d) {
      const PeriodicSamples c = maps[d].boundary(v.grid);
      for (int j = 0; j < v.grid.size(); ++j)
        if (std::abs(b[j] - c[j]) > 1e-8) return false;
      return true;
    });
    if (!seen) distinct.push_back(s);
  }

  if (distinct.empty()) {
    std::ostringstream msg;
    msg << "reconstruct: no univalent candidate reproduces v0 (" << candidates.size() << " candidates:";
    for (const auto& r : reports) msg << " [univalent=" << r.univalent << ", residual=" << r.residual << "]";
    msg << ")";
    throw NumericalError(msg.str());
  }
  if (distinct.size() > 1) {
    std::ostringstream msg;
    msg << "reconstruct: " << distinct.size() << " distinct maps reproduce v0 (residuals";
    for (std::size_t d : distinct) msg << " " << reports[d].residual;
    msg << "); welding is unique, so this indicates numerical trouble";
    throw NumericalError(msg.str());
  }
  const std::size_t best = distinct.front();
  return {reports[best].w, Polynomial::from_roots(reports[best].w), maps[best], true, reports[best].residual,
          reports[best].label_defect, std::move(reports)};
}

/// Coefficient-form entry point that also covers the rotation case n = 0
/// (v0 constant), whose welding map is the identity.
inline InverseSolution reconstruct_coeffs(std::vector<cplx> a, const CircleGrid& grid, const InverseOptions& opts = {}) {
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  if (a.size() == 1) {
    if (!(a[0].real() > 0.0) || a[0].imag() != 0.0) throw ValidationError("reconstruct: constant v0 must be positive");
    return {{}, Polynomial({1.0}), identity_map(), true, std::abs(a[0].real() - 1.0), 0.0, {}};
  }
  return reconstruct(TrigPolyV0::from_coeffs(std::move(a), grid), opts);
}

}  // namespace weldkit
