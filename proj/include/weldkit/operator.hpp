#pragma once
//
// Nystrom discretization of
//
//   I_f[v](z) = -1/(2 pi i) int_{|s|=1} (s f'(s) / f(s))^2 v(s) / (f(s) - f(z)) ds / s,   |z| < 1,
//
// with the trapezoidal rule on the circle grid (ds / s = i dt), and the
// first-order variation delta f = i eps f(z)^2 I_f[v](z).

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace weldkit {

/// Rows are collocation points z_i, columns grid nodes s_j:
/// entry(i, j) = -(dt / 2 pi) (s_j f'(s_j) / f(s_j))^2 / (f(s_j) - f(z_i)).
struct NystromMatrix {
  Eigen::MatrixXcd entries;
  std::vector<cplx> collocation;
  CircleGrid grid;
  std::string f_id;

  Eigen::VectorXcd operator*(const Eigen::VectorXcd& v) const { return entries * v; }
};

namespace detail {

struct BoundaryData {
  std::vector<cplx> s, f, df, weight;  // weight_j = (s_j f'_j / f_j)^2

  BoundaryData(const BoundaryMap& map, const CircleGrid& grid) {
    const int n = grid.size();
    s.resize(n);
    f.resize(n);
    df.resize(n);
    weight.resize(n);
    double dmax = 0.0;
    for (int j = 0; j < n; ++j) {
      s[j] = grid.point(j);
      f[j] = map(s[j]);
      df[j] = map.derivative(s[j]);
      dmax = std::max(dmax, std::abs(df[j]));
    }
    for (int j = 0; j < n; ++j) {
      if (std::abs(f[j]) < 1e-12) throw ValidationError(map.id() + ": f(s_j) vanishes at node " + std::to_string(j));
      if (std::abs(df[j]) <= 1e-12 * dmax) {
        throw ValidationError(map.id() + ": f' vanishes at node " + std::to_string(j));
      }
      const cplx q = s[j] * df[j] / f[j];
      weight[j] = q * q;
    }
  }
};

template <class Sink>
void operator_row(const BoundaryData& b, cplx fz, Sink&& sink) {
  const double w = 1.0 / static_cast<double>(b.s.size());
  for (std::size_t j = 0; j < b.s.size(); ++j) sink(j, -w * b.weight[j] / (b.f[j] - fz));
}

}  // namespace detail

/// Collocation at `m` points on the circle of radius `radius` plus the origin
/// (m defaults to the grid size).
inline NystromMatrix assemble(const BoundaryMap& f, const CircleGrid& grid, double radius = 0.5, int m = 0) {
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("assemble: collocation radius must lie in (0, 1)");
  if (m <= 0) m = grid.size();
  const detail::BoundaryData b(f, grid);
  std::vector<cplx> z(m + 1);
  for (int i = 0; i < m; ++i) z[i] = std::polar(radius, kTwoPi * i / m);
  z[m] = 0.0;
  Eigen::MatrixXcd a(m + 1, grid.size());
  for (int i = 0; i <= m; ++i) {
    detail::operator_row(b, f(z[i]), [&](std::size_t j, cplx e) { a(i, static_cast<Eigen::Index>(j)) = e; });
  }
  return {std::move(a), std::move(z), grid, f.id()};
}

/// Trapezoidal evaluation of I_f[v](z) at one interior point.
inline cplx apply(const BoundaryMap& f, const PeriodicSamples& v, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("apply: z must lie inside the unit disk");
  const detail::BoundaryData b(f, v.grid);
  cplx sum{0.0, 0.0};
  detail::operator_row(b, f(z), [&](std::size_t j, cplx e) { sum += e * v.values[j]; });
  return sum;
}

/// delta f(z) = i eps f(z)^2 I_f[v](z).
inline cplx variation(const BoundaryMap& f, const PeriodicSamples& v, double eps, cplx z) {
  const cplx fz = f(z);
  return cplx(0.0, eps) * fz * fz * apply(f, v, z);
}

/// Fourier differentiation matrix on an even grid (Nyquist mode dropped).
inline Eigen::MatrixXd spectral_diff_matrix(const CircleGrid& grid) {
  const int n = grid.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) d(i, j) = 0.5 * (((i - j) % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * (grid.node(i) - grid.node(j)));
  return d;
}

/// Maps samples of v to the limits of I_f[v](z) as z tends to the grid nodes
/// from inside the disk.
///
/// With u = f(s) and H(u) = s f'(s) v(s) / f(s)^2, I_f[v] is the interior Cauchy
/// integral -1/(2 pi i) int_Gamma H(u) / (u - w) du. Subtracting H(u_i) makes the
/// integrand smooth at u = u_i, where it takes the value dH/dt; the remaining
/// integral is again trapezoidal and spectrally accurate.
inline Eigen::MatrixXcd assemble_boundary_limit(const BoundaryMap& f, const CircleGrid& grid) {
  const int n = grid.size();
  const detail::BoundaryData b(f, grid);
  std::vector<cplx> h(n);
  for (int j = 0; j < n; ++j) h[j] = b.s[j] * b.df[j] / (b.f[j] * b.f[j]);
  const Eigen::MatrixXd d = spectral_diff_matrix(grid);
  const double w = 1.0 / n;
  const cplx diag_factor = w / cplx(0.0, 1.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    cplx diag = -h[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const cplx c = w * b.s[j] * b.df[j] / (b.f[j] - b.f[i]);
      a(i, j) -= c * h[j];
      diag += c * h[i];
      a(i, j) -= diag_factor * d(i, j) * h[j];
    }
    a(i, i) += diag;
  }
  return a;
}

}  // namespace weldkit
