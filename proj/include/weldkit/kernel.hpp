#pragma once
//
// Extraction of the positive kernel function v0 spanning the real kernel of
// I_f, and the complex kernel members v0 * (h o gamma^{-1}).

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/kernel_function.hpp>
#include <weldkit/operator.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weldkit {

struct KernelOptions {
  /// The smallest singular value must not exceed rank_tol * sigma_max.
  double rank_tol = 1e-7;
  /// The second-smallest singular value must be at least gap_tol * sigma_max.
  double gap_tol = 1e-3;
};

/// Stacks real and imaginary parts: real v maps through complex entries.
inline Eigen::MatrixXd real_split(const Eigen::MatrixXcd& a) {
  Eigen::MatrixXd r(2 * a.rows(), a.cols());
  r.topRows(a.rows()) = a.real();
  r.bottomRows(a.rows()) = a.imag();
  return r;
}

/// Right singular vectors whose singular values are at most tol * sigma_max.
inline Eigen::MatrixXd numerical_nullspace(const Eigen::MatrixXcd& a, double tol) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(real_split(a), Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index dim = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= tol * s(0)) ++dim;
  return svd.matrixV().rightCols(dim);
}

/// Kernel function from any matrix whose real kernel should be span{v0}.
inline KernelFunction kernel_from_matrix(const Eigen::MatrixXcd& a, const CircleGrid& grid,
                                         const KernelOptions& opts = {}) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(real_split(a), Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const Eigen::Index n = s.size();
  const double smin = s(n - 1) / s(0);
  const double second = s(n - 2) / s(0);
  if (smin > opts.rank_tol || second < opts.gap_tol) {
    std::ostringstream msg;
    msg << "solve_v0: numerical rank deficiency is not one (sigma_min/sigma_max = " << smin
        << ", sigma_2/sigma_max = " << second << ")";
    throw RankGapError(msg.str(), smin, second);
  }
  Eigen::VectorXd v = svd.matrixV().col(n - 1);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  if (v(big) < 0) v = -v;
  if (!(v.minCoeff() > 0.0)) {
    std::ostringstream msg;
    msg << "solve_v0: kernel vector changes sign (min/max = " << v.minCoeff() / v.maxCoeff()
        << "); the grid does not resolve f";
    throw NumericalError(msg.str());
  }
  KernelFunction k = KernelFunction::normalize(grid, std::vector<double>(v.data(), v.data() + v.size()));
  k.sigma_ratio = second;
  k.sigma_min_ratio = smin;
  return k;
}

/// The normalized positive generator of the real kernel of I_f.
inline KernelFunction solve_v0(const BoundaryMap& f, const CircleGrid& grid, const KernelOptions& opts = {}) {
  return kernel_from_matrix(assemble_boundary_limit(f, grid), grid, opts);
}

/// max over interior collocation points of |I_f[v](z_i)|.
inline double residual(const BoundaryMap& f, const PeriodicSamples& v, double radius = 0.5) {
  const NystromMatrix a = assemble(f, v.grid, radius);
  const Eigen::Map<const Eigen::VectorXcd> x(v.values.data(), static_cast<Eigen::Index>(v.values.size()));
  return (a.entries * x).cwiseAbs().maxCoeff();
}

/// v = v0 * (h o gamma^{-1}) on the grid, where h holds boundary values of a
/// function analytic outside the disk (including infinity).
inline PeriodicSamples complex_kernel_member(const KernelFunction& v0, const CircleDiffeo& gamma,
                                             const PeriodicSamples& h_exterior) {
  const LaurentCoeffs c = analyze(h_exterior);
  double scale = 0.0, positive = 0.0;
  for (int k = c.min_index(); k <= c.max_index(); ++k) {
    scale = std::max(scale, std::abs(c[k]));
    if (k >= 1) positive = std::max(positive, std::abs(c[k]));
  }
  if (positive > 1e-8 * std::max(1.0, scale)) {
    throw DomainError("complex_kernel_member: h has Fourier modes k >= 1 and is not analytic outside the disk");
  }
  const CircleDiffeo gamma_inv = invert_diffeo(gamma);
  const CircleGrid& g = v0.grid();
  std::vector<cplx> v(g.size());
  for (int j = 0; j < g.size(); ++j) v[j] = v0[j] * c.interpolate(gamma_inv.at_node(j));
  return {g, std::move(v)};
}

}  // namespace weldkit
