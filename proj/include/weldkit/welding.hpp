#pragma once
//
// Conformal welding from the kernel function: the lift of gamma^{-1} is the
// antiderivative of 1/v0, the exterior map is phi = f o gamma read off from
// its Laurent coefficients, and the boundary ODE for psi = phi^{-1} gives an
// independent second route to gamma^{-1}.

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/kernel.hpp>
#include <weldkit/kernel_function.hpp>

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace weldkit {

enum class WeldStatus { ok, warning };

inline const char* to_string(WeldStatus s) { return s == WeldStatus::ok ? "ok" : "warning"; }

struct WeldOptions {
  KernelOptions kernel{};
  /// Forbidden Laurent coefficients below this are accepted silently.
  double accept_consistency = 1e-5;
  /// Above this the pair (f, gamma) is rejected as not matching.
  double reject_consistency = 1e-3;
  /// Tolerance of the adaptive Runge-Kutta integration of the psi-ODE.
  double ode_tol = 1e-13;
};

/// Lift of gamma^{-1}: tau(x) = int_0^x dt / v0 + base_angle. The base angle is the
/// rotation gauge; 0 gives gamma^{-1}(1) = 1.
inline CircleDiffeo gamma_inverse_from_v0(const KernelFunction& v0, double base_angle = 0.0) {
  if (!v0.normalized() || std::abs(v0.normalization_integral() - kTwoPi) > 1e-9) {
    throw ValidationError("gamma_inverse_from_v0: v0 must satisfy int dt / v0 = 2 pi");
  }
  std::vector<cplx> inv(v0.size());
  for (int j = 0; j < v0.size(); ++j) inv[j] = 1.0 / v0[j];
  const PeriodicSamples primitive = periodic_antiderivative(PeriodicSamples(v0.grid(), std::move(inv)));
  std::vector<double> p(v0.size());
  for (int j = 0; j < v0.size(); ++j) p[j] = primitive[j].real() + base_angle;
  return {v0.grid(), std::move(p)};
}

struct ExteriorFit {
  ExteriorMap map;
  LaurentCoeffs laurent;
  /// max |coefficient| over indices >= 2
  double consistency;
  WeldStatus status;
};

/// phi = f o gamma on the grid, analyzed into Laurent coefficients.
inline ExteriorFit exterior_from_welding(const BoundaryMap& f, const CircleDiffeo& gamma, const CircleGrid& grid,
                                         const WeldOptions& opts = {}) {
  std::vector<cplx> phi(grid.size());
  const bool same_grid = gamma.grid() == grid;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = same_grid ? gamma.at_node(j) : gamma(grid.node(j));
    phi[j] = f(std::polar(1.0, x));
  }
  LaurentCoeffs c = analyze(PeriodicSamples(grid, std::move(phi)));
  double consistency = 0.0;
  for (int k = 2; k <= c.max_index(); ++k) consistency = std::max(consistency, std::abs(c[k]));
  if (consistency > opts.reject_consistency) {
    std::ostringstream msg;
    msg << "exterior_from_welding: f o gamma has Laurent coefficients of index >= 2 up to " << consistency
        << "; the pair does not match";
    throw WeldingInconsistency(msg.str(), consistency);
  }
  const WeldStatus status = consistency <= opts.accept_consistency ? WeldStatus::ok : WeldStatus::warning;
  return {ExteriorMap::from_laurent(c), std::move(c), consistency, status};
}

/// Samples of psi o f on the unit circle from the boundary ODE psi' = H psi,
/// H(f(z)) = 1 / (z f'(z) v0(z)), pulled back to the t-parametrization and
/// started at psi(f(1)) = 1.
inline PeriodicSamples psi_boundary_ode(const BoundaryMap& f, const KernelFunction& v0, double tol = 1e-13) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const CircleGrid& grid = v0.grid();
  const LaurentCoeffs v_coeffs = analyze(v0.as_samples());

  auto rhs = [&](const State& y, State& dydt, double t) {
    const cplx z = std::polar(1.0, t);
    const cplx fp = f.derivative(z);
    const double v = v_coeffs.interpolate(t).real();
    const cplx h_tilde = 1.0 / (z * fp * v);
    const cplx dpsi = h_tilde * cplx(y[0], y[1]) * (cplx(0.0, 1.0) * z * fp);
    dydt[0] = dpsi.real();
    dydt[1] = dpsi.imag();
  };

  std::vector<double> times = grid.nodes();
  times.push_back(kTwoPi);
  std::vector<cplx> out;
  out.reserve(times.size());
  State y{1.0, 0.0};
  try {
    odeint::integrate_times(odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>()), rhs, y,
                            times.begin(), times.end(), grid.step() / 4,
                            [&](const State& s, double) { out.emplace_back(s[0], s[1]); });
  } catch (const std::exception& e) {
    throw NumericalError(std::string("psi_boundary_ode: step-size underflow (") + e.what() + ")");
  }
  out.pop_back();
  return {grid, std::move(out)};
}

struct WeldingResult {
  CircleDiffeo gamma;
  CircleDiffeo gamma_inv;
  KernelFunction v0;
  ExteriorMap exterior;
  LaurentCoeffs laurent;
  double consistency;
  WeldStatus status;
  /// sup_j |psi(f(s_j)) - e^{i tau(t_j)}| between the two routes to gamma^{-1}
  double two_route_defect;
  /// sup_j |gamma(gamma^{-1}(t_j)) - t_j| on the lift
  double composition_defect;
  /// max over interior collocation points of |I_f[v0]|
  double kernel_residual;
};

/// solve_v0 -> gamma^{-1} -> gamma -> phi, with the psi-ODE cross-check recorded.
inline WeldingResult weld(const BoundaryMap& f, const CircleGrid& grid, const WeldOptions& opts = {}) {
  KernelFunction v0 = solve_v0(f, grid, opts.kernel);
  CircleDiffeo gamma_inv = gamma_inverse_from_v0(v0);
  CircleDiffeo gamma = invert_diffeo(gamma_inv);
  ExteriorFit fit = exterior_from_welding(f, gamma, grid, opts);

  const PeriodicSamples psi = psi_boundary_ode(f, v0, opts.ode_tol);
  double two_route = 0.0, composition = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    two_route = std::max(two_route, std::abs(psi[j] - std::polar(1.0, gamma_inv.at_node(j))));
    composition = std::max(composition, std::abs(gamma(gamma_inv.at_node(j)) - grid.node(j)));
  }
  const double kres = residual(f, v0.as_samples());
  return {std::move(gamma), std::move(gamma_inv), std::move(v0), std::move(fit.map), std::move(fit.laurent),
          fit.consistency, fit.status, two_route, composition, kres};
}

}  // namespace weldkit
