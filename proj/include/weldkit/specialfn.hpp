#pragma once
//
// Carlson's symmetric integral R_F, Legendre's incomplete and complete
// elliptic integrals of the first kind for complex amplitude, and the small
// polynomial toolkit (roots, residues) used by the inverse problem.

#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace weldkit {

/// R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)), principal branch,
/// by the duplication theorem (Carlson 1995). At most one argument may vanish.
inline cplx carlson_rf(cplx x, cplx y, cplx z) {
  const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros >= 2) throw DomainError("carlson_rf: at most one argument may be zero");

  constexpr double r = 1e-16;
  const cplx a0 = (x + y + z) / 3.0;
  double q = std::pow(3.0 * r, -1.0 / 6.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  cplx a = a0;
  for (int it = 0; it < 200 && q >= std::abs(a); ++it) {
    const cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const cplx lambda = sx * sy + sx * sz + sy * sz;
    a = 0.25 * (a + lambda);
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    q *= 0.25;
  }
  const cplx X = 1.0 - x / a;
  const cplx Y = 1.0 - y / a;
  const cplx Z = -X - Y;
  const cplx e2 = X * Y - Z * Z;
  const cplx e3 = X * Y * Z;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

/// Complete integral K(k) by the arithmetic-geometric mean; k is the modulus.
inline double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("elliptic_k: modulus must lie in [0, 1)");
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return kPi / (a + b);
}

/// F(z, k) = int_0^z dq / sqrt((1-q^2)(1-k^2 q^2)), continued analytically in
/// the plane cut along the real axis outside (-1, 1).
inline cplx elliptic_f(cplx z, double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("elliptic_f: modulus must lie in [0, 1]");
  if (z == 0.0) return {0.0, 0.0};
  const cplx x = 1.0 - z * z;
  const cplx y = 1.0 - k * k * z * z;
  if (y == 0.0) throw DomainError("elliptic_f: amplitude at the branch point 1/k");
  return z * carlson_rf(x, y, 1.0);
}

/// Polynomial with complex coefficients in ascending order; the leading
/// coefficient is nonzero.
class Polynomial {
 public:
  explicit Polynomial(std::vector<cplx> ascending) : c_(std::move(ascending)) {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) throw DomainError("Polynomial: zero polynomial has no degree");
  }

  static Polynomial from_roots(std::span<const cplx> roots, cplx leading = 1.0) {
    std::vector<cplx> c{leading};
    for (const cplx& r : roots) {
      std::vector<cplx> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r * c[i];
      }
      c = std::move(next);
    }
    return Polynomial(std::move(c));
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  cplx leading() const noexcept { return c_.back(); }

  cplx operator()(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (degree() == 0) throw DomainError("Polynomial: derivative of a constant is the zero polynomial");
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
  }

  /// sum_k |c_k| |z|^k, the natural scale of |p(z)| under coefficient rounding.
  double magnitude_at(cplx z) const {
    double acc = 0.0;
    const double r = std::abs(z);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

 private:
  std::vector<cplx> c_;
};

struct RootSet {
  std::vector<cplx> roots;

  Polynomial monic() const { return Polynomial::from_roots(roots); }
  std::size_t size() const noexcept { return roots.size(); }
};

/// All roots by companion-matrix eigenvalues, each polished by Newton's method.
inline RootSet poly_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw DomainError("poly_roots: degree must be at least 1");
  const auto& c = p.coeffs();
  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw RootFindingError("poly_roots: eigenvalue iteration failed", {});
    for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()(i));
  }

  const Polynomial dp = p.derivative();
  const double scale = p.max_abs_coeff();
  std::vector<cplx> accepted;
  for (cplx z : roots) {
    double res = std::abs(p(z));
    for (int it = 0; it < 20; ++it) {
      const cplx d = dp(z);
      if (d == 0.0) break;
      const cplx next = z - p(z) / d;
      const double next_res = std::abs(p(next));
      if (!(next_res < res)) break;
      z = next;
      res = next_res;
    }
    const double bound = 1e-10 * scale * std::pow(std::max(1.0, std::abs(z)), n);
    if (!(res <= bound)) {
      throw RootFindingError("poly_roots: root " + std::to_string(accepted.size()) + " did not converge (residual " +
                                 std::to_string(res) + ")",
                             accepted);
    }
    accepted.push_back(z);
  }
  std::sort(accepted.begin(), accepted.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return RootSet{std::move(accepted)};
}

/// Residue of z^num_degree / q(z) at a simple root of q: pole^num_degree / q'(pole).
inline cplx simple_residue(int num_degree, const Polynomial& q, cplx pole) {
  const Polynomial dq = q.derivative();
  const cplx d = dq(pole);
  if (std::abs(d) < 1e-8 * dq.magnitude_at(pole)) {
    throw NumericalError(
        "simple_residue: pole is (nearly) a multiple root; only simple roots of Q are supported");
  }
  return std::pow(pole, num_degree) / d;
}

}  // namespace weldkit
