#include <weldkit/kernel.hpp>
#include <weldkit/welding.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace weldkit;

namespace {

double relative_sup(const KernelFunction& a, const KernelFunction& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]) / std::abs(b[j]));
  return m;
}

/// Boundary samples of an exterior-analytic h with the given coefficients of zeta^0, zeta^-1, ...
PeriodicSamples exterior_samples(const CircleGrid& g, const std::vector<cplx>& c) {
  return PeriodicSamples::tabulate(g, [&](double t) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::polar(1.0, -static_cast<double>(k) * t);
    return s;
  });
}

}  // namespace

TEST_CASE("solve_v0", "[kernel]") {
  SECTION("identity gives v0 = 1") {
    const auto v = solve_v0(identity_map(), CircleGrid(128));
    for (double x : v.samples()) CHECK(std::abs(x - 1.0) <= 1e-12);
    CHECK(v.normalized());
    CHECK(v.sigma_min_ratio <= 1e-7);
    CHECK(v.sigma_ratio >= 1e-3);
  }
  SECTION("ellipse(0.6) matches 2K|r^2 - z^2|/pi") {
    const CircleGrid g(256);
    CHECK(relative_sup(solve_v0(ellipse_map(0.6), g), ellipse_kernel(0.6, g)) <= 1e-6);
  }
  SECTION("moebius(0.3) matches (f - m)/(z f')") {
    const CircleGrid g(256);
    const auto f = moebius_map(0.3);
    const Circle c = circumcircle(f(1.0), f(cplx(0, 1)), f(-1.0));
    const auto v = solve_v0(f, g);
    for (int j = 0; j < g.size(); ++j) {
      const cplx z = g.point(j);
      const cplx expected = (f(z) - c.center) / (z * f.derivative(z));
      CHECK(std::abs(expected.imag()) <= 1e-12);
      CHECK(std::abs(v[j] - expected.real()) <= 1e-10 * expected.real());
    }
  }
  SECTION("normalization integral") {
    const auto v = solve_v0(moebius_map(cplx(0.1, 0.5)), CircleGrid(128));
    CHECK(std::abs(v.normalization_integral() - kTwoPi) <= 1e-9);
  }
}

TEST_CASE("kernel_from_matrix rank diagnostics", "[kernel]") {
  const CircleGrid g(64);
  SECTION("full rank") {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(g.size(), g.size());
    CHECK_THROWS_AS(kernel_from_matrix(a, g), RankGapError);
  }
  SECTION("two-dimensional kernel") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(g.size(), g.size());
    a(0, 0) = 0.0;
    a(1, 1) = 0.0;
    try {
      kernel_from_matrix(a, g);
      FAIL("expected a rank-gap error");
    } catch (const RankGapError& e) {
      CHECK(e.sigma_min_ratio() == 0.0);
      CHECK(e.sigma_second_ratio() == 0.0);
    }
  }
  SECTION("sign-indefinite kernel vector") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(g.size(), g.size());
    // kernel spanned by (1, -1, 0, ...)
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    CHECK_THROWS_AS(kernel_from_matrix(a, g), NumericalError);
  }
}

TEST_CASE("solve_v0 is invariant under matrix scaling", "[kernel][property]") {
  const CircleGrid g(128);
  const Eigen::MatrixXcd a = assemble_boundary_limit(ellipse_map(0.6), g);
  const auto v1 = kernel_from_matrix(a, g);
  const auto v2 = kernel_from_matrix(a * cplx(-3.7, 1.1), g);
  for (int j = 0; j < g.size(); ++j) CHECK(std::abs(v1[j] - v2[j]) <= 1e-12);
}

TEST_CASE("the numerical kernel is one-dimensional", "[kernel][property]") {
  const CircleGrid g(128);
  const auto f = moebius_map(cplx(0.25, 0.1));
  const Eigen::MatrixXd null = numerical_nullspace(assemble_boundary_limit(f, g), 1e-7);
  REQUIRE(null.cols() == 1);
  const auto v0 = solve_v0(f, g);
  const Eigen::Map<const Eigen::VectorXd> v(v0.samples().data(), g.size());
  std::mt19937 rng(37);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(g.size());
    for (auto& e : x) e = nd(rng);
    const Eigen::VectorXd p = null * (null.transpose() * x);
    CHECK(std::abs(p.dot(v)) / (p.norm() * v.norm()) >= 1.0 - 1e-8);
  }
}

TEST_CASE("residual", "[kernel]") {
  const CircleGrid g(256);
  const auto f = ellipse_map(0.6);
  CHECK(residual(identity_map(), PeriodicSamples::tabulate(g, [](double) { return cplx(1.0); })) <= 1e-13);
  const auto v0 = solve_v0(f, g);
  CHECK(residual(f, v0.as_samples()) <= 1e-6);
  std::vector<cplx> perturbed(g.size());
  for (int j = 0; j < g.size(); ++j) perturbed[j] = v0[j] + 0.1 * std::cos(3 * g.node(j));
  CHECK(residual(f, PeriodicSamples(g, perturbed)) >= 1e-3);
}

TEST_CASE("complex_kernel_member", "[kernel]") {
  const CircleGrid g(256);
  const auto f = ellipse_map(0.6);
  const auto v0 = solve_v0(f, g);
  const auto gamma = invert_diffeo(gamma_inverse_from_v0(v0));
  SECTION("h = 1 reproduces v0") {
    const auto v = complex_kernel_member(v0, gamma, exterior_samples(g, {1.0}));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(v[j] - v0[j]) <= 1e-13);
  }
  SECTION("h = 1/zeta") {
    CHECK(residual(f, complex_kernel_member(v0, gamma, exterior_samples(g, {0.0, 1.0}))) <= 1e-5);
  }
  SECTION("h = zeta is rejected") {
    const auto h = PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, t); });
    CHECK_THROWS_AS(complex_kernel_member(v0, gamma, h), DomainError);
  }
}

TEST_CASE("random exterior-analytic h give kernel members", "[kernel][property]") {
  const CircleGrid g(256);
  const auto f = ellipse_map(0.6);
  const auto v0 = solve_v0(f, g);
  const auto gamma = invert_diffeo(gamma_inverse_from_v0(v0));
  std::mt19937 rng(41);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cplx> c(8);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = cplx(nd(rng), nd(rng)) * std::pow(0.5, static_cast<double>(k));
    CHECK(residual(f, complex_kernel_member(v0, gamma, exterior_samples(g, c))) <= 1e-5);
  }
}
