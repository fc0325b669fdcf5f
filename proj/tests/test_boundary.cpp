#include <weldkit/boundary.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace weldkit;

namespace {

double ellipse_equation_defect(cplx w, double a, double b) {
  return std::abs(std::pow(w.real() / a, 2) + std::pow(w.imag() / b, 2) - 1.0);
}

}  // namespace

TEST_CASE("from_taylor", "[boundary]") {
  SECTION("[0, 1] is the identity") {
    const auto f = from_taylor({0.0, 1.0});
    CHECK(std::abs(f(cplx(0.3, 0.4)) - cplx(0.3, 0.4)) == 0.0);
    CHECK(std::abs(f.derivative(0.7) - 1.0) == 0.0);
  }
  SECTION("z + 0.2 z^2 is accepted") {
    const auto f = from_taylor({0.0, 1.0, 0.2});
    CHECK(std::abs(f(0.5) - 0.55) <= 1e-15);
    CHECK(std::abs(f.derivative(0.5) - 1.2) <= 1e-15);
    CHECK(f.source() == MapSource::taylor);
  }
  SECTION("z + 0.6 z^3 self-intersects") { CHECK_THROWS_AS(from_taylor({0.0, 1.0, 0.0, 0.6}), ValidationError); }
  SECTION("normalization") {
    CHECK_THROWS_AS(from_taylor({0.1, 1.0}), ValidationError);
    CHECK_THROWS_AS(from_taylor({0.0, 2.0}), ValidationError);
  }
}

TEST_CASE("from_samples continues boundary data into the disk", "[boundary]") {
  const CircleGrid g(128);
  const auto exact = moebius_map(cplx(0.2, 0.1));
  const auto f = from_samples(exact.boundary(g));
  for (cplx z : {cplx(0.0), cplx(0.3, -0.2), cplx(-0.5, 0.5)}) {
    CHECK(std::abs(f(z) - exact(z)) <= 1e-13);
    CHECK(std::abs(f.derivative(z) - exact.derivative(z)) <= 1e-12);
  }
  SECTION("conjugate-analytic samples are rejected") {
    const auto bad = PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, t) + 0.1 * std::polar(1.0, -t); });
    CHECK_THROWS_AS(from_samples(bad), ValidationError);
  }
}

TEST_CASE("moebius_map", "[boundary]") {
  SECTION("c = 0 is the identity") {
    const auto f = moebius_map(0.0);
    CHECK(std::abs(f(cplx(0.2, 0.7)) - cplx(0.2, 0.7)) == 0.0);
  }
  SECTION("c = 0.3: f(1) = 1/0.7") { CHECK(std::abs(moebius_map(0.3)(1.0) - 1.0 / 0.7) <= 1e-15); }
  SECTION("c = 0.3: the image is the circumcircle of three image points") {
    const auto f = moebius_map(0.3);
    const Circle c = circumcircle(f(1.0), f(cplx(0, 1)), f(-1.0));
    const CircleGrid g(256);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(std::abs(f(g.point(j)) - c.center) - c.radius) <= 1e-12);
  }
  SECTION("|c| >= 1") { CHECK_THROWS_AS(moebius_map(1.0), DomainError); }
}

TEST_CASE("moebius images are circles", "[boundary][property]") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const CircleGrid g(128);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx c = std::polar(0.9 * ud(rng), kTwoPi * ud(rng));
    const auto f = moebius_map(c);
    validate(f, g);
    const Circle circ = circumcircle(f(1.0), f(cplx(0, 1)), f(-1.0));
    for (int j = 0; j < g.size(); ++j)
      CHECK(std::abs(std::abs(f(g.point(j)) - circ.center) - circ.radius) <= 1e-12 * std::max(1.0, circ.radius));
  }
}

TEST_CASE("ellipse_map", "[boundary]") {
  const auto f = ellipse_map(0.6);
  CHECK(f.normalization() == Normalization::catalog);
  CHECK(std::abs(f(0.0)) == 0.0);
  CHECK(std::abs(f(0.6) - 1.0) <= 1e-14);
  CHECK(std::abs(f(-0.6) + 1.0) <= 1e-14);
  SECTION("f'(0) = pi / (2 r K(r^2))") {
    CHECK(std::abs(f.derivative(0.0) - kPi / (2 * 0.6 * elliptic_k(0.36))) <= 1e-14);
  }
  SECTION("derivative agrees with central differences") {
    const double h = 1e-5;
    for (cplx z : {cplx(0.3, 0.2), cplx(-0.1, 0.8), cplx(0.9, -0.3), cplx(0.0, 1.0)}) {
      const cplx fd = (f(z + h) - f(z - h)) / (2 * h);
      CHECK(std::abs(fd - f.derivative(z)) <= 1e-8);
    }
  }
  SECTION("invalid radius") {
    CHECK_THROWS_AS(ellipse_map(0.0), DomainError);
    CHECK_THROWS_AS(ellipse_map(1.0), DomainError);
  }
}

TEST_CASE("ellipse_map traces an ellipse", "[boundary][property]") {
  const CircleGrid g(256);
  for (double r : {0.4, 0.6, 0.8}) {
    const auto f = ellipse_map(r);
    const double a = f(1.0).real();
    const double b = (f(cplx(0, 1)) / cplx(0, 1)).real();
    CHECK(std::abs(a * a - b * b - 1.0) <= 1e-10);  // foci at +-1
    for (int j = 0; j < g.size(); ++j) CHECK(ellipse_equation_defect(f(g.point(j)), a, b) <= 1e-8);
  }
}

TEST_CASE("catalog evaluators agree across grids", "[boundary][property]") {
  const CircleGrid coarse(128), fine(256);
  for (const auto& f : {identity_map(), moebius_map(cplx(0.3, -0.2)), ellipse_map(0.6)}) {
    const auto a = f.boundary(coarse);
    const auto b = f.boundary(fine);
    for (int j = 0; j < coarse.size(); ++j) CHECK(std::abs(a[j] - b[2 * j]) <= 1e-12);
  }
}

TEST_CASE("joukowski_exterior", "[boundary]") {
  const double lambda = 0.7;
  const auto phi = joukowski_exterior(lambda);
  const double c = (1.0 + std::sqrt(1.0 - lambda * lambda)) / lambda;
  CHECK(std::abs(phi.coefficient(1) - c / 2) <= 1e-15);
  CHECK(std::abs(phi.coefficient(-1) - 1 / (2 * c)) <= 1e-15);
  CHECK(std::abs(phi.coefficient(0)) == 0.0);
  CHECK(std::abs(phi(1.0) - 1.0 / lambda) <= 1e-14);
  CHECK(std::abs(phi(cplx(0, 1)) - cplx(0, (c - 1 / c) / 2)) <= 1e-14);
  CHECK_THROWS_AS(joukowski_exterior(1.0), DomainError);
}

TEST_CASE("Joukowski exterior and elliptic-sine interior share the ellipse", "[boundary][property]") {
  const CircleGrid g(512);
  const auto f = ellipse_map(0.6);
  const double a = f(1.0).real();
  const double b = (f(cplx(0, 1)) / cplx(0, 1)).real();
  const auto phi = joukowski_exterior(1.0 / a);
  CHECK(std::abs(phi(cplx(0, 1)) - cplx(0, b)) <= 1e-8);
  for (int j = 0; j < g.size(); ++j) CHECK(ellipse_equation_defect(phi(g.point(j)), a, b) <= 1e-8);
}

TEST_CASE("ellipse_kernel", "[boundary]") {
  const CircleGrid g(256);
  const double r = 0.6, big_k = elliptic_k(0.36);
  const auto v = ellipse_kernel(r, g);
  CHECK(std::abs(v[0] - 2 * big_k * (1 - r * r) / kPi) <= 1e-14);
  CHECK(std::abs(v[g.size() / 4] - 2 * big_k * (1 + r * r) / kPi) <= 1e-14);
  CHECK(std::abs(v.normalization_integral() - kTwoPi) <= 1e-9);
}

TEST_CASE("quad_diff_kernel", "[boundary]") {
  const CircleGrid g(256);
  SECTION("n = 2 reproduces the ellipse kernel") {
    const auto a = quad_diff_kernel(2, 0.6, g);
    const auto b = ellipse_kernel(0.6, g);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-10);
  }
  SECTION("n = 1 is proportional to |z - r|") {
    const auto v = quad_diff_kernel(1, 0.3, g);
    const double ratio = v[0] / std::abs(g.point(0) - 0.3);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(v[j] / std::abs(g.point(j) - 0.3) - ratio) <= 1e-12);
    CHECK(v.normalized());
  }
  SECTION("positive for several n") {
    for (int n = 1; n <= 6; ++n) {
      const auto v = quad_diff_kernel(n, 0.7, g);
      CHECK(*std::min_element(v.samples().begin(), v.samples().end()) > 0.0);
    }
  }
}

TEST_CASE("validate and diagnostics", "[boundary]") {
  const CircleGrid g(256);
  CHECK_NOTHROW(validate(identity_map(), g));
  CHECK_NOTHROW(validate(moebius_map(0.3), g));
  CHECK_NOTHROW(validate(ellipse_map(0.6), g));
  const BoundaryMap scaled("scaled", [](cplx z) { return 2.0 * z; }, [](cplx) { return cplx(2.0); },
                           MapSource::closed_form, Normalization::class_s);
  CHECK_THROWS_AS(validate(scaled, g), ValidationError);
  const BoundaryMap cubic("cubic", [](cplx z) { return z + 0.6 * z * z * z; },
                          [](cplx z) { return 1.0 + 1.8 * z * z; }, MapSource::closed_form, Normalization::class_s);
  const auto d = diagnose(cubic, g);
  CHECK_FALSE(d.boundary_simple);
}
