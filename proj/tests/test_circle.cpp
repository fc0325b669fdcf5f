#include <weldkit/circle.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace weldkit;
using Catch::Matchers::WithinAbs;

namespace {

PeriodicSamples random_band_limited(const CircleGrid& g, int band, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c(2 * band + 1);
  for (auto& x : c) x = {nd(rng), nd(rng)};
  return PeriodicSamples::tabulate(g, [&](double t) {
    cplx s = 0.0;
    for (int k = -band; k <= band; ++k) s += c[k + band] * std::polar(1.0, k * t);
    return s;
  });
}

double sup(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST_CASE("CircleGrid rejects small or odd sizes", "[circle]") {
  CHECK_THROWS_AS(CircleGrid(8), DomainError);
  CHECK_THROWS_AS(CircleGrid(33), DomainError);
  const CircleGrid g(16);
  CHECK(g.node(0) == 0.0);
  for (int j = 1; j < g.size(); ++j) CHECK(g.node(j) > g.node(j - 1));
  CHECK(g.node(g.size() - 1) < kTwoPi);
}

TEST_CASE("analyze recovers single harmonics", "[circle]") {
  const CircleGrid g(32);
  SECTION("constant") {
    const auto c = analyze(PeriodicSamples::tabulate(g, [](double) { return cplx(1.0); }));
    CHECK_THAT(std::abs(c[0] - 1.0), WithinAbs(0.0, 1e-15));
    for (int k = c.min_index(); k <= c.max_index(); ++k)
      if (k != 0) CHECK(std::abs(c[k]) < 1e-15);
  }
  SECTION("2 cos t") {
    const auto c = analyze(PeriodicSamples::tabulate(g, [](double t) { return cplx(2.0 * std::cos(t)); }));
    CHECK(std::abs(c[1] - 1.0) < 1e-15);
    CHECK(std::abs(c[-1] - 1.0) < 1e-15);
    CHECK(std::abs(c[0]) < 1e-15);
    CHECK(std::abs(c[2]) < 1e-15);
  }
  SECTION("e^{it} + 3") {
    const auto c = analyze(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, t) + 3.0; }));
    CHECK(std::abs(c[0] - 3.0) < 1e-14);
    CHECK(std::abs(c[1] - 1.0) < 1e-15);
    CHECK(std::abs(c[-1]) < 1e-15);
  }
}

TEST_CASE("analysis and synthesis are inverse", "[circle][property]") {
  std::mt19937 rng(7);
  for (int n : {16, 64, 256}) {
    const CircleGrid g(n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = random_band_limited(g, n / 2 - 1, rng);
      const auto back = synthesize(analyze(s), g);
      double scale = 0.0;
      for (auto v : s.values) scale = std::max(scale, std::abs(v));
      CHECK(sup(back.values, s.values) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("spectral_derivative", "[circle]") {
  const CircleGrid g(64);
  SECTION("sin -> cos") {
    const auto d = spectral_derivative(PeriodicSamples::tabulate(g, [](double t) { return cplx(std::sin(t)); }));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d[j] - std::cos(g.node(j))) <= 1e-12);
  }
  SECTION("constant -> zero") {
    const auto d = spectral_derivative(PeriodicSamples::tabulate(g, [](double) { return cplx(2.5, -1.0); }));
    for (auto v : d.values) CHECK(std::abs(v) <= 1e-14);
  }
  SECTION("e^{3it} -> 3i e^{3it}") {
    const auto d = spectral_derivative(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, 3 * t); }));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d[j] - cplx(0, 3) * std::polar(1.0, 3 * g.node(j))) <= 1e-12);
  }
}

TEST_CASE("spectral derivative obeys the Leibniz rule on a refined grid", "[circle][property]") {
  std::mt19937 rng(11);
  const CircleGrid coarse(32), fine(64);
  for (int trial = 0; trial < 5; ++trial) {
    std::normal_distribution<double> nd;
    std::vector<cplx> a(15), b(15);
    for (auto& x : a) x = {nd(rng), nd(rng)};
    for (auto& x : b) x = {nd(rng), nd(rng)};
    auto eval = [](const std::vector<cplx>& c, double t) {
      cplx s = 0.0;
      for (int k = -7; k <= 7; ++k) s += c[k + 7] * std::polar(1.0, k * t);
      return s;
    };
    (void)coarse;
    const auto u = PeriodicSamples::tabulate(fine, [&](double t) { return eval(a, t); });
    const auto w = PeriodicSamples::tabulate(fine, [&](double t) { return eval(b, t); });
    std::vector<cplx> uw(fine.size());
    for (int j = 0; j < fine.size(); ++j) uw[j] = u[j] * w[j];
    const auto d_uw = spectral_derivative(PeriodicSamples(fine, uw));
    const auto du = spectral_derivative(u);
    const auto dw = spectral_derivative(w);
    for (int j = 0; j < fine.size(); ++j) CHECK(std::abs(d_uw[j] - (du[j] * w[j] + u[j] * dw[j])) <= 1e-10);
  }
}

TEST_CASE("lift_circle_map", "[circle]") {
  const CircleGrid g(64);
  SECTION("identity") {
    const auto d = lift_circle_map(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, t); }));
    CHECK(distance_to_rotation(d, 0.0) <= 1e-14);
  }
  SECTION("rotation") {
    const auto d = lift_circle_map(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, t + 0.5); }));
    CHECK(distance_to_rotation(d, 0.5) <= 1e-14);
    CHECK_THAT(d(1.234), WithinAbs(1.734, 1e-13));
  }
  SECTION("orientation reversal is rejected") {
    CHECK_THROWS_AS(lift_circle_map(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.0, -t); })),
                    ValidationError);
  }
  SECTION("off-circle values are rejected") {
    CHECK_THROWS_AS(lift_circle_map(PeriodicSamples::tabulate(g, [](double t) { return std::polar(1.1, t); })),
                    DomainError);
  }
  SECTION("samples are reproduced") {
    auto fn = [](double t) { return std::polar(1.0, t + 0.3 * std::sin(t) + 2.0); };
    const auto d = lift_circle_map(PeriodicSamples::tabulate(g, fn));
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(std::polar(1.0, d.at_node(j)) - fn(g.node(j))) <= 1e-14);
  }
}

TEST_CASE("invert_diffeo", "[circle]") {
  const CircleGrid g(64);
  SECTION("identity") { CHECK(distance_to_rotation(invert_diffeo(CircleDiffeo::identity(g))) <= 1e-15); }
  SECTION("rotation") { CHECK(distance_to_rotation(invert_diffeo(CircleDiffeo::rotation(g, 0.5)), -0.5) <= 1e-13); }
  SECTION("x + 0.1 sin x, checked by composition residual") {
    std::vector<double> p(g.size());
    for (int j = 0; j < g.size(); ++j) p[j] = 0.1 * std::sin(g.node(j));
    const CircleDiffeo d(g, p);
    const CircleDiffeo inv = invert_diffeo(d);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d(inv.at_node(j)) - g.node(j)) <= 1e-10);
  }
}

TEST_CASE("inverse composed with the map is the identity lift", "[circle][property]") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const CircleGrid g(128);
  for (int trial = 0; trial < 10; ++trial) {
    // p = sum of a few modes with |p'| < 0.8 keeps tau increasing
    const double a1 = 0.3 * ud(rng), b1 = 0.3 * ud(rng), a2 = 0.1 * ud(rng), b2 = 0.1 * ud(rng), shift = 3 * ud(rng);
    std::vector<double> p(g.size());
    for (int j = 0; j < g.size(); ++j) {
      const double t = g.node(j);
      p[j] = shift + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) + b2 * std::sin(2 * t);
    }
    const CircleDiffeo d(g, p);
    const CircleDiffeo id = compose(invert_diffeo(d), d);
    CHECK(distance_to_rotation(id) <= 1e-9);
  }
}

TEST_CASE("CircleDiffeo rejects decreasing lifts", "[circle]") {
  const CircleGrid g(32);
  std::vector<double> p(g.size());
  for (int j = 0; j < g.size(); ++j) p[j] = 2.0 * std::sin(g.node(j));
  CHECK_THROWS_AS(CircleDiffeo(g, p), ValidationError);
}
