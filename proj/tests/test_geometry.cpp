#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/quadrature.hpp"
#include "fermi/quasifree.hpp"

using namespace fermi;

namespace {

DetectorSpec gauss(Vec3 c, double t, double sigma = 1.0, double lam = 1.0) {
  DetectorSpec d;
  d.center = c;
  d.t0 = t;
  d.sigma = sigma;
  d.lam = lam;
  d.profile = Profile::gaussian;
  return d;
}

DetectorSpec bump(Vec3 c, double t, double sigma = 1.0) {
  DetectorSpec d = gauss(c, t, sigma);
  d.profile = Profile::bump;
  return d;
}

// Two Gaussians in k-space after the angular integral:
// W = lam_a lam_b eta^2 / (4 pi^2 d) int_0^inf exp(-k^2 s^2 / 2) exp(-i k (t_a - t_b)) sin(k d) dk
Complex kspace_wightman(const DetectorSpec& a, const DetectorSpec& b) {
  const double d = std::hypot(a.center[0] - b.center[0], a.center[1] - b.center[1],
                              a.center[2] - b.center[2]);
  const double s2 = a.sigma * a.sigma + b.sigma * b.sigma;
  const double dt = a.t0 - b.t0;
  const double kmax = std::sqrt(2.0 * 40.0 * std::log(10.0) / s2);
  std::vector<double> pts;
  const int pieces = 200;
  for (int i = 0; i <= pieces; ++i) pts.push_back(kmax * i / pieces);
  QuadratureOptions q{1e-16, 1e-13, 20000};
  auto re = integrate(
      [&](double k) { return std::exp(-0.5 * k * k * s2) * std::cos(k * dt) * std::sin(k * d); },
      pts, q);
  auto im = integrate(
      [&](double k) { return -std::exp(-0.5 * k * k * s2) * std::sin(k * dt) * std::sin(k * d); },
      pts, q);
  const double pref = a.lam * b.lam * a.eta * b.eta / (4.0 * M_PI * M_PI * d);
  return pref * Complex(re.value, im.value);
}

double rel(Complex x, Complex y) { return std::abs(x - y) / std::max(1e-300, std::abs(y)); }

}  // namespace

TEST_CASE("profiles are normalized") {
  for (Profile p : {Profile::gaussian, Profile::bump}) {
    const double sigma = 1.7;
    const double rmax = p == Profile::bump ? sigma : 15 * sigma;
    const auto r = integrate(
        [&](double x) { return 4 * M_PI * x * x * profile_density(p, sigma, x); }, 0.0, rmax,
        {1e-15, 1e-13, 4000});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(profile_fourier(p, sigma, 0.0) == 1.0);
  }
  CHECK(profile_density(Profile::bump, 1.0, 1.0) == 0.0);
  CHECK(profile_density(Profile::bump, 1.0, 1.5) == 0.0);
}

TEST_CASE("bump Fourier transform against the radial transform") {
  const double sigma = 0.8;
  for (double k : {0.5, 3.0, 12.0}) {
    const auto r = integrate(
        [&](double x) {
          return 4 * M_PI * x * x * profile_density(Profile::bump, sigma, x) * std::sin(k * x) /
                 (k * x);
        },
        1e-300, sigma, {1e-16, 1e-13, 4000});
    CHECK(std::abs(profile_fourier(Profile::bump, sigma, k) - r.value) < 1e-12);
  }
}

TEST_CASE("Gaussian closed form against independent k-space quadrature") {
  const std::vector<std::pair<DetectorSpec, DetectorSpec>> cases{
      {gauss({0, 0, 0}, 0.0), gauss({3, 0, 0}, 0.0)},
      {gauss({0, 0, 0}, 0.0), gauss({4, 0, 0}, 4.0)},
      {gauss({0, 0, 0}, 0.0, 0.5), gauss({1, 2, 2}, 1.0, 1.5, 2.0)},
      {gauss({0, 0, 0}, 2.0), gauss({0, 0, 7}, -5.0, 1.0, 0.3)},
      {gauss({0, 0, 0}, 0.0), gauss({0.01, 0, 0}, 0.5)},
  };
  for (const auto& [a, b] : cases) {
    const Complex w = smeared_wightman(a, b);
    const Complex expect = kspace_wightman(a, b);
    CAPTURE(w);
    CAPTURE(expect);
    CHECK(std::abs(w - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    CHECK(causal_propagator(a, b) == doctest::Approx(2 * w.imag()).epsilon(1e-12));
  }
}

TEST_CASE("radial route reproduces the Gaussian closed form") {
  GeometryOptions forced;
  forced.force_radial = true;
  const std::vector<std::pair<DetectorSpec, DetectorSpec>> cases{
      {gauss({0, 0, 0}, 0.0), gauss({3, 0, 0}, 2.0)},
      {gauss({0, 0, 0}, 0.0, 0.7), gauss({0, 2, 0}, 3.0, 1.2)},
      {gauss({0, 0, 0}, 0.0), gauss({0, 0, 0}, 1.5)},
  };
  for (const auto& [a, b] : cases) {
    const Complex closed = smeared_wightman(a, b);
    const Complex radial = smeared_wightman(a, b, forced);
    CHECK(rel(radial, closed) < 1e-9);
  }
}

TEST_CASE("coincident Gaussians") {
  const double sigma = 1.3;
  const double lam = 0.7;
  const auto a = gauss({1, 2, 3}, 0.5, sigma, lam);
  const Complex w = smeared_wightman(a, a);
  CHECK(w.imag() == 0.0);
  CHECK(w.real() == doctest::Approx(lam * lam / (8 * M_PI * M_PI * sigma * sigma)).epsilon(1e-14));
}

TEST_CASE("bump supports give exact zeros of the commutator") {
  SUBCASE("spacelike") {
    CHECK(causal_propagator(bump({0, 0, 0}, 0.0), bump({4, 0, 0}, 1.9)) == 0.0);
    CHECK(causal_relation(bump({0, 0, 0}, 0.0), bump({4, 0, 0}, 1.9)) ==
          CausalRelation::spacelike);
  }
  SUBCASE("deep inside the light cone") {
    const auto a = bump({0, 0, 0}, 0.0);
    const auto b = bump({1, 0, 0}, 3.0);
    CHECK(causal_propagator(a, b) == 0.0);
    CHECK(causal_relation(a, b) == CausalRelation::future);
    CHECK(causal_relation(b, a) == CausalRelation::past);
    CHECK(smeared_wightman(a, b).real() != 0.0);
  }
  SUBCASE("straddling the light cone") {
    const auto a = bump({0, 0, 0}, 0.0);
    const auto b = bump({4, 0, 0}, 3.0);
    CHECK(causal_propagator(a, b) > 0.0);
    CHECK(causal_relation(a, b) == CausalRelation::partial);
    // Every point of B is reachable from some point of A.
    CHECK(causal_relation(a, bump({4, 0, 0}, 4.0)) == CausalRelation::future);
    CHECK_FALSE(causal_relation_is_approximate(a, b));
  }
}

TEST_CASE("causal propagator is exactly antisymmetric (property)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-4, 4);
  std::uniform_real_distribution<double> width(0.5, 2.0);
  for (int i = 0; i < 40; ++i) {
    const auto a = gauss({pos(rng), pos(rng), pos(rng)}, pos(rng), width(rng));
    const auto b = gauss({pos(rng), pos(rng), pos(rng)}, pos(rng), width(rng));
    CHECK(causal_propagator(a, b) == -causal_propagator(b, a));
    const Complex ab = smeared_wightman(a, b);
    const Complex ba = smeared_wightman(b, a);
    CHECK(ab == std::conj(ba));
  }
  const auto a = bump({0, 0, 0}, 0.0, 0.8);
  const auto b = bump({2, 1, 0}, 2.4, 1.1);
  CHECK(causal_propagator(a, b) == -causal_propagator(b, a));
}

TEST_CASE("rotation and translation invariance") {
  const auto a = gauss({0, 0, 0}, 0.0);
  const auto b = gauss({3, 4, 0}, 5.5, 1.4);
  const Complex w = smeared_wightman(a, b);
  const double c = std::cos(0.7), s = std::sin(0.7);
  const auto a2 = gauss({1, -2, 3}, 10.0);
  const auto b2 = gauss({1 + 3 * c - 4 * s, -2 + 3 * s + 4 * c, 3}, 15.5, 1.4);
  CHECK(rel(smeared_wightman(a2, b2), w) < 1e-12);
}

TEST_CASE("Gaussian commutator peaks on the null cone and decays off it") {
  const double sigma = 1.0;
  const double d = 10.0;
  const auto a = gauss({0, 0, 0}, 0.0, sigma);
  const double step = 0.05;
  double best = 0.0, best_t = 0.0;
  for (double t = 5.0; t <= 15.0; t += step) {
    const double e = std::abs(causal_propagator(a, gauss({d, 0, 0}, t, sigma)));
    if (e > best) {
      best = e;
      best_t = t;
    }
  }
  CHECK(std::abs(best_t - d) <= step + 1e-12);
  // exp(-(dt - d)^2 / (4 sigma^2)) for two unit Gaussians
  CHECK(std::abs(causal_propagator(a, gauss({d, 0, 0}, d + 10 * sigma, sigma))) < 1e-9 * best);
  CHECK(std::abs(causal_propagator(a, gauss({d, 0, 0}, d - 10 * sigma, sigma))) < 1e-9 * best);
}

TEST_CASE("box modes reproduce the continuum commutator") {
  const double length = 40.0;
  const auto a = gauss({20, 20, 20}, 0.0);
  const auto b = gauss({23, 20, 20}, 3.0);
  const std::vector<DetectorSpec> dets{a, b};
  const auto modes = box_modes(length, 20, 0.0, dets);
  const auto st = vacuum_from_modes(modes);
  const double e_box = st.data().e({0}, {1});
  const double e_cont = causal_propagator(a, b);
  CHECK(e_cont > 0.0);
  CHECK(e_box > 0.0);
  CHECK(std::abs(e_box - e_cont) < 0.1 * e_cont);
}

TEST_CASE("detector validation") {
  auto d = gauss({0, 0, 0}, 0.0);
  d.sigma = 0.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d.sigma = 1.0;
  d.eta = -1.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d.eta = 1.0;
  d.t0 = std::nan("");
  CHECK_THROWS_AS(d.validate(), DomainError);
}
