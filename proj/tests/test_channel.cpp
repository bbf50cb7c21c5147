#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "fermi/channel.hpp"
#include "fermi/errors.hpp"
#include "fermi/fock_oracle.hpp"

using namespace fermi;
using Eigen::kroneckerProduct;
using Eigen::MatrixXcd;

namespace {

std::vector<double> choi_spectrum(const Matrix4c& j) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(j);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

BilinearData two_point(double waa, double wbb, Complex wab) {
  Eigen::MatrixXcd w(2, 2);
  w << waa, wab, std::conj(wab), wbb;
  return BilinearData::from_wightman({0, 1}, w);
}

// Partial trace over everything but the middle qubit of A (2) x B (2) x F (n).
Matrix2c trace_to_b(const MatrixXcd& rho, Eigen::Index n) {
  Matrix2c out = Matrix2c::Zero();
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (Eigen::Index f = 0; f < n; ++f)
          out(i, j) += rho((a * 2 + i) * n + f, (a * 2 + j) * n + f);
  return out;
}

}  // namespace

TEST_CASE("qubit states") {
  CHECK(QubitState::ground().rho()(0, 0) == Complex(1.0));
  CHECK(QubitState::excited().rho()(1, 1) == Complex(1.0));
  const auto p = QubitState::bloch(M_PI / 2, 0.3);
  CHECK(std::abs(p.rho()(1, 0) - 0.5 * std::polar(1.0, 0.3)) < 1e-15);
  Matrix2c bad;
  bad << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(QubitState{bad}, DomainError);
}

TEST_CASE("monopole and alpha") {
  const Monopole mu{1.5, 0.4};
  const Matrix2c m = mu.matrix();
  CHECK((m * m - Matrix2c::Identity()).norm() < 1e-15);
  CHECK((m - m.adjoint()).norm() == 0.0);
  CHECK(alpha(QubitState::excited(), mu) == 0.0);
  CHECK(alpha(QubitState::ground(), mu) == 0.0);
  CHECK(alpha(QubitState::from_init(QubitInit::plus()), Monopole{1.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(alpha(QubitState::from_init(QubitInit::plus()), Monopole{2.0, 0.3}) ==
        doctest::Approx(std::cos(0.6)).epsilon(1e-14));
}

TEST_CASE("identity and dephasing-type channels have the expected Choi spectra") {
  const Monopole mu{1.0, 0.0};
  const auto id = choi_spectrum(quasifree_channel(1.0, 0.0, mu).choi());
  CHECK(id[0] == doctest::Approx(2.0));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(id[i]) < 1e-14);

  for (double p : {0.1, 0.3, 0.45}) {
    const auto ch = quasifree_channel(1.0 - 2 * p, 0.0, mu);
    CHECK(std::abs(ch.a - (1 - p)) < 1e-15);
    const auto ev = choi_spectrum(ch.choi());
    CHECK(ev[0] == doctest::Approx(2 * (1 - p)).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(2 * p).epsilon(1e-14));
    CHECK(std::abs(ev[2]) < 1e-14);
    CHECK(std::abs(ev[3]) < 1e-14);
  }
}

TEST_CASE("quasifree channels are CPTP for any parameters (property)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> nu(1e-6, 1.0), e(-M_PI, M_PI), al(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto rep = choi_and_cptp(quasifree_channel(nu(rng), e(rng), {1.0, 0.2}, al(rng))).second;
    CHECK(rep.ok(1e-12));
  }
  CHECK_THROWS_AS(quasifree_channel(0.0, 0.1, {}), DomainError);
  CHECK_THROWS_AS(quasifree_channel(1.1, 0.1, {}), DomainError);
}

TEST_CASE("gamma tensor of a quasifree state") {
  const auto st = QuasifreeState(two_point(0.6, 0.4, Complex(0.15, 0.3)));
  const double e = st.data().e({0}, {1});
  const double nu = nu_factor(st, {1});
  const auto g = gamma_tensor(st, {0}, {1});
  CHECK(std::abs(g.at("cccc") + g.at("sccs") - 0.5 * (1 + nu * std::cos(2 * e))) < 1e-14);
  CHECK(std::abs(g.at("cssc") + g.at("ssss") - 0.5 * (1 - nu * std::cos(2 * e))) < 1e-14);
  CHECK(std::abs(g.at("sscc") - g.at("cscs") - Complex(0, 0.5 * nu * std::sin(2 * e))) < 1e-14);
  // An odd number of sines has zero expectation.
  for (int idx = 0; idx < 16; ++idx) {
    const int sines = ((idx >> 3) & 1) + ((idx >> 2) & 1) + ((idx >> 1) & 1) + (idx & 1);
    if (sines % 2) CHECK(std::abs(g.values()[idx]) < 1e-12);
  }
}

TEST_CASE("general channel agrees with the quasifree closed form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.2), r(-0.9, 0.9), e(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const double waa = u(rng) + 1.0, wbb = u(rng) + 1.0;
    const auto st = QuasifreeState(
        two_point(waa, wbb, Complex(r(rng) * std::sqrt(waa * wbb), 0.5 * e(rng))));
    const Monopole mu{1.0, u(rng)};
    const double al = r(rng);
    const auto gen = general_channel(gamma_tensor(st, {0}, {1}), al, mu);
    const auto closed = quasifree_channel(nu_factor(st, {1}), st.data().e({0}, {1}), mu, al);
    CHECK(coefficient_distance(gen, closed) < 1e-12);
  }
}

TEST_CASE("general channel matches direct evolution for a non-Gaussian field state") {
  // One mode in the superposition (|0> + |2>)/sqrt(2), non-commuting Y_A and Y_B.
  TruncatedField tf;
  tf.modes.labels = {0, 1};
  tf.modes.g.resize(2, 1);
  tf.modes.g << Complex(0.4, 0.2), Complex(-0.1, 0.5);
  tf.modes.omega.resize(1);
  tf.modes.omega << 1.0;
  tf.cutoff = 14;
  const Eigen::Index n = tf.dimension();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(0) = 1 / std::sqrt(2.0);
  psi(2) = Complex(0.0, 1 / std::sqrt(2.0));

  const auto [ca, sa] = trig_of(build_Y(tf, 0));
  const auto [cb, sb] = trig_of(build_Y(tf, 1));
  const MatrixXcd xa[2] = {ca, sa};
  const MatrixXcd xb[2] = {cb, sb};
  GammaTensor g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          g(i, j, k, l) = psi.dot(xa[i] * xb[j] * xb[k] * xa[l] * psi);

  const Monopole mu_a{1.3, 0.2};
  const Monopole mu_b{0.7, 0.9};
  const auto rho_a = QubitState::bloch(1.1, 0.4);
  const auto ch = general_channel(g, alpha(rho_a, mu_a), mu_b);

  const MatrixXcd i2 = MatrixXcd::Identity(2, 2);
  const MatrixXcd ua = kroneckerProduct(i2, kroneckerProduct(i2, ca)).eval() -
                       Complex(0, 1) * kroneckerProduct(MatrixXcd(mu_a.matrix()),
                                                        kroneckerProduct(i2, sa)).eval();
  const MatrixXcd ub = kroneckerProduct(i2, kroneckerProduct(i2, cb)).eval() -
                       Complex(0, 1) * kroneckerProduct(i2, kroneckerProduct(
                                                                MatrixXcd(mu_b.matrix()), sb))
                                           .eval();
  const MatrixXcd u = ub * ua;
  const MatrixXcd rho_f = psi * psi.adjoint();
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix2c eij = Matrix2c::Zero();
      eij(i, j) = 1.0;
      const MatrixXcd total =
          kroneckerProduct(MatrixXcd(rho_a.rho()), kroneckerProduct(MatrixXcd(eij), rho_f));
      const Matrix2c out = trace_to_b(u * total * u.adjoint(), n);
      worst = std::max(worst, (out - ch.apply(eij)).norm());
    }
  CHECK(worst < 1e-13);
}

TEST_CASE("inconsistent gamma data is rejected") {
  GammaTensor g;
  g(0, 0, 0, 0) = 5.0;
  CHECK_THROWS_AS(general_channel(g, 0.0, {1.0, 0.0}), ConsistencyError);
}

TEST_CASE("excitation probabilities") {
  const Monopole mu{1.0, 0.5};
  const double nu = 0.6, e = 0.3;
  const auto ch = quasifree_channel(nu, e, mu, 0.0);
  CHECK(excitation_probability(ch, QubitState::ground()) ==
        doctest::Approx(0.5 * (1 - nu * std::cos(2 * e))).epsilon(1e-15));
  CHECK(excitation_probability(ch, QubitState::excited()) ==
        doctest::Approx(0.5 * (1 + nu * std::cos(2 * e))).epsilon(1e-15));
  const auto j = channel_to_json(ch, nu, e);
  CHECK(j["picture"] == "interaction");
  CHECK(j["coeffs"]["a"][0].get<double>() == doctest::Approx(ch.a.real()));
  CHECK(j["choi"].size() == 4);
}
