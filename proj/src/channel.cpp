#include "fermi/channel.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

constexpr double cptp_limit = 1e-8;

nlohmann::json complex_pair(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

CombinedSmearing one(SmearingIndex j) { return CombinedSmearing::single(j); }

TrigFactor factor(int kind, SmearingIndex j) {
  return kind == 0 ? cos_of(one(j)) : sin_of(one(j));
}

}  // namespace

QubitState::QubitState(const Matrix2c& rho) : rho_(rho) {
  if (!rho.allFinite()) throw DomainError("qubit state: non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tolerance)
    throw DomainError("qubit state: not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tolerance)
    throw DomainError("qubit state: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(rho);
  if (es.eigenvalues().minCoeff() < -tolerance)
    throw DomainError("qubit state: negative eigenvalue");
}

QubitState QubitState::ground() {
  Matrix2c r = Matrix2c::Zero();
  r(0, 0) = 1.0;
  return QubitState(r);
}

QubitState QubitState::excited() {
  Matrix2c r = Matrix2c::Zero();
  r(1, 1) = 1.0;
  return QubitState(r);
}

QubitState QubitState::bloch(double theta, double phi) {
  Eigen::Vector2cd psi(std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi));
  Matrix2c r = psi * psi.adjoint();
  // Kill rounding in the trace and off-diagonal symmetry.
  r(1, 0) = std::conj(r(0, 1));
  r(0, 0) = r(0, 0).real();
  r(1, 1) = 1.0 - r(0, 0).real();
  return QubitState(r);
}

QubitState QubitState::from_init(const QubitInit& init) {
  switch (init.kind) {
    case QubitInit::Kind::ground:
      return ground();
    case QubitInit::Kind::excited:
      return excited();
    case QubitInit::Kind::bloch:
      return bloch(init.theta, init.phi);
  }
  return ground();
}

Matrix2c Monopole::matrix() const {
  const double ph = gap * tau;
  Matrix2c m;
  m << 0.0, Complex(std::cos(ph), -std::sin(ph)), Complex(std::cos(ph), std::sin(ph)), 0.0;
  return m;
}

Complex GammaTensor::at(const std::string& word) const {
  if (word.size() != 4) throw DomainError("gamma word must have four letters");
  int idx[4];
  for (int p = 0; p < 4; ++p) {
    if (word[p] == 'c')
      idx[p] = 0;
    else if (word[p] == 's')
      idx[p] = 1;
    else
      throw DomainError("gamma word letters must be c or s");
  }
  return (*this)(idx[0], idx[1], idx[2], idx[3]);
}

Matrix2c QubitChannel::apply(const Matrix2c& rho) const {
  const Matrix2c m = mu.matrix();
  const Complex i(0.0, 1.0);
  return a * rho + b * m * rho * m + i * c_plus * rho * m - i * c_minus * m * rho;
}

Matrix4c QubitChannel::choi() const {
  Matrix4c j = Matrix4c::Zero();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Matrix2c unit = Matrix2c::Zero();
      unit(r, c) = 1.0;
      j.block<2, 2>(2 * r, 2 * c) = apply(unit);
    }
  return j;
}

bool CptpReport::ok(double tol) const {
  return min_eigenvalue >= -tol && tp_residual <= tol && hermiticity_residual <= tol;
}

CptpReport cptp_report(const Matrix4c& choi) {
  CptpReport rep;
  rep.hermiticity_residual = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  const Matrix4c herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  double tp = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const Complex t = choi.block<2, 2>(2 * r, 2 * c).trace();
      tp = std::max(tp, std::abs(t - Complex(r == c ? 1.0 : 0.0)));
    }
  rep.tp_residual = tp;
  return rep;
}

std::pair<Matrix4c, CptpReport> choi_and_cptp(const QubitChannel& ch) {
  Matrix4c j = ch.choi();
  CptpReport rep = cptp_report(j);
  return {j, rep};
}

double alpha(const QubitState& rho_a, const Monopole& mu_a) {
  return (mu_a.matrix() * rho_a.rho()).trace().real();
}

GammaTensor gamma_tensor(const QuasifreeState& st, SmearingIndex f_a, SmearingIndex f_b) {
  GammaTensor g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const TrigWord word{factor(i, f_a), factor(j, f_b), factor(k, f_b), factor(l, f_a)};
          g(i, j, k, l) = st.expectation(word);
        }
  return g;
}

QubitChannel general_channel(const GammaTensor& g, double alpha, const Monopole& mu_b) {
  const Complex ia(0.0, alpha);
  constexpr int c = 0, s = 1;
  QubitChannel ch;
  ch.mu = mu_b;
  ch.a = g(c, c, c, c) + g(s, c, c, s) + ia * (g(s, c, c, c) - g(c, c, c, s));
  ch.b = g(c, s, s, c) + g(s, s, s, s) + ia * (g(s, s, s, c) - g(c, s, s, s));
  ch.c_plus = g(c, s, c, c) + g(s, s, c, s) + ia * (g(s, s, c, c) - g(c, s, c, s));
  ch.c_minus = g(c, c, s, c) + g(s, c, s, s) + ia * (g(s, c, s, c) - g(c, c, s, s));
  const auto [j, rep] = choi_and_cptp(ch);
  if (!rep.ok(cptp_limit))
    throw ConsistencyError("general channel is not CPTP: min eigenvalue " +
                           std::to_string(rep.min_eigenvalue) + ", trace residual " +
                           std::to_string(rep.tp_residual));
  return ch;
}

QubitChannel quasifree_channel(double nu_b, double e_ab, const Monopole& mu_b, double alpha) {
  if (!(nu_b > 0.0 && nu_b <= 1.0)) throw DomainError("quasifree channel: nu_B must lie in (0, 1]");
  QubitChannel ch;
  ch.mu = mu_b;
  const double c2 = std::cos(2.0 * e_ab);
  const double s2 = std::sin(2.0 * e_ab);
  ch.a = 0.5 * (1.0 + nu_b * c2);
  ch.b = 0.5 * (1.0 - nu_b * c2);
  ch.c_plus = -0.5 * alpha * nu_b * s2;
  ch.c_minus = ch.c_plus;
  return ch;
}

double excitation_probability(const QubitChannel& ch, const QubitState& init) {
  return ch.apply(init.rho())(1, 1).real();
}

double coefficient_distance(const QubitChannel& x, const QubitChannel& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c_plus - y.c_plus),
                   std::abs(x.c_minus - y.c_minus)});
}

nlohmann::json channel_to_json(const QubitChannel& ch, double nu_b, double e_ab) {
  nlohmann::json j;
  j["coeffs"] = {{"a", complex_pair(ch.a)},
                 {"b", complex_pair(ch.b)},
                 {"c_plus", complex_pair(ch.c_plus)},
                 {"c_minus", complex_pair(ch.c_minus)}};
  const Matrix4c c = ch.choi();
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(complex_pair(c(r, k)));
    rows.push_back(row);
  }
  j["choi"] = rows;
  j["nu_B"] = nu_b;
  j["E_AB"] = e_ab;
  j["monopole"] = {{"gap", ch.mu.gap}, {"tau", ch.mu.tau}};
  j["picture"] = "interaction";
  return j;
}

}  // namespace fermi
