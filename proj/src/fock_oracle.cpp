#include "fermi/fock_oracle.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

using Eigen::MatrixXcd;

MatrixXcd annihilation(int cutoff) {
  MatrixXcd a = MatrixXcd::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

MatrixXcd mode_y(Complex g, int cutoff) {
  const MatrixXcd a = annihilation(cutoff);
  return g * a + std::conj(g) * a.adjoint();
}

MatrixXcd kron(const MatrixXcd& x, const MatrixXcd& y) {
  return Eigen::kroneckerProduct(x, y).eval();
}

// exp(i y) for Hermitian y.
MatrixXcd expi(const MatrixXcd& y) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(y);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXcd phase(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) phase(k) = Complex(std::cos(ev(k)), std::sin(ev(k)));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

// Qubit factor of each branch of U_j: c -> 1, s -> -i mu.
std::array<Matrix2c, 2> branches(const Monopole& mu) {
  return {Matrix2c::Identity(), Complex(0.0, -1.0) * mu.matrix()};
}

// Field operators X^c, X^s written as sums over e^{+iY} (sign 0) and e^{-iY} (sign 1).
constexpr Complex expansion[2][2] = {{{0.5, 0.0}, {0.5, 0.0}}, {{0.0, -0.5}, {0.0, 0.5}}};

// Assemble Bob's Choi from field words w[x'][y'][y][x] = omega(X_A^x' X_B^y' X_B^y X_A^x).
template <class Words>
Matrix4c assemble(const Words& w, const QubitState& rho_a, const Monopole& mu_a,
                  const Monopole& mu_b) {
  const auto ma = branches(mu_a);
  const auto mb = branches(mu_b);
  Complex alice[2][2];
  for (int x = 0; x < 2; ++x)
    for (int xp = 0; xp < 2; ++xp)
      alice[x][xp] = (ma[x] * rho_a.rho() * ma[xp].adjoint()).trace();
  Matrix4c choi = Matrix4c::Zero();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Matrix2c unit = Matrix2c::Zero();
      unit(r, c) = 1.0;
      Matrix2c out = Matrix2c::Zero();
      for (int x = 0; x < 2; ++x)
        for (int xp = 0; xp < 2; ++xp)
          for (int y = 0; y < 2; ++y)
            for (int yp = 0; yp < 2; ++yp)
              out += alice[x][xp] * w[xp][yp][y][x] * (mb[y] * unit * mb[yp].adjoint());
      choi.block<2, 2>(2 * r, 2 * c) = out;
    }
  return choi;
}

std::vector<int> cutoff_schedule(int start, int ceiling) {
  std::vector<int> out{start};
  while (out.back() < ceiling) {
    const int next = static_cast<int>(std::ceil(1.5 * out.back()));
    out.push_back(std::min(next, ceiling));
  }
  return out;
}

}  // namespace

void TruncatedField::validate() const {
  modes.validate();
  if (cutoff < 2) throw DomainError("truncated field: cutoff must be >= 2");
  if (modes.g.rows() < 2) throw DomainError("truncated field: couplings for detectors A and B required");
  if (state == StateKind::thermal && !(beta > 0.0 && std::isfinite(beta)))
    throw DomainError("truncated field: thermal state needs finite beta > 0");
  if (state == StateKind::custom) throw DomainError("truncated field: only vacuum or thermal states");
}

Eigen::Index TruncatedField::dimension() const {
  Eigen::Index d = 1;
  for (Eigen::Index k = 0; k < modes.mode_count(); ++k) d *= cutoff;
  return d;
}

Eigen::VectorXd TruncatedField::populations(Eigen::Index mode) const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff);
  if (state == StateKind::vacuum) {
    p(0) = 1.0;
    return p;
  }
  const double x = beta * modes.omega(mode);
  for (int n = 0; n < cutoff; ++n) p(n) = std::exp(-x * n);
  return p / p.sum();
}

MatrixXcd build_Y(const TruncatedField& tf, Eigen::Index detector) {
  tf.validate();
  const Eigen::Index modes = tf.modes.mode_count();
  MatrixXcd y = MatrixXcd::Zero(tf.dimension(), tf.dimension());
  for (Eigen::Index k = 0; k < modes; ++k) {
    MatrixXcd term = MatrixXcd::Identity(1, 1);
    for (Eigen::Index m = 0; m < modes; ++m)
      term = kron(term, m == k ? mode_y(tf.modes.g(detector, k), tf.cutoff)
                               : MatrixXcd::Identity(tf.cutoff, tf.cutoff));
    y += term;
  }
  return y;
}

std::pair<MatrixXcd, MatrixXcd> trig_of(const MatrixXcd& y) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(y);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const MatrixXcd& v = es.eigenvectors();
  const MatrixXcd c = v * ev.array().cos().matrix().cast<Complex>().asDiagonal() * v.adjoint();
  const MatrixXcd s = v * ev.array().sin().matrix().cast<Complex>().asDiagonal() * v.adjoint();
  return {c, s};
}

MatrixXcd delta_unitary(const MatrixXcd& y, const Monopole& mu) {
  const auto [c, s] = trig_of(y);
  return kron(Matrix2c::Identity(), c) - Complex(0.0, 1.0) * kron(mu.matrix(), s);
}

Matrix4c oracle_choi_dense(const TruncatedField& tf, const QubitState& rho_a, const Monopole& mu_a,
                           const Monopole& mu_b) {
  tf.validate();
  const Eigen::Index d = tf.dimension();
  const MatrixXcd id2 = Matrix2c::Identity();
  const MatrixXcd ua_local = delta_unitary(build_Y(tf, 0), mu_a);  // A (x) field
  const MatrixXcd ub_local = delta_unitary(build_Y(tf, 1), mu_b);  // B (x) field
  // Insert the other qubit: A (x) B (x) field.
  MatrixXcd ua = MatrixXcd::Zero(4 * d, 4 * d);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b = 0; b < 2; ++b)
        ua.block((2 * a1 + b) * d, (2 * a2 + b) * d, d, d) = ua_local.block(a1 * d, a2 * d, d, d);
  const MatrixXcd ub = kron(id2, ub_local);
  const MatrixXcd u = ub * ua;

  MatrixXcd rho_f = MatrixXcd::Identity(1, 1);
  for (Eigen::Index k = 0; k < tf.modes.mode_count(); ++k)
    rho_f = kron(rho_f, tf.populations(k).cast<Complex>().asDiagonal().toDenseMatrix());

  Matrix4c choi = Matrix4c::Zero();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      MatrixXcd unit = MatrixXcd::Zero(2, 2);
      unit(r, c) = 1.0;
      const MatrixXcd rho = kron(kron(MatrixXcd(rho_a.rho()), unit), rho_f);
      const MatrixXcd out = u * rho * u.adjoint();
      Matrix2c bob = Matrix2c::Zero();
      for (int a = 0; a < 2; ++a)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int b2 = 0; b2 < 2; ++b2)
            bob(b1, b2) += out.block((2 * a + b1) * d, (2 * a + b2) * d, d, d).trace();
      choi.block<2, 2>(2 * r, 2 * c) = bob;
    }
  return choi;
}

Matrix4c oracle_choi(const TruncatedField& tf, const QubitState& rho_a, const Monopole& mu_a,
                     const Monopole& mu_b) {
  tf.validate();
  const Eigen::Index modes = tf.modes.mode_count();
  // trace[s1][s2][s3][s4] = prod_k tr(rho_k E_A^s1 E_B^s2 E_B^s3 E_A^s4), sign 1 meaning inverse.
  Complex traces[2][2][2][2];
  for (auto& a : traces)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& d : c) d = 1.0;
  for (Eigen::Index k = 0; k < modes; ++k) {
    const MatrixXcd ea = expi(mode_y(tf.modes.g(0, k), tf.cutoff));
    const MatrixXcd eb = expi(mode_y(tf.modes.g(1, k), tf.cutoff));
    const MatrixXcd ops_a[2] = {ea, ea.adjoint()};
    const MatrixXcd ops_b[2] = {eb, eb.adjoint()};
    const Eigen::VectorXcd p = tf.populations(k).cast<Complex>();
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        const MatrixXcd left = ops_a[s1] * ops_b[s2];
        for (int s3 = 0; s3 < 2; ++s3) {
          const MatrixXcd mid = left * ops_b[s3];
          for (int s4 = 0; s4 < 2; ++s4) {
            const MatrixXcd word = mid * ops_a[s4];
            traces[s1][s2][s3][s4] *= (word.diagonal().array() * p.array()).sum();
          }
        }
      }
  }
  Complex words[2][2][2][2];
  for (int xp = 0; xp < 2; ++xp)
    for (int yp = 0; yp < 2; ++yp)
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
          Complex sum = 0.0;
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
              for (int s3 = 0; s3 < 2; ++s3)
                for (int s4 = 0; s4 < 2; ++s4)
                  sum += expansion[xp][s1] * expansion[yp][s2] * expansion[y][s3] *
                         expansion[x][s4] * traces[s1][s2][s3][s4];
          words[xp][yp][y][x] = sum;
        }
  return assemble(words, rho_a, mu_a, mu_b);
}

nlohmann::json OracleReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back({choi(r, c).real(), choi(r, c).imag()});
    rows.push_back(row);
  }
  return {{"choi", rows},
          {"cutoff_used", cutoff_used},
          {"convergence_residual", convergence_residual}};
}

OracleReport oracle_channel(const ModeCouplings& modes, StateKind state, double beta,
                            const QubitState& rho_a, const Monopole& mu_a, const Monopole& mu_b,
                            const OracleOptions& opts) {
  if (modes.mode_count() > opts.max_modes)
    throw DomainError("oracle: " + std::to_string(modes.mode_count()) +
                      " modes exceed the limit of " + std::to_string(opts.max_modes));
  if (opts.start_cutoff < 2 || opts.max_cutoff < opts.start_cutoff)
    throw DomainError("oracle: invalid cutoff range");
  TruncatedField tf{modes, opts.start_cutoff, state, beta};
  OracleReport rep;
  Matrix4c prev;
  bool have_prev = false;
  double residual = 0.0;
  for (int cutoff : cutoff_schedule(opts.start_cutoff, opts.max_cutoff)) {
    tf.cutoff = cutoff;
    const Matrix4c cur = oracle_choi(tf, rho_a, mu_a, mu_b);
    if (have_prev) {
      residual = (cur - prev).norm();
      if (residual < opts.tolerance) {
        rep.choi = cur;
        rep.cutoff_used = cutoff;
        rep.convergence_residual = residual;
        return rep;
      }
    }
    prev = cur;
    have_prev = true;
  }
  throw AccuracyError("oracle cutoff ceiling " + std::to_string(opts.max_cutoff) +
                          " reached without convergence",
                      residual);
}

}  // namespace fermi
