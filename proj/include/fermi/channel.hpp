#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "fermi/geometry.hpp"
#include "fermi/quasifree.hpp"
#include "fermi/smearing.hpp"

namespace fermi {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Qubit density matrix in the basis (|g>, |e>).
class QubitState {
 public:
  static constexpr double tolerance = 1e-12;

  /// Throws DomainError unless rho is Hermitian, unit trace and PSD (to tolerance).
  explicit QubitState(const Matrix2c& rho);

  static QubitState ground();
  static QubitState excited();
  /// cos(theta/2)|g> + e^{i phi} sin(theta/2)|e>.
  static QubitState bloch(double theta, double phi);
  static QubitState from_init(const QubitInit& init);

  const Matrix2c& rho() const { return rho_; }

 private:
  Matrix2c rho_;
};

/// Interaction-picture monopole mu(tau) = e^{-i gap tau}|g><e| + e^{i gap tau}|e><g|.
struct Monopole {
  double gap = 0.0;
  double tau = 0.0;

  Matrix2c matrix() const;
};

/// gamma_ijkl = omega(X_A^i X_B^j X_B^k X_A^l), X^c = cos phi(f), X^s = sin phi(f).
/// Index bits: c = 0, s = 1, packed as i*8 + j*4 + k*2 + l.
class GammaTensor {
 public:
  GammaTensor() { values_.fill(0.0); }

  Complex& operator()(int i, int j, int k, int l) { return values_[index(i, j, k, l)]; }
  Complex operator()(int i, int j, int k, int l) const { return values_[index(i, j, k, l)]; }
  /// Lookup by a four-letter word over {c, s}, e.g. "sccs".
  Complex at(const std::string& word) const;

  const std::array<Complex, 16>& values() const { return values_; }

 private:
  static int index(int i, int j, int k, int l) { return i * 8 + j * 4 + k * 2 + l; }
  std::array<Complex, 16> values_;
};

/// Phi(rho) = a rho + b mu rho mu + i c_plus rho mu - i c_minus mu rho.
struct QubitChannel {
  Complex a;
  Complex b;
  Complex c_plus;
  Complex c_minus;
  Monopole mu;

  Matrix2c apply(const Matrix2c& rho) const;
  /// J = sum_ij |i><j| (x) Phi(|i><j|), input factor first, trace 2.
  Matrix4c choi() const;
};

struct CptpReport {
  double min_eigenvalue = 0.0;
  double tp_residual = 0.0;          // max |tr_out J - 1|
  double hermiticity_residual = 0.0; // max |J - J^dagger|
  bool ok(double tol) const;
};

/// Choi diagnostics for an arbitrary 4x4 Choi matrix.
CptpReport cptp_report(const Matrix4c& choi);

std::pair<Matrix4c, CptpReport> choi_and_cptp(const QubitChannel& ch);

/// tr(mu_A rho_A); real because both are Hermitian.
double alpha(const QubitState& rho_a, const Monopole& mu_a);

GammaTensor gamma_tensor(const QuasifreeState& st, SmearingIndex f_a, SmearingIndex f_b);

/// Channel from an arbitrary gamma tensor. Throws ConsistencyError if the
/// result violates CPTP by more than 1e-8.
QubitChannel general_channel(const GammaTensor& gamma, double alpha, const Monopole& mu_b);

/// a = (1 + nu cos 2E)/2, b = (1 - nu cos 2E)/2 and the commutator term
/// -(i alpha / 2) nu sin(2E) [rho, mu].
QubitChannel quasifree_channel(double nu_b, double e_ab, const Monopole& mu_b,
                               double alpha = 1.0);

/// <e|Phi(rho)|e>, the Born-rule excitation probability.
double excitation_probability(const QubitChannel& ch, const QubitState& init);

/// Largest coefficient-wise difference |a - a'| etc.
double coefficient_distance(const QubitChannel& x, const QubitChannel& y);

/// {"coeffs": {...}, "choi": 4x4 [re, im], "nu_B", "E_AB", "picture": "interaction"}
nlohmann::json channel_to_json(const QubitChannel& ch, double nu_b, double e_ab);

}  // namespace fermi
