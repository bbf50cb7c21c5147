#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fermi/channel.hpp"
#include "fermi/quasifree.hpp"

namespace fermi {

/// Discrete field modes truncated to `cutoff` Fock levels each, in a diagonal
/// product state (vacuum, or mode-wise geometric thermal populations
/// renormalized after truncation). Tensor order is mode_1 (x) ... (x) mode_N,
/// mode_1 most significant.
struct TruncatedField {
  ModeCouplings modes;
  int cutoff = 8;
  StateKind state = StateKind::vacuum;
  double beta = 0.0;

  void validate() const;
  Eigen::Index dimension() const;
  /// Occupation probabilities of one mode, summing to 1.
  Eigen::VectorXd populations(Eigen::Index mode) const;
};

/// Y_j = sum_k (g_jk a_k + conj(g_jk) a_k^dagger) on the full truncated space.
Eigen::MatrixXcd build_Y(const TruncatedField& tf, Eigen::Index detector);

/// (cos Y, sin Y) from the eigendecomposition of a Hermitian Y.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> trig_of(const Eigen::MatrixXcd& y);

/// U = 1 (x) cos Y - i mu (x) sin Y on qubit (x) field.
Eigen::MatrixXcd delta_unitary(const Eigen::MatrixXcd& y, const Monopole& mu);

/// Bob's Choi matrix from literal evolution of A (x) B (x) field under U_B U_A
/// followed by partial traces. Dense in the full space; small instances only.
Matrix4c oracle_choi_dense(const TruncatedField& tf, const QubitState& rho_a, const Monopole& mu_a,
                           const Monopole& mu_b);

/// Same Choi matrix, using that the truncated Y_j is a sum of commuting
/// single-mode terms and the field state is a product, so every field trace
/// factorizes over modes.
Matrix4c oracle_choi(const TruncatedField& tf, const QubitState& rho_a, const Monopole& mu_a,
                     const Monopole& mu_b);

struct OracleOptions {
  double tolerance = 1e-8;
  int start_cutoff = 8;
  int max_cutoff = 64;
  int max_modes = 3;
};

struct OracleReport {
  Matrix4c choi;
  int cutoff_used = 0;
  double convergence_residual = 0.0;

  nlohmann::json to_json() const;
};

/// Raises the cutoff 8 -> ceil(1.5 x) ... until the Choi Frobenius change
/// drops below the tolerance; AccuracyError if the ceiling is reached first.
OracleReport oracle_channel(const ModeCouplings& modes, StateKind state, double beta,
                            const QubitState& rho_a, const Monopole& mu_a, const Monopole& mu_b,
                            const OracleOptions& opts = {});

}  // namespace fermi
