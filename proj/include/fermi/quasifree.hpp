#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermi/bilinear_data.hpp"
#include "fermi/weyl.hpp"

namespace fermi {

/// Discrete mode couplings: Y_j = sum_k (g_jk a_k + conj(g_jk) a_k^dagger).
///
/// Rows of `g` are detectors (in `labels` order), columns are modes.
struct ModeCouplings {
  std::vector<int> labels;
  Eigen::MatrixXcd g;
  Eigen::VectorXd omega;

  /// Throws DomainError unless shapes agree and every frequency is finite and > 0.
  void validate() const;
  Eigen::Index mode_count() const { return omega.size(); }
};

enum class StateKind { vacuum, thermal, custom };

/// Quasifree field state, fully described by its bilinear two-point data.
class QuasifreeState {
 public:
  explicit QuasifreeState(BilinearData data, StateKind kind = StateKind::custom,
                          double beta = 0.0);

  const BilinearData& data() const { return data_; }
  StateKind kind() const { return kind_; }
  /// Inverse temperature; meaningful only for thermal states.
  double beta() const { return beta_; }

  Complex expectation(const WeylCombination& wc) const {
    return quasifree_expectation(wc, data_);
  }
  Complex expectation(const TrigWord& word) const {
    return quasifree_expectation(trig_to_weyl(word, data_), data_);
  }

 private:
  BilinearData data_;
  StateKind kind_;
  double beta_;
};

std::string to_string(StateKind kind);

/// W_ij = sum_k g_ik conj(g_jk), E_ij = 2 Im W_ij.
QuasifreeState vacuum_from_modes(const ModeCouplings& mc);

/// With n_k = 1/(exp(beta omega_k) - 1):
/// W_ij = sum_k [(1 + n_k) g_ik conj(g_jk) + n_k conj(g_ik) g_jk]; E equals the vacuum E.
QuasifreeState thermal_from_modes(const ModeCouplings& mc, double beta);

/// nu_j = omega(W(2 E f_j)) = exp(-2 Re W_jj), in (0, 1].
double nu_factor(const QuasifreeState& st, SmearingIndex j);

}  // namespace fermi
