#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fermi/smearing.hpp"

namespace fermi {

using Complex = std::complex<double>;

/// Pairwise smeared two-point data over the registered base smearings.
///
/// Holds W_ij = W(f_i, f_j) (Hermitian) and the causal propagator
/// E_ij = E(f_i, f_j) (real, antisymmetric). Values for integer combinations
/// of base smearings follow by bilinear extension. The constructor validates
///   W_ij = conj(W_ji), E_ij = -E_ji, E_ij = 2 Im W_ij,
///   Re W positive semidefinite, |E_ij|^2 <= 4 Re W_ii Re W_jj
/// to the given tolerance (scaled by max(1, max|W_ij|)) and throws DomainError
/// on violation.
class BilinearData {
 public:
  static constexpr double default_tolerance = 1e-10;

  BilinearData(std::vector<int> labels, Eigen::MatrixXcd w, Eigen::MatrixXd e,
               double tolerance = default_tolerance);

  /// E is taken as 2 Im W.
  static BilinearData from_wightman(std::vector<int> labels, Eigen::MatrixXcd w,
                                    double tolerance = default_tolerance);

  std::size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  const Eigen::MatrixXcd& w() const { return w_; }
  const Eigen::MatrixXd& e() const { return e_; }

  bool contains(SmearingIndex j) const;
  /// Row/column of a registered smearing; throws UnregisteredSmearing.
  std::size_t index_of(SmearingIndex j) const;

  Complex w(SmearingIndex i, SmearingIndex j) const;
  double e(SmearingIndex i, SmearingIndex j) const;

  /// E(h1, h2) by bilinear extension. Summed over the upper triangle only, so
  /// E(h, h) == 0 and E(h2, h1) == -E(h1, h2) hold exactly in floating point.
  double causal(const CombinedSmearing& h1, const CombinedSmearing& h2) const;

  /// W(h1, h2) by bilinear extension.
  Complex wightman(const CombinedSmearing& h1, const CombinedSmearing& h2) const;

  /// mu(Eh, Eh) = Re W(h, h).
  double symmetric_norm(const CombinedSmearing& h) const;

  /// {"labels": [...], "W": [[[re, im], ...], ...], "E": [[...], ...]}
  nlohmann::json to_json() const;
  static BilinearData from_json(const nlohmann::json& j,
                                double tolerance = default_tolerance);

 private:
  std::vector<int> dense(const CombinedSmearing& h) const;

  std::vector<int> labels_;
  Eigen::MatrixXcd w_;
  Eigen::MatrixXd e_;
};

}  // namespace fermi
