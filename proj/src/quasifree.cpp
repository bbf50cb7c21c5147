#include "fermi/quasifree.hpp"

#include <cmath>

#include "fermi/errors.hpp"

namespace fermi {

void ModeCouplings::validate() const {
  if (g.rows() != static_cast<Eigen::Index>(labels.size()))
    throw DomainError("mode couplings: one coupling row per detector label required");
  if (g.cols() != omega.size())
    throw DomainError("mode couplings: one frequency per mode column required");
  if (!g.allFinite()) throw DomainError("mode couplings: non-finite coupling");
  for (Eigen::Index k = 0; k < omega.size(); ++k)
    if (!std::isfinite(omega(k)) || omega(k) <= 0.0)
      throw DomainError("mode couplings: frequencies must be strictly positive (mode " +
                        std::to_string(k) + ")");
}

QuasifreeState::QuasifreeState(BilinearData data, StateKind kind, double beta)
    : data_(std::move(data)), kind_(kind), beta_(beta) {}

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::vacuum:
      return "vacuum";
    case StateKind::thermal:
      return "thermal";
    case StateKind::custom:
      return "custom";
  }
  return "unknown";
}

QuasifreeState vacuum_from_modes(const ModeCouplings& mc) {
  mc.validate();
  Eigen::MatrixXcd w = mc.g * mc.g.adjoint();
  return QuasifreeState(BilinearData::from_wightman(mc.labels, std::move(w)), StateKind::vacuum);
}

QuasifreeState thermal_from_modes(const ModeCouplings& mc, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("thermal state: beta must be finite and > 0");
  mc.validate();
  Eigen::VectorXd occupation(mc.omega.size());
  for (Eigen::Index k = 0; k < mc.omega.size(); ++k)
    occupation(k) = 1.0 / std::expm1(beta * mc.omega(k));

  const Eigen::MatrixXcd vac = mc.g * mc.g.adjoint();
  const Eigen::MatrixXcd weighted = mc.g * occupation.asDiagonal();
  // sum_k n_k [g_ik conj(g_jk) + conj(g_ik) g_jk] = 2 Re(...) entrywise, real symmetric.
  const Eigen::MatrixXd excess = 2.0 * (weighted * mc.g.adjoint()).real();
  Eigen::MatrixXcd w = vac;
  w.real() += excess;
  // Commutator is state independent: reuse the vacuum E bit for bit.
  Eigen::MatrixXd e = 2.0 * vac.imag();
  return QuasifreeState(BilinearData(mc.labels, std::move(w), std::move(e)), StateKind::thermal,
                        beta);
}

double nu_factor(const QuasifreeState& st, SmearingIndex j) {
  return std::exp(-2.0 * st.data().w(j, j).real());
}

}  // namespace fermi
