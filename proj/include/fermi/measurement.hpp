#pragma once

#include <optional>
#include <utility>

#include "fermi/channel.hpp"
#include "fermi/quasifree.hpp"

namespace fermi {

enum class Outcome { ground, excited };

std::string to_string(Outcome o);

struct MeasurementOutcome {
  Outcome outcome;
  double probability;
};

/// Alice starts excited and is projected onto |g> (or |e>) after her coupling.
/// Pr(ground) = omega(S_A^2) = (1 - nu_A)/2, Pr(excited) = omega(C_A^2).
std::pair<MeasurementOutcome, MeasurementOutcome> outcome_probability(const QuasifreeState& st,
                                                                      SmearingIndex f_a);

/// Field functional after Alice's projective measurement.
///
/// With conditioning set, observables flagged inside J+(supp f_A) see
/// omega~(X) = omega(K X K)/omega(K^2) with K = S_A (ground) or C_A (excited);
/// anything else sees the unconditioned state.
struct UpdatedState {
  const QuasifreeState* base = nullptr;
  std::optional<SmearingIndex> conditioned_on;
  Outcome outcome = Outcome::ground;
  bool in_causal_future = false;

  static constexpr double null_event = 1e-14;
};

/// Throws NullEventError when the conditioning outcome has probability below 1e-14.
Complex conditioned_expectation(const UpdatedState& ust, const TrigWord& word);

/// Phi~(rho) = w(C_B^2) rho + w(S_B^2) mu rho mu + i w(S_B C_B) rho mu - i w(C_B S_B) mu rho,
/// with w the updated functional.
QubitChannel tilde_channel(const UpdatedState& ust, SmearingIndex f_b, const Monopole& mu_b);

/// Bob's channel when Alice never couples: the updated-state formula with no conditioning.
QubitChannel local_channel(const QuasifreeState& st, SmearingIndex f_b, const Monopole& mu_b);

struct MixtureCheck {
  QubitChannel averaged;  // sum over outcomes of Pr * Phi~ (conditioning always applied)
  QubitChannel local;     // Bob's channel with Alice absent
  double residual;        // coefficient distance between the two
};

/// Outcome-averaged updated channel versus Bob's purely local channel. The
/// residual vanishes whenever E_AB = 0 (no-signaling).
MixtureCheck mixture_check(const QuasifreeState& st, SmearingIndex f_a, SmearingIndex f_b,
                           const Monopole& mu_b);

}  // namespace fermi
