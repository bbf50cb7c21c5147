#include "fermi/measurement.hpp"

#include <functional>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

CombinedSmearing one(SmearingIndex j) { return CombinedSmearing::single(j); }

TrigFactor projector_factor(Outcome o, SmearingIndex f_a) {
  return o == Outcome::ground ? sin_of(one(f_a)) : cos_of(one(f_a));
}

QubitChannel channel_from(const std::function<Complex(const TrigWord&)>& w, SmearingIndex f_b,
                          const Monopole& mu_b) {
  const auto c = cos_of(one(f_b));
  const auto s = sin_of(one(f_b));
  QubitChannel ch;
  ch.mu = mu_b;
  ch.a = w({c, c});
  ch.b = w({s, s});
  ch.c_plus = w({s, c});
  ch.c_minus = w({c, s});
  return ch;
}

}  // namespace

std::string to_string(Outcome o) { return o == Outcome::ground ? "ground" : "excited"; }

std::pair<MeasurementOutcome, MeasurementOutcome> outcome_probability(const QuasifreeState& st,
                                                                      SmearingIndex f_a) {
  const double pg = st.expectation(TrigWord{sin_of(one(f_a)), sin_of(one(f_a))}).real();
  const double pe = st.expectation(TrigWord{cos_of(one(f_a)), cos_of(one(f_a))}).real();
  return {{Outcome::ground, pg}, {Outcome::excited, pe}};
}

Complex conditioned_expectation(const UpdatedState& ust, const TrigWord& word) {
  if (!ust.base) throw DomainError("updated state has no base state");
  const QuasifreeState& st = *ust.base;
  if (!ust.conditioned_on || !ust.in_causal_future) return st.expectation(word);
  const TrigFactor k = projector_factor(ust.outcome, *ust.conditioned_on);
  const double norm = st.expectation(TrigWord{k, k}).real();
  if (norm < UpdatedState::null_event)
    throw NullEventError("conditioning on an outcome of probability " + std::to_string(norm));
  TrigWord sandwich;
  sandwich.reserve(word.size() + 2);
  sandwich.push_back(k);
  sandwich.insert(sandwich.end(), word.begin(), word.end());
  sandwich.push_back(k);
  return st.expectation(sandwich) / norm;
}

QubitChannel tilde_channel(const UpdatedState& ust, SmearingIndex f_b, const Monopole& mu_b) {
  QubitChannel ch = channel_from(
      [&](const TrigWord& w) { return conditioned_expectation(ust, w); }, f_b, mu_b);
  const auto [j, rep] = choi_and_cptp(ch);
  if (!rep.ok(1e-8)) throw ConsistencyError("updated channel is not CPTP");
  return ch;
}

QubitChannel local_channel(const QuasifreeState& st, SmearingIndex f_b, const Monopole& mu_b) {
  return channel_from([&](const TrigWord& w) { return st.expectation(w); }, f_b, mu_b);
}

MixtureCheck mixture_check(const QuasifreeState& st, SmearingIndex f_a, SmearingIndex f_b,
                           const Monopole& mu_b) {
  MixtureCheck out;
  out.local = local_channel(st, f_b, mu_b);
  // Unnormalized sandwiches: Pr(o) * omega~_o(X) = omega(K_o X K_o).
  auto averaged = [&](const TrigWord& w) {
    Complex sum = 0.0;
    for (Outcome o : {Outcome::ground, Outcome::excited}) {
      const TrigFactor k = projector_factor(o, f_a);
      TrigWord sw{k};
      sw.insert(sw.end(), w.begin(), w.end());
      sw.push_back(k);
      sum += st.expectation(sw);
    }
    return sum;
  };
  out.averaged = channel_from(averaged, f_b, mu_b);
  out.residual = coefficient_distance(out.averaged, out.local);
  return out;
}

}  // namespace fermi
