#include "fermi/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermi {

namespace {

// exp(-i x / 2), built from cos/sin of the same half-angle so that the phase
// for -x is the exact conjugate of the phase for x.
Complex half_phase(double x) {
  const double h = 0.5 * x;
  return {std::cos(h), -std::sin(h)};
}

}  // namespace

WeylCombination::WeylCombination(std::vector<WeylTerm> terms) : terms_(std::move(terms)) {
  canonicalize();
}

WeylCombination WeylCombination::unit() { return generator(CombinedSmearing{}, 1.0); }

WeylCombination WeylCombination::generator(CombinedSmearing h, Complex c) {
  return WeylCombination({WeylTerm{c, std::move(h)}});
}

Complex WeylCombination::coefficient(const CombinedSmearing& h) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), h,
                             [](const WeylTerm& t, const CombinedSmearing& x) {
                               return t.arg < x;
                             });
  return (it != terms_.end() && it->arg == h) ? it->coeff : Complex(0.0);
}

WeylCombination WeylCombination::adjoint() const {
  std::vector<WeylTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({std::conj(t.coeff), -t.arg});
  return WeylCombination(std::move(out));
}

WeylCombination WeylCombination::scaled(Complex factor) const {
  WeylCombination out = *this;
  for (auto& t : out.terms_) t.coeff *= factor;
  out.canonicalize();
  return out;
}

WeylCombination& WeylCombination::operator+=(const WeylCombination& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

void WeylCombination::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const WeylTerm& a, const WeylTerm& b) { return a.arg < b.arg; });
  std::vector<WeylTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().arg == t.arg)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const WeylTerm& t) { return std::abs(t.coeff) < prune_threshold; });
  terms_ = std::move(merged);
}

std::string WeylCombination::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag()
       << "i)W(" << t.arg.to_string() << ")";
  }
  return os.str();
}

WeylTerm weyl_multiply(const WeylTerm& a, const WeylTerm& b, const BilinearData& data) {
  const double e = data.causal(a.arg, b.arg);
  return {a.coeff * b.coeff * half_phase(e), a.arg + b.arg};
}

WeylCombination multiply(const WeylCombination& x, const WeylCombination& y,
                         const BilinearData& data) {
  std::vector<WeylTerm> out;
  out.reserve(x.terms().size() * y.terms().size());
  for (const auto& a : x.terms())
    for (const auto& b : y.terms()) out.push_back(weyl_multiply(a, b, data));
  return WeylCombination(std::move(out));
}

WeylCombination trig_factor(Trig kind, const CombinedSmearing& h) {
  if (h.is_zero()) return kind == Trig::cos ? WeylCombination::unit() : WeylCombination{};
  if (kind == Trig::cos)
    return WeylCombination({WeylTerm{Complex(0.5, 0.0), h}, WeylTerm{Complex(0.5, 0.0), -h}});
  // 1/(2i) = -i/2
  return WeylCombination({WeylTerm{Complex(0.0, -0.5), h}, WeylTerm{Complex(0.0, 0.5), -h}});
}

WeylCombination trig_to_weyl(const TrigWord& word, const BilinearData& data) {
  WeylCombination acc = WeylCombination::unit();
  for (const auto& factor : word) acc = multiply(acc, trig_factor(factor.kind, factor.arg), data);
  return acc;
}

WeylCombination reduce_product(Trig kind1, const CombinedSmearing& h1, Trig kind2,
                               const CombinedSmearing& h2, const BilinearData& data) {
  const double e = data.causal(h1, h2);
  const double half = 0.5 * e;
  const Complex minus_phase(std::cos(half), -std::sin(half));  // e^{-iE/2}
  const Complex plus_phase(std::cos(half), std::sin(half));    // e^{+iE/2}
  const CombinedSmearing sum = h1 + h2;
  const CombinedSmearing diff = h1 - h2;

  // Product-to-sum: cos*cos and sin*sin land on cosines, mixed words on sines.
  const Trig out_kind = (kind1 == kind2) ? Trig::cos : Trig::sin;
  double sum_sign = 0.5;
  double diff_sign = 0.5;
  if (kind1 == Trig::sin && kind2 == Trig::sin) {
    sum_sign = -0.5;
    diff_sign = 0.5;
  } else if (kind1 == Trig::cos && kind2 == Trig::sin) {
    diff_sign = -0.5;
  }

  WeylCombination out = trig_factor(out_kind, sum).scaled(minus_phase).scaled(Complex(sum_sign));
  out += trig_factor(out_kind, diff).scaled(plus_phase).scaled(Complex(diff_sign));
  return out;
}

Complex quasifree_expectation(const WeylCombination& wc, const BilinearData& data) {
  Complex sum = 0.0;
  for (const auto& t : wc.terms()) {
    if (t.arg.is_zero()) {
      sum += t.coeff;
      continue;
    }
    sum += t.coeff * std::exp(-0.5 * data.symmetric_norm(t.arg));
  }
  return sum;
}

}  // namespace fermi
