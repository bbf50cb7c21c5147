#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fermi/bilinear_data.hpp"
#include "fermi/smearing.hpp"

namespace fermi {

/// One term c * W(E h) of a Weyl combination.
struct WeylTerm {
  Complex coeff;
  CombinedSmearing arg;
  friend bool operator==(const WeylTerm&, const WeylTerm&) = default;
};

/// Finite linear combination sum_m c_m W(E h_m) of Weyl generators.
///
/// After canonicalize() the terms are ordered by argument, arguments are
/// pairwise distinct and no coefficient has magnitude below the prune
/// threshold. The unit element is W(0) with coefficient 1.
class WeylCombination {
 public:
  static constexpr double prune_threshold = 1e-14;

  WeylCombination() = default;
  explicit WeylCombination(std::vector<WeylTerm> terms);

  static WeylCombination unit();
  static WeylCombination generator(CombinedSmearing h, Complex c = 1.0);

  const std::vector<WeylTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of W(E h), zero if absent. Assumes canonical form.
  Complex coefficient(const CombinedSmearing& h) const;

  /// Conjugation: (c, h) -> (c*, -h).
  WeylCombination adjoint() const;
  WeylCombination scaled(Complex factor) const;
  WeylCombination& operator+=(const WeylCombination& other);

  void canonicalize();

  friend bool operator==(const WeylCombination&, const WeylCombination&) = default;
  friend WeylCombination operator+(WeylCombination a, const WeylCombination& b) {
    return a += b;
  }

  std::string to_string() const;

 private:
  std::vector<WeylTerm> terms_;
};

/// Weyl relation W(Ef)W(Eg) = exp(-i E(f,g)/2) W(E(f+g)), with coefficients carried along.
WeylTerm weyl_multiply(const WeylTerm& a, const WeylTerm& b, const BilinearData& data);

/// Distributive product of two combinations, canonicalized.
WeylCombination multiply(const WeylCombination& x, const WeylCombination& y,
                         const BilinearData& data);

enum class Trig { cos, sin };

/// One factor cos(phi(h)) or sin(phi(h)) of an ordered operator word.
struct TrigFactor {
  Trig kind;
  CombinedSmearing arg;
};

/// Ordered product of trigonometric factors; order matters since the
/// smeared fields need not commute.
using TrigWord = std::vector<TrigFactor>;

inline TrigFactor cos_of(CombinedSmearing h) { return {Trig::cos, std::move(h)}; }
inline TrigFactor sin_of(CombinedSmearing h) { return {Trig::sin, std::move(h)}; }

/// cos(phi(h)) = (W(Eh) + W(-Eh))/2 and sin(phi(h)) = (W(Eh) - W(-Eh))/(2i).
/// For h = 0 these are the unit and zero respectively.
WeylCombination trig_factor(Trig kind, const CombinedSmearing& h);

/// Expands every factor and multiplies left to right.
WeylCombination trig_to_weyl(const TrigWord& word, const BilinearData& data);

/// Twisted product-to-sum identity for the two-factor word (kind1 h1)(kind2 h2):
///   2 C1 C2 =  C+ e^{-iE/2} + C- e^{iE/2}
///  -2 S1 S2 =  C+ e^{-iE/2} - C- e^{iE/2}
///   2 C1 S2 =  S+ e^{-iE/2} - S- e^{iE/2}
///   2 S1 C2 =  S+ e^{-iE/2} + S- e^{iE/2}
/// with (C|S)+- of h1 +- h2 and E = E(h1, h2). Agrees exactly with trig_to_weyl.
WeylCombination reduce_product(Trig kind1, const CombinedSmearing& h1, Trig kind2,
                               const CombinedSmearing& h2, const BilinearData& data);

/// sum_m c_m exp(-mu(Eh_m, Eh_m)/2) for the quasifree state with two-point data `data`.
Complex quasifree_expectation(const WeylCombination& wc, const BilinearData& data);

}  // namespace fermi
