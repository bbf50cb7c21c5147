#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace fermi {

/// Label of one registered base smearing f_j (one detector's spacetime smearing).
struct SmearingIndex {
  int id = 0;
  friend auto operator<=>(const SmearingIndex&, const SmearingIndex&) = default;
};

/// Integer combination h = sum_i n_i f_i of base smearings.
///
/// Entries are kept sorted by id with zero coefficients removed, so two
/// combinations denote the same smearing iff they compare equal. The empty
/// combination is h = 0.
class CombinedSmearing {
 public:
  struct Entry {
    int id;
    int n;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  CombinedSmearing() = default;
  CombinedSmearing(std::initializer_list<Entry> entries);
  explicit CombinedSmearing(std::vector<Entry> entries);

  static CombinedSmearing single(SmearingIndex j, int n = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  int coefficient(SmearingIndex j) const;

  CombinedSmearing operator-() const;
  CombinedSmearing& operator+=(const CombinedSmearing& other);
  CombinedSmearing& operator-=(const CombinedSmearing& other);
  CombinedSmearing scaled(int factor) const;

  friend CombinedSmearing operator+(CombinedSmearing a, const CombinedSmearing& b) {
    return a += b;
  }
  friend CombinedSmearing operator-(CombinedSmearing a, const CombinedSmearing& b) {
    return a -= b;
  }
  friend bool operator==(const CombinedSmearing&, const CombinedSmearing&) = default;
  // Lexicographic on (id, n) pairs; only used to give canonical term order.
  friend bool operator<(const CombinedSmearing& a, const CombinedSmearing& b);

  /// Human-readable form such as "f0-2f1"; "0" for the empty combination.
  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<Entry> entries_;
};

}  // namespace fermi
