#include "fermi/smearing.hpp"

#include <algorithm>

namespace fermi {

CombinedSmearing::CombinedSmearing(std::initializer_list<Entry> entries)
    : entries_(entries) {
  canonicalize();
}

CombinedSmearing::CombinedSmearing(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  canonicalize();
}

CombinedSmearing CombinedSmearing::single(SmearingIndex j, int n) {
  return CombinedSmearing({Entry{j.id, n}});
}

int CombinedSmearing::coefficient(SmearingIndex j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j.id,
                             [](const Entry& e, int id) { return e.id < id; });
  return (it != entries_.end() && it->id == j.id) ? it->n : 0;
}

CombinedSmearing CombinedSmearing::operator-() const { return scaled(-1); }

CombinedSmearing& CombinedSmearing::operator+=(const CombinedSmearing& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  canonicalize();
  return *this;
}

CombinedSmearing& CombinedSmearing::operator-=(const CombinedSmearing& other) {
  return *this += -other;
}

CombinedSmearing CombinedSmearing::scaled(int factor) const {
  CombinedSmearing out;
  if (factor == 0) return out;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.n *= factor;
  return out;
}

bool operator<(const CombinedSmearing& a, const CombinedSmearing& b) {
  return std::lexicographical_compare(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [](const CombinedSmearing::Entry& x, const CombinedSmearing::Entry& y) {
        return x.id != y.id ? x.id < y.id : x.n < y.n;
      });
}

std::string CombinedSmearing::to_string() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (const auto& e : entries_) {
    if (e.n < 0)
      s += "-";
    else if (!s.empty())
      s += "+";
    const int mag = e.n < 0 ? -e.n : e.n;
    if (mag != 1) s += std::to_string(mag);
    s += "f" + std::to_string(e.id);
  }
  return s;
}

void CombinedSmearing::canonicalize() {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.id < b.id; });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (!merged.empty() && merged.back().id == e.id)
      merged.back().n += e.n;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const Entry& e) { return e.n == 0; });
  entries_ = std::move(merged);
}

}  // namespace fermi
