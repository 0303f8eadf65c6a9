#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "primeprod/types.hpp"

namespace primeprod {

class UnitGroup;

// Subset of Z_q^x as a bitset over [0, q).  Only unit residues may be set.
// This is the common currency for A, B, E_k(N), subgroups and cosets.
class ResidueSet {
 public:
  ResidueSet() = default;
  explicit ResidueSet(const UnitGroup& group);

  const UnitGroup& group() const { return *group_; }
  std::uint32_t q() const { return static_cast<std::uint32_t>(bits_.size()); }

  bool contains(Residue a) const { return a < bits_.size() && bits_.test(a); }
  void add(Residue a);
  void remove(Residue a) { bits_.reset(a); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return !bits_.any(); }

  Residue min_element() const {
    auto p = bits_.find_first();
    if (p == boost::dynamic_bitset<>::npos) throw std::domain_error("min_element of empty set");
    return static_cast<Residue>(p);
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto p = bits_.find_first(); p != boost::dynamic_bitset<>::npos; p = bits_.find_next(p))
      f(static_cast<Residue>(p));
  }

  std::vector<Residue> elements() const {
    std::vector<Residue> out;
    out.reserve(size());
    for_each([&](Residue a) { out.push_back(a); });
    return out;
  }

  // c * S = {c*s mod q : s in S}
  ResidueSet dilated(Residue c) const;

  ResidueSet& operator|=(const ResidueSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  ResidueSet& operator&=(const ResidueSet& o) {
    bits_ &= o.bits_;
    return *this;
  }
  bool operator==(const ResidueSet& o) const { return bits_ == o.bits_; }

  ResidueSet complement_in_units() const;  // units not in the set

  const boost::dynamic_bitset<>& bits() const { return bits_; }
  boost::dynamic_bitset<>& bits() { return bits_; }

 private:
  const UnitGroup* group_ = nullptr;
  boost::dynamic_bitset<> bits_;
};

}  // namespace primeprod
