#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "primeprod/residue_set.hpp"
#include "primeprod/types.hpp"

namespace primeprod {

struct Modulus {
  std::uint32_t q = 0;
  std::vector<std::pair<std::uint32_t, int>> factorization;  // (p, e), p ascending
  bool cube_free = false;
};

Modulus factor_modulus(std::uint64_t q);

// Z_q^x presented as a product of cyclic groups C_{d_1} x ... x C_{d_m}.
// Prime powers p^e contribute one cyclic factor each, except 2^e with e >= 3
// which splits as C_2 x C_{2^{e-2}}.  Full discrete-log tables are built at
// construction (target range q <= ~1e6, so O(q) tables beat BSGS).
class UnitGroup {
 public:
  explicit UnitGroup(std::uint64_t q);  // throws std::domain_error for q < 3

  const Modulus& modulus() const { return modulus_; }
  std::uint32_t q() const { return modulus_.q; }
  std::uint64_t phi() const { return phi_; }
  bool cube_free() const { return modulus_.cube_free; }

  // Orders d_1..d_m of the cyclic factors and matching generators of Z_q^x
  // (each generator is 1 mod every other prime-power block).
  const std::vector<std::uint32_t>& component_orders() const { return orders_; }
  const std::vector<Residue>& generators() const { return generators_; }
  std::size_t rank() const { return orders_.size(); }

  // Group exponent lcm(d_i); character values are L-th roots of unity.
  std::uint32_t exponent() const { return exponent_; }

  bool is_unit(std::uint64_t n) const { return unit_index_[n % q()] != kNonUnit; }

  // Exponent vector of n: n == prod generators[i]^v[i] (mod q).
  std::vector<std::uint32_t> dlog(std::uint64_t n) const;

  // Mixed-radix flattening of dlog; a bijection units <-> [0, phi).
  // Index 0 is the residue 1.
  std::uint64_t unit_index(Residue a) const { return unit_index_[a]; }
  Residue unit_at(std::uint64_t index) const { return residue_at_index_[index]; }
  std::uint32_t digit_of_index(std::uint64_t index, std::size_t comp) const {
    return static_cast<std::uint32_t>((index / strides_[comp]) % orders_[comp]);
  }
  std::uint64_t stride(std::size_t comp) const { return strides_[comp]; }

  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % q());
  }
  Residue inv(Residue a) const;
  Residue pow(Residue a, std::uint64_t e) const {
    return static_cast<Residue>(pow_mod(a, e, q()));
  }

  ResidueSet all_units() const;

  static constexpr std::uint64_t kNonUnit = ~0ull;

 private:
  Modulus modulus_;
  std::uint64_t phi_ = 0;
  std::uint32_t exponent_ = 1;
  std::vector<std::uint32_t> orders_;
  std::vector<Residue> generators_;
  std::vector<std::uint64_t> strides_;
  // Per-component residue -> digit lookup over the component's prime power.
  struct Component {
    std::uint32_t prime_power = 0;
    std::vector<std::uint32_t> digit;  // size prime_power, kNoDigit for non-units
  };
  static constexpr std::uint32_t kNoDigit = ~0u;
  std::vector<Component> components_;
  std::vector<std::uint64_t> unit_index_;    // size q
  std::vector<Residue> residue_at_index_;    // size phi
};

// Subgroup H <= Z_q^x held as a membership bitset plus its index Y.
// Downstream consumers (product sets, coset statistics) want O(1) membership.
struct Subgroup {
  const UnitGroup* group = nullptr;
  ResidueSet members;
  std::uint64_t index = 0;  // Y = phi(q) / |H|

  std::uint64_t order() const { return members.size(); }
  bool contains(Residue a) const { return members.contains(a); }
};

struct Coset {
  Residue representative = 0;  // minimal residue in the coset
};

struct CosetDecomposition {
  std::vector<Coset> cosets;                   // ascending by representative
  std::vector<std::int32_t> coset_of_residue;  // size q, -1 for non-units

  std::size_t count() const { return cosets.size(); }
  std::int32_t coset_of(Residue a) const { return coset_of_residue[a]; }
};

// All subgroups of index exactly Y, each realised as the joint kernel of Y
// characters (subgroups of the dual of order Y).  Returns an empty list when
// no subgroup of that index exists.  Y > 64 is out of the supported range.
std::vector<Subgroup> subgroups_of_index(const UnitGroup& G, std::uint64_t Y);

// The subgroup generated by a set of units.
Subgroup generated_subgroup(const UnitGroup& G, const std::vector<Residue>& gens);

CosetDecomposition cosets(const Subgroup& H);

ResidueSet coset_members(const Subgroup& H, Residue representative);

// If Z_q^x / H is cyclic, the minimal residue whose coset generates it.
std::optional<Residue> quotient_is_cyclic(const Subgroup& H);

// Multiplicative order of the coset aH in the quotient group.
std::uint64_t coset_order(const Subgroup& H, Residue a);

}  // namespace primeprod
