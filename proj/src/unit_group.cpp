#include "primeprod/unit_group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace primeprod {

Modulus factor_modulus(std::uint64_t q) {
  if (q == 0 || q > 0xffffffffull) throw std::domain_error("modulus out of range");
  Modulus m;
  m.q = static_cast<std::uint32_t>(q);
  std::uint64_t n = q;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    m.factorization.emplace_back(static_cast<std::uint32_t>(p), e);
  }
  if (n > 1) m.factorization.emplace_back(static_cast<std::uint32_t>(n), 1);
  m.cube_free = std::all_of(m.factorization.begin(), m.factorization.end(),
                            [](auto& pe) { return pe.second <= 2; });
  return m;
}

namespace {

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Primitive root mod p^e for odd p.  A root mod p that stays primitive mod p^2
// is primitive mod every power.
std::uint32_t primitive_root(std::uint32_t p, int e) {
  auto qs = prime_factors(p - 1);
  std::uint32_t g = 0;
  for (std::uint32_t cand = 2; cand < p; ++cand) {
    bool ok = true;
    for (auto ell : qs)
      if (pow_mod(cand, (p - 1) / ell, p) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = cand;
      break;
    }
  }
  if (e >= 2) {
    std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;
    if (pow_mod(g, p - 1, p2) == 1) g += p;
  }
  return g;
}

}  // namespace

UnitGroup::UnitGroup(std::uint64_t q) {
  if (q < 3) throw std::domain_error("unit group needs q >= 3 (phi(q) <= 1 below)");
  modulus_ = factor_modulus(q);
  phi_ = 1;

  for (auto [p, e] : modulus_.factorization) {
    std::uint32_t pp = 1;
    for (int i = 0; i < e; ++i) pp *= p;
    if (p == 2) {
      if (e == 1) continue;  // trivial factor
      if (e == 2) {
        components_.push_back({pp, {}});
        orders_.push_back(2);
        generators_.push_back(0);  // patched below; local generator is 3
      } else {
        components_.push_back({pp, {}});
        orders_.push_back(2);
        generators_.push_back(0);
        components_.push_back({pp, {}});
        orders_.push_back(pp / 4);
        generators_.push_back(0);
      }
    } else {
      std::uint32_t d = pp / p * (p - 1);
      components_.push_back({pp, {}});
      orders_.push_back(d);
      generators_.push_back(0);
    }
    phi_ *= pp / p * (p - 1);
  }

  // Fill per-component dlog tables and local generators, then CRT-lift each
  // local generator to a residue that is 1 mod the other prime-power blocks.
  std::size_t ci = 0;
  std::vector<std::uint32_t> local_gen(components_.size());
  for (auto [p, e] : modulus_.factorization) {
    std::uint32_t pp = 1;
    for (int i = 0; i < e; ++i) pp *= p;
    if (p == 2 && e == 1) continue;
    if (p == 2 && e >= 3) {
      auto& sign_comp = components_[ci];
      auto& main_comp = components_[ci + 1];
      sign_comp.digit.assign(pp, kNoDigit);
      main_comp.digit.assign(pp, kNoDigit);
      std::uint32_t half = pp / 4;
      for (std::uint32_t s = 0; s < 2; ++s) {
        std::uint64_t x = (s == 0) ? 1 : pp - 1;
        for (std::uint32_t t = 0; t < half; ++t) {
          sign_comp.digit[x] = s;
          main_comp.digit[x] = t;
          x = (x * 3) % pp;
        }
      }
      local_gen[ci] = pp - 1;
      local_gen[ci + 1] = 3;
      ci += 2;
    } else {
      std::uint32_t g = (p == 2) ? 3 : primitive_root(p, e);
      auto& comp = components_[ci];
      comp.digit.assign(pp, kNoDigit);
      std::uint64_t x = 1;
      for (std::uint32_t j = 0; j < orders_[ci]; ++j) {
        comp.digit[x] = j;
        x = (x * g) % pp;
      }
      local_gen[ci] = g % pp;
      ++ci;
    }
  }

  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::uint64_t pp = components_[i].prime_power;
    std::uint64_t M = this->q() / pp;
    if (M == 1) {
      generators_[i] = static_cast<Residue>(local_gen[i] % this->q());
      continue;
    }
    // G = 1 + M*k with k = (g-1) * M^{-1} mod pp
    std::uint64_t Minv = pow_mod(M % pp, [&] {
      // phi(pp) - 1 as inverse exponent
      auto [p, e] = *std::find_if(modulus_.factorization.begin(), modulus_.factorization.end(),
                                  [&](auto& pe) {
                                    std::uint64_t v = 1;
                                    for (int j = 0; j < pe.second; ++j) v *= pe.first;
                                    return v == pp;
                                  });
      std::uint64_t ph = pp / p * (p - 1);
      return ph - 1;
    }(), pp);
    std::uint64_t k = mul_mod((local_gen[i] + pp - 1) % pp, Minv, pp);
    generators_[i] = static_cast<Residue>((1 + M * k) % this->q());
  }

  strides_.assign(orders_.size(), 1);
  for (std::size_t i = orders_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * orders_[i];

  exponent_ = 1;
  for (auto d : orders_) exponent_ = static_cast<std::uint32_t>(std::lcm<std::uint64_t>(exponent_, d));

  // Residue <-> mixed-radix index tables.
  unit_index_.assign(this->q(), kNonUnit);
  residue_at_index_.assign(phi_, 0);
  for (std::uint32_t r = 0; r < this->q(); ++r) {
    if (gcd_u64(r, this->q()) != 1) continue;
    std::uint64_t idx = 0;
    bool ok = true;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      std::uint32_t d = components_[i].digit[r % components_[i].prime_power];
      if (d == kNoDigit) {
        ok = false;
        break;
      }
      idx += d * strides_[i];
    }
    if (!ok) continue;
    unit_index_[r] = idx;
    residue_at_index_[idx] = r;
  }
}

std::vector<std::uint32_t> UnitGroup::dlog(std::uint64_t n) const {
  Residue r = static_cast<Residue>(n % q());
  std::uint64_t idx = unit_index_[r];
  if (idx == kNonUnit) throw std::domain_error("dlog of non-unit");
  std::vector<std::uint32_t> v(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) v[i] = digit_of_index(idx, i);
  return v;
}

Residue UnitGroup::inv(Residue a) const {
  if (!is_unit(a)) throw std::domain_error("inverse of non-unit");
  std::int64_t t = 0, newt = 1, r = q(), newr = a % q();
  while (newr != 0) {
    std::int64_t quot = r / newr;
    std::tie(t, newt) = std::make_pair(newt, t - quot * newt);
    std::tie(r, newr) = std::make_pair(newr, r - quot * newr);
  }
  if (t < 0) t += q();
  return static_cast<Residue>(t);
}

ResidueSet UnitGroup::all_units() const {
  ResidueSet s(*this);
  for (std::uint32_t r = 0; r < q(); ++r)
    if (unit_index_[r] != kNonUnit) s.add(r);
  return s;
}

// ---- ResidueSet ----

ResidueSet::ResidueSet(const UnitGroup& group) : group_(&group), bits_(group.q()) {}

void ResidueSet::add(Residue a) {
  if (!group_->is_unit(a)) throw std::domain_error("ResidueSet::add: not a unit");
  bits_.set(a);
}

ResidueSet ResidueSet::dilated(Residue c) const {
  ResidueSet out(*group_);
  for_each([&](Residue a) { out.bits_.set(group_->mul(c, a)); });
  return out;
}

ResidueSet ResidueSet::complement_in_units() const {
  ResidueSet out = group_->all_units();
  out.bits_ -= bits_;
  return out;
}

// ---- subgroups ----

namespace {

// Dual-group element arithmetic on character indices (same mixed radix as
// unit indices).
struct DualArith {
  const UnitGroup* G;
  std::uint64_t add(std::uint64_t x, std::uint64_t y) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < G->rank(); ++i) {
      std::uint64_t d = G->component_orders()[i];
      std::uint64_t s = (G->digit_of_index(x, i) + G->digit_of_index(y, i)) % d;
      out += s * G->stride(i);
    }
    return out;
  }
};

std::vector<std::uint64_t> closure(const DualArith& ar, std::vector<std::uint64_t> gens,
                                   std::uint64_t cap) {
  std::set<std::uint64_t> elems{0};
  std::vector<std::uint64_t> queue{0};
  while (!queue.empty()) {
    std::uint64_t x = queue.back();
    queue.pop_back();
    for (auto g : gens) {
      std::uint64_t y = ar.add(x, g);
      if (elems.insert(y).second) {
        if (elems.size() > cap) return {};  // exceeds target order, caller prunes
        queue.push_back(y);
      }
    }
  }
  return {elems.begin(), elems.end()};
}

}  // namespace

std::vector<Subgroup> subgroups_of_index(const UnitGroup& G, std::uint64_t Y) {
  if (Y == 0) throw std::domain_error("subgroup index must be positive");
  if (Y > 64) throw CapacityError("subgroup index capped at 64");
  if (G.phi() % Y != 0) return {};

  // Torsion part of the dual killed by Y: digits are multiples of d_i/gcd(d_i,Y).
  std::vector<std::uint64_t> torsion;
  {
    std::vector<std::uint32_t> counts(G.rank()), steps(G.rank());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < G.rank(); ++i) {
      std::uint32_t d = G.component_orders()[i];
      std::uint32_t g = static_cast<std::uint32_t>(gcd_u64(d, Y));
      counts[i] = g;
      steps[i] = d / g;
      total *= g;
    }
    if (total > 200000) throw CapacityError("dual torsion too large for subgroup enumeration");
    torsion.reserve(total);
    std::vector<std::uint32_t> digit(G.rank(), 0);
    for (std::uint64_t it = 0; it < total; ++it) {
      std::uint64_t idx = 0;
      for (std::size_t i = 0; i < G.rank(); ++i)
        idx += static_cast<std::uint64_t>(digit[i]) * steps[i] * G.stride(i);
      torsion.push_back(idx);
      for (std::size_t i = G.rank(); i-- > 0;) {
        if (++digit[i] < counts[i]) break;
        digit[i] = 0;
      }
    }
    std::sort(torsion.begin(), torsion.end());
  }

  DualArith ar{&G};
  // BFS over the subgroup lattice of the torsion group, keeping orders
  // dividing Y.
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> frontier;
  frontier.push_back({{0}, {}});  // (elements, generators)
  seen.insert({0});
  std::vector<std::vector<std::uint64_t>> hits;
  while (!frontier.empty()) {
    auto [elems, gens] = frontier.back();
    frontier.pop_back();
    if (elems.size() == Y) {
      hits.push_back(elems);
      continue;
    }
    for (auto t : torsion) {
      if (std::binary_search(elems.begin(), elems.end(), t)) continue;
      auto g2 = gens;
      g2.push_back(t);
      auto closed = closure(ar, g2, Y);
      if (closed.empty() || Y % closed.size() != 0) continue;
      if (seen.insert(closed).second) frontier.push_back({closed, g2});
    }
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

  std::uint32_t L = G.exponent();
  std::vector<Subgroup> out;
  for (auto& S : hits) {
    Subgroup H;
    H.group = &G;
    H.members = ResidueSet(G);
    H.index = Y;
    // Weights w_i = e_i * (L/d_i) per character; a is in the kernel iff
    // sum_i w_i * v_i(a) == 0 (mod L) for every character in S.
    std::vector<std::vector<std::uint64_t>> weights;
    for (auto cidx : S) {
      std::vector<std::uint64_t> w(G.rank());
      for (std::size_t i = 0; i < G.rank(); ++i)
        w[i] = static_cast<std::uint64_t>(G.digit_of_index(cidx, i)) * (L / G.component_orders()[i]);
      weights.push_back(std::move(w));
    }
    for (std::uint64_t idx = 0; idx < G.phi(); ++idx) {
      bool in = true;
      for (auto& w : weights) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < G.rank(); ++i) acc += w[i] * G.digit_of_index(idx, i);
        if (acc % L != 0) {
          in = false;
          break;
        }
      }
      if (in) H.members.add(G.unit_at(idx));
    }
    out.push_back(std::move(H));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.members.elements() < b.members.elements();
  });
  return out;
}

Subgroup generated_subgroup(const UnitGroup& G, const std::vector<Residue>& gens) {
  Subgroup H;
  H.group = &G;
  H.members = ResidueSet(G);
  H.members.add(1);
  std::vector<Residue> queue{1};
  while (!queue.empty()) {
    Residue x = queue.back();
    queue.pop_back();
    for (auto g : gens) {
      Residue y = G.mul(x, g);
      if (!H.members.contains(y)) {
        H.members.add(y);
        queue.push_back(y);
      }
    }
  }
  H.index = G.phi() / H.members.size();
  return H;
}

CosetDecomposition cosets(const Subgroup& H) {
  const UnitGroup& G = *H.group;
  CosetDecomposition out;
  out.coset_of_residue.assign(G.q(), -1);
  for (std::uint32_t b = 0; b < G.q(); ++b) {
    if (!G.is_unit(b) || out.coset_of_residue[b] >= 0) continue;
    std::int32_t id = static_cast<std::int32_t>(out.cosets.size());
    out.cosets.push_back({b});
    H.members.for_each([&](Residue h) { out.coset_of_residue[G.mul(b, h)] = id; });
  }
  return out;
}

ResidueSet coset_members(const Subgroup& H, Residue representative) {
  return H.members.dilated(representative);
}

std::uint64_t coset_order(const Subgroup& H, Residue a) {
  const UnitGroup& G = *H.group;
  if (!G.is_unit(a)) throw std::domain_error("coset_order of non-unit");
  Residue x = a % G.q();
  std::uint64_t t = 1;
  while (!H.members.contains(x)) {
    x = G.mul(x, a % G.q());
    ++t;
    if (t > G.phi()) throw std::logic_error("coset_order runaway");
  }
  return t;
}

std::optional<Residue> quotient_is_cyclic(const Subgroup& H) {
  auto dec = cosets(H);
  std::uint64_t Y = dec.count();
  for (auto& c : dec.cosets)
    if (coset_order(H, c.representative) == Y) return c.representative;
  return std::nullopt;
}

}  // namespace primeprod
