#include "primeprod/product_sets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace primeprod {

ResidueSet product_set(const ResidueSet& A, const ResidueSet& B) {
  if (&A.group() != &B.group()) throw std::domain_error("product_set: group mismatch");
  const UnitGroup& G = A.group();
  ResidueSet out(G);
  const ResidueSet& small = A.size() <= B.size() ? A : B;
  const ResidueSet& big = A.size() <= B.size() ? B : A;
  small.for_each([&](Residue c) {
    big.for_each([&](Residue a) { out.bits().set(G.mul(c, a)); });
  });
  return out;
}

std::vector<std::uint32_t> convolution(const ResidueSet& A, const ResidueSet& B) {
  if (&A.group() != &B.group()) throw std::domain_error("convolution: group mismatch");
  const UnitGroup& G = A.group();
  std::vector<std::uint32_t> counts(G.q(), 0);
  A.for_each([&](Residue a) {
    B.for_each([&](Residue b) { ++counts[G.mul(a, b)]; });
  });
  return counts;
}

Subgroup stabilizer(const ResidueSet& S) {
  if (S.empty()) throw std::domain_error("stabilizer of empty set");
  const UnitGroup& G = S.group();
  Residue m0 = S.min_element();
  Residue m0inv = G.inv(m0);
  Subgroup H;
  H.group = &G;
  H.members = ResidueSet(G);
  // g*S = S forces g*m0 in S, so candidates are s * m0^{-1}.
  S.for_each([&](Residue s) {
    Residue g = G.mul(s, m0inv);
    bool ok = true;
    S.for_each([&](Residue x) {
      if (ok && !S.contains(G.mul(g, x))) ok = false;
    });
    if (ok) H.members.add(g);
  });
  H.index = G.phi() / H.members.size();
  return H;
}

KneserAudit kneser_audit(const ResidueSet& A, const ResidueSet& B) {
  if (A.empty() || B.empty()) throw std::domain_error("kneser_audit needs nonempty sets");
  const UnitGroup& G = A.group();
  KneserAudit out;
  ResidueSet P = product_set(A, B);
  out.product_size = P.size();
  out.stab = stabilizer(P);
  out.H_size = out.stab.members.size();
  out.AH_size = product_set(A, out.stab.members).size();
  out.BH_size = product_set(B, out.stab.members).size();
  out.kneser_bound = static_cast<std::int64_t>(out.AH_size + out.BH_size) -
                     static_cast<std::int64_t>(out.H_size);
  out.trivial_bound = static_cast<std::int64_t>(A.size() + B.size()) -
                      static_cast<std::int64_t>(out.H_size);
  out.kneser_holds = static_cast<std::int64_t>(out.product_size) >= out.kneser_bound &&
                     out.kneser_bound >= out.trivial_bound;
  auto conv = convolution(A, B);
  std::uint32_t mn = ~0u;
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r)) mn = std::min(mn, conv[r]);
  out.min_convolution = mn;
  out.convolution_bound = static_cast<std::int64_t>(A.size() + B.size()) -
                          static_cast<std::int64_t>(G.phi());
  return out;
}

PopularProductsReport popular_products(const ResidueSet& A, const ResidueSet& B, std::uint64_t t,
                                       std::uint64_t u) {
  if (!(t >= u && u >= 1)) throw std::domain_error("popular_products needs t >= u >= 1");
  if (A.size() < t || B.size() < t) throw std::domain_error("popular_products needs |A|,|B| >= t");
  const UnitGroup& G = A.group();
  auto conv = convolution(A, B);

  PopularProductsReport rep;
  rep.t = t;
  rep.u = u;

  std::uint64_t cnt_u = 0;
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r) && conv[r] >= u) ++cnt_u;
  rep.popular_u_count = cnt_u;
  rep.branch_a_threshold = double(A.size()) + double(B.size()) - 2.0 * double(t) -
                           double(u) * double(G.phi()) / double(t);
  // exact integer form of cnt >= |A|+|B|-2t-u*phi/t
  {
    __int128 lhs = static_cast<__int128>(cnt_u) * t;
    __int128 rhs = (static_cast<__int128>(A.size()) + B.size() - 2 * static_cast<__int128>(t)) *
                       t -
                   static_cast<__int128>(u) * G.phi();
    rep.branch_a = lhs >= rhs;
  }

  // Greedy witness search for branch (b): delete the element of A' u B' of
  // smallest popular-degree until every product in A'*B' is t-popular or the
  // deletion budget t-1 runs out.  Incomplete by design; failure flags the
  // instance rather than refuting the lemma.
  ResidueSet Ap = A, Bp = B;
  std::uint64_t budget = t - 1;
  auto popular = [&](Residue c) { return conv[c] >= t; };
  while (true) {
    bool all_popular = true;
    Ap.for_each([&](Residue a) {
      if (!all_popular) return;
      Bp.for_each([&](Residue b) {
        if (all_popular && !popular(G.mul(a, b))) all_popular = false;
      });
    });
    if (all_popular) {
      rep.branch_b = true;
      break;
    }
    if (rep.deleted_from_a + rep.deleted_from_b >= budget) break;
    // popular-degree of each element of A' and B'
    Residue victim = 0;
    bool victim_in_a = true;
    std::uint64_t best = ~0ull;
    Ap.for_each([&](Residue a) {
      std::uint64_t deg = 0;
      Bp.for_each([&](Residue b) { deg += popular(G.mul(a, b)); });
      if (deg < best) {
        best = deg;
        victim = a;
        victim_in_a = true;
      }
    });
    Bp.for_each([&](Residue b) {
      std::uint64_t deg = 0;
      Ap.for_each([&](Residue a) { deg += popular(G.mul(a, b)); });
      if (deg < best) {
        best = deg;
        victim = b;
        victim_in_a = false;
      }
    });
    if (victim_in_a) {
      Ap.remove(victim);
      ++rep.deleted_from_a;
    } else {
      Bp.remove(victim);
      ++rep.deleted_from_b;
    }
    rep.deletions.push_back(victim);
  }
  rep.flagged = !rep.branch_a && !rep.branch_b;
  return rep;
}

namespace {

std::vector<Coset> cosets_met(const CosetDecomposition& dec, const ResidueSet& S,
                              std::uint64_t occupancy_threshold) {
  std::vector<std::uint64_t> hit(dec.count(), 0);
  S.for_each([&](Residue a) { ++hit[dec.coset_of(a)]; });
  std::vector<Coset> out;
  for (std::size_t i = 0; i < dec.count(); ++i)
    if (hit[i] >= occupancy_threshold) out.push_back(dec.cosets[i]);
  return out;
}

}  // namespace

StructureReport structure_classify(const ResidueSet& A, const ResidueSet& B, double alpha,
                                   double alpha_prime, double beta,
                                   std::uint64_t occupancy_threshold) {
  const UnitGroup& G = A.group();
  if (!(beta < 2.0 * alpha)) throw std::domain_error("structure_classify needs beta < 2*alpha");
  double phi = double(G.phi());
  if (double(A.size()) < alpha * phi || double(B.size()) < alpha * phi)
    throw std::domain_error("structure_classify needs |A|,|B| >= alpha*phi(q)");

  StructureReport rep;
  rep.alpha = alpha;
  rep.alpha_prime = alpha_prime;
  rep.beta = beta;

  // Verify the coset-meeting hypothesis: A and B meet at least proportion
  // alpha' of the cosets of every subgroup of index < 1/(2 alpha - beta).
  rep.hypothesis_ok = true;
  double bound = 1.0 / (2.0 * alpha - beta);
  for (std::uint64_t Y0 = 2; double(Y0) < bound; ++Y0) {
    if (G.phi() % Y0) continue;
    for (auto& H0 : subgroups_of_index(G, Y0)) {
      auto dec = cosets(H0);
      auto metA = cosets_met(dec, A, occupancy_threshold).size();
      auto metB = cosets_met(dec, B, occupancy_threshold).size();
      if (double(metA) < alpha_prime * double(Y0) || double(metB) < alpha_prime * double(Y0))
        rep.hypothesis_ok = false;
    }
  }

  ResidueSet P = product_set(A, B);
  rep.product_size = P.size();
  rep.H = stabilizer(P);
  rep.Y = rep.H.index;

  if (double(rep.product_size) >= beta * phi) {
    rep.branch = StructureBranch::large_product_set;
    return rep;
  }
  rep.branch = StructureBranch::stuck_in_cosets;
  rep.index_in_range =
      rep.Y > 1 && (2.0 * alpha_prime - beta <= 0.0 || double(rep.Y) < 1.0 / (2.0 * alpha_prime - beta));

  auto dec = cosets(rep.H);
  auto metA = cosets_met(dec, A, occupancy_threshold);
  auto metB = cosets_met(dec, B, occupancy_threshold);
  rep.a_cosets = metA;
  for (auto& c : metB)
    if (std::find_if(rep.a_cosets.begin(), rep.a_cosets.end(), [&](const Coset& d) {
          return d.representative == c.representative;
        }) == rep.a_cosets.end())
      rep.a_cosets.push_back(c);
  std::sort(rep.a_cosets.begin(), rep.a_cosets.end(),
            [](const Coset& x, const Coset& y) { return x.representative < y.representative; });
  rep.b_cosets = cosets_met(dec, P, 1);

  if (rep.Y % 3 == 2) {
    std::uint64_t k = (rep.Y - 2) / 3;
    rep.k = k;
    rep.consistent = metA.size() == k + 1 && metB.size() == k + 1 &&
                     rep.a_cosets.size() == k + 1 && rep.b_cosets.size() == 2 * k + 1;
    // A*B is H-stable, so b_cosets exactly tile it; A and B must live inside
    // their met cosets by definition of "met" when the threshold is 1.
    if (occupancy_threshold > 1 && rep.consistent) {
      // with thresholded occupancy, containment can genuinely fail
      std::uint64_t outside = 0;
      A.for_each([&](Residue a) {
        bool in = false;
        for (auto& c : rep.a_cosets)
          if (dec.coset_of(a) == dec.coset_of(c.representative)) in = true;
        if (!in) ++outside;
      });
      if (outside) rep.consistent = false;
    }
  }
  return rep;
}

std::optional<Residue> complement_structure_check(const Subgroup& H,
                                                  const std::vector<Residue>& B_reps) {
  const UnitGroup& G = *H.group;
  auto dec = cosets(H);
  std::uint64_t Y = dec.count();
  if (Y % 3 != 2) throw std::domain_error("quotient order must be 3k+2");
  std::uint64_t k = (Y - 2) / 3;
  if (B_reps.size() != k + 1) throw std::domain_error("need exactly k+1 coset representatives");

  std::vector<bool> inB(Y, false);
  for (auto b : B_reps) {
    if (!G.is_unit(b)) throw std::domain_error("representative must be a unit");
    inB[dec.coset_of(b)] = true;
  }
  // quotient multiplication on coset ids via representatives
  auto qmul = [&](std::uint32_t i, std::uint32_t j) {
    return static_cast<std::uint32_t>(
        dec.coset_of(G.mul(dec.cosets[i].representative, dec.cosets[j].representative)));
  };
  std::vector<bool> inBB(Y, false);
  for (std::uint32_t i = 0; i < Y; ++i)
    for (std::uint32_t j = 0; j < Y; ++j)
      if (inB[i] && inB[j]) inBB[qmul(i, j)] = true;
  for (std::uint32_t i = 0; i < Y; ++i)
    if (inBB[i] == inB[i]) return std::nullopt;  // B*B != complement of B

  // stabilizer of B*B in the quotient must be trivial
  std::uint32_t id_coset = static_cast<std::uint32_t>(dec.coset_of(1));
  for (std::uint32_t g = 0; g < Y; ++g) {
    if (g == id_coset) continue;
    bool stab = true;
    for (std::uint32_t i = 0; i < Y && stab; ++i)
      if (inBB[i] != inBB[qmul(g, i)]) stab = false;
    if (stab) return std::nullopt;
  }

  // find a generator whose powers place B at {g^{k+1}, ..., g^{2k+1}}
  for (auto& c : dec.cosets) {
    if (coset_order(H, c.representative) != Y) continue;
    std::vector<bool> pattern(Y, false);
    Residue x = 1;
    for (std::uint64_t e = 1; e <= 2 * k + 1; ++e) {
      x = G.mul(x, c.representative);
      if (e >= k + 1) pattern[dec.coset_of(x)] = true;
    }
    if (pattern == inB) return c.representative;
  }
  return std::nullopt;
}

std::uint64_t multiplicative_energy(const ResidueSet& B, const ResidueSet& C) {
  if (&B.group() != &C.group()) throw std::domain_error("multiplicative_energy: group mismatch");
  auto conv = convolution(B, C);
  std::uint64_t e = 0;
  for (auto c : conv) e += static_cast<std::uint64_t>(c) * c;
  return e;
}

}  // namespace primeprod
