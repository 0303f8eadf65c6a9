#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primeprod/residue_set.hpp"
#include "primeprod/types.hpp"
#include "primeprod/unit_group.hpp"

namespace primeprod {

// A*B = {ab : a in A, b in B}
ResidueSet product_set(const ResidueSet& A, const ResidueSet& B);

// counts[c] = #{(a,b) in A x B : ab == c mod q}, indexed by residue
std::vector<std::uint32_t> convolution(const ResidueSet& A, const ResidueSet& B);

// {g : g*S = S}; S must be nonempty.
Subgroup stabilizer(const ResidueSet& S);

struct KneserAudit {
  std::uint64_t product_size = 0;  // |A*B|
  std::uint64_t AH_size = 0;       // |A*H|
  std::uint64_t BH_size = 0;
  std::uint64_t H_size = 0;
  std::int64_t kneser_bound = 0;       // |A*H| + |B*H| - |H|
  std::int64_t trivial_bound = 0;      // |A| + |B| - |H|
  bool kneser_holds = false;           // |A*B| >= kneser_bound >= trivial_bound
  std::uint32_t min_convolution = 0;   // min over c of 1_A * 1_B (c)
  std::int64_t convolution_bound = 0;  // |A| + |B| - phi(q)
  Subgroup stab;
};

KneserAudit kneser_audit(const ResidueSet& A, const ResidueSet& B);

struct PopularProductsReport {
  std::uint64_t t = 0, u = 0;
  // Branch (a): at least |A|+|B|-2t-u|G|/t elements have >= u representations.
  bool branch_a = false;
  std::uint64_t popular_u_count = 0;       // #{a : conv(a) >= u}
  double branch_a_threshold = 0.0;         // |A|+|B|-2t-u*phi/t
  // Branch (b): A' x B' with small deletions and conv >= t on A'*B'.
  bool branch_b = false;
  std::uint64_t deleted_from_a = 0, deleted_from_b = 0;
  std::vector<Residue> deletions;          // greedy deletion order
  // Neither branch verified within the deletion budget.  The greedy witness
  // search is incomplete, so this flags the instance for inspection instead
  // of asserting a counterexample.
  bool flagged = false;
};

PopularProductsReport popular_products(const ResidueSet& A, const ResidueSet& B, std::uint64_t t,
                                       std::uint64_t u);

enum class StructureBranch { large_product_set, stuck_in_cosets };

struct StructureReport {
  StructureBranch branch = StructureBranch::large_product_set;
  bool hypothesis_ok = false;  // coset-meeting hypothesis verified on input
  double alpha = 0.0, alpha_prime = 0.0, beta = 0.0;
  Subgroup H;                  // stabilizer of A*B
  std::uint64_t Y = 0;
  std::uint64_t product_size = 0;
  // stuck_in_cosets data
  bool index_in_range = false;           // 1 < Y < 1/(2 alpha' - beta)
  std::optional<std::uint64_t> k;        // Y = 3k + 2 when it holds
  std::vector<Coset> a_cosets;           // cosets of H met by A (== by B when consistent)
  std::vector<Coset> b_cosets;           // cosets forming A*B
  bool consistent = false;               // coset counts match the k+1 / 2k+1 shape
};

// Case analysis for |A*B| small: either the product set is large
// (branch a: |A*B| >= beta*phi) or A, B are stuck in k+1 cosets of the
// stabilizer, which has index Y = 3k+2.  The coset-meeting hypothesis is
// verified on the input rather than assumed; occupancy_threshold is the
// minimum intersection size for a coset to count as met.
StructureReport structure_classify(const ResidueSet& A, const ResidueSet& B, double alpha,
                                   double alpha_prime, double beta,
                                   std::uint64_t occupancy_threshold = 1);

// In the quotient G = Z_q^x / H of order 3k+2, with B given by k+1 coset
// representatives: if B*B = G \ B and the stabilizer of B*B is trivial, the
// quotient is cyclic and B = {g^{k+1}, ..., g^{2k+1}} for some generator g;
// returns such a g (minimal representative) or nothing.
std::optional<Residue> complement_structure_check(const Subgroup& H,
                                                  const std::vector<Residue>& B_reps);

// E_q^x(B, C) = #{(b1, b2, c1, c2) : b1 c1 == b2 c2 mod q}
std::uint64_t multiplicative_energy(const ResidueSet& B, const ResidueSet& C);

}  // namespace primeprod
