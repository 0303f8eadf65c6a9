#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primeprod/characters.hpp"
#include "primeprod/prime_table.hpp"
#include "primeprod/residue_set.hpp"
#include "primeprod/types.hpp"
#include "primeprod/unit_group.hpp"

namespace primeprod {

struct EkResult {
  std::uint32_t q = 0;
  std::uint64_t N = 0;
  int k = 0;
  ResidueSet members;
  ResidueSet missing;
  Rational density;  // |members| / phi(q)

  bool complete() const { return missing.empty(); }
};

// E_k(N) = {a in Z_q^x : a = p_1...p_k mod q, primes p_i <= N} via iterated
// set products; bitset dilations with an early exit once all of Z_q^x is hit.
EkResult compute_Ek(const UnitGroup& G, const PrimeTable& PT, std::uint64_t N, int k);

// Reconstruct a witness tuple of primes for a member of E_k(N).
std::optional<std::vector<std::uint32_t>> ek_witness(const UnitGroup& G, const PrimeTable& PT,
                                                     std::uint64_t N, int k, Residue a);

struct E3Verdict {
  bool degenerate = false;  // q < 3: nothing to verify
  bool complete = false;
  std::vector<Residue> missing;
};

E3Verdict verify_E3(const UnitGroup& G, const PrimeTable& PT);
E3Verdict verify_E3(std::uint64_t q, const PrimeTable& PT);

Rational e2_density(const UnitGroup& G, const PrimeTable& PT);

// Least N <= cap with E_k(N) = Z_q^x (k in {2, 3}); binary search over prime
// cutoffs.  Empty when the cap is not enough.
std::optional<std::uint64_t> min_N_for_complete(const UnitGroup& G, const PrimeTable& PT, int k,
                                                std::uint64_t cap);

// The two alternatives of the exceptional-character dichotomy, evaluated per
// real non-principal psi: the log-sum of primes with psi(p) = 1 in
// (q^{1/4}, q^{5/7}] against 1/10, and the best ratio of #{p <= y, psi(p)=1}
// to y L(1,psi) (phi/q) prod(1 - 2/p) over a geometric grid of y.
struct ExceptionalPipelineRow {
  std::uint64_t char_index = 0;
  double log_sum = 0.0;            // sum 1/p over q^{1/4} < p <= q^{5/7}, psi(p) = 1
  bool first_alternative = false;  // log_sum >= 1/10
  double l1 = 0.0;
  double denom_factor = 0.0;       // L1 * (phi/q) * prod_{2<p<=q, psi(p)=1}(1-2/p)
  double best_ratio = 0.0;         // implied c_0
  std::uint64_t best_y = 0;
  std::vector<std::uint64_t> grid_y;
  std::vector<std::uint64_t> grid_count;
  std::vector<double> grid_ratio;
};

struct ExceptionalPipelineReport {
  std::uint32_t q = 0;
  std::vector<ExceptionalPipelineRow> rows;
};

ExceptionalPipelineReport exceptional_pipeline(const CharacterGroup& CG, const PrimeTable& PT,
                                               std::uint64_t l1_x = 0, int grid_points = 16);

enum class CampaignFilter { all, cube_free, prime };
enum class NRule { equal_q, q_pow_12, explicit_N };

struct CampaignConfig {
  std::uint32_t q_lo = 3, q_hi = 100;
  CampaignFilter filter = CampaignFilter::all;
  NRule n_rule = NRule::equal_q;
  std::uint64_t explicit_n = 0;
  bool task_e3 = true;
  bool task_e2 = true;
  bool task_exceptional = false;
  int threads = 1;
};

struct CampaignRow {
  std::uint32_t q = 0;
  bool cube_free = false;
  std::uint64_t phi = 0;
  std::uint64_t e2_size = 0;
  Rational e2_density;
  bool e3_complete = false;
  std::uint64_t e3_missing_count = 0;
  std::vector<Residue> e3_missing;       // populated only for exceptions
  double exceptional_best_ratio = 0.0;   // max over psi, when the task ran
  double exceptional_log_sum = 0.0;
};

struct CampaignException {
  std::uint32_t q = 0;
  std::string kind;  // "e3_incomplete" or "e2_below_two_thirds"
  std::vector<Residue> witnesses;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CampaignRow> rows;  // ascending q
  std::vector<CampaignException> exceptions;
  std::optional<Rational> min_e2;
  std::uint32_t min_e2_q = 0;
  double seconds = 0.0;
};

CampaignReport run_campaign(const CampaignConfig& cfg);

}  // namespace primeprod
