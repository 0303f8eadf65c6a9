#pragma once

#include <cstdint>
#include <vector>

#include "primeprod/characters.hpp"
#include "primeprod/prime_table.hpp"
#include "primeprod/unit_group.hpp"

namespace primeprod {

// Per-coset aggregates of primes in (N_lo, N_hi] coprime to q.
struct CosetPrimeStats {
  std::uint64_t n_lo = 0, n_hi = 0;
  std::vector<Residue> representatives;      // coset order as in cosets(H)
  std::vector<std::uint64_t> count;
  std::vector<double> sum_log;
  std::vector<double> sum_recip;             // sum 1/p
  std::vector<double> sum_log_over_p;
  std::uint64_t total_count = 0;
};

CosetPrimeStats coset_prime_stats(const Subgroup& H, const PrimeTable& PT, std::uint64_t n_lo,
                                  std::uint64_t n_hi);

// Re sum_p (chi(p) log p / p) f(log p / log q) with f(t) = alpha - t on
// [0, alpha] and 0 beyond, summed over p <= q^alpha.  The principal-character
// value and its first-order prediction (alpha^2/2) log q come along for
// comparison.
struct RealPartSum {
  double value = 0.0;
  double principal_value = 0.0;
  double principal_prediction = 0.0;  // (alpha^2/2) log q
};

RealPartSum realpart_weighted_sum(const DirichletCharacter& chi, const PrimeTable& PT, double alpha);

// For each real non-principal psi mod q: how the primes p <= N split between
// psi(p) = -1 and +1, the L(1, psi) estimates, and the sieve-side comparison
// quantity L(1,psi) (phi(q)/q) prod_{2<p<=q, psi(p)=1} (1 - 2/p).
struct ExceptionalScanRow {
  std::uint64_t char_index = 0;
  std::uint64_t minus_count = 0;   // p <= N, p coprime to q, psi(p) = -1
  std::uint64_t plus_count = 0;
  std::uint64_t total = 0;         // minus_count + plus_count
  L1Estimate l1{};
  double qr_upper_factor = 0.0;    // L1 * (phi/q) * prod (1 - 2/p)
};

struct ExceptionalScanReport {
  std::uint32_t q = 0;
  std::uint64_t prime_limit = 0;
  std::uint64_t l1_x = 0;
  std::vector<ExceptionalScanRow> rows;
};

ExceptionalScanReport exceptional_scan(const CharacterGroup& CG, const PrimeTable& PT,
                                       std::uint64_t prime_limit, std::uint64_t l1_x);

// #{n <= N : n in bH, every prime factor of n >= N^{1/3}}; n = 1 counts
// vacuously when it lies in bH.
std::uint64_t almost_prime_coset_count(const Subgroup& H, Residue b, std::uint64_t N,
                                       const PrimeTable& PT);

}  // namespace primeprod
