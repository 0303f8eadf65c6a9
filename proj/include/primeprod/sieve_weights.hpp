#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primeprod/prime_table.hpp"
#include "primeprod/types.hpp"

namespace primeprod {

enum class SieveKind { linear, fundamental };

// Rosser-Iwaniec beta-sieve weights lambda_d^{+-} = mu(d) on chains
// d = p_1 > p_2 > ... of primes below z obeying the truncation rule
//   p_1 ... p_{m-1} p_m^{beta+1} <= D   at every odd m (upper) / even m (lower).
// The sandwich
//   sum_{d|n} lambda_d^- <= 1_{(n,P(z))=1} <= sum_{d|n} lambda_d^+
// is an exact combinatorial fact of this construction for any beta >= 1,
// which is what the tests pin down; the density estimates against F0/f0 are
// asymptotic and only ever reported.
struct SieveWeightSet {
  SieveKind kind = SieveKind::linear;
  double z = 0.0;
  double D = 0.0;
  double s = 0.0;      // log D / log z
  double kappa = 1.0;  // sieve dimension (fundamental kind only)
  double beta = 2.0;

  // Support materialised up to min(D, storage cap), ascending in d.
  std::vector<std::uint64_t> support;
  std::vector<std::int8_t> lambda_plus;
  std::vector<std::int8_t> lambda_minus;
  std::uint64_t materialized_limit = 0;

  std::int8_t plus_at(std::uint64_t d) const;
  std::int8_t minus_at(std::uint64_t d) const;

  static constexpr std::uint64_t kStorageCap = 10'000'000;
};

// Linear sieve (beta = 2).  Requires z >= 2 and s = log D / log z >= 1.
SieveWeightSet linear_weights(double D, double z);

// Fundamental-lemma weights of dimension kappa (beta = 9*kappa + 1).
// Requires s >= 9*kappa + 1.
SieveWeightSet fundamental_weights(double D, double z, double kappa);

struct SieveFunctionValue {
  double s = 0.0;
  std::optional<double> F0;  // 2 e^gamma / s on [1, 3]
  std::optional<double> f0;  // 2 e^gamma log(s-1) / s on [2, 4]
};

SieveFunctionValue sieve_function(double s);

// sum_{d | P(z)} lambda_d^{+-} h(d) for a multiplicative h given by its values
// at primes (h(p) in [0,1), zero at primes dividing coprime_to).  The chains
// are re-enumerated in full, so the sums are exact even when D exceeds the
// storage cap.  Predictions carry F0/f0 factors when s falls in their
// windows.
struct WeightedDensitySum {
  double plus_sum = 0.0;
  double minus_sum = 0.0;
  double product = 0.0;            // prod_{p < z} (1 - h(p))
  std::optional<double> upper_prediction;  // F0(s) * product
  std::optional<double> lower_prediction;  // f0(s) * product
  double fundamental_band = 0.0;   // e^{9 kappa - s} factor (fundamental kind)
};

WeightedDensitySum weighted_density_sum(const SieveWeightSet& W, const PrimeTable& PT,
                                        const std::function<double(std::uint64_t)>& h_at_prime,
                                        std::uint64_t coprime_to = 1);

// S_plus[n] = sum_{d|n} lambda_d^+ and likewise S_minus, for every n <= N.
// Exact integers; N must not exceed the materialised support range.
void divisor_sums(const SieveWeightSet& W, std::uint64_t N, std::vector<std::int32_t>& plus,
                  std::vector<std::int32_t>& minus);

}  // namespace primeprod
