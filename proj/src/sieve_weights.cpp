#include "primeprod/sieve_weights.hpp"

#include <algorithm>
#include <cmath>

namespace primeprod {

namespace {

constexpr double kExpGamma = 1.78107241799019798523650410310717954916964521430343;

long double beta_power(long double p, double beta) {
  double ip;
  if (std::modf(beta, &ip) == 0.0 && beta < 64.0) {
    long double out = 1.0L;
    for (int i = 0; i < static_cast<int>(beta) + 1; ++i) out *= p;
    return out;
  }
  return powl(p, static_cast<long double>(beta) + 1.0L);
}

// DFS over decreasing prime chains.  `visit` receives the chain product as a
// u64 when it fits below `store_cap` (0 otherwise), the chain length parity,
// the surviving plus/minus flags and the running multiplicative h-value.
struct ChainEnumerator {
  const std::vector<std::uint32_t>& primes;  // ascending primes < z
  long double D;
  double beta;
  std::uint64_t store_cap;                        // 0 = traverse without product bound
  const std::function<double(std::uint64_t)>* h;  // optional
  std::uint64_t visited = 0;
  static constexpr std::uint64_t kChainCap = 80'000'000;

  template <typename V>
  void run(V&& visit) {
    visit(std::uint64_t{1}, 0, true, true, 1.0);
    for (std::size_t i = primes.size(); i-- > 0;)
      extend(i, 1.0L, std::uint64_t{1}, 0, true, true, 1.0, visit);
  }

  template <typename V>
  void extend(std::size_t idx, long double prefix, std::uint64_t prod_u64, int len, bool plus_ok,
              bool minus_ok, double hprod, V&& visit) {
    std::uint32_t p = primes[idx];
    int m = len + 1;  // position of p in the chain
    bool odd = m & 1;
    if (odd ? plus_ok : minus_ok) {
      if (prefix * beta_power(p, beta) > D) (odd ? plus_ok : minus_ok) = false;
    }
    if (!plus_ok && !minus_ok) return;
    long double d_real = prefix * p;
    if (d_real > D) return;  // implied by the conditions, kept as a guard
    if (++visited > kChainCap) throw CapacityError("sieve chain enumeration too large");

    std::uint64_t d_u64 = 0;
    if (store_cap != 0 && prod_u64 != 0 && prod_u64 <= store_cap / p) d_u64 = prod_u64 * p;
    double h2 = hprod;
    if (h) h2 *= (*h)(p);
    visit(d_u64, m, plus_ok, minus_ok, h2);
    if (store_cap != 0 && d_u64 == 0) return;   // storage run: deeper products only grow
    if (store_cap == 0 && h2 == 0.0) return;    // h-sum run: deeper terms all vanish
    for (std::size_t j = idx; j-- > 0;)
      extend(j, d_real, d_u64, m, plus_ok, minus_ok, h2, visit);
  }
};

SieveWeightSet build_weights(SieveKind kind, double D, double z, double kappa, double beta,
                             double s) {
  SieveWeightSet W;
  W.kind = kind;
  W.z = z;
  W.D = D;
  W.s = s;
  W.kappa = kappa;
  W.beta = beta;
  W.materialized_limit =
      static_cast<std::uint64_t>(std::min<double>(D, double(SieveWeightSet::kStorageCap)));

  std::vector<std::uint32_t> ps;
  {
    std::uint32_t zi = static_cast<std::uint32_t>(std::ceil(z)) + 1;
    std::vector<bool> comp(zi, false);
    for (std::uint32_t p = 2; p < zi; ++p) {
      if (comp[p]) continue;
      if (double(p) < z) ps.push_back(p);
      for (std::uint64_t m = std::uint64_t(p) * p; m < zi; m += p) comp[m] = true;
    }
  }

  std::vector<std::tuple<std::uint64_t, std::int8_t, std::int8_t>> entries;
  ChainEnumerator en{ps, static_cast<long double>(D), beta, W.materialized_limit, nullptr};
  en.run([&](std::uint64_t d, int len, bool plus_ok, bool minus_ok, double) {
    if (d == 0) return;  // beyond storage cap
    std::int8_t mu = (len % 2 == 0) ? 1 : -1;
    entries.emplace_back(d, plus_ok ? mu : 0, minus_ok ? mu : 0);
  });
  std::sort(entries.begin(), entries.end());
  W.support.reserve(entries.size());
  for (auto& [d, lp, lm] : entries) {
    W.support.push_back(d);
    W.lambda_plus.push_back(lp);
    W.lambda_minus.push_back(lm);
  }
  return W;
}

}  // namespace

std::int8_t SieveWeightSet::plus_at(std::uint64_t d) const {
  auto it = std::lower_bound(support.begin(), support.end(), d);
  if (it == support.end() || *it != d) return 0;
  return lambda_plus[it - support.begin()];
}

std::int8_t SieveWeightSet::minus_at(std::uint64_t d) const {
  auto it = std::lower_bound(support.begin(), support.end(), d);
  if (it == support.end() || *it != d) return 0;
  return lambda_minus[it - support.begin()];
}

SieveWeightSet linear_weights(double D, double z) {
  if (z < 2.0) throw std::domain_error("linear sieve needs z >= 2");
  double s = std::log(D) / std::log(z);
  if (s < 1.0 - 1e-12) throw std::domain_error("linear sieve needs D >= z (s >= 1)");
  return build_weights(SieveKind::linear, D, z, 1.0, 2.0, s);
}

SieveWeightSet fundamental_weights(double D, double z, double kappa) {
  if (z < 2.0) throw std::domain_error("fundamental sieve needs z >= 2");
  if (kappa < 1.0) throw std::domain_error("sieve dimension kappa must be >= 1");
  double s = std::log(D) / std::log(z);
  if (s < 9.0 * kappa + 1.0 - 1e-12)
    throw std::domain_error("fundamental lemma needs s >= 9*kappa + 1");
  return build_weights(SieveKind::fundamental, D, z, kappa, 9.0 * kappa + 1.0, s);
}

SieveFunctionValue sieve_function(double s) {
  SieveFunctionValue v;
  v.s = s;
  if (s >= 1.0 && s <= 3.0) v.F0 = 2.0 * kExpGamma / s;
  if (s >= 2.0 && s <= 4.0) v.f0 = 2.0 * kExpGamma * std::log(s - 1.0) / s;
  if (!v.F0 && !v.f0)
    throw std::domain_error("sieve functions known only on F0:[1,3], f0:[2,4]");
  return v;
}

WeightedDensitySum weighted_density_sum(const SieveWeightSet& W, const PrimeTable& PT,
                                        const std::function<double(std::uint64_t)>& h_at_prime,
                                        std::uint64_t coprime_to) {
  PT.require(static_cast<std::uint64_t>(W.z) + 1);
  std::vector<std::uint32_t> ps;
  for (auto p : PT.primes()) {
    if (double(p) >= W.z) break;
    ps.push_back(p);
  }
  std::function<double(std::uint64_t)> h = [&](std::uint64_t p) {
    if (coprime_to % p == 0) return 0.0;
    double v = h_at_prime(p);
    if (v < 0.0 || v >= 1.0) throw std::domain_error("h(p) must lie in [0, 1)");
    return v;
  };

  WeightedDensitySum out;
  KahanSum plus, minus;
  ChainEnumerator en{ps, static_cast<long double>(W.D), W.beta, 0, &h};
  en.run([&](std::uint64_t, int len, bool plus_ok, bool minus_ok, double hprod) {
    double mu = (len % 2 == 0) ? 1.0 : -1.0;
    if (plus_ok) plus.add(mu * hprod);
    if (minus_ok) minus.add(mu * hprod);
  });
  out.plus_sum = plus.get();
  out.minus_sum = minus.get();

  KahanSum logprod;
  bool zero = false;
  for (auto p : ps) {
    double v = h(p);
    if (v == 1.0) zero = true;
    logprod.add(std::log1p(-v));
  }
  out.product = zero ? 0.0 : std::exp(logprod.get());
  if (W.s >= 1.0 && W.s <= 3.0) out.upper_prediction = 2.0 * kExpGamma / W.s * out.product;
  if (W.s >= 2.0 && W.s <= 4.0)
    out.lower_prediction = 2.0 * kExpGamma * std::log(W.s - 1.0) / W.s * out.product;
  if (W.kind == SieveKind::fundamental) out.fundamental_band = std::exp(9.0 * W.kappa - W.s);
  return out;
}

void divisor_sums(const SieveWeightSet& W, std::uint64_t N, std::vector<std::int32_t>& plus,
                  std::vector<std::int32_t>& minus) {
  bool support_complete = double(W.materialized_limit) >= W.D;
  if (!support_complete && N > W.materialized_limit)
    throw CapacityError("divisor_sums beyond materialised support");
  if (N > 20'000'000) throw CapacityError("divisor_sums capped at 2e7");
  plus.assign(N + 1, 0);
  minus.assign(N + 1, 0);
  for (std::size_t i = 0; i < W.support.size(); ++i) {
    std::uint64_t d = W.support[i];
    if (d > N) break;
    std::int32_t lp = W.lambda_plus[i], lm = W.lambda_minus[i];
    for (std::uint64_t m = d; m <= N; m += d) {
      plus[m] += lp;
      minus[m] += lm;
    }
  }
}

}  // namespace primeprod
