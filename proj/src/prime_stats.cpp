#include "primeprod/prime_stats.hpp"

#include <cmath>

namespace primeprod {

CosetPrimeStats coset_prime_stats(const Subgroup& H, const PrimeTable& PT, std::uint64_t n_lo,
                                  std::uint64_t n_hi) {
  if (!(2 <= n_lo && n_lo < n_hi)) throw std::domain_error("need 2 <= N_lo < N_hi");
  PT.require(n_hi);
  const UnitGroup& G = *H.group;
  auto dec = cosets(H);

  CosetPrimeStats out;
  out.n_lo = n_lo;
  out.n_hi = n_hi;
  for (auto& c : dec.cosets) out.representatives.push_back(c.representative);
  std::size_t Y = dec.count();
  out.count.assign(Y, 0);
  std::vector<KahanSum> slog(Y), srec(Y), slogp(Y);

  for (std::size_t i = PT.upper_index(n_lo); i < PT.primes().size(); ++i) {
    std::uint64_t p = PT.primes()[i];
    if (p > n_hi) break;
    std::int32_t cid = dec.coset_of(static_cast<Residue>(p % G.q()));
    if (cid < 0) continue;  // p divides q
    ++out.count[cid];
    double lp = std::log(double(p));
    slog[cid].add(lp);
    srec[cid].add(1.0 / p);
    slogp[cid].add(lp / p);
    ++out.total_count;
  }
  for (std::size_t j = 0; j < Y; ++j) {
    out.sum_log.push_back(slog[j].get());
    out.sum_recip.push_back(srec[j].get());
    out.sum_log_over_p.push_back(slogp[j].get());
  }
  return out;
}

RealPartSum realpart_weighted_sum(const DirichletCharacter& chi, const PrimeTable& PT,
                                  double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
  const UnitGroup& G = chi.group();
  double logq = std::log(double(G.q()));
  double cutoff = std::pow(double(G.q()), alpha);
  RealPartSum out;
  out.principal_prediction = 0.5 * alpha * alpha * logq;
  if (cutoff < 2.0) return out;  // empty sum
  PT.require(static_cast<std::uint64_t>(cutoff));
  KahanComplexSum acc;
  KahanSum principal;
  for (auto p : PT.primes()) {
    if (double(p) > cutoff) break;
    double t = std::log(double(p)) / logq;
    if (t > alpha) break;
    double w = std::log(double(p)) / p * (alpha - t);
    Complex v = chi(p);
    if (v != Complex{}) acc.add(v * w);
    if (G.is_unit(p % G.q())) principal.add(w);
  }
  out.value = acc.get().real();
  out.principal_value = principal.get();
  return out;
}

ExceptionalScanReport exceptional_scan(const CharacterGroup& CG, const PrimeTable& PT,
                                       std::uint64_t prime_limit, std::uint64_t l1_x) {
  const UnitGroup& G = CG.group();
  PT.require(std::max<std::uint64_t>(prime_limit, G.q()));
  ExceptionalScanReport rep;
  rep.q = G.q();
  rep.prime_limit = prime_limit;
  rep.l1_x = l1_x;
  for (std::uint64_t c = 1; c < CG.size(); ++c) {
    auto psi = CG.character(c);
    if (!psi.is_real()) continue;
    ExceptionalScanRow row;
    row.char_index = c;
    for (auto p : PT.primes()) {
      if (p > prime_limit) break;
      if (G.q() % p == 0) continue;
      if (psi.real_value(p) > 0)
        ++row.plus_count;
      else
        ++row.minus_count;
    }
    KahanSum log_prod;  // log of prod_{2<p<=q, psi(p)=1} (1 - 2/p)
    for (auto p : PT.primes()) {
      if (p > G.q()) break;
      if (p > 2 && G.q() % p != 0 && psi.real_value(p) > 0) log_prod.add(std::log1p(-2.0 / p));
    }
    row.total = row.plus_count + row.minus_count;
    row.l1 = L1(psi, l1_x);
    row.qr_upper_factor = row.l1.one_star_average * (static_cast<double>(G.phi()) / G.q()) *
                          std::exp(log_prod.get());
    rep.rows.push_back(row);
  }
  return rep;
}

std::uint64_t almost_prime_coset_count(const Subgroup& H, Residue b, std::uint64_t N,
                                       const PrimeTable& PT) {
  if (N < 8) throw std::domain_error("almost_prime_coset_count needs N >= 8");
  const UnitGroup& G = *H.group;
  if (!G.is_unit(b)) throw std::domain_error("coset representative must be a unit");
  if (N > 100'000'000) throw CapacityError("almost_prime_coset_count capped at 1e8");
  ResidueSet bH = H.members.dilated(b);

  // Cross off everything with a prime factor p < N^{1/3}, i.e. p^3 < N.
  boost::dynamic_bitset<> has_small_factor(N + 1);
  PT.require(static_cast<std::uint64_t>(std::cbrt(double(N))) + 2);
  for (auto p : PT.primes()) {
    std::uint64_t p3 = static_cast<std::uint64_t>(p) * p * p;
    if (p3 >= N) break;  // p >= N^{1/3} qualifies, so stop
    for (std::uint64_t m = p; m <= N; m += p) has_small_factor.set(m);
  }
  std::uint64_t cnt = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (has_small_factor.test(n)) continue;
    if (bH.contains(static_cast<Residue>(n % G.q()))) ++cnt;
  }
  return cnt;
}

}  // namespace primeprod
