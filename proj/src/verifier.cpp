#include "primeprod/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace primeprod {

namespace {

// Distinct residues of primes p <= N coprime to q, as list + bitset.
struct PrimeResidues {
  std::vector<Residue> list;
  ResidueSet set;
};

PrimeResidues prime_residues(const UnitGroup& G, const PrimeTable& PT, std::uint64_t N) {
  PrimeResidues S{{}, ResidueSet(G)};
  for (auto p : PT.primes()) {
    if (p > N) break;
    if (G.q() % p == 0) continue;
    Residue r = static_cast<Residue>(p % G.q());
    if (!S.set.contains(r)) {
      S.set.add(r);
      S.list.push_back(r);
    }
  }
  return S;
}

// out = A * S by dilations of A, stopping once every unit is covered.
ResidueSet dilation_product(const UnitGroup& G, const ResidueSet& A,
                            const std::vector<Residue>& multipliers) {
  ResidueSet out(G);
  std::uint64_t covered = 0;
  const std::uint64_t phi = G.phi();
  for (auto r : multipliers) {
    bool done = false;
    A.for_each([&](Residue a) {
      if (done) return;
      Residue c = G.mul(r, a);
      if (!out.bits().test(c)) {
        out.bits().set(c);
        if (++covered == phi) done = true;
      }
    });
    if (covered == phi) break;
  }
  return out;
}

}  // namespace

EkResult compute_Ek(const UnitGroup& G, const PrimeTable& PT, std::uint64_t N, int k) {
  if (k < 1 || k > 4) throw std::domain_error("compute_Ek supports k in {1,2,3,4}");
  EkResult out;
  out.q = G.q();
  out.N = N;
  out.k = k;
  if (N < 2) {  // no primes at all
    out.members = ResidueSet(G);
    out.missing = out.members.complement_in_units();
    out.density = {0, G.phi()};
    return out;
  }
  PT.require(N);
  auto S1 = prime_residues(G, PT, N);

  ResidueSet level = S1.set;
  if (k >= 2) {
    // pair loop is cheapest for the second level
    ResidueSet e2(G);
    for (auto r1 : S1.list)
      for (auto r2 : S1.list) e2.bits().set(G.mul(r1, r2));
    level = std::move(e2);
  }
  for (int j = 3; j <= k; ++j) level = dilation_product(G, level, S1.list);

  out.members = std::move(level);
  out.missing = out.members.complement_in_units();
  out.density = {out.members.size(), G.phi()};
  return out;
}

std::optional<std::vector<std::uint32_t>> ek_witness(const UnitGroup& G, const PrimeTable& PT,
                                                     std::uint64_t N, int k, Residue a) {
  if (!G.is_unit(a)) return std::nullopt;
  if (k < 1 || k > 4) throw std::domain_error("ek_witness supports k in {1,2,3,4}");
  std::vector<std::uint32_t> ps;
  for (auto p : PT.primes()) {
    if (p > N) break;
    if (G.q() % p) ps.push_back(p);
  }
  std::vector<ResidueSet> E;  // E[j] holds E_{j+1}(N)
  for (int j = 1; j < k; ++j) E.push_back(compute_Ek(G, PT, N, j).members);

  std::vector<std::uint32_t> out;
  Residue cur = a;
  for (int j = k; j >= 2; --j) {
    bool found = false;
    for (auto p : ps) {
      Residue rest = G.mul(G.inv(static_cast<Residue>(p % G.q())), cur);
      if (E[j - 2].contains(rest)) {
        out.push_back(p);
        cur = rest;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  for (auto p : ps)
    if (p % G.q() == cur) {
      out.push_back(p);
      return out;
    }
  return std::nullopt;
}

E3Verdict verify_E3(const UnitGroup& G, const PrimeTable& PT) {
  auto r = compute_Ek(G, PT, G.q(), 3);
  E3Verdict v;
  v.complete = r.complete();
  v.missing = r.missing.elements();
  return v;
}

E3Verdict verify_E3(std::uint64_t q, const PrimeTable& PT) {
  if (q < 3) return {true, false, {}};
  UnitGroup G(q);
  return verify_E3(G, PT);
}

Rational e2_density(const UnitGroup& G, const PrimeTable& PT) {
  return compute_Ek(G, PT, G.q(), 2).density;
}

std::optional<std::uint64_t> min_N_for_complete(const UnitGroup& G, const PrimeTable& PT, int k,
                                                std::uint64_t cap) {
  if (k != 2 && k != 3) throw std::domain_error("min_N_for_complete supports k in {2,3}");
  if (cap < 2) throw std::domain_error("search cap must be >= 2");
  PT.require(cap);
  // completeness flips at primes, so binary search over the prime list
  std::size_t hi = PT.upper_index(cap);
  if (hi == 0) return std::nullopt;
  auto complete_at = [&](std::size_t i) {
    return compute_Ek(G, PT, PT.primes()[i], k).complete();
  };
  if (!complete_at(hi - 1)) return std::nullopt;
  std::size_t lo = 0, best = hi - 1;
  while (lo < best) {
    std::size_t mid = lo + (best - lo) / 2;
    if (complete_at(mid))
      best = mid;
    else
      lo = mid + 1;
  }
  return PT.primes()[best];
}

ExceptionalPipelineReport exceptional_pipeline(const CharacterGroup& CG, const PrimeTable& PT,
                                               std::uint64_t l1_x, int grid_points) {
  const UnitGroup& G = CG.group();
  std::uint32_t q = G.q();
  PT.require(q);
  if (l1_x == 0) l1_x = std::max<std::uint64_t>(q, 100'000);
  ExceptionalPipelineReport rep;
  rep.q = q;

  double y_lo = std::pow(double(q), 5.0 / 7.0);
  double p_lo = std::pow(double(q), 0.25);

  for (std::uint64_t c = 1; c < CG.size(); ++c) {
    auto psi = CG.character(c);
    if (!psi.is_real()) continue;
    ExceptionalPipelineRow row;
    row.char_index = c;

    KahanSum logsum;
    for (auto p : PT.primes()) {
      if (p > q) break;
      if (q % p == 0) continue;
      if (double(p) > p_lo && double(p) <= y_lo && psi.real_value(p) > 0)
        logsum.add(1.0 / p);
    }
    row.log_sum = logsum.get();
    row.first_alternative = row.log_sum >= 0.1;

    auto l1 = L1(psi, l1_x);
    row.l1 = l1.one_star_average;
    KahanSum logprod;
    for (auto p : PT.primes()) {
      if (p > q) break;
      if (p > 2 && q % p != 0 && psi.real_value(p) > 0) logprod.add(std::log1p(-2.0 / p));
    }
    row.denom_factor = row.l1 * (double(G.phi()) / q) * std::exp(logprod.get());

    for (int j = 0; j < grid_points; ++j) {
      double t = grid_points == 1 ? 1.0 : double(j) / (grid_points - 1);
      std::uint64_t y = static_cast<std::uint64_t>(
          std::llround(std::exp(std::log(std::max(y_lo, 2.0)) +
                                t * (std::log(double(q)) - std::log(std::max(y_lo, 2.0))))));
      y = std::min<std::uint64_t>(std::max<std::uint64_t>(y, 2), q);
      std::uint64_t cnt = 0;
      for (auto p : PT.primes()) {
        if (p > y) break;
        if (q % p != 0 && psi.real_value(p) > 0) ++cnt;
      }
      double ratio = row.denom_factor > 0.0 ? double(cnt) / (double(y) * row.denom_factor) : 0.0;
      row.grid_y.push_back(y);
      row.grid_count.push_back(cnt);
      row.grid_ratio.push_back(ratio);
      if (ratio > row.best_ratio) {
        row.best_ratio = ratio;
        row.best_y = y;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.q_lo < 3 || cfg.q_hi < cfg.q_lo) throw std::domain_error("bad campaign range");
  if (cfg.q_hi > 2'000'000) throw CapacityError("campaign range capped at q <= 2e6");

  std::uint64_t n_needed = cfg.q_hi;
  if (cfg.n_rule == NRule::q_pow_12)
    n_needed = static_cast<std::uint64_t>(std::pow(double(cfg.q_hi), 1.2)) + 1;
  else if (cfg.n_rule == NRule::explicit_N)
    n_needed = cfg.explicit_n;
  PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>(n_needed, cfg.q_hi));

  std::vector<std::uint32_t> qs;
  for (std::uint32_t q = cfg.q_lo; q <= cfg.q_hi; ++q) {
    if (cfg.filter == CampaignFilter::prime && !PT.is_prime(q)) continue;
    if (cfg.filter == CampaignFilter::cube_free && !factor_modulus(q).cube_free) continue;
    qs.push_back(q);
  }

  std::vector<CampaignRow> rows(qs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= qs.size()) return;
      std::uint32_t q = qs[i];
      UnitGroup G(q);
      std::uint64_t N = q;
      if (cfg.n_rule == NRule::q_pow_12)
        N = static_cast<std::uint64_t>(std::pow(double(q), 1.2));
      else if (cfg.n_rule == NRule::explicit_N)
        N = cfg.explicit_n;

      CampaignRow row;
      row.q = q;
      row.cube_free = G.cube_free();
      row.phi = G.phi();
      if (cfg.task_e2 || cfg.task_e3) {
        auto e2 = compute_Ek(G, PT, N, 2);
        row.e2_size = e2.members.size();
        row.e2_density = e2.density;
        if (cfg.task_e3) {
          auto S1 = prime_residues(G, PT, N);
          ResidueSet e3 = dilation_product(G, e2.members, S1.list);
          row.e3_complete = e3.size() == G.phi();
          if (!row.e3_complete) {
            auto missing = e3.complement_in_units();
            row.e3_missing_count = missing.size();
            row.e3_missing = missing.elements();
          }
        }
      }
      if (cfg.task_exceptional) {
        CharacterGroup CG(G);
        auto rep = exceptional_pipeline(CG, PT, 0, 8);
        for (auto& r : rep.rows) {
          row.exceptional_best_ratio = std::max(row.exceptional_best_ratio, r.best_ratio);
          row.exceptional_log_sum = std::max(row.exceptional_log_sum, r.log_sum);
        }
      }
      rows[i] = std::move(row);
    }
  };
  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignReport rep;
  rep.config = cfg;
  rep.rows = std::move(rows);
  for (auto& row : rep.rows) {
    if (cfg.task_e3 && !row.e3_complete)
      rep.exceptions.push_back({row.q, "e3_incomplete", row.e3_missing});
    if (cfg.task_e2 && 3 * row.e2_size < 2 * row.phi)
      rep.exceptions.push_back({row.q, "e2_below_two_thirds", {}});
    if (cfg.task_e2) {
      if (!rep.min_e2 || row.e2_density.value() < rep.min_e2->value()) {
        rep.min_e2 = row.e2_density;
        rep.min_e2_q = row.q;
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace primeprod
