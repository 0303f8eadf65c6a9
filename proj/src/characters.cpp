#include "primeprod/characters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace primeprod {

// ---- DirichletCharacter ----

DirichletCharacter::DirichletCharacter(const CharacterGroup& dual, std::uint64_t index)
    : dual_(&dual), index_(index) {
  const UnitGroup& G = dual.group();
  if (index >= G.phi()) throw std::domain_error("character index out of range");
  exponents_.resize(G.rank());
  weights_.resize(G.rank());
  std::uint32_t L = dual.root_order();
  order_ = 1;
  for (std::size_t i = 0; i < G.rank(); ++i) {
    std::uint32_t d = G.component_orders()[i];
    std::uint32_t e = G.digit_of_index(index, i);
    exponents_[i] = e;
    weights_[i] = static_cast<std::uint64_t>(e) * (L / d) % L;
    order_ = std::lcm<std::uint64_t>(order_, d / gcd_u64(d, e));
  }
}

const UnitGroup& DirichletCharacter::group() const { return dual_->group(); }

Complex DirichletCharacter::operator()(std::uint64_t n) const {
  const UnitGroup& G = dual_->group();
  Residue r = static_cast<Residue>(n % G.q());
  if (!G.is_unit(r)) return {0.0, 0.0};
  std::uint64_t idx = G.unit_index(r);
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < G.rank(); ++i) t += weights_[i] * G.digit_of_index(idx, i);
  return dual_->root(t);
}

int DirichletCharacter::real_value(std::uint64_t n) const {
  if (order_ > 2) throw std::domain_error("real_value of a non-real character");
  const UnitGroup& G = dual_->group();
  Residue r = static_cast<Residue>(n % G.q());
  if (!G.is_unit(r)) return 0;
  std::uint64_t idx = G.unit_index(r);
  std::uint64_t t = 0;
  std::uint32_t L = dual_->root_order();
  for (std::size_t i = 0; i < G.rank(); ++i) t += weights_[i] * G.digit_of_index(idx, i);
  return (t % L) == 0 ? 1 : -1;
}

// ---- CharacterGroup ----

CharacterGroup::CharacterGroup(const UnitGroup& G) : G_(&G), L_(G.exponent()) {
  roots_.resize(L_);
  for (std::uint32_t k = 0; k < L_; ++k)
    roots_[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / L_);
  roots_[0] = {1.0, 0.0};
  if (L_ % 2 == 0) roots_[L_ / 2] = {-1.0, 0.0};
  if (L_ % 4 == 0) {
    roots_[L_ / 4] = {0.0, 1.0};
    roots_[3ull * L_ / 4] = {0.0, -1.0};
  }
}

std::vector<DirichletCharacter> CharacterGroup::all() const {
  std::vector<DirichletCharacter> out;
  out.reserve(size());
  for (std::uint64_t c = 0; c < size(); ++c) out.emplace_back(*this, c);
  return out;
}

std::uint64_t CharacterGroup::root_exponent(std::uint64_t char_index, std::uint64_t unit_index) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < G_->rank(); ++i) {
    std::uint32_t d = G_->component_orders()[i];
    t += static_cast<std::uint64_t>(G_->digit_of_index(char_index, i)) * (L_ / d) %
         L_ * G_->digit_of_index(unit_index, i);
  }
  return t % L_;
}

Complex CharacterGroup::value(std::uint64_t char_index, std::uint64_t unit_index) const {
  return roots_[root_exponent(char_index, unit_index)];
}

std::vector<Complex> CharacterGroup::run_dfts(std::vector<Complex> data, bool conjugate) const {
  const auto& orders = G_->component_orders();
  std::vector<Complex> scratch;
  for (std::size_t dim = 0; dim < orders.size(); ++dim) {
    std::uint64_t d = orders[dim];
    std::uint64_t stride = G_->stride(dim);
    std::uint64_t block = d * stride;
    std::uint64_t w = L_ / d;
    scratch.assign(d, Complex{});
    for (std::uint64_t base = 0; base < data.size(); base += block) {
      for (std::uint64_t inner = 0; inner < stride; ++inner) {
        Complex* slot0 = data.data() + base + inner;
        for (std::uint64_t e = 0; e < d; ++e) {
          Complex acc{};
          for (std::uint64_t v = 0; v < d; ++v) {
            std::uint64_t t = (e * v % d) * w;
            Complex r = roots_[t];
            if (conjugate) r = std::conj(r);
            acc += slot0[v * stride] * r;
          }
          scratch[e] = acc;
        }
        for (std::uint64_t e = 0; e < d; ++e) slot0[e * stride] = scratch[e];
      }
    }
  }
  return data;
}

std::vector<Complex> CharacterGroup::transform(const std::vector<Complex>& by_residue,
                                               bool conjugate) const {
  std::vector<Complex> data(G_->phi());
  for (std::uint64_t idx = 0; idx < G_->phi(); ++idx) {
    Residue r = G_->unit_at(idx);
    if (r < by_residue.size()) data[idx] = by_residue[r];
  }
  return run_dfts(std::move(data), conjugate);
}

std::vector<Complex> CharacterGroup::transform(const std::vector<double>& by_residue,
                                               bool conjugate) const {
  std::vector<Complex> data(G_->phi());
  for (std::uint64_t idx = 0; idx < G_->phi(); ++idx) {
    Residue r = G_->unit_at(idx);
    if (r < by_residue.size()) data[idx] = Complex(by_residue[r], 0.0);
  }
  return run_dfts(std::move(data), conjugate);
}

std::vector<Complex> CharacterGroup::synthesize(const std::vector<Complex>& by_char) const {
  auto data = run_dfts(by_char, false);
  std::vector<Complex> out(G_->q());
  for (std::uint64_t idx = 0; idx < G_->phi(); ++idx) out[G_->unit_at(idx)] = data[idx];
  return out;
}

// ---- character selections ----

namespace {

std::vector<Residue> generating_set(const Subgroup& H) {
  const UnitGroup& G = *H.group;
  std::vector<Residue> gens;
  Subgroup span = generated_subgroup(G, gens);
  while (span.members.size() < H.members.size()) {
    Residue next = 0;
    bool found = false;
    H.members.for_each([&](Residue h) {
      if (!found && !span.members.contains(h)) {
        next = h;
        found = true;
      }
    });
    gens.push_back(next);
    span = generated_subgroup(G, gens);
  }
  return gens;
}

}  // namespace

std::vector<DirichletCharacter> characters_trivial_on(const CharacterGroup& CG, const Subgroup& H) {
  const UnitGroup& G = CG.group();
  auto gens = generating_set(H);
  std::vector<std::uint64_t> gen_idx;
  for (auto g : gens) gen_idx.push_back(G.unit_index(g));
  std::vector<DirichletCharacter> out;
  for (std::uint64_t c = 0; c < CG.size(); ++c) {
    bool trivial = true;
    for (auto gi : gen_idx)
      if (CG.root_exponent(c, gi) != 0) {
        trivial = false;
        break;
      }
    if (trivial) out.push_back(CG.character(c));
  }
  return out;
}

double coset_indicator(const CharacterGroup& CG, const Subgroup& H, Residue b, std::uint64_t n) {
  const UnitGroup& G = CG.group();
  if (!G.is_unit(b)) throw std::domain_error("coset representative must be a unit");
  auto chars = characters_trivial_on(CG, H);
  KahanComplexSum acc;
  for (auto& chi : chars) acc.add(std::conj(chi(n)) * chi(b));
  return acc.get().real() / static_cast<double>(chars.size());
}

Complex char_sum(const DirichletCharacter& chi, std::uint64_t N) {
  if (N < 1) throw std::domain_error("char_sum needs N >= 1");
  const UnitGroup& G = chi.group();
  std::uint64_t q = G.q();
  std::uint64_t full = N / q, rem = N % q;
  KahanComplexSum acc;
  for (std::uint64_t r = 1; r <= rem; ++r) acc.add(chi(r));
  Complex tail = acc.get();
  if (chi.is_principal())
    return tail + Complex(static_cast<double>(full) * static_cast<double>(G.phi()), 0.0);
  return tail;  // full periods vanish for non-principal chi
}

Complex prime_char_sum(const DirichletCharacter& chi, const PrimeTable& PT, std::uint64_t N,
                       PrimeWeight weight) {
  if (N < 2) throw std::domain_error("prime_char_sum needs N >= 2");
  PT.require(N);
  KahanComplexSum acc;
  for (auto p : PT.primes()) {
    if (p > N) break;
    Complex v = chi(p);
    if (v == Complex{}) continue;
    double w = 1.0;
    switch (weight) {
      case PrimeWeight::one: break;
      case PrimeWeight::log: w = std::log(double(p)); break;
      case PrimeWeight::reciprocal: w = 1.0 / p; break;
      case PrimeWeight::log_over_p: w = std::log(double(p)) / p; break;
    }
    acc.add(v * w);
  }
  return acc.get();
}

namespace {

// psi values on [0, q) as exact {-1, 0, +1}
std::vector<int> real_value_table(const DirichletCharacter& psi) {
  const UnitGroup& G = psi.group();
  std::vector<int> out(G.q(), 0);
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r)) out[r] = psi.real_value(r);
  return out;
}

}  // namespace

L1Estimate L1(const DirichletCharacter& psi, std::uint64_t x) {
  if (!psi.is_real() || psi.is_principal())
    throw std::domain_error("L1 requires a real non-principal character");
  if (x < psi.group().q()) throw std::domain_error("L1 requires x >= q");
  auto val = real_value_table(psi);
  std::uint64_t q = psi.group().q();
  std::int64_t divisor_sum = 0;
  KahanSum series;
  for (std::uint64_t d = 1; d <= x; ++d) {
    int v = val[d % q];
    if (!v) continue;
    divisor_sum += v * static_cast<std::int64_t>(x / d);
    series.add(static_cast<double>(v) / static_cast<double>(d));
  }
  return {static_cast<double>(divisor_sum) / static_cast<double>(x), series.get()};
}

std::int64_t one_star_psi(const DirichletCharacter& psi, std::uint64_t x, std::uint64_t d) {
  if (!psi.is_real() || psi.is_principal())
    throw std::domain_error("one_star_psi requires a real non-principal character");
  if (d < 1 || x / d < 1) throw std::domain_error("one_star_psi requires x/d >= 1");
  auto val = real_value_table(psi);
  std::uint64_t q = psi.group().q();
  std::int64_t acc = 0;
  for (std::uint64_t e = 1; e <= x; ++e) {
    int v = val[e % q];
    if (!v) continue;
    std::uint64_t l = d / gcd_u64(d, e) * e;
    if (l > x) continue;
    acc += v * static_cast<std::int64_t>(x / l);
  }
  return acc;
}

double h_factor(const DirichletCharacter& psi, std::uint64_t d) {
  if (!psi.is_real() || psi.is_principal())
    throw std::domain_error("h_factor requires a real non-principal character");
  double out = 1.0;
  std::uint64_t n = d;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    int pv = psi.real_value(p);
    // h(p^k) = psi(p^k)/p^k + p^{-k} sum_{j<k} psi(p^j) (1 - psi(p)/p)
    double pk = std::pow(double(p), k);
    double h = std::pow(double(pv), k) / pk;
    double geom = 0.0;
    for (int j = 0; j < k; ++j) geom += std::pow(double(pv), j);
    h += geom * (1.0 - double(pv) / p) / pk;
    out *= h;
  }
  if (n > 1) {
    int pv = psi.real_value(n);
    out *= (1.0 + pv) / double(n) - double(pv) / (double(n) * double(n));
  }
  return out;
}

double mvt_ratio(const CharacterGroup& CG,
                 const std::vector<std::pair<std::uint64_t, Complex>>& coeffs, std::uint64_t N) {
  const UnitGroup& G = CG.group();
  std::vector<Complex> by_residue(G.q(), Complex{});
  KahanSum sq;
  for (auto& [n, a] : coeffs) {
    if (n < 1 || n > N) throw std::domain_error("mvt_ratio coefficient outside [1, N]");
    if (!G.is_unit(n % G.q())) continue;
    by_residue[n % G.q()] += a;
    sq.add(std::norm(a));
  }
  if (sq.get() <= 0.0) throw std::domain_error("mvt_ratio undefined for all-zero coefficients");
  auto hat = CG.transform(by_residue, false);
  KahanSum num;
  for (auto& v : hat) num.add(std::norm(v));
  return num.get() / ((static_cast<double>(N) + static_cast<double>(G.phi())) * sq.get());
}

std::uint32_t conductor(const DirichletCharacter& chi) {
  const UnitGroup& G = chi.group();
  const CharacterGroup& CG = chi.dual();
  std::uint32_t q = G.q();
  // chi is induced mod dd iff it is 1 on every unit n == 1 (mod dd); root
  // exponents make this an exact integer test.
  for (std::uint32_t dd = 1; dd <= q; ++dd) {
    if (q % dd) continue;
    bool induced = true;
    for (std::uint64_t n = 1 + dd; n < q && induced; n += dd) {
      if (!G.is_unit(n)) continue;
      if (CG.root_exponent(chi.index(), G.unit_index(static_cast<Residue>(n))) != 0)
        induced = false;
    }
    if (induced) return dd;
  }
  return q;
}

BurgessDecayReport burgess_decay_report(const CharacterGroup& CG, std::vector<std::uint64_t> ys,
                                        std::uint64_t q_cap) {
  const UnitGroup& G = CG.group();
  if (G.q() > q_cap) throw CapacityError("burgess_decay_report: q above configured cap");
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (ys.empty() || ys.front() < 1) throw std::domain_error("y grid must be positive");

  BurgessDecayReport rep;
  rep.conductor.resize(CG.size());
  for (std::uint64_t c = 0; c < CG.size(); ++c) rep.conductor[c] = conductor(CG.character(c));

  rep.rows.resize(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) rep.rows[i] = {ys[i], 0.0, 0, 0.0, 0};

  std::uint64_t ymax = ys.back();
  for (std::uint64_t c = 1; c < CG.size(); ++c) {
    auto chi = CG.character(c);
    bool primitive = rep.conductor[c] == G.q();
    KahanComplexSum acc;
    std::size_t yi = 0;
    for (std::uint64_t n = 1; n <= ymax && yi < ys.size(); ++n) {
      acc.add(chi(n));
      while (yi < ys.size() && ys[yi] == n) {
        double ratio = std::abs(acc.get()) / static_cast<double>(n);
        auto& row = rep.rows[yi];
        if (ratio > row.max_ratio) {
          row.max_ratio = ratio;
          row.argmax_char = c;
        }
        if (primitive && ratio > row.max_ratio_primitive) {
          row.max_ratio_primitive = ratio;
          row.argmax_char_primitive = c;
        }
        ++yi;
      }
    }
  }
  return rep;
}

double triple_count_via_characters(const CharacterGroup& CG, const PrimeTable& PT, std::uint64_t N,
                                   Residue a) {
  const UnitGroup& G = CG.group();
  if (!G.is_unit(a)) throw std::domain_error("target residue must be a unit");
  if (N < 2) throw std::domain_error("N >= 2 required");
  PT.require(N);
  std::vector<double> W(G.q(), 0.0);
  for (auto p : PT.primes()) {
    if (p > N) break;
    W[p % G.q()] += std::log(double(p));
  }
  auto S = CG.transform(W, true);  // per character: sum_p conj(chi(p)) log p
  std::uint64_t a_idx = G.unit_index(a);
  KahanComplexSum acc;
  for (std::uint64_t c = 0; c < CG.size(); ++c) {
    Complex cube = S[c] * S[c] * S[c];
    acc.add(cube * CG.value(c, a_idx));
  }
  return acc.get().real() / static_cast<double>(G.phi());
}

double triple_count_direct(const UnitGroup& G, const PrimeTable& PT, std::uint64_t N, Residue a) {
  std::vector<std::uint32_t> ps;
  for (auto p : PT.primes()) {
    if (p > N) break;
    ps.push_back(p);
  }
  KahanSum acc;
  for (auto p1 : ps) {
    double l1 = std::log(double(p1));
    for (auto p2 : ps) {
      double l2 = std::log(double(p2));
      std::uint64_t r12 = static_cast<std::uint64_t>(p1) % G.q() * (p2 % G.q()) % G.q();
      for (auto p3 : ps) {
        if (r12 * (p3 % G.q()) % G.q() == a) acc.add(l1 * l2 * std::log(double(p3)));
      }
    }
  }
  return acc.get();
}

CharSumProfile char_sum_profile(const DirichletCharacter& chi, const PrimeTable& PT,
                                std::vector<std::uint64_t> cutoffs) {
  std::sort(cutoffs.begin(), cutoffs.end());
  CharSumProfile prof;
  prof.q = chi.group().q();
  prof.char_index = chi.index();
  prof.order = chi.order();
  prof.cutoffs = cutoffs;
  for (auto N : cutoffs) {
    prof.sums.push_back(char_sum(chi, N));
    prof.prime_sums.push_back({prime_char_sum(chi, PT, N, PrimeWeight::one),
                               prime_char_sum(chi, PT, N, PrimeWeight::log),
                               prime_char_sum(chi, PT, N, PrimeWeight::reciprocal),
                               prime_char_sum(chi, PT, N, PrimeWeight::log_over_p)});
  }
  return prof;
}

}  // namespace primeprod
