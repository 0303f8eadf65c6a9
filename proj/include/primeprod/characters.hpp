#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primeprod/prime_table.hpp"
#include "primeprod/types.hpp"
#include "primeprod/unit_group.hpp"

namespace primeprod {

class CharacterGroup;

// A Dirichlet character mod q, stored as integer exponents against the group
// generators: chi(g_i) = e(e_i / d_i).  Values are looked up in a shared
// root-of-unity table, so repeated evaluation does not drift.
class DirichletCharacter {
 public:
  DirichletCharacter(const CharacterGroup& dual, std::uint64_t index);

  Complex operator()(std::uint64_t n) const;
  // For real characters only: the value in {-1, 0, +1} as an exact integer.
  int real_value(std::uint64_t n) const;

  std::uint64_t index() const { return index_; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }
  std::uint64_t order() const { return order_; }
  bool is_principal() const { return index_ == 0; }
  bool is_real() const { return order_ <= 2; }

  const UnitGroup& group() const;
  const CharacterGroup& dual() const { return *dual_; }

 private:
  const CharacterGroup* dual_;
  std::uint64_t index_;
  std::vector<std::uint32_t> exponents_;
  std::vector<std::uint64_t> weights_;  // e_i * (L / d_i), reduced mod L
  std::uint64_t order_;
};

// The dual group of Z_q^x with transform machinery.  Characters are indexed
// by the same mixed radix as unit indices; index 0 is the principal
// character.
class CharacterGroup {
 public:
  explicit CharacterGroup(const UnitGroup& G);

  const UnitGroup& group() const { return *G_; }
  std::uint64_t size() const { return G_->phi(); }

  DirichletCharacter character(std::uint64_t index) const { return {*this, index}; }
  std::vector<DirichletCharacter> all() const;

  Complex root(std::uint64_t k) const { return roots_[k % L_]; }
  std::uint32_t root_order() const { return L_; }

  // chi_{char_index}(unit residue with the given unit index)
  Complex value(std::uint64_t char_index, std::uint64_t unit_index) const;
  // exponent t with chi(a) = e(t/L)
  std::uint64_t root_exponent(std::uint64_t char_index, std::uint64_t unit_index) const;

  // out[c] = sum over unit residues a of by_residue[a] * chi_c(a)
  // (conjugated characters when conjugate = true).  Values at non-unit
  // residues are ignored.  Cost O(phi * sum d_i) via one DFT per cyclic
  // factor.
  std::vector<Complex> transform(const std::vector<Complex>& by_residue, bool conjugate) const;
  std::vector<Complex> transform(const std::vector<double>& by_residue, bool conjugate) const;

  // out[a] = sum over characters c of by_char[c] * chi_c(a), indexed by
  // residue (zero at non-units).
  std::vector<Complex> synthesize(const std::vector<Complex>& by_char) const;

 private:
  std::vector<Complex> run_dfts(std::vector<Complex> data, bool conjugate) const;

  const UnitGroup* G_;
  std::uint32_t L_;
  std::vector<Complex> roots_;
};

// The Y characters that are identically 1 on H (chi_0 included).
std::vector<DirichletCharacter> characters_trivial_on(const CharacterGroup& CG, const Subgroup& H);

// (1/Y) sum over those characters of conj(chi(n)) chi(b); equals 1_{n in bH}
// up to rounding.
double coset_indicator(const CharacterGroup& CG, const Subgroup& H, Residue b, std::uint64_t n);

// sum_{n <= N} chi(n), exact accumulation over one period plus remainder.
Complex char_sum(const DirichletCharacter& chi, std::uint64_t N);

enum class PrimeWeight { one, log, reciprocal, log_over_p };

// sum_{p <= N} chi(p) w(p)
Complex prime_char_sum(const DirichletCharacter& chi, const PrimeTable& PT, std::uint64_t N,
                       PrimeWeight weight);

struct L1Estimate {
  double one_star_average;    // (1/x) sum_{n<=x} (1*psi)(n)
  double dirichlet_series;    // sum_{n<=x} psi(n)/n
};

// Two estimators of L(1, psi) for a real non-principal psi.  The divisor-sum
// average is the quantity the sieve pipeline consumes; the partial Dirichlet
// series is the cross-check.
L1Estimate L1(const DirichletCharacter& psi, std::uint64_t x);

// sum_{n <= x, d | n} (1*psi)(n), exact integer arithmetic.
std::int64_t one_star_psi(const DirichletCharacter& psi, std::uint64_t x, std::uint64_t d);

// The multiplicative density h with h(p) = (1+psi(p))/p - psi(p)/p^2,
// evaluated at d.
double h_factor(const DirichletCharacter& psi, std::uint64_t d);

// [sum_chi |sum_n a_n chi(n)|^2] / [(N + phi(q)) sum_{(n,q)=1} |a_n|^2].
// Always <= 1 by the mean value theorem.
double mvt_ratio(const CharacterGroup& CG, const std::vector<std::pair<std::uint64_t, Complex>>& coeffs,
                 std::uint64_t N);

struct BurgessDecayRow {
  std::uint64_t y;
  double max_ratio;                 // max over non-principal chi of |sum_{n<=y} chi(n)| / y
  std::uint64_t argmax_char;
  double max_ratio_primitive;       // same, restricted to primitive characters
  std::uint64_t argmax_char_primitive;  // 0 when no primitive non-principal character exists
};

struct BurgessDecayReport {
  std::vector<BurgessDecayRow> rows;
  std::vector<std::uint32_t> conductor;  // per character index
};

// Raw decay data for sup_{chi != chi_0} |sum_{n<=y} chi(n)|/y on a grid of y
// values.  No rate is asserted; imprimitive characters are labelled via the
// conductor list but still included.
BurgessDecayReport burgess_decay_report(const CharacterGroup& CG, std::vector<std::uint64_t> ys,
                                        std::uint64_t q_cap = 20000);

std::uint32_t conductor(const DirichletCharacter& chi);

// (1/phi(q)) sum_chi (sum_{p<=N} conj(chi(p)) log p)^3 chi(a); an exact
// identity for the log-weighted count of triples p1 p2 p3 = a mod q.
double triple_count_via_characters(const CharacterGroup& CG, const PrimeTable& PT, std::uint64_t N,
                                   Residue a);

// Brute-force companion of the identity above.
double triple_count_direct(const UnitGroup& G, const PrimeTable& PT, std::uint64_t N, Residue a);

struct CharSumProfile {
  std::uint32_t q = 0;
  std::uint64_t char_index = 0;
  std::uint64_t order = 0;
  std::vector<std::uint64_t> cutoffs;
  std::vector<Complex> sums;                       // char_sum at each cutoff
  std::vector<std::array<Complex, 4>> prime_sums;  // weights one, log, 1/p, log p/p
};

CharSumProfile char_sum_profile(const DirichletCharacter& chi, const PrimeTable& PT,
                                std::vector<std::uint64_t> cutoffs);

}  // namespace primeprod
