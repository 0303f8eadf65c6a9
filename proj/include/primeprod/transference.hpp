#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primeprod/characters.hpp"
#include "primeprod/prime_table.hpp"
#include "primeprod/residue_set.hpp"
#include "primeprod/sieve_weights.hpp"
#include "primeprod/types.hpp"
#include "primeprod/unit_group.hpp"

namespace primeprod {

// theta, theta0 and the induced sieve parameters D = N^theta, z = N^{theta/3}
// (s = 3) for the window [N]_q.
struct TransferenceParams {
  std::uint32_t q = 0;
  std::uint64_t N = 0;
  double epsilon = 0.0;
  double theta = 0.0;   // 1 - eps - log q/(4 log N) cube-free, /(3 log N) otherwise
  double theta0 = 0.0;  // 1 - eps - log q/(4 log N)
  double z = 0.0;
  double D = 0.0;
};

TransferenceParams transference_params(const UnitGroup& G, std::uint64_t N, double epsilon);

// The linear sieve weights matching the parameters (D = N^theta, z = N^{theta/3}).
SieveWeightSet majorant_weights(const TransferenceParams& P);

// A nonnegative function supported on [N]_q = {n <= N : (n,q) = 1}, held as
// per-residue sums plus enough structure for pointwise evaluation.  Two
// builders: the scaled prime indicator f and its sieve majorant nu, both with
// scale (theta/2) (phi(q)/q) log N.
class ArithmeticFunctionWindow {
 public:
  static ArithmeticFunctionWindow prime_indicator(const UnitGroup& G, const PrimeTable& PT,
                                                  std::uint64_t N, double epsilon);
  static ArithmeticFunctionWindow sieve_majorant(const UnitGroup& G, const SieveWeightSet& W,
                                                 std::uint64_t N, double epsilon);

  const UnitGroup& group() const { return *G_; }
  const TransferenceParams& params() const { return params_; }
  double scale() const { return scale_; }

  double value(std::uint64_t n) const;  // 0 outside [N]_q

  const std::vector<double>& residue_sums() const { return residue_sums_; }  // size q
  std::uint64_t window_size() const { return window_size_; }                 // |[N]_q|
  double total() const { return total_; }
  double mean() const { return total_ / static_cast<double>(window_size_); }

 private:
  const UnitGroup* G_ = nullptr;
  const PrimeTable* PT_ = nullptr;
  TransferenceParams params_;
  double scale_ = 0.0;
  bool prime_mode_ = true;
  std::vector<std::int32_t> divisor_profile_;  // majorant mode: sum_{d|n, d<=D} lambda_d^+
  std::vector<double> residue_sums_;
  std::uint64_t window_size_ = 0;
  double total_ = 0.0;

  static constexpr std::uint64_t kProfileCap = 20'000'000;
};

struct DenseModel {
  std::uint32_t q = 0;
  std::uint64_t N = 0;
  double delta = 0.0;
  TransferenceParams params;
  bool delta_below_tenth = false;  // delta in (0, 1/10), the usual regime

  std::vector<std::uint32_t> spectrum;  // character indices with |f_hat| >= delta
  ResidueSet bohr;                      // {b : |chi(b)-1| <= delta/5 for chi in spectrum}
  std::vector<double> g;                // size q, zero at non-units

  std::vector<Complex> f_hat;       // E_{n in [N]_q} f(n) conj(chi(n)) per character
  std::vector<Complex> g_hat;       // |E_B chi|^2 * f_hat  (construction identity)
  std::vector<double> bohr_weight;  // |E_{b in B} chi(b)|^2 per character

  double direct_vs_fourier = 0.0;  // max |g - g_direct| over units
};

std::vector<std::uint32_t> large_spectrum(const CharacterGroup& CG,
                                          const ArithmeticFunctionWindow& f, double delta);

ResidueSet bohr_set(const CharacterGroup& CG, const std::vector<std::uint32_t>& spectrum,
                    double delta);

// Builds g two ways -- the defining average over Bohr dilations and Fourier
// inversion of |E_B chi|^2 f_hat -- and records their disagreement.
DenseModel dense_model(const CharacterGroup& CG, const ArithmeticFunctionWindow& f, double delta);

struct ModelVerification {
  // mean preservation: E_a g = E_n f
  double mean_g = 0.0, mean_f = 0.0, mean_gap = 0.0;
  // contraction: |g_hat| <= |f_hat| and |f_hat - g_hat| <= |f_hat|, with
  // g_hat recomputed from the stored g
  double contraction_excess = 0.0;     // max over chi of |g_hat| - |f_hat|
  double proximity_excess = 0.0;       // max over chi of |f_hat - g_hat| - |f_hat|
  // construction identity, g_hat recomputed from the stored g
  double fourier_identity_error = 0.0;  // max |g_hat(chi) - w(chi) f_hat(chi)|
  double direct_vs_fourier = 0.0;
  // spectrum-gap bound: max |f_hat - g_hat| against delta
  double max_transform_gap = 0.0;
  // boundedness: max g against 1 + eta plus the exact Bohr-leakage term
  double max_g = 0.0;
  double eta_measured = -1.0;       // |E nu - 1| when nu supplied
  double nu_leakage_bound = 0.0;    // E nu + max_{chi != chi_0} |nu_hat| * phi/|B|
  // coset averages over subgroups of index Y < 1/(2 delta)
  double max_coset_discrepancy = 0.0;
  std::uint64_t cosets_checked = 0;
};

ModelVerification verify_model(const CharacterGroup& CG, const DenseModel& model,
                               const ArithmeticFunctionWindow& f,
                               const ArithmeticFunctionWindow* nu);

struct ThresholdSet {
  ResidueSet members;  // {a : g(a) >= eps/10}
  double density = 0.0;
  double predicted_floor = 0.0;  // theta/2 - eps
};

ThresholdSet threshold_set(const DenseModel& model, double epsilon);

struct ConvolutionComparison {
  Residue a = 0;
  double lhs = 0.0;   // |[N]_q|^{-r} sum_{n == a} (f * ... * f)(n)
  double rhs = 0.0;   // phi(q)^{-r} (g * ... * g)(a)
  double diff_times_phi = 0.0;
};

std::vector<ConvolutionComparison> convolution_compare_all(const ArithmeticFunctionWindow& f,
                                                           const DenseModel& model, int arity);

ConvolutionComparison convolution_compare(const ArithmeticFunctionWindow& f,
                                          const DenseModel& model, Residue a, int arity);

}  // namespace primeprod
