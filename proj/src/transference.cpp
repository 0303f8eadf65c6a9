#include "primeprod/transference.hpp"

#include <algorithm>
#include <cmath>

namespace primeprod {

TransferenceParams transference_params(const UnitGroup& G, std::uint64_t N, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0,1)");
  if (double(N) < std::sqrt(double(G.q()))) throw std::domain_error("need N >= q^{1/2}");
  TransferenceParams P;
  P.q = G.q();
  P.N = N;
  P.epsilon = epsilon;
  double ratio = std::log(double(G.q())) / std::log(double(N));
  P.theta = G.cube_free() ? 1.0 - epsilon - ratio / 4.0 : 1.0 - epsilon - ratio / 3.0;
  P.theta0 = 1.0 - epsilon - ratio / 4.0;
  if (P.theta <= 0.0) throw std::domain_error("theta <= 0: N too small for this q, epsilon");
  P.D = std::pow(double(N), P.theta);
  P.z = std::pow(double(N), P.theta / 3.0);
  return P;
}

SieveWeightSet majorant_weights(const TransferenceParams& P) {
  return linear_weights(P.D, std::max(P.z, 2.0));
}

ArithmeticFunctionWindow ArithmeticFunctionWindow::prime_indicator(const UnitGroup& G,
                                                                   const PrimeTable& PT,
                                                                   std::uint64_t N,
                                                                   double epsilon) {
  PT.require(N);
  ArithmeticFunctionWindow f;
  f.G_ = &G;
  f.PT_ = &PT;
  f.params_ = transference_params(G, N, epsilon);
  f.scale_ = f.params_.theta / 2.0 * (double(G.phi()) / G.q()) * std::log(double(N));
  f.prime_mode_ = true;
  f.residue_sums_.assign(G.q(), 0.0);
  std::vector<KahanSum> acc(G.q());
  for (auto p : PT.primes()) {
    if (p > N) break;
    if (double(p) < f.params_.z) continue;
    Residue r = static_cast<Residue>(p % G.q());
    if (!G.is_unit(r)) continue;
    acc[r].add(f.scale_);
  }
  KahanSum tot;
  for (std::uint32_t r = 0; r < G.q(); ++r) {
    f.residue_sums_[r] = acc[r].get();
    tot.add(acc[r].get());
  }
  f.total_ = tot.get();
  f.window_size_ = (N / G.q()) * G.phi();
  for (std::uint64_t n = N / G.q() * G.q() + 1; n <= N; ++n)
    if (G.is_unit(n % G.q())) ++f.window_size_;
  return f;
}

ArithmeticFunctionWindow ArithmeticFunctionWindow::sieve_majorant(const UnitGroup& G,
                                                                  const SieveWeightSet& W,
                                                                  std::uint64_t N,
                                                                  double epsilon) {
  ArithmeticFunctionWindow nu;
  nu.G_ = &G;
  nu.params_ = transference_params(G, N, epsilon);
  if (W.kind != SieveKind::linear) throw std::domain_error("majorant wants linear sieve weights");
  double zref = std::max(nu.params_.z, 2.0);
  if (std::abs(W.D - nu.params_.D) > 1e-6 * nu.params_.D ||
      std::abs(W.z - zref) > 1e-6 * zref)
    throw std::domain_error("weight set parameters do not match D = N^theta, z = N^{theta/3}");
  if (N > kProfileCap) throw CapacityError("sieve majorant profile capped at 2e7");

  nu.scale_ = nu.params_.theta / 2.0 * (double(G.phi()) / G.q()) * std::log(double(N));
  nu.prime_mode_ = false;
  nu.divisor_profile_.assign(N + 1, 0);
  for (std::size_t i = 0; i < W.support.size(); ++i) {
    std::uint64_t d = W.support[i];
    if (d > N) break;
    std::int32_t lp = W.lambda_plus[i];
    if (!lp) continue;
    for (std::uint64_t m = d; m <= N; m += d) nu.divisor_profile_[m] += lp;
  }
  nu.residue_sums_.assign(G.q(), 0.0);
  std::vector<KahanSum> acc(G.q());
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    Residue r = static_cast<Residue>(n % G.q());
    if (!G.is_unit(r)) continue;
    ++count;
    if (nu.divisor_profile_[n]) acc[r].add(nu.scale_ * nu.divisor_profile_[n]);
  }
  KahanSum tot;
  for (std::uint32_t r = 0; r < G.q(); ++r) {
    nu.residue_sums_[r] = acc[r].get();
    tot.add(acc[r].get());
  }
  nu.total_ = tot.get();
  nu.window_size_ = count;
  return nu;
}

double ArithmeticFunctionWindow::value(std::uint64_t n) const {
  if (n < 1 || n > params_.N || !G_->is_unit(n % G_->q())) return 0.0;
  if (prime_mode_)
    return (PT_->is_prime(n) && double(n) >= params_.z) ? scale_ : 0.0;
  return scale_ * divisor_profile_[n];
}

std::vector<std::uint32_t> large_spectrum(const CharacterGroup& CG,
                                          const ArithmeticFunctionWindow& f, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
  auto hat = CG.transform(f.residue_sums(), true);
  double inv = 1.0 / static_cast<double>(f.window_size());
  std::vector<std::uint32_t> out;
  for (std::uint64_t c = 0; c < hat.size(); ++c)
    if (std::abs(hat[c]) * inv >= delta) out.push_back(static_cast<std::uint32_t>(c));
  return out;
}

ResidueSet bohr_set(const CharacterGroup& CG, const std::vector<std::uint32_t>& spectrum,
                    double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
  const UnitGroup& G = CG.group();
  ResidueSet B(G);
  for (std::uint64_t idx = 0; idx < G.phi(); ++idx) {
    bool in = true;
    for (auto c : spectrum) {
      if (std::abs(CG.value(c, idx) - Complex(1.0, 0.0)) > delta / 5.0) {
        in = false;
        break;
      }
    }
    if (in) B.add(G.unit_at(idx));
  }
  return B;
}

DenseModel dense_model(const CharacterGroup& CG, const ArithmeticFunctionWindow& f, double delta) {
  const UnitGroup& G = CG.group();
  DenseModel M;
  M.q = G.q();
  M.N = f.params().N;
  M.delta = delta;
  M.params = f.params();
  M.delta_below_tenth = delta > 0.0 && delta < 0.1;

  auto raw_hat = CG.transform(f.residue_sums(), true);
  double invW = 1.0 / static_cast<double>(f.window_size());
  M.f_hat.resize(raw_hat.size());
  for (std::size_t c = 0; c < raw_hat.size(); ++c) M.f_hat[c] = raw_hat[c] * invW;

  for (std::uint64_t c = 0; c < M.f_hat.size(); ++c)
    if (std::abs(M.f_hat[c]) >= delta) M.spectrum.push_back(static_cast<std::uint32_t>(c));

  M.bohr = bohr_set(CG, M.spectrum, delta);
  std::uint64_t bsize = M.bohr.size();

  std::vector<double> bohr_ind(G.q(), 0.0);
  M.bohr.for_each([&](Residue b) { bohr_ind[b] = 1.0; });
  auto bohr_hat = CG.transform(bohr_ind, false);
  M.bohr_weight.resize(bohr_hat.size());
  for (std::size_t c = 0; c < bohr_hat.size(); ++c) {
    double w = std::norm(bohr_hat[c] / static_cast<double>(bsize));
    M.bohr_weight[c] = w;
  }

  M.g_hat.resize(M.f_hat.size());
  for (std::size_t c = 0; c < M.f_hat.size(); ++c) M.g_hat[c] = M.bohr_weight[c] * M.f_hat[c];

  // Fourier inversion g(a) = sum_chi g_hat(chi) chi(a)
  auto g_cplx = CG.synthesize(M.g_hat);
  M.g.assign(G.q(), 0.0);
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r)) M.g[r] = g_cplx[r].real();

  // Direct defining average:
  //   g(a) = phi(q) E_{b1,b2 in B} E_{n in [N]_q} f(n) 1_{n = a b1 b2^{-1}}
  std::vector<double> pair_count(G.q(), 0.0);
  {
    std::vector<Residue> belems = M.bohr.elements();
    for (auto b2 : belems) {
      Residue b2inv = G.inv(b2);
      for (auto b1 : belems) pair_count[G.mul(b1, b2inv)] += 1.0;
    }
  }
  const auto& F = f.residue_sums();
  double norm = double(G.phi()) / (double(bsize) * double(bsize) * double(f.window_size()));
  double worst = 0.0;
  for (std::uint32_t a = 0; a < G.q(); ++a) {
    if (!G.is_unit(a)) continue;
    KahanSum acc;
    for (std::uint32_t r = 0; r < G.q(); ++r) {
      if (pair_count[r] == 0.0) continue;
      acc.add(pair_count[r] * F[G.mul(a, r)]);
    }
    double direct = norm * acc.get();
    worst = std::max(worst, std::abs(direct - M.g[a]));
  }
  M.direct_vs_fourier = worst;
  return M;
}

ModelVerification verify_model(const CharacterGroup& CG, const DenseModel& model,
                               const ArithmeticFunctionWindow& f,
                               const ArithmeticFunctionWindow* nu) {
  const UnitGroup& G = CG.group();
  ModelVerification V;

  KahanSum gsum;
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r)) gsum.add(model.g[r]);
  V.mean_g = gsum.get() / double(G.phi());
  V.mean_f = f.mean();
  V.mean_gap = std::abs(V.mean_g - V.mean_f);

  // recompute g_hat from the stored g
  auto ghat_raw = CG.transform(model.g, true);
  double invphi = 1.0 / double(G.phi());
  for (std::uint64_t c = 0; c < CG.size(); ++c) {
    Complex gh = ghat_raw[c] * invphi;
    Complex fh = model.f_hat[c];
    V.contraction_excess = std::max(V.contraction_excess, std::abs(gh) - std::abs(fh));
    V.proximity_excess = std::max(V.proximity_excess, std::abs(fh - gh) - std::abs(fh));
    V.fourier_identity_error =
        std::max(V.fourier_identity_error, std::abs(gh - model.bohr_weight[c] * fh));
    V.max_transform_gap = std::max(V.max_transform_gap, std::abs(fh - gh));
  }
  V.direct_vs_fourier = model.direct_vs_fourier;

  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r)) V.max_g = std::max(V.max_g, model.g[r]);

  if (nu) {
    V.eta_measured = std::abs(nu->mean() - 1.0);
    auto nuhat = CG.transform(nu->residue_sums(), true);
    double invW = 1.0 / double(nu->window_size());
    double off = 0.0;
    for (std::uint64_t c = 1; c < CG.size(); ++c) off = std::max(off, std::abs(nuhat[c]) * invW);
    V.nu_leakage_bound = nu->mean() + off * double(G.phi()) / double(model.bohr.size());
  }

  // coset averages for every subgroup of index Y < 1/(2 delta)
  double ybound = 1.0 / (2.0 * model.delta);
  for (std::uint64_t Y = 1; double(Y) < ybound && Y <= 64; ++Y) {
    if (G.phi() % Y) continue;
    for (auto& H : subgroups_of_index(G, Y)) {
      auto dec = cosets(H);
      std::vector<KahanSum> fsum(dec.count()), gs(dec.count());
      for (std::uint32_t r = 0; r < G.q(); ++r) {
        if (!G.is_unit(r)) continue;
        fsum[dec.coset_of(r)].add(f.residue_sums()[r]);
        gs[dec.coset_of(r)].add(model.g[r]);
      }
      for (std::size_t j = 0; j < dec.count(); ++j) {
        double lhs = fsum[j].get() / double(f.window_size());
        double rhs = gs[j].get() / double(G.phi());
        V.max_coset_discrepancy = std::max(V.max_coset_discrepancy, std::abs(lhs - rhs));
        ++V.cosets_checked;
      }
    }
  }
  return V;
}

ThresholdSet threshold_set(const DenseModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0,1)");
  const UnitGroup& G = model.bohr.group();
  ThresholdSet T{ResidueSet(G), 0.0, 0.0};
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r) && model.g[r] >= epsilon / 10.0) T.members.add(r);
  T.density = double(T.members.size()) / double(G.phi());
  T.predicted_floor = model.params.theta / 2.0 - epsilon;
  return T;
}

namespace {

// group convolution (x * y)(a) = sum_r x(r) y(a r^{-1}) over units
std::vector<double> group_convolution(const UnitGroup& G, const std::vector<double>& x,
                                      const std::vector<double>& y) {
  std::vector<double> out(G.q(), 0.0);
  std::vector<std::pair<Residue, double>> xs;
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r) && x[r] != 0.0) xs.emplace_back(r, x[r]);
  for (auto [r, xv] : xs) {
    for (std::uint32_t s = 0; s < G.q(); ++s) {
      if (!G.is_unit(s)) continue;
      double yv = y[s];
      if (yv == 0.0) continue;
      out[G.mul(r, s)] += xv * yv;
    }
  }
  return out;
}

}  // namespace

std::vector<ConvolutionComparison> convolution_compare_all(const ArithmeticFunctionWindow& f,
                                                           const DenseModel& model, int arity) {
  if (arity != 2 && arity != 3) throw std::domain_error("arity must be 2 or 3");
  const UnitGroup& G = f.group();
  const auto& F = f.residue_sums();

  std::vector<double> fconv = group_convolution(G, F, F);
  std::vector<double> gconv = group_convolution(G, model.g, model.g);
  if (arity == 3) {
    fconv = group_convolution(G, fconv, F);
    gconv = group_convolution(G, gconv, model.g);
  }
  double fnorm = std::pow(double(f.window_size()), -arity);
  double gnorm = std::pow(double(G.phi()), -arity);
  std::vector<ConvolutionComparison> out;
  for (std::uint32_t a = 0; a < G.q(); ++a) {
    if (!G.is_unit(a)) continue;
    ConvolutionComparison c;
    c.a = a;
    c.lhs = fnorm * fconv[a];
    c.rhs = gnorm * gconv[a];
    c.diff_times_phi = (c.lhs - c.rhs) * double(G.phi());
    out.push_back(c);
  }
  return out;
}

ConvolutionComparison convolution_compare(const ArithmeticFunctionWindow& f,
                                          const DenseModel& model, Residue a, int arity) {
  if (!f.group().is_unit(a)) throw std::domain_error("target residue must be a unit");
  for (auto& c : convolution_compare_all(f, model, arity))
    if (c.a == a) return c;
  throw std::logic_error("unreachable");
}

}  // namespace primeprod
