#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "primeprod/transference.hpp"

using namespace primeprod;

namespace {
PrimeTable& table() {
  static PrimeTable PT = PrimeTable::sieve(200000);
  return PT;
}
}  // namespace

TEST_CASE("transference parameters") {
  UnitGroup g101(101);
  auto P = transference_params(g101, 101, 0.05);
  CHECK(P.theta == doctest::Approx(0.75 - 0.05));  // cube-free, N = q
  CHECK(P.theta0 == doctest::Approx(0.75 - 0.05));

  UnitGroup g512(512);
  auto P2 = transference_params(g512, 512, 0.05);
  CHECK(P2.theta == doctest::Approx(2.0 / 3.0 - 0.05));  // 512 = 2^9 is not cube-free
  CHECK(P2.theta0 == doctest::Approx(0.75 - 0.05));

  CHECK_THROWS_AS(transference_params(g101, 9, 0.05), std::domain_error);  // N < sqrt(q)
}

TEST_CASE("f vanishes off primes and below z") {
  UnitGroup G(101);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  CHECK(f.value(4) == 0.0);
  CHECK(f.value(9) == 0.0);
  CHECK(f.value(2) == 0.0);  // 2 < z ~ 2.94
  CHECK(f.value(3) == f.scale());
  CHECK(f.value(97) == f.scale());
  CHECK(f.value(101) == 0.0);  // p | q
  CHECK(f.value(103) == 0.0);  // beyond the window
}

TEST_CASE("majorant dominates f and matches on primes above z") {
  for (std::uint32_t q : {101u, 385u, 512u}) {
    UnitGroup G(q);
    auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), q, 0.05);
    auto W = majorant_weights(f.params());
    auto nu = ArithmeticFunctionWindow::sieve_majorant(G, W, q, 0.05);
    for (std::uint64_t n = 1; n <= q; ++n) {
      REQUIRE(nu.value(n) >= f.value(n) - 1e-12);
      if (oracle::is_prime_td(n) && double(n) >= f.params().z && G.is_unit(n % q))
        REQUIRE(nu.value(n) == doctest::Approx(f.value(n)));
    }
    MESSAGE("q=", q, " E nu = ", nu.mean(), " (eta = ", std::abs(nu.mean() - 1.0), ")");
  }
  // wrong weight set rejected
  UnitGroup G(101);
  auto W_bad = linear_weights(1000, 10);
  CHECK_THROWS_AS(ArithmeticFunctionWindow::sieve_majorant(G, W_bad, 101, 0.05),
                  std::domain_error);
}

TEST_CASE("majorant mean approaches 1 for longer windows") {
  // at N = q the desk-scale eta is large (z is tiny); with N = q^1.2 the
  // mean is within 0.25 of 1 already at q ~ 1e4
  UnitGroup G(10007);
  std::uint64_t N = 63000;
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), N, 0.05);
  auto W = majorant_weights(f.params());
  auto nu = ArithmeticFunctionWindow::sieve_majorant(G, W, N, 0.05);
  MESSAGE("q=10007 N=q^1.2: E nu = ", nu.mean());
  CHECK(std::abs(nu.mean() - 1.0) <= 0.25);
}

TEST_CASE("large spectrum matches a direct scan") {
  UnitGroup G(101);
  CharacterGroup CG(G);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  for (double delta : {0.05, 0.2, 0.9}) {
    auto spec = large_spectrum(CG, f, delta);
    // direct scan via pointwise character evaluation
    std::vector<std::uint32_t> direct;
    for (std::uint64_t c = 0; c < CG.size(); ++c) {
      auto chi = CG.character(c);
      KahanComplexSum acc;
      for (std::uint64_t n = 1; n <= 101; ++n)
        if (f.value(n) > 0) acc.add(f.value(n) * std::conj(chi(n)));
      if (std::abs(acc.get()) / double(f.window_size()) >= delta)
        direct.push_back(static_cast<std::uint32_t>(c));
    }
    REQUIRE(spec == direct);
  }
}

TEST_CASE("Bohr sets") {
  UnitGroup G(35);
  CharacterGroup CG(G);
  SUBCASE("principal spectrum gives everything") {
    auto B = bohr_set(CG, {0}, 0.05);
    CHECK(B.size() == G.phi());
  }
  SUBCASE("full spectrum pins 1") {
    std::vector<std::uint32_t> all;
    for (std::uint32_t c = 0; c < G.phi(); ++c) all.push_back(c);
    auto B = bohr_set(CG, all, 0.01);
    CHECK(B.elements() == std::vector<Residue>{1});
  }
  SUBCASE("quadratic character gives its kernel") {
    UnitGroup g5(5);
    CharacterGroup cg5(g5);
    std::uint32_t quad = 0;
    for (std::uint32_t c = 1; c < 4; ++c)
      if (cg5.character(c).order() == 2) quad = c;
    auto B = bohr_set(cg5, {quad}, 0.05);
    CHECK(B.elements() == std::vector<Residue>{1, 4});  // squares mod 5
  }
  SUBCASE("contains 1 and closed under inversion") {
    UnitGroup g101(101);
    CharacterGroup cg(g101);
    auto f = ArithmeticFunctionWindow::prime_indicator(g101, table(), 101, 0.05);
    auto spec = large_spectrum(cg, f, 0.05);
    auto B = bohr_set(cg, spec, 0.05);
    REQUIRE(B.contains(1));
    B.for_each([&](Residue b) { REQUIRE(B.contains(g101.inv(b))); });
  }
}

TEST_CASE("dense model: exact identities") {
  for (std::uint32_t q : {101u, 385u}) {
    for (double delta : {0.05, 0.2}) {
      UnitGroup G(q);
      CharacterGroup CG(G);
      auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), q, 0.05);
      auto W = majorant_weights(f.params());
      auto nu = ArithmeticFunctionWindow::sieve_majorant(G, W, q, 0.05);
      auto M = dense_model(CG, f, delta);
      auto V = verify_model(CG, M, f, &nu);

      CHECK(M.direct_vs_fourier <= 1e-9);
      CHECK(V.fourier_identity_error <= 1e-9);
      CHECK(V.mean_gap <= 1e-9);                   // mean preservation
      CHECK(V.contraction_excess <= 1e-9);         // transform contraction
      CHECK(V.proximity_excess <= 1e-9);
      CHECK(V.max_transform_gap <= delta + 1e-9);  // spectrum-gap bound, reported
      for (std::uint32_t r = 0; r < q; ++r)
        if (G.is_unit(r)) REQUIRE(M.g[r] >= -1e-12);  // g >= 0
      // finite-size boundedness: pointwise
      // g <= E nu + max_{chi != chi_0} |nu_hat| * phi/|B| holds exactly
      CHECK(V.max_g <= V.nu_leakage_bound + 1e-9);
      // (v): coset discrepancy stays O(delta) at these scales
      MESSAGE("q=", q, " delta=", delta, " coset discrepancy ", V.max_coset_discrepancy);
      CHECK(V.max_coset_discrepancy <= delta + 1e-9);
    }
  }
}

TEST_CASE("dense model with full Bohr set is the constant E f") {
  UnitGroup G(101);
  CharacterGroup CG(G);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  // delta above every nonprincipal transform but below E f keeps T = {chi_0},
  // so B = Z_q^x and g is flat
  auto M = dense_model(CG, f, 0.2);
  REQUIRE(M.spectrum == std::vector<std::uint32_t>{0});
  CHECK(M.bohr.size() == G.phi());
  for (std::uint32_t r = 0; r < 101; ++r)
    if (G.is_unit(r)) REQUIRE(M.g[r] == doctest::Approx(f.mean()).epsilon(1e-9));
}

TEST_CASE("spectrum characters trivial on the Bohr set keep their transform") {
  // bounded-order spectrum characters that are 1 on all of B keep their
  // transform exactly: g_hat(chi) = f_hat(chi)
  UnitGroup G(101);
  CharacterGroup CG(G);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  auto M = dense_model(CG, f, 0.05);
  for (auto c : M.spectrum) {
    bool trivial_on_B = true;
    M.bohr.for_each([&](Residue b) {
      if (std::abs(CG.value(c, G.unit_index(b)) - Complex(1.0, 0.0)) > 0) trivial_on_B = false;
    });
    if (trivial_on_B)
      REQUIRE(std::abs(M.g_hat[c] - M.f_hat[c]) <= 1e-12);
  }
}

TEST_CASE("threshold set") {
  UnitGroup G(101);
  CharacterGroup CG(G);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  auto M = dense_model(CG, f, 0.2);  // flat g = E f ~ 0.38
  auto T = threshold_set(M, 0.05);
  CHECK(T.members.size() == G.phi());  // 0.38 >= 0.005 everywhere
  CHECK(T.density == doctest::Approx(1.0));
  CHECK(T.predicted_floor == doctest::Approx(0.7 / 2.0 - 0.05));
  CHECK_THROWS_AS(threshold_set(M, 0.0), std::domain_error);
}

TEST_CASE("convolution comparison") {
  UnitGroup G(101);
  CharacterGroup CG(G);
  auto f = ArithmeticFunctionWindow::prime_indicator(G, table(), 101, 0.05);
  auto M = dense_model(CG, f, 0.2);
  for (int arity : {2, 3}) {
    auto all = convolution_compare_all(f, M, arity);
    REQUIRE(all.size() == G.phi());
    // totals: sum_a of the unnormalised convolution equals (sum f)^arity
    double lhs_total = 0, rhs_total = 0, worst = 0;
    for (auto& c : all) {
      lhs_total += c.lhs;
      rhs_total += c.rhs;
      worst = std::max(worst, std::abs(c.diff_times_phi));
    }
    double fexp = std::pow(f.total() / double(f.window_size()), arity);
    double gmean = 0;
    for (std::uint32_t r = 0; r < 101; ++r)
      if (G.is_unit(r)) gmean += M.g[r];
    gmean /= double(G.phi());
    CHECK(lhs_total == doctest::Approx(fexp).epsilon(1e-9));
    CHECK(rhs_total == doctest::Approx(std::pow(gmean, arity)).epsilon(1e-9));
    MESSAGE("arity ", arity, ": max |diff|*phi = ", worst);
  }
  auto single = convolution_compare(f, M, 5, 3);
  CHECK(single.a == 5);
  CHECK_THROWS_AS(convolution_compare(f, M, 0, 3), std::domain_error);
}
