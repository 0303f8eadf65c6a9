#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primeprod/product_sets.hpp"

using namespace primeprod;

namespace {

ResidueSet make_set(const UnitGroup& G, std::initializer_list<Residue> xs) {
  ResidueSet s(G);
  for (auto x : xs) s.add(x);
  return s;
}

ResidueSet random_units(const UnitGroup& G, std::mt19937_64& rng, double density) {
  ResidueSet s(G);
  std::bernoulli_distribution coin(density);
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r) && coin(rng)) s.add(r);
  if (s.empty()) s.add(1);
  return s;
}

}  // namespace

TEST_CASE("product sets") {
  UnitGroup g7(7);
  auto A = make_set(g7, {1, 2});
  auto B = make_set(g7, {1, 4});
  CHECK(product_set(A, B).elements() == std::vector<Residue>{1, 2, 4});

  auto H = subgroups_of_index(g7, 2)[0];
  CHECK(product_set(H.members, H.members) == H.members);  // closure

  ResidueSet empty(g7);
  CHECK(product_set(A, empty).empty());
}

TEST_CASE("convolution counts") {
  UnitGroup g7(7);
  auto A = make_set(g7, {1, 2});
  auto B = make_set(g7, {1, 4});
  auto conv = convolution(A, B);
  CHECK(conv[1] == 2);  // 1*1 and 2*4
  CHECK(conv[4] == 1);
  CHECK(conv[3] == 0);

  auto units = g7.all_units();
  auto cu = convolution(units, units);
  for (std::uint32_t r = 1; r < 7; ++r) CHECK(cu[r] == 6);

  // coset form of the convolution bound: A in aH, B in bH, c in abH
  UnitGroup g31(31);
  auto H31 = subgroups_of_index(g31, 5)[0];
  auto gen = quotient_is_cyclic(H31);
  REQUIRE(gen);
  auto aH = coset_members(H31, *gen);
  ResidueSet Asub(g31), Bsub(g31);
  int i = 0;
  aH.for_each([&](Residue r) {
    if (i % 2 == 0) Asub.add(r);
    if (i % 3 != 0) Bsub.add(r);
    ++i;
  });
  auto cv = convolution(Asub, Bsub);
  Residue c_in = g31.mul(*gen, *gen);
  std::int64_t bound = std::int64_t(Asub.size() + Bsub.size()) - std::int64_t(H31.order());
  auto sq = coset_members(H31, c_in);
  sq.for_each([&](Residue c) { REQUIRE(std::int64_t(cv[c]) >= bound); });
}

TEST_CASE("stabilizer") {
  UnitGroup g7(7);
  auto H = subgroups_of_index(g7, 2)[0];
  CHECK(stabilizer(H.members).members == H.members);
  CHECK(stabilizer(g7.all_units()).members.size() == 6);
  CHECK(stabilizer(make_set(g7, {1, 2})).members.elements() == std::vector<Residue>{1});
  ResidueSet empty(g7);
  CHECK_THROWS_AS(stabilizer(empty), std::domain_error);
}

TEST_CASE("kneser audit on subgroups and randoms") {
  UnitGroup g7(7);
  auto H = subgroups_of_index(g7, 2)[0];
  auto audit = kneser_audit(H.members, H.members);
  CHECK(audit.product_size == 3);
  CHECK(audit.H_size == 3);
  CHECK(audit.kneser_bound == 3);
  CHECK(audit.kneser_holds);

  std::mt19937_64 rng(2024);
  for (std::uint32_t q : {24u, 35u, 101u}) {
    UnitGroup G(q);
    std::uniform_real_distribution<double> dens(0.05, 0.95);
    for (int trial = 0; trial < 1000; ++trial) {
      auto A = random_units(G, rng, dens(rng));
      auto B = random_units(G, rng, dens(rng));
      auto a = kneser_audit(A, B);
      REQUIRE(a.kneser_holds);
      REQUIRE(std::int64_t(a.min_convolution) >= a.convolution_bound);
    }
  }
}

TEST_CASE("popular products dichotomy") {
  UnitGroup g7(7);
  auto units = g7.all_units();
  SUBCASE("full group, t = u = 1") {
    auto rep = popular_products(units, units, 1, 1);
    CHECK(rep.branch_a);
    CHECK(rep.popular_u_count == 6);
    // threshold |A|+|B|-2t-u|G|/t = 6+6-2-6 = 4
    CHECK(rep.branch_a_threshold == doctest::Approx(4.0));
    CHECK_FALSE(rep.flagged);
  }
  SUBCASE("a strict coset triggers branch b") {
    UnitGroup g11(11);
    auto H = subgroups_of_index(g11, 2)[0];
    auto gen = quotient_is_cyclic(H);
    REQUIRE(gen);
    auto A = coset_members(H, *gen);
    auto rep = popular_products(A, A, 3, 1);
    CHECK(rep.branch_b);
    CHECK(rep.deleted_from_a + rep.deleted_from_b == 0);  // conv = |H| = 5 >= 3 on a^2 H
    CHECK_FALSE(rep.flagged);
  }
  SUBCASE("singletons") {
    auto A = make_set(g7, {3});
    auto rep = popular_products(A, A, 1, 1);
    CHECK(rep.branch_b);  // conv(2) = 1 >= t = 1
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(popular_products(units, units, 1, 2), std::domain_error);  // t < u
    CHECK_THROWS_AS(popular_products(units, units, 0, 0), std::domain_error);
    auto A = make_set(g7, {1, 2});
    CHECK_THROWS_AS(popular_products(A, A, 3, 1), std::domain_error);  // |A| < t
  }
  SUBCASE("randomized, at least one branch always verified") {
    std::mt19937_64 rng(99);
    for (std::uint32_t q : {24u, 35u, 101u, 210u}) {
      UnitGroup G(q);
      double eps = 0.3;
      std::uint64_t t = static_cast<std::uint64_t>(std::ceil(eps * G.phi() / 10.0));
      std::uint64_t u = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(eps * eps * G.phi() / 1000.0));
      std::uniform_real_distribution<double> dens(0.1, 0.95);
      int done = 0;
      while (done < 100) {
        auto A = random_units(G, rng, dens(rng));
        auto B = random_units(G, rng, dens(rng));
        if (A.size() < t || B.size() < t) continue;
        ++done;
        auto rep = popular_products(A, B, t, u);
        REQUIRE_FALSE(rep.flagged);
      }
    }
  }
}

TEST_CASE("structure classification") {
  SUBCASE("full sets land in branch a") {
    UnitGroup G(35);
    auto units = G.all_units();
    auto rep = structure_classify(units, units, 0.5, 0.4, 0.9);
    CHECK(rep.branch == StructureBranch::large_product_set);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.Y == 1);
  }
  SUBCASE("single coset, index 2 (k = 0)") {
    UnitGroup G(11);
    auto H = subgroups_of_index(G, 2)[0];
    auto gen = quotient_is_cyclic(H);
    REQUIRE(gen);
    auto A = coset_members(H, *gen);  // 5 of 10 units
    auto rep = structure_classify(A, A, 0.4, 0.3, 0.7);
    CHECK(rep.branch == StructureBranch::stuck_in_cosets);
    CHECK(rep.Y == 2);
    REQUIRE(rep.k);
    CHECK(*rep.k == 0);
    REQUIRE(rep.a_cosets.size() == 1);
    CHECK(rep.a_cosets[0].representative == *gen);
    REQUIRE(rep.b_cosets.size() == 1);
    CHECK(rep.b_cosets[0].representative == 1);  // (gH)^2 = H
    CHECK(rep.consistent);
    CHECK(rep.index_in_range);  // 1 < 2 < 1/(0.6-0.7)? bound vacuous, stays true
  }
  SUBCASE("two cosets of an index-5 subgroup (k = 1)") {
    UnitGroup G(31);
    auto H = subgroups_of_index(G, 5)[0];
    auto gen = quotient_is_cyclic(H);
    REQUIRE(gen);
    ResidueSet A = coset_members(H, *gen);
    A |= coset_members(H, G.mul(*gen, *gen));
    // A = gH u g^2 H, so A*A = g^2 H u g^3 H u g^4 H: 18 of 30
    auto rep = structure_classify(A, A, 0.4, 0.35, 0.65);
    CHECK(rep.branch == StructureBranch::stuck_in_cosets);
    CHECK(rep.Y == 5);
    REQUIRE(rep.k);
    CHECK(*rep.k == 1);
    CHECK(rep.a_cosets.size() == 2);
    CHECK(rep.b_cosets.size() == 3);
    CHECK(rep.consistent);
  }
  SUBCASE("three cosets of an index-8 subgroup (k = 2)") {
    UnitGroup G(41);
    auto H = subgroups_of_index(G, 8)[0];
    auto gen = quotient_is_cyclic(H);
    REQUIRE(gen);
    ResidueSet A = H.members;
    A |= coset_members(H, *gen);
    A |= coset_members(H, G.mul(*gen, *gen));
    // exponents {0,1,2}: A*A covers exponents {0,...,4}, 5 of 8 cosets
    auto rep = structure_classify(A, A, 0.37, 0.3, 0.73);
    CHECK(rep.branch == StructureBranch::stuck_in_cosets);
    CHECK(rep.Y == 8);
    REQUIRE(rep.k);
    CHECK(*rep.k == 2);
    CHECK(rep.a_cosets.size() == 3);
    CHECK(rep.b_cosets.size() == 5);
    CHECK(rep.consistent);
    CHECK(rep.hypothesis_ok);
  }
  SUBCASE("dense random sets: branch a and internal consistency") {
    std::mt19937_64 rng(5);
    for (std::uint32_t q : {24u, 101u}) {
      UnitGroup G(q);
      for (int trial = 0; trial < 50; ++trial) {
        ResidueSet A(G), B(G);
        std::bernoulli_distribution coin(0.45);
        for (std::uint32_t r = 0; r < q; ++r)
          if (G.is_unit(r)) {
            if (coin(rng)) A.add(r);
            if (coin(rng)) B.add(r);
          }
        if (double(A.size()) < 0.4 * G.phi() || double(B.size()) < 0.4 * G.phi()) continue;
        auto rep = structure_classify(A, B, 0.4, 0.35, 0.75);
        if (rep.branch == StructureBranch::large_product_set) {
          REQUIRE(double(rep.product_size) >= 0.75 * G.phi());
        } else {
          REQUIRE(rep.Y > 1);
        }
      }
    }
  }
  SUBCASE("preconditions") {
    UnitGroup G(11);
    auto units = G.all_units();
    CHECK_THROWS_AS(structure_classify(units, units, 0.4, 0.3, 0.9), std::domain_error);  // beta >= 2 alpha
    auto small = make_set(G, {1});
    CHECK_THROWS_AS(structure_classify(small, units, 0.4, 0.3, 0.7), std::domain_error);
  }
}

TEST_CASE("complement structure in the quotient") {
  SUBCASE("C2, k = 0") {
    UnitGroup G(11);
    auto H = subgroups_of_index(G, 2)[0];
    auto gen = quotient_is_cyclic(H);
    REQUIRE(gen);
    auto g = complement_structure_check(H, {*gen});
    REQUIRE(g);
    CHECK(!H.contains(*g));
  }
  SUBCASE("C5, k = 1: B = {g^2, g^3} matches, B = {g, g^2} does not") {
    UnitGroup G(11);
    auto H = subgroups_of_index(G, 5)[0];  // {1, 10}
    // 2 generates the quotient: 2,4,8,16=5,32=10 in H at step 5
    Residue g2 = G.mul(2, 2), g3 = G.mul(g2, 2);
    auto hit = complement_structure_check(H, {g2, g3});
    REQUIRE(hit.has_value());
    auto miss = complement_structure_check(H, {2, g2});
    CHECK_FALSE(miss.has_value());
  }
  SUBCASE("size mismatch") {
    UnitGroup G(11);
    auto H = subgroups_of_index(G, 5)[0];
    CHECK_THROWS_AS(complement_structure_check(H, {2}), std::domain_error);
  }
}

TEST_CASE("multiplicative energy") {
  UnitGroup g7(7);
  CHECK(multiplicative_energy(make_set(g7, {1}), make_set(g7, {1})) == 1);
  auto units = g7.all_units();
  CHECK(multiplicative_energy(units, units) == 6 * 6 * 6);

  auto B = make_set(g7, {2, 3});
  auto C = make_set(g7, {1, 2});
  CHECK(multiplicative_energy(B, C) == oracle::naive_energy(7, {2, 3}, {1, 2}));

  SUBCASE("Cauchy-Schwarz against the product set, randomized") {
    std::mt19937_64 rng(11);
    for (std::uint32_t q : {24u, 101u}) {
      UnitGroup G(q);
      std::uniform_real_distribution<double> dens(0.05, 0.9);
      for (int trial = 0; trial < 300; ++trial) {
        auto A = random_units(G, rng, dens(rng));
        auto Bq = random_units(G, rng, dens(rng));
        auto prod = product_set(A, Bq);
        unsigned __int128 lhs = static_cast<unsigned __int128>(A.size()) * Bq.size();
        lhs *= lhs;
        unsigned __int128 rhs =
            static_cast<unsigned __int128>(prod.size()) * multiplicative_energy(A, Bq);
        REQUIRE(lhs <= rhs);
      }
    }
  }
  SUBCASE("quadruple-loop oracle on small sets") {
    std::mt19937_64 rng(13);
    UnitGroup G(35);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<std::uint32_t> belems, celems;
      ResidueSet B2(G), C2(G);
      for (std::uint32_t r = 1; r < 35 && belems.size() < 12; ++r)
        if (G.is_unit(r) && rng() % 3 == 0) {
          B2.add(r);
          belems.push_back(r);
        }
      for (std::uint32_t r = 1; r < 35 && celems.size() < 12; ++r)
        if (G.is_unit(r) && rng() % 3 == 1) {
          C2.add(r);
          celems.push_back(r);
        }
      if (belems.empty() || celems.empty()) continue;
      REQUIRE(multiplicative_energy(B2, C2) == oracle::naive_energy(35, belems, celems));
    }
  }
}
