#include <doctest.h>

#include "oracles.hpp"
#include "primeprod/unit_group.hpp"

using namespace primeprod;

TEST_CASE("factorization and cube-free flag") {
  auto m12 = factor_modulus(12);
  CHECK(m12.factorization == std::vector<std::pair<std::uint32_t, int>>{{2, 2}, {3, 1}});
  CHECK(m12.cube_free);
  CHECK_FALSE(factor_modulus(8).cube_free);
  auto m9240 = factor_modulus(9240);  // 2^3 * 3 * 5 * 7 * 11
  CHECK(m9240.factorization.front() == std::pair<std::uint32_t, int>{2, 3});
  CHECK_FALSE(m9240.cube_free);
  CHECK(factor_modulus(4620).cube_free);  // 2^2 * 3 * 5 * 7 * 11
}

TEST_CASE("basic decompositions") {
  UnitGroup g5(5);
  CHECK(g5.phi() == 4);
  CHECK(g5.component_orders() == std::vector<std::uint32_t>{4});

  UnitGroup g8(8);
  CHECK(g8.phi() == 4);
  CHECK(g8.component_orders() == std::vector<std::uint32_t>{2, 2});

  UnitGroup g15(15);
  CHECK(g15.phi() == 8);
  auto orders = g15.component_orders();
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<std::uint32_t>{2, 4});  // element orders mod 15: 2 has 4, 14 has 2

  CHECK_THROWS_AS(UnitGroup(1), std::domain_error);
  CHECK_THROWS_AS(UnitGroup(2), std::domain_error);
}

TEST_CASE("dlog reconstructs every unit") {
  for (std::uint32_t q : {3u,  4u,  5u,   6u,   7u,   8u,    9u,    12u,   15u,  16u,
                          24u, 32u, 45u,  64u,  81u,  101u,  128u,  210u,  256u, 360u,
                          512u, 720u, 1024u, 2187u, 4620u, 9240u, 10000u}) {
    UnitGroup G(q);
    std::uint64_t seen = 0;
    for (std::uint32_t a = 1; a < q; ++a) {
      if (oracle::gcd_u(a, q) != 1) continue;
      ++seen;
      auto v = G.dlog(a);
      std::uint64_t prod = 1;
      for (std::size_t i = 0; i < v.size(); ++i)
        prod = prod * pow_mod(G.generators()[i], v[i], q) % q;
      REQUIRE(prod == a);
      REQUIRE(G.unit_at(G.unit_index(a)) == a);
    }
    CHECK(seen == G.phi());
  }
}

TEST_CASE("dlog index bijection across small moduli") {
  for (std::uint32_t q = 3; q <= 2000; ++q) {
    UnitGroup G(q);
    std::uint64_t count = 0;
    for (std::uint32_t a = 1; a < q; ++a) {
      if (!G.is_unit(a)) continue;
      ++count;
      if (G.unit_at(G.unit_index(a)) != a) {
        REQUIRE(G.unit_at(G.unit_index(a)) == a);
      }
    }
    REQUIRE(count == G.phi());
  }
}

TEST_CASE("subgroups of given index") {
  UnitGroup g7(7);
  auto subs = subgroups_of_index(g7, 2);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].members.elements() == std::vector<Residue>{1, 2, 4});  // squares mod 7

  auto full = subgroups_of_index(g7, 1);
  REQUIRE(full.size() == 1);
  CHECK(full[0].members.size() == 6);

  UnitGroup g8(8);
  CHECK(subgroups_of_index(g8, 2).size() == 3);  // C2 x C2 has three index-2 subgroups

  CHECK(subgroups_of_index(g7, 4).empty());  // 4 does not divide 6
  CHECK_THROWS_AS(subgroups_of_index(g7, 0), std::domain_error);
}

TEST_CASE("returned subgroups are closed and contain inverses") {
  for (std::uint32_t q : {24u, 35u, 101u, 210u}) {
    UnitGroup G(q);
    for (std::uint64_t Y = 1; Y <= 16; ++Y) {
      if (G.phi() % Y) continue;
      for (auto& H : subgroups_of_index(G, Y)) {
        REQUIRE(H.members.contains(1));
        REQUIRE(H.members.size() * Y == G.phi());
        auto elems = H.members.elements();
        for (auto a : elems) {
          REQUIRE(H.members.contains(G.inv(a)));
          for (auto b : elems) REQUIRE(H.members.contains(G.mul(a, b)));
        }
      }
    }
  }
}

TEST_CASE("coset decomposition") {
  UnitGroup g7(7);
  auto H = subgroups_of_index(g7, 2)[0];
  auto dec = cosets(H);
  REQUIRE(dec.count() == 2);
  CHECK(dec.cosets[0].representative == 1);
  CHECK(dec.cosets[1].representative == 3);
  CHECK(coset_members(H, 1).elements() == std::vector<Residue>{1, 2, 4});
  CHECK(coset_members(H, 3).elements() == std::vector<Residue>{3, 5, 6});

  // full group: one coset
  auto full = subgroups_of_index(g7, 1)[0];
  CHECK(cosets(full).count() == 1);

  // trivial subgroup mod 5: four singletons
  UnitGroup g5(5);
  auto triv = subgroups_of_index(g5, 4);
  REQUIRE(triv.size() == 1);
  CHECK(cosets(triv[0]).count() == 4);
}

TEST_CASE("coset partition property") {
  for (std::uint32_t q : {24u, 101u, 210u}) {
    UnitGroup G(q);
    for (std::uint64_t Y : {2ull, 4ull, 6ull}) {
      if (G.phi() % Y) continue;
      for (auto& H : subgroups_of_index(G, Y)) {
        auto dec = cosets(H);
        REQUIRE(dec.count() == Y);
        std::uint64_t covered = 0;
        for (std::uint32_t r = 0; r < q; ++r)
          if (G.is_unit(r)) {
            REQUIRE(dec.coset_of(r) >= 0);
            ++covered;
          } else {
            REQUIRE(dec.coset_of(r) == -1);
          }
        REQUIRE(covered == G.phi());
      }
    }
  }
}

TEST_CASE("cyclic quotients") {
  UnitGroup g7(7);
  auto H = subgroups_of_index(g7, 2)[0];
  auto gen = quotient_is_cyclic(H);
  REQUIRE(gen.has_value());
  CHECK(*gen == 3);  // minimal non-square mod 7

  UnitGroup g8(8);
  auto triv8 = subgroups_of_index(g8, 4);
  REQUIRE(triv8.size() == 1);
  CHECK_FALSE(quotient_is_cyclic(triv8[0]).has_value());  // C2 x C2

  UnitGroup g11(11);
  auto idx5 = subgroups_of_index(g11, 5);
  REQUIRE(idx5.size() == 1);
  CHECK(quotient_is_cyclic(idx5[0]).has_value());  // Z_11^x cyclic
}

TEST_CASE("generated subgroup matches enumeration") {
  UnitGroup G(35);
  auto sq = generated_subgroup(G, {static_cast<Residue>(4), static_cast<Residue>(9)});
  auto expect = oracle::squares_mod(35);
  // squares are generated by squares; check containment both ways on the
  // subgroup generated by all squares
  std::vector<Residue> gens(expect.begin(), expect.end());
  auto full_sq = generated_subgroup(G, gens);
  REQUIRE(full_sq.members.size() == expect.size());
  for (auto s : expect) REQUIRE(full_sq.members.contains(s));
  CHECK(sq.members.size() * sq.index == G.phi());
}
