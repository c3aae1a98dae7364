#include "qtoda/triples.hpp"

#include <doctest.h>

using namespace qtoda;

namespace {
IMat zeros(int r) { return IMat(r, std::vector<int>(r, 0)); }
}

TEST_SUITE("triples") {
  TEST_CASE("A2 compatibility identity") {
    const RootSystem& rs = RootSystem::get("A2");
    IMat eps = zeros(2), n = zeros(2);
    eps[0][1] = 1, eps[1][0] = -1;
    n[1][0] = 1;  // 0 - 1 = 1 * (-1)
    CHECK_NOTHROW(validate_triple(rs, eps, n, default_c(rs, '+')));
    CHECK_THROWS_AS(validate_triple(rs, eps, zeros(2), default_c(rs, '+')), TripleError);
  }

  TEST_CASE("orthogonal nodes carry eps = 0") {
    const RootSystem& rs = RootSystem::get("A3");
    IMat eps = zeros(3);
    eps[0][1] = eps[1][2] = -1, eps[1][0] = eps[2][1] = 1;
    std::mt19937_64 rng(1);
    IMat n = random_n(rs, eps, rng);
    CHECK_NOTHROW(validate_triple(rs, eps, n, default_c(rs, '+')));
    IMat bad = eps;
    bad[0][2] = 1, bad[2][0] = -1;
    CHECK_THROWS_AS(check_orientation(rs, bad), TripleError);
  }

  TEST_CASE("compatible orders") {
    const RootSystem& rs = RootSystem::get("A3");
    IMat eq = zeros(3);
    eq[0][1] = eq[1][2] = -1, eq[1][0] = eq[2][1] = 1;
    CHECK(compatible_order(rs, eq) == std::vector<int>{0, 1, 2});
    IMat mixed = zeros(3);
    mixed[0][1] = 1, mixed[1][0] = -1, mixed[1][2] = -1, mixed[2][1] = 1;
    CHECK(compatible_order(rs, mixed) == std::vector<int>{1, 0, 2});
    CHECK(compatible_order(RootSystem::get("A1"), zeros(1)) == std::vector<int>{0});
  }

  TEST_CASE("epsilon invariant") {
    const RootSystem& rs = RootSystem::get("A3");
    std::mt19937_64 rng(2);
    IMat ep = orientation_from_edges(rs, {1, 1}), em = orientation_from_edges(rs, {-1, 1});
    TriplePair same = random_pair_with(rs, ep, ep, rng);
    CHECK(same.eps_vec == std::vector<int>{0, 0});
    TriplePair P = random_pair_with(rs, ep, em, rng);
    CHECK(P.eps_vec[0] == 1);
    CHECK(P.eps_vec[1] == 0);
  }

  TEST_CASE("D4 reads the branch edge last") {
    const RootSystem& rs = RootSystem::get("D4");
    std::mt19937_64 rng(3);
    for (int it = 0; it < 10; ++it) {
      TriplePair P = random_pair(rs, rng);
      REQUIRE(P.eps_vec.size() == 3);
      CHECK(P.eps_vec[2] * 2 == P.plus.eps[1][3] - P.minus.eps[1][3]);
    }
  }

  TEST_CASE("random pairs are valid and serialize") {
    std::mt19937_64 rng(4);
    for (const char* t : {"A3", "B3", "C3", "D4", "G2"}) {
      const RootSystem& rs = RootSystem::get(t);
      for (int it = 0; it < 5; ++it) {
        TriplePair P = random_pair(rs, rng);
        CHECK_NOTHROW(validate_triple(rs, P.plus.eps, P.plus.n, P.plus.c));
        TriplePair Q = pair_from_json(pair_to_json(P));
        CHECK(Q.plus.n == P.plus.n);
        CHECK(Q.minus.eps == P.minus.eps);
        CHECK(Q.plus.c == P.plus.c);
        CHECK(Q.eps_vec == P.eps_vec);
      }
    }
  }

  TEST_CASE("triple json in the documented shape") {
    auto j = nlohmann::json::parse(R"({"type":"A2","epsilon":[[0,1],[-1,0]],"n":[[0,0],[1,0]],"c":[1,"q^2*x"]})");
    Triple t = triple_from_json(RootSystem::get("A2"), j);
    CHECK(t.c[1] == Scalar::q(2) * Scalar::sym("x"));
    CHECK_THROWS(triple_from_json(RootSystem::get("A3"), j));
  }

  TEST_CASE("standard pair") {
    TriplePair P = standard_pair(RootSystem::get("C3"));
    CHECK(P.plus.n == P.minus.n);
    CHECK(P.plus.c[0] == Scalar(1));
    CHECK(P.minus.c[2] == Scalar(-1));
    CHECK(P.eps_vec == std::vector<int>{0, 0});
  }
}
