#include "qtoda/cartan.hpp"

#include <doctest.h>

using namespace qtoda;

namespace {
const char* all_tags[] = {"A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "D5", "G2"};
}

TEST_SUITE("cartan") {
  TEST_CASE("rho in type C") {
    const RootSystem& rs = RootSystem::get("C3");
    auto x = rs.to_varpi(rs.rho());
    REQUIRE(x.size() == 3);
    CHECK(x[0] == Rat(3));
    CHECK(x[1] == Rat(2));
    CHECK(x[2] == Rat(1));
  }

  TEST_CASE("type B varpi are orthogonal of length 2") {
    for (const char* t : {"B2", "B3", "B4"}) {
      const RootSystem& rs = RootSystem::get(t);
      for (int i = 0; i < rs.rank(); ++i)
        for (int j = 0; j < rs.rank(); ++j) CHECK(rs.varpi_gram(i, j) == Rat(i == j ? 2 : 0));
    }
  }

  TEST_CASE("G2 varpi pairing") { CHECK(RootSystem::get("G2").varpi_gram(0, 1) == Rat(-1)); }

  TEST_CASE("A1 scale") {
    const RootSystem& rs = RootSystem::get("A1");
    CHECK(rs.N() == 2);
    CHECK(rs.pair(rs.omega(0), rs.omega(0)) == Rat(1, 2));
  }

  TEST_CASE("A2 rho against a simple root") {
    const RootSystem& rs = RootSystem::get("A2");
    CHECK(rs.pair(rs.rho(), rs.alpha(0)) == Rat(1));
  }

  TEST_CASE("fundamental weights are dual to the coroots") {
    for (const char* t : all_tags) {
      const RootSystem& rs = RootSystem::get(t);
      for (int i = 0; i < rs.rank(); ++i)
        for (int j = 0; j < rs.rank(); ++j) CHECK(rs.pair(rs.alpha(i), rs.omega(j)) == Rat(i == j ? rs.d(i) : 0));
    }
  }

  TEST_CASE("Cartan matrix from the form") {
    for (const char* t : all_tags) {
      const RootSystem& rs = RootSystem::get(t);
      for (int i = 0; i < rs.rank(); ++i)
        for (int j = 0; j < rs.rank(); ++j) {
          Rat aij = 2 * rs.pair(rs.alpha(i), rs.alpha(j)) / rs.pair(rs.alpha(i), rs.alpha(i));
          CHECK(aij == Rat(rs.a(i, j)));
          CHECK(rs.b(i, j) == rs.b(j, i));
        }
    }
  }

  TEST_CASE("integral pairings after scaling by N") {
    for (const char* t : all_tags) {
      const RootSystem& rs = RootSystem::get(t);
      for (int i = 0; i < rs.rank(); ++i)
        for (int j = 0; j < rs.rank(); ++j) CHECK((rs.pair(rs.omega(i), rs.omega(j)) * rs.N()).denominator() == 1);
    }
  }

  TEST_CASE("root coordinates round trip") {
    for (const char* t : all_tags) {
      const RootSystem& rs = RootSystem::get(t);
      RootVec b(rs.rank());
      for (int i = 0; i < rs.rank(); ++i) b[i] = (i * 7 + 3) % 4;
      CHECK(rs.to_root(rs.root_weight(b)) == b);
      CHECK(rs.from_varpi(rs.to_varpi(rs.rho())) == rs.rho());
    }
  }

  TEST_CASE("tags and bad input") {
    CHECK(RootSystem::parse("G2").tag() == "G2");
    CHECK(&RootSystem::get("C3") == &RootSystem::get('C', 3));
    CHECK_THROWS(RootSystem::parse("E6"));
    CHECK_THROWS(RootSystem::parse("G3"));
    CHECK_THROWS(RootSystem::parse("A0"));
  }
}
