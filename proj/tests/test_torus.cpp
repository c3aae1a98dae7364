#include "helpers.hpp"
#include "qtoda/equivalence.hpp"
#include "qtoda/hamiltonians.hpp"
#include "qtoda/torus.hpp"

#include <doctest.h>

using namespace qtoda;

namespace {

// random combination of w-monomials times products of lattice generators
TorusElement random_element(const TorusSpec& s, std::mt19937_64& rng, int terms = 3) {
  auto gens = lattice_generators(s);
  std::uniform_int_distribution<int> w(-2, 2), g(-1, 1);
  TorusElement x(s);
  for (int t = 0; t < terms; ++t) {
    IVec a(s.n), b(s.n, 0);
    for (int j = 0; j < s.n; ++j) a[j] = w(rng) * s.wden;
    for (auto& gen : gens) {
      int k = g(rng);
      for (int j = 0; j < s.n; ++j) b[j] += k * gen[j];
    }
    x += TorusElement::monomial(s, a, b, testing::random_poly(rng, 2));
  }
  return x;
}

}  // namespace

TEST_SUITE("torus") {
  TEST_CASE("defining relation in A_n") {
    TorusSpec s = TorusSpec::plain(3);
    Scalar v = vpow(1, s.M);
    CHECK(TorusElement::D(s, 1) * TorusElement::w(s, 1) == TorusElement::monomial(s, {1, 0, 0}, {1, 0, 0}, v));
    CHECK(TorusElement::D(s, 2) * TorusElement::w(s, 1) == TorusElement::w(s, 1) * TorusElement::D(s, 2));
  }

  TEST_CASE("G_2 relation") {
    TorusSpec s = TorusSpec::for_root_system(RootSystem::get("G2"));
    Scalar v = vpow(1, s.M);
    TorusElement lhs = TorusElement::D(s, 2) * TorusElement::w(s, 1);
    TorusElement rhs = (TorusElement::w(s, 1) * TorusElement::D(s, 2));
    CHECK(lhs == TorusElement::scalar(s, v.pow(-3)) * rhs);
  }

  TEST_CASE("central quotient") {
    TorusSpec s = TorusSpec::for_root_system(RootSystem::get("A2"));
    REQUIRE(s.central);
    TorusElement p = TorusElement::w(s, 1) * TorusElement::w(s, 2) * TorusElement::w(s, 3);
    CHECK(p == TorusElement::scalar(s, Scalar(1)));
  }

  TEST_CASE("generator images") {
    for (const char* t : {"A2", "C3", "B2", "G2"}) {
      const RootSystem& rs = RootSystem::get(t);
      TorusSpec s = TorusSpec::for_root_system(rs);
      for (int j = 1; j <= std::min(s.n, rs.varpi_dim()); ++j) {
        DiffOp d = to_difference_operator(TorusElement::w(s, j, -2 * s.wden));
        Weight mu = rs.varpi(j - 1);
        for (auto& x : mu) x *= 2;
        CHECK(d == DiffOp::T(rs, mu));
      }
    }
  }

  TEST_CASE("anti-homomorphism onto difference operators") {
    std::mt19937_64 rng(1);
    for (const char* t : {"A3", "C2", "B2", "D4", "G2"}) {
      const RootSystem& rs = RootSystem::get(t);
      TorusSpec s = TorusSpec::for_root_system(rs);
      for (int it = 0; it < 4; ++it) {
        TorusElement a = random_element(s, rng), b = random_element(s, rng);
        CHECK(to_difference_operator(a * b) == to_difference_operator(b) * to_difference_operator(a));
        CHECK(from_difference_operator(to_difference_operator(a)) == a);
      }
    }
  }

  TEST_CASE("hamiltonian round trip") {
    std::mt19937_64 rng(2);
    for (const char* t : {"A3", "C3", "B3", "D4", "G2"}) {
      const RootSystem& rs = RootSystem::get(t);
      DiffOp D = build_D1_closed(random_pair(rs, rng), true);
      CHECK(to_difference_operator(from_difference_operator(D)) == D);
    }
  }

  TEST_CASE("serialization round trips") {
    std::mt19937_64 rng(3);
    for (const char* t : {"A2", "B3", "G2"}) {
      TorusSpec s = TorusSpec::for_root_system(RootSystem::get(t));
      TorusElement x = random_element(s, rng, 4);
      CHECK(TorusElement::from_json(s, x.to_json()) == x);
      CHECK(TorusElement::parse(s, x.str()) == x);
    }
  }

  TEST_CASE("ring axioms") {
    std::mt19937_64 rng(4);
    TorusSpec s = TorusSpec::plain(3, 2);
    for (int it = 0; it < 5; ++it) {
      TorusElement a = random_element(s, rng), b = random_element(s, rng), c = random_element(s, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(invert_generators(invert_generators(a)) == a);
    }
    TorusElement m = TorusElement::monomial(s, {1, -2, 0}, {0, 1, 1}, Scalar::q(3));
    CHECK(m * monomial_inverse(m) == TorusElement::scalar(s, Scalar(1)));
  }

  TEST_CASE("subalgebra membership") {
    TorusSpec C = TorusSpec::C_in_A(2);
    TorusSpec A = TorusSpec::plain(2);
    CHECK(in_subalgebra(TorusElement::w(A, 1, 2), C));
    CHECK(in_subalgebra(TorusElement::D(A, 1) * TorusElement::D(A, 2, -1), C));
    CHECK_FALSE(in_subalgebra(TorusElement::D(A, 1), C));
  }
}
