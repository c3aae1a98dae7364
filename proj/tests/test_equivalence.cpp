#include "qtoda/equivalence.hpp"
#include "qtoda/hamiltonians.hpp"
#include "qtoda/lax.hpp"

#include <doctest.h>

using namespace qtoda;

namespace {

TriplePair matching_pair(const TriplePair& A, std::mt19937_64& rng) {
  for (int t = 0; t < 5000; ++t) {
    TriplePair B = random_pair(A.rs, rng);
    if (B.eps_vec == A.eps_vec) return B;
  }
  return random_pair_with(A.rs, A.plus.eps, A.minus.eps, rng);
}

}  // namespace

TEST_SUITE("equivalence") {
  TEST_CASE("a pair against itself") {
    std::mt19937_64 rng(1);
    for (const char* t : {"A3", "C2", "G2"}) {
      TriplePair P = random_pair(RootSystem::get(t), rng);
      CHECK(solve_pair_conjugation(P, P).phi.is_identity());
    }
  }

  TEST_CASE("rank one pairs are always conjugate") {
    std::mt19937_64 rng(2);
    const RootSystem& rs = RootSystem::get("A1");
    for (int it = 0; it < 5; ++it) {
      Conjugation C = solve_pair_conjugation(random_pair(rs, rng), random_pair(rs, rng));
      CHECK(C.phi.apply(C.source) == C.target);
    }
  }

  TEST_CASE("equal invariants are conjugate") {
    std::mt19937_64 rng(3);
    for (const char* t : {"A3", "C3", "B2", "D4", "G2"}) {
      TriplePair A = random_pair(RootSystem::get(t), rng), B = matching_pair(A, rng);
      Conjugation C = solve_pair_conjugation(A, B);
      CHECK(conjugate_and_compare(C.phi, {C.source}, {C.target}));
      CHECK(C.phi.inverse().apply(C.target) == C.source);
    }
  }

  TEST_CASE("unequal invariants are refused") {
    std::mt19937_64 rng(4);
    const RootSystem& rs = RootSystem::get("A2");
    TriplePair A = random_pair_with(rs, orientation_from_edges(rs, {1}), orientation_from_edges(rs, {1}), rng);
    TriplePair B = random_pair_with(rs, orientation_from_edges(rs, {1}), orientation_from_edges(rs, {-1}), rng);
    CHECK_THROWS_WITH_AS(solve_pair_conjugation(A, B), doctest::Contains("hypothesis violated"), EquivalenceError);
  }

  TEST_CASE("one twist carries every fundamental hamiltonian in type A") {
    std::mt19937_64 rng(5);
    const RootSystem& rs = RootSystem::get("A3");
    TriplePair A = random_pair(rs, rng), B = matching_pair(A, rng);
    Conjugation C = solve_pair_conjugation(A, B);
    std::vector<TorusElement> s, t;
    for (int k = 2; k <= 3; ++k) s.push_back(torus_hamiltonian_exterior(A, k)), t.push_back(torus_hamiltonian_exterior(B, k));
    CHECK(conjugate_and_compare(C.phi, s, t));
  }

  TEST_CASE("compare on lists") {
    std::mt19937_64 rng(6);
    TriplePair A = random_pair(RootSystem::get("C2"), rng);
    TorusElement h = torus_hamiltonian(A);
    auto id = TwistAutomorphism::identity(h.spec());
    CHECK(conjugate_and_compare(id, {h}, {h}));
    CHECK_FALSE(conjugate_and_compare(id, {h}, {h + h}));
  }

  TEST_CASE("group structure and serialization") {
    std::mt19937_64 rng(7);
    TriplePair A = random_pair(RootSystem::get("G2"), rng), B = matching_pair(A, rng);
    Conjugation C = solve_pair_conjugation(A, B);
    CHECK(C.phi.compose(C.phi.inverse()).is_identity());
    CHECK(TwistAutomorphism::from_json(C.source.spec(), C.phi.to_json()) == C.phi);
    auto x = C.phi.quadratic_form();
    REQUIRE(x.has_value());
    CHECK(TwistAutomorphism::from_quadratic_form(C.source.spec(), *x, C.phi.multipliers()) == C.phi);
  }

  TEST_CASE("standard pair at k = 0") {
    for (const char* t : {"A2", "A3", "C2", "C3"}) {
      const RootSystem& rs = RootSystem::get(t);
      int n = rs.type() == 'A' ? rs.rank() + 1 : rs.rank();
      Conjugation C = solve_lax_matching(standard_pair(rs), std::vector<int>(n, 0));
      CHECK(C.phi.apply(C.source) == C.target);
    }
  }

  TEST_CASE("A3 over all compatible k") {
    std::mt19937_64 rng(9);
    const RootSystem& rs = RootSystem::get("A3");
    TriplePair P = random_pair(rs, rng);
    for (int k1 : {-1, 0, 1})
      for (int k4 : {-1, 0, 1}) {
        std::vector<int> k{k1, P.eps_vec[0], P.eps_vec[1], k4};
        REQUIRE(lax_compatible(P, k));
        Conjugation C = solve_lax_matching(P, k);
        CHECK(C.phi.apply(C.source) == C.target);
      }
    std::vector<int> bad{0, P.eps_vec[0] == 1 ? 0 : 1, P.eps_vec[1], 0};
    CHECK_FALSE(lax_compatible(P, bad));
    CHECK_THROWS_AS(solve_lax_matching(P, bad), EquivalenceError);
  }

  TEST_CASE("boundary k are conjugate through composed twists") {
    std::mt19937_64 rng(10);
    const RootSystem& rs = RootSystem::get("A2");
    TriplePair P = random_pair(rs, rng);
    int mid = P.eps_vec[0];
    Conjugation a = solve_lax_matching(P, {1, mid, -1}), b = solve_lax_matching(P, {0, mid, 1});
    TwistAutomorphism ab = b.phi.compose(a.phi.inverse());
    CHECK(ab.apply(a.target) == b.target);
  }

  TEST_CASE("affine constants") {
    Scalar eps = Scalar::sym("eps"), v = vpow(1, 4), d = v - v.inverse();
    CHECK(affine_kappa('A', 2, eps, 4) == d.pow(-4) * eps);
    CHECK(affine_kappa('A', 3, eps, 4) == -d.pow(-6) * eps);
    CHECK(affine_kappa('C', 2, eps, 4) == v.pow(6) * d.pow(-4) * (v * v - v.pow(-2)).pow(-4) * eps);
    CHECK_THROWS(affine_kappa('G', 2, eps, 4));
  }

  TEST_CASE("periodic chains and affine Toda") {
    Scalar eps = Scalar::sym("eps");
    for (auto [t, n] : std::vector<std::pair<char, int>>{{'A', 2}, {'A', 3}, {'C', 2}}) {
      Conjugation C = periodic_affine_conjugacy(t, n, eps);
      CHECK(C.phi.apply(C.source) == C.target);
    }
    Conjugation Z = periodic_affine_conjugacy('A', 3, Scalar(0));
    CHECK(Z.target == from_difference_operator(build_standard_qToda(RootSystem::get("A2"))));
  }

  TEST_CASE("malformed twists are refused") {
    TorusSpec s = TorusSpec::for_root_system(RootSystem::get("A2"));
    auto gens = lattice_generators(s);
    REQUIRE(gens.size() == 2);
    IVec z(s.n, 0);
    CHECK_THROWS_AS(TwistAutomorphism(s, gens, {z, z}, {Scalar(0), Scalar(1)}), EquivalenceError);
    CHECK_THROWS_AS(TwistAutomorphism(s, gens, {z}, {Scalar(1)}), EquivalenceError);
    CHECK_THROWS_AS(TwistAutomorphism(s, gens, {z, IVec(s.n + 1, 0)}, {Scalar(1), Scalar(1)}), EquivalenceError);
  }
}
