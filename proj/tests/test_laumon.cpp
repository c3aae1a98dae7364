#include "qtoda/laumon.hpp"

#include <doctest.h>

using namespace qtoda;

namespace {

FixedPoint fp(int n, std::vector<int> d) { return FixedPoint{n, std::move(d)}; }

Triple random_triple(const RootSystem& rs, std::mt19937_64& rng, char sign) {
  TriplePair P = random_pair(rs, rng);
  return sign == '+' ? P.plus : P.minus;
}

}  // namespace

TEST_SUITE("laumon") {
  TEST_CASE("fixed points") {
    CHECK(enumerate_fixed_points(3, {1, 1}).size() == 2);
    CHECK(enumerate_fixed_points(3, {0, 1}).size() == 1);
    CHECK(enumerate_fixed_points(2, {3}).size() == 1);
    for (auto& p : enumerate_fixed_points(3, {2, 2})) {
      CHECK(p.valid());
      CHECK(p.degree() == std::vector<int>{2, 2});
    }
    auto ds = degrees_up_to(3, 2);
    CHECK(ds.size() == 6);
    CHECK(ds.front() == std::vector<int>{0, 0});
    CHECK(fp(3, {2, 1, 0}).str() == "(2; 1,0)");
  }

  TEST_CASE("diagonal eigenvalues") {
    LaumonSpace X(2);
    CHECK(X.eig_L(fp(2, {2}), 1) == X.t(1) * X.v(Rat(-2)));
    CHECK(X.eig_L(X.origin(), 2) == X.v(Rat(1)));
    LaumonSpace Y(3);
    CHECK(Y.eig_D(Y.origin(), 2) == Y.t(1).pow(2) * Y.t(2).pow(2));
    CHECK(Y.t(1) * Y.t(2) * Y.t(3) == Scalar(1));
    CHECK(Y.u(0) == Scalar(1));
    CHECK(Y.u(3) == Scalar(1));
  }

  TEST_CASE("f1 against F") {
    LaumonSpace X(3);
    for (auto& deg : degrees_up_to(3, 2))
      for (auto& p : enumerate_fixed_points(3, deg))
        for (int i = 1; i <= 2; ++i)
          for (int j = 1; j <= i; ++j) {
            Scalar F = X.coeff_F(p, i, j);
            if (F.is_zero()) continue;
            FixedPoint r = p;
            ++r.at(i, j);
            CHECK(X.coeff_f1(p, i, j) == X.v(Rat(i)) * X.eig_D(p, i) / X.eig_D(r, i) * F);
          }
  }

  TEST_CASE("quantum group relations") {
    for (int n : {2, 3}) {
      LaumonSpace X(n);
      CheckReport r = relations_check(X, 3);
      CHECK(r.ok);
      CHECK(r.checked > 0);
    }
  }

  TEST_CASE("corrupted coefficients break the relations") {
    LaumonSpace X(2);
    X.corrupt(LGen::F, 1, X.origin(), Scalar::q(1));
    CHECK_FALSE(relations_check(X, 2).ok);
  }

  TEST_CASE("vacuum is highest weight") {
    LaumonSpace X(3);
    GradedVector one = X.vacuum(2);
    for (int i = 1; i <= 2; ++i) CHECK(X.act(LOp{LGen::E, i}, one).is_zero());
    GradedVector f = X.act(std::vector<LOp>{{LGen::F, 1}, {LGen::F, 2}}, one);
    GradedVector g = X.act(std::vector<LOp>{{LGen::F, 2}, {LGen::F, 1}}, one);
    CHECK_FALSE(f.is_zero());
    CHECK_FALSE(f == g);
    CHECK_THROWS_AS(X.act(LOp{LGen::E, 3}, one), LaumonError);
  }

  TEST_CASE("eigen-properties and D-conjugacy") {
    for (int n : {2, 3}) {
      LaumonSpace X(n);
      CHECK(eigen_property_check(X, 3, false).ok);
      CHECK(eigen_property_check(X, 3, true).ok);
      CHECK(d_conjugacy_check(X, 2).ok);
    }
  }

  TEST_CASE("residues") {
    for (int n : {2, 3}) {
      LaumonSpace X(n);
      CHECK(residues_check(X, 3).ok);
    }
    LaumonSpace X(3);
    auto [l, r] = residue_sides(X, fp(3, {2, 1, 0}), 2, 1);
    CHECK(l == r);
  }

  TEST_CASE("Feigin's relation for every a") {
    LaumonSpace X(3);
    for (std::vector<int> a : {std::vector<int>{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
      INFO(a[0], a[1]);
      CHECK(feigin_relation_check(X, a, 3).ok);
      CHECK(path_model_vector(X, a, 3) == k_a_from_D(X, a, 3));
    }
  }

  TEST_CASE("geometric Whittaker vector") {
    std::mt19937_64 rng(11);
    LaumonSpace X(3);
    Triple T = random_triple(X.rs(), rng, '+');
    GradedVector th0 = geometric_whittaker(X, T, 3, 0), th1 = geometric_whittaker(X, T, 3, 1);
    CHECK(whittaker_check(X, T, th0).ok);
    CHECK(whittaker_check(X, T, th1).ok);
    // the Whittaker vector is unique up to scale
    Scalar ratio = th1.at(X.origin()) / th0.at(X.origin());
    CHECK(th0.scaled(ratio) == th1);
    CHECK_THROWS_AS(a_from_triple(X.rs(), T, 2), LaumonError);
  }

  TEST_CASE("Shapovalov form") {
    LaumonSpace X(2);
    GradedVector one = X.vacuum(2);
    CHECK(shapovalov(X, one, one) == Scalar(1));
    GradedVector f = X.act(LOp{LGen::F, 1}, one);
    CHECK(shapovalov(X, one, f).is_zero());
    Shapovalov S(X, {1});
    REQUIRE(S.gram().size() == 1);
    Scalar u = X.u(1), v = X.v(Rat(1));
    CHECK(S.gram()[0][0] == (u * u - u.pow(-2)) / (v - v.inverse()));
  }

  TEST_CASE("geometric J-series") {
    std::mt19937_64 rng(12);
    LaumonSpace X(2);
    TriplePair P = random_pair(X.rs(), rng);
    GeometricJResult g = geometric_J_eigencheck(X, P.plus, P.minus, 3);
    CHECK(g.eigen_ok);
    CHECK(g.matches_abstract);
    CHECK_FALSE(g.literal_ok);
    CHECK(g.eigenvalue == X.t(1).pow(2) + X.t(2).pow(2));
  }
}
