#pragma once

#include "qtoda/triples.hpp"
#include "qtoda/whittaker.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtoda {

class LaumonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Torus-fixed quasiflag: d_ij for 1 <= j <= i <= n-1, stored row by row.
struct FixedPoint {
  int n = 2;
  std::vector<int> d;

  int at(int i, int j) const { return d[(i - 1) * i / 2 + (j - 1)]; }
  int& at(int i, int j) { return d[(i - 1) * i / 2 + (j - 1)]; }
  // d_i; zero for i = 0 and i = n
  int row(int i) const;
  std::vector<int> degree() const;
  int total() const;
  bool valid() const;
  std::string str() const;  // "(d11; d21,d22; ...)"
  friend bool operator<(const FixedPoint& a, const FixedPoint& b) { return a.d < b.d; }
  friend bool operator==(const FixedPoint& a, const FixedPoint& b) { return a.d == b.d; }
};

std::vector<FixedPoint> enumerate_fixed_points(int n, const std::vector<int>& deg);
// every degree vector with |d| <= cutoff, sorted by total degree
std::vector<std::vector<int>> degrees_up_to(int n, int cutoff);

struct GradedVector {
  int n = 2;
  int cutoff = 0;
  std::map<FixedPoint, Scalar> c;

  Scalar at(const FixedPoint& p) const;
  void add(const FixedPoint& p, const Scalar& s);
  GradedVector component(const std::vector<int>& deg) const;
  GradedVector scaled(const Scalar& s) const;
  GradedVector& operator+=(const GradedVector& o);
  GradedVector& operator-=(const GradedVector& o);
  bool is_zero() const { return c.empty(); }
  friend bool operator==(const GradedVector& a, const GradedVector& b) { return a.c == b.c; }
  nlohmann::json to_json() const;
};

enum class LGen { E, F, L, K, e1, f1, Dcal };

struct LOp {
  LGen g;
  int i;          // 1-based
  int power = 1;  // +-1 for the diagonal ones
};
std::string op_name(const LOp& op);

// The geometric module M over Q(t_1..t_{n-1}, v) with v = q^M, M taken from A_{n-1},
// and t_n = (t_1...t_{n-1})^{-1}.  The displayed L_i then give L_n = v^{n(n-1)/2} (the [E,F]
// relation needs exactly that), so L_p = K_{omega_p} v^{p(n-1)/2} rather than K_{omega_p}.
class LaumonSpace {
 public:
  explicit LaumonSpace(int n);
  // L_n(1)^{k/n} = v^{k(n-1)/2}, as an exponent of v
  Rat ln_shift(int k) const;

  int n() const { return n_; }
  int M() const { return M_; }
  const RootSystem& rs() const { return *rs_; }

  Scalar t(int k) const;  // 1-based, k = n eliminated
  Scalar v(const Rat& e) const { return vpow(e, M_); }
  // s_ij = t_j^2 v^{-2 d_ij}; row n has d = 0
  Scalar s(const FixedPoint& p, int i, int j) const;
  // highest weight of M: u_k = v^{(lambda,omega_k)} = L_k(1) L_n(1)^{-k/n}, u_0 = u_n = 1
  Scalar u(int k) const;
  // u_i -> u(i) on a whittaker-module scalar (displayed = true: u_i -> v^{i(i-1)/2} t_1..t_i)
  Scalar specialize_u(const Scalar& x, bool displayed = false) const;

  FixedPoint origin() const;
  GradedVector vacuum(int cutoff) const;  // [O_{Q_0}]

  // matrix coefficients (source p, 1-based j); zero if the target is not a fixed point
  Scalar coeff_F(const FixedPoint& p, int i, int j) const;
  Scalar coeff_E(const FixedPoint& p, int i, int j) const;
  Scalar coeff_e1(const FixedPoint& p, int i, int j) const;
  Scalar coeff_f1(const FixedPoint& p, int i, int j) const;
  Scalar eig_L(const FixedPoint& p, int i) const;
  Scalar eig_K(const FixedPoint& p, int i) const;
  Scalar eig_D(const FixedPoint& p, int i) const;

  GradedVector act(const LOp& op, const GradedVector& x) const;
  // rightmost op first
  GradedVector act(const std::vector<LOp>& word, const GradedVector& x) const;

  // negative-control hook: multiply the E_i or F_i coefficient at one source point
  void corrupt(LGen g, int i, const FixedPoint& at, const Scalar& factor);

 private:
  int n_, M_;
  const RootSystem* rs_;
  std::vector<Scalar> t_;
  struct Corruption {
    LGen g;
    int i;
    FixedPoint at;
    Scalar factor;
  };
  std::vector<Corruption> bad_;
  Scalar tweak(LGen g, int i, const FixedPoint& p, Scalar c) const;
};

struct CheckReport {
  bool ok = true;
  int checked = 0;
  std::vector<std::string> failures;
  void fail(const std::string& s) {
    ok = false;
    if (failures.size() < 20) failures.push_back(s);
  }
};

// U_v(sl_n) relations on every basis vector whose words stay within the cutoff
CheckReport relations_check(const LaumonSpace& X, int cutoff);

// k^a via the second edge-weight path model (a = 0: k itself via the first)
GradedVector path_model_vector(const LaumonSpace& X, const std::vector<int>& a, int cutoff);
// prod (t_1..t_i)^{-2a_i} D^a(k), k from the first path model
GradedVector k_a_from_D(const LaumonSpace& X, const std::vector<int>& a, int cutoff);

// e_{i,0} L_i^{-1} L_{i+1} k = v/(1-v^2) k  (b = false)
// e_{i,1} L_{i-1}^2 L_i^{-3} L_{i+1} k = v^{5-i}/(1-v^2) k  (b = true)
CheckReport eigen_property_check(const LaumonSpace& X, int cutoff, bool b);
// D_i e_{j,0} D_i^{-1} (= e_{j,0} or v^{-i} e_{i,1}), the f analogue and the D^a forms, on basis vectors
CheckReport d_conjugacy_check(const LaumonSpace& X, int cutoff);
// k^a is the Whittaker vector of the triple attached to a
CheckReport feigin_relation_check(const LaumonSpace& X, const std::vector<int>& a, int cutoff);

// a_i = (1 + eps_{i-1,i})/2 for i >= 2, a_1 given; throws LaumonError on bad input
std::vector<int> a_from_triple(const RootSystem& rs, const Triple& T, int a1 = 0);
// the triple of Feigin's relation for a (c symbolic values as displayed)
Triple triple_from_a(const LaumonSpace& X, const std::vector<int>& a);

Scalar X_constant(const LaumonSpace& X, const Triple& T, const std::vector<int>& a, const std::vector<int>& deg);
// theta_d = X(d) [D^a]_d
GradedVector geometric_whittaker(const LaumonSpace& X, const Triple& T, int cutoff, int a1 = 0);
// e_i theta = c_i theta below the cutoff
CheckReport whittaker_check(const LaumonSpace& X, const Triple& T, const GradedVector& theta);
// both sides of the residue identity at (p, i, a_i)
std::pair<Scalar, Scalar> residue_sides(const LaumonSpace& X, const FixedPoint& p, int i, int a);
CheckReport residues_check(const LaumonSpace& X, int cutoff);

// Shapovalov form restricted to one degree, through F-words applied to the vacuum
class Shapovalov {
 public:
  Shapovalov(const LaumonSpace& X, const std::vector<int>& deg);
  const std::vector<std::vector<int>>& words() const { return words_; }
  // Gram matrix of the chosen words
  const std::vector<std::vector<Scalar>>& gram() const { return gram_; }
  Scalar pair(const GradedVector& x, const GradedVector& y) const;

 private:
  const LaumonSpace* X_;
  std::vector<int> deg_;
  std::vector<FixedPoint> pts_;
  std::vector<std::vector<int>> words_;  // F_{w[0]} ... F_{w[k-1]} 1
  std::vector<std::vector<Scalar>> phi_;  // columns: word images in the fixed-point basis
  std::vector<std::vector<Scalar>> gram_;
  std::vector<Scalar> coords(const GradedVector& x) const;
};
// sum over degrees; degrees pair orthogonally
Scalar shapovalov(const LaumonSpace& X, const GradedVector& x, const GradedVector& y);

// (theta^+_d, theta^-_d) per degree
std::map<RootVec, Scalar> geometric_pairings(const LaumonSpace& X, const Triple& plus, const Triple& minus, int cutoff);
// The Sevostyanov generator built from the geometric L_p is the honest one times
// L_n^{sum_p p n_ip / n}; this returns the inverse factor
Scalar true_character_factor(const LaumonSpace& X, const Triple& T, int i);
// the pair T(eps^+, n^+, c^+; -eps^-, -n^-, c^-), characters optionally moved to the honest generators
TriplePair geometric_pair(const LaumonSpace& X, const Triple& plus, const Triple& minus, bool true_characters = true);

struct GeometricJResult {
  bool eigen_ok = false;
  bool matches_abstract = false;
  bool literal_ok = false;  // the displayed normalizations, see geometric_J_eigencheck
  Scalar eigenvalue;
  std::map<RootVec, Scalar> pairings;
  std::vector<RootVec> failures;
};
// D_1 of geometric_pair(..., true) on the y-series y^{-lambda-rho} sum (theta^+,theta^-) y^d with the
// highest weight u(k); eigenvalue sum t_i^2.
// literal_ok: untouched characters, u_i = v^{i(i-1)/2} t_1..t_i and eigenvalue v^{n-1} sum t_i^2.
GeometricJResult geometric_J_eigencheck(const LaumonSpace& X, const Triple& plus, const Triple& minus, int cutoff);

}  // namespace qtoda
