#pragma once

#include "qtoda/torus.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace qtoda {

// Laurent polynomial in z^{1/2}, w^{1/2} with coefficients in a quantized torus.
// Keys are doubled exponents (2 deg_z, 2 deg_w); z and w are central.
class SpectralPoly {
 public:
  using Key = std::pair<int, int>;
  explicit SpectralPoly(const TorusSpec& s) : spec_(&TorusElement(s).spec()) {}
  static SpectralPoly term(const TorusElement& c, int z2 = 0, int w2 = 0);

  const TorusSpec& spec() const { return *spec_; }
  const std::map<Key, TorusElement>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  TorusElement coeff(int z2, int w2 = 0) const;

  void add(int z2, int w2, const TorusElement& c);
  SpectralPoly& operator+=(const SpectralPoly& o);
  SpectralPoly& operator-=(const SpectralPoly& o);
  friend SpectralPoly operator+(SpectralPoly a, const SpectralPoly& b) { return a += b; }
  friend SpectralPoly operator-(SpectralPoly a, const SpectralPoly& b) { return a -= b; }
  friend SpectralPoly operator*(const SpectralPoly& a, const SpectralPoly& b);
  SpectralPoly scaled(const Scalar& s) const;
  // z -> w (the second auxiliary copy)
  SpectralPoly z_to_w() const;
  friend bool operator==(const SpectralPoly& a, const SpectralPoly& b) {
    return a.spec_ == b.spec_ && a.c_ == b.c_;
  }

 private:
  const TorusSpec* spec_;
  std::map<Key, TorusElement> c_;
};

using Mat2 = std::array<SpectralPoly, 4>;  // row-major (11, 12, 21, 22)

struct LaxMatrix {
  Mat2 m;
  const SpectralPoly& at(int r, int c) const { return m[2 * (r - 1) + (c - 1)]; }
  SpectralPoly& at(int r, int c) { return m[2 * (r - 1) + (c - 1)]; }
};

LaxMatrix operator*(const LaxMatrix& a, const LaxMatrix& b);

struct Monodromy {
  LaxMatrix T;
  std::vector<int> k;  // k[i-1] = k_i
  bool dbl = false;    // double (type C) monodromy
  int n() const { return (int)k.size(); }
  // z-exponent s = sum (k_j - 1)/2 of the leading term (A), or -n (double)
  Rat s() const;
};

// L^{v,k}_i(z) or its barred version on the torus spec (plain A_n)
LaxMatrix local_lax(const TorusSpec& spec, int i, int k, bool barred);
// L_n^{k_n} ... L_1^{k_1}
Monodromy monodromy(const std::vector<int>& k, int M = 1);
// bar L_1^{-k_1} ... bar L_n^{-k_n} L_n^{k_n} ... L_1^{k_1}
Monodromy double_monodromy(const std::vector<int>& k, int M = 1);

// R(z/w) (T(z) x 1)(1 x T(w)) = (1 x T(w))(T(z) x 1) R(z/w) after clearing v z/w - v^{-1}
bool rtt_check(const LaxMatrix& T);
inline bool rtt_check(const Monodromy& T) { return rtt_check(T.T); }

// T_11 + eps T_22
SpectralPoly trace_combination(const Monodromy& T, const Scalar& eps);
// H_2 read off the z^{s+1} coefficient (A: after stripping (-1)^n w_1...w_n) or
// the z^{-n+1} coefficient (double)
TorusElement extract_H2(const Monodromy& T, const Scalar& eps);
// leading coefficient H_1 normalized the same way
TorusElement extract_H1(const Monodromy& T, const Scalar& eps);
// H_{r+1}: (-1)^r times the normalized coefficient r steps above the leading one
TorusElement extract_H(const Monodromy& T, const Scalar& eps, int r);

// pairwise commutators of all z-coefficients of T_11 + eps T_22 (max_power < 0: all of them,
// otherwise only the lowest max_power+1 powers)
bool commuting_coefficients_check(const Monodromy& T, const Scalar& eps, int max_power = -1);
bool coefficients_commute(const SpectralPoly& p, int max_power = -1);

// displayed hamiltonians, transcribed term by term on plain A_n
TorusElement mixed_H2(const std::vector<int>& k, const Scalar& eps, int M = 1);
TorusElement double_mixed_H2(const std::vector<int>& k, const Scalar& eps, int M = 1);
// periodic H_1 for type A
TorusElement closed_H1(const std::vector<int>& k, const Scalar& eps, int M = 1);

// all k in {-1,0,1}^n, k[0] = k_1
std::vector<std::vector<int>> all_k_vectors(int n);
// "k_n,...,k_1" as printed in the displays -> k[0] = k_1
std::vector<int> parse_k_vector(const std::string& s);
std::string k_vector_str(const std::vector<int>& k);

}  // namespace qtoda
