#pragma once

#include "qtoda/qdiff.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtoda {

using IVec = std::vector<int>;

// Quantized torus on w_1..w_n, D_1..D_n with D_i w_j = v^{e(i,j)} w_j D_i and v = q^M.
struct TorusSpec {
  enum class Lattice { full, diff, even };  // all / sum b = 0 / sum b even
  std::string name;
  int n = 0;
  int M = 1;
  // w-exponents are stored as integers in units of 1/wden (B and D need w^{1/2})
  int wden = 1;
  std::vector<IVec> e;
  bool central = false;  // w_1...w_n = 1
  Lattice lattice = Lattice::full;
  // root system receiving the anti-isomorphism, type 0 if none
  char rs_type = 0;
  int rs_rank = 0;
  // D_i -> e^{-gamma_i}; gamma_i as weights of the target root system
  std::vector<Weight> gamma;

  static TorusSpec plain(int n, int M = 1);  // A_n
  // the algebra carrying the anti-isomorphism onto difference operators of rs:
  // A_{n-1} -> Abar_n, C_n/D_n -> C_n, B_n -> A_n with e = 2 delta, G2 -> G_2
  static TorusSpec for_root_system(const RootSystem& rs);
  // C_n as a subalgebra of plain A_n
  static TorusSpec C_in_A(int n, int M = 1);

  const RootSystem* root_system() const;
  bool d_allowed(const IVec& b) const;
  friend bool operator==(const TorusSpec& a, const TorusSpec& b) {
    return a.name == b.name && a.n == b.n && a.M == b.M && a.wden == b.wden && a.e == b.e && a.central == b.central &&
           a.lattice == b.lattice && a.rs_type == b.rs_type && a.rs_rank == b.rs_rank;
  }
};

class TorusElement {
 public:
  using Key = std::pair<IVec, IVec>;  // (w exponents, D exponents), w-part on the left

  explicit TorusElement(const TorusSpec& s) : spec_(&intern(s)) {}
  static TorusElement scalar(const TorusSpec& s, const Scalar& c);
  static TorusElement monomial(const TorusSpec& s, const IVec& a, const IVec& b, const Scalar& c = Scalar(1));
  static TorusElement w(const TorusSpec& s, int j, int k = 1);  // w_j^{k/wden}, 1-based
  static TorusElement D(const TorusSpec& s, int i, int k = 1);

  const TorusSpec& spec() const { return *spec_; }
  const std::map<Key, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  Scalar coeff(const IVec& a, const IVec& b) const;

  void add(IVec a, const IVec& b, const Scalar& c);
  TorusElement& operator+=(const TorusElement& o);
  TorusElement& operator-=(const TorusElement& o);
  friend TorusElement operator+(TorusElement x, const TorusElement& y) { return x += y; }
  friend TorusElement operator-(TorusElement x, const TorusElement& y) { return x -= y; }
  friend TorusElement operator*(const TorusElement& x, const TorusElement& y);
  TorusElement scaled(const Scalar& c) const;
  TorusElement map_coeffs(const std::function<Scalar(const Scalar&)>& f) const;
  friend bool operator==(const TorusElement& x, const TorusElement& y) {
    return x.spec_ == y.spec_ && x.t_ == y.t_;  // interned specs compare by address
  }

  std::string str() const;
  static TorusElement parse(const TorusSpec& s, const std::string& text);
  nlohmann::json to_json() const;
  static TorusElement from_json(const TorusSpec& s, const nlohmann::json& j);

 private:
  // process-wide table of specs; equal specs share one address
  static const TorusSpec& intern(const TorusSpec& s);
  const TorusSpec* spec_;
  std::map<Key, Scalar> t_;
};

TorusElement commutator(const TorusElement& a, const TorusElement& b);
// inverse of a monomial c w^a D^b
TorusElement monomial_inverse(const TorusElement& m);

// w -> w^{-1}, D -> D^{-1}; an automorphism of plain A_n
TorusElement invert_generators(const TorusElement& x);

// Re-home x in another spec with the same commutation table: checks the D-lattice,
// applies w_1...w_n = 1 when the target is central and rescales q (target.M must be
// a multiple of the source M).  Throws MathError otherwise.
TorusElement convert(const TorusElement& x, const TorusSpec& target);
bool in_subalgebra(const TorusElement& x, const TorusSpec& sub);

// anti-isomorphism w_j -> T_{-varpi_j}, D_i -> e^{-gamma_i}
DiffOp to_difference_operator(const TorusElement& x);
TorusElement from_difference_operator(const DiffOp& d);

}  // namespace qtoda
