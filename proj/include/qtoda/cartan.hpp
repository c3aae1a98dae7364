#pragma once

#include "qtoda/scalar.hpp"

#include <string>
#include <vector>

namespace qtoda {

using Weight = std::vector<Rat>;   // omega-basis coordinates
using RootVec = std::vector<int>;  // alpha-basis coordinates

bool in_positive_cone(const RootVec& b);
int height(const RootVec& b);

// Simple roots and weights are indexed from 0 in the API.  The "varpi" chart is
// the coordinate system used for the explicit formulas (for type A it has
// rank+1 coordinates summing to an irrelevant multiple of (1,...,1)).
class RootSystem {
 public:
  static RootSystem build(char type, int rank);
  static RootSystem parse(const std::string& tag);  // "A3", "C2", "G2"
  // process-wide instances with stable addresses
  static const RootSystem& get(char type, int rank);
  static const RootSystem& get(const std::string& tag);

  char type() const { return type_; }
  int rank() const { return n_; }
  std::string tag() const;

  int a(int i, int j) const { return a_[i][j]; }
  int d(int i) const { return d_[i]; }
  int b(int i, int j) const { return d_[i] * a_[i][j]; }
  bool edge(int i, int j) const { return i != j && a_[i][j] != 0; }
  int N() const { return N_; }
  int M() const { return 2 * N_; }

  Weight zero() const { return Weight(n_, Rat(0)); }
  Weight omega(int i) const;
  Weight alpha(int i) const;
  Weight rho() const;
  Weight root_weight(const RootVec& b) const;
  // inverse of root_weight; throws if w is not in the root lattice
  RootVec to_root(const Weight& w) const;

  Rat pair(const Weight& x, const Weight& y) const;
  Rat pair(const RootVec& b, const Weight& y) const { return pair(root_weight(b), y); }
  Rat pair(const RootVec& b, const RootVec& c) const { return pair(root_weight(b), root_weight(c)); }
  Rat gram(int i, int j) const { return gram_[i][j]; }

  int varpi_dim() const { return (int)vgram_.size(); }
  Rat varpi_gram(int i, int j) const { return vgram_[i][j]; }
  Weight varpi(int j) const;  // omega-coordinates of varpi_j (0-based)
  Weight from_varpi(const std::vector<Rat>& x) const;
  std::vector<Rat> to_varpi(const Weight& w) const;
  std::vector<Rat> alpha_varpi(int i) const { return alpha_v_[i]; }

  friend bool operator==(const RootSystem& x, const RootSystem& y) { return x.type_ == y.type_ && x.n_ == y.n_; }

 private:
  char type_ = 'A';
  int n_ = 0;
  std::vector<std::vector<int>> a_;
  std::vector<int> d_;
  std::vector<std::vector<Rat>> vgram_;    // (varpi_i, varpi_j)
  std::vector<std::vector<Rat>> alpha_v_;  // alpha_i in varpi coordinates
  std::vector<std::vector<Rat>> omega_v_;  // omega_i in varpi coordinates
  std::vector<std::vector<Rat>> gram_;     // (omega_i, omega_j)
  int N_ = 1;
};

std::string weight_str(const Weight& w);

}  // namespace qtoda
