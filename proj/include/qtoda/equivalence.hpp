#pragma once

#include "qtoda/torus.hpp"
#include "qtoda/triples.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qtoda {

class EquivalenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simple-root generators of the D-lattice: the D-exponents b with D^b -> e^{-alpha_i}
// (for a spec without a root system: unit vectors, differences, or differences and 2e_n).
std::vector<IVec> lattice_generators(const TorusSpec& s);

// w_j fixed, g -> mult * w^{wexp} g for each lattice generator g (all in normal order).
// This is conjugation by exp(sum r_ij log w_i log w_j + sum r_i log w_i) without the logs.
class TwistAutomorphism {
 public:
  // throws EquivalenceError unless the images of the generators commute
  TwistAutomorphism(const TorusSpec& s, std::vector<IVec> gens, std::vector<IVec> wexp, std::vector<Scalar> mult);
  static TwistAutomorphism identity(const TorusSpec& s);

  const TorusSpec& spec() const { return TorusElement(spec_).spec(); }
  const std::vector<IVec>& generators() const { return gens_; }
  const std::vector<IVec>& exponents() const { return wexp_; }
  const std::vector<Scalar>& multipliers() const { return mult_; }

  TorusElement image(int l) const;  // image of the l-th generator
  TorusElement apply(const TorusElement& x) const;
  // (*this)(inner(x))
  TwistAutomorphism compose(const TwistAutomorphism& inner) const;
  TwistAutomorphism inverse() const;
  bool is_identity() const;

  // x_ij = hbar r_ij (i <= j) reproducing the w-exponents, or nullopt if no quadratic F does.
  // On a central torus x_11 is free and pinned to the given value.
  std::optional<std::vector<std::vector<Rat>>> quadratic_form(Rat x11 = 0) const;
  // twist of exp(sum x_ij/hbar log w_i log w_j) followed by the given multipliers
  static TwistAutomorphism from_quadratic_form(const TorusSpec& s, const std::vector<std::vector<Rat>>& x,
                                               std::vector<Scalar> mult);

  nlohmann::json to_json() const;
  static TwistAutomorphism from_json(const TorusSpec& s, const nlohmann::json& j);
  friend bool operator==(const TwistAutomorphism& a, const TwistAutomorphism& b);

 private:
  std::vector<Rat> decompose(const IVec& b) const;
  TorusSpec spec_;
  std::vector<IVec> gens_, wexp_;
  std::vector<Scalar> mult_;
};

// Match the generator terms of source and target, then verify the whole element.
// Throws EquivalenceError naming the generator or term that fails.
TwistAutomorphism solve_twist(const TorusElement& source, const TorusElement& target);

// true iff phi maps every source to the corresponding target
bool conjugate_and_compare(const TwistAutomorphism& phi, const std::vector<TorusElement>& source,
                           const std::vector<TorusElement>& target);

// first hamiltonian of the pair in its torus (closed forms, B/D/G2 repaired)
TorusElement torus_hamiltonian(const TriplePair& P);
// D_V for V = Lambda^k V_1 (type A) through the R-matrix recipe, in the torus
TorusElement torus_hamiltonian_exterior(const TriplePair& P, int k);

struct Conjugation {
  TwistAutomorphism phi;
  TorusElement source, target;
};

// pairs with equal epsilon invariants; "hypothesis violated" otherwise
Conjugation solve_pair_conjugation(const TriplePair& A, const TriplePair& B);

// A_{n-1}: target is the type A Lax H_2 (n = rank + 1 entries of k);
// C_n: target is the double-monodromy H_2 (n = rank entries).  k[0] = k_1.
bool lax_compatible(const TriplePair& P, const std::vector<int>& k);
Conjugation solve_lax_matching(const TriplePair& P, const std::vector<int>& k);

// type A_{n-1}: hat H_2 at k = 0 against the affine first hamiltonian with kappa(eps);
// type C_n: the same with the double monodromy
Scalar affine_kappa(char type, int n, const Scalar& eps, int M);
Conjugation periodic_affine_conjugacy(char type, int n, const Scalar& eps);

}  // namespace qtoda
