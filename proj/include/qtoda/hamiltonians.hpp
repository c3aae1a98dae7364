#pragma once

#include "qtoda/qdiff.hpp"
#include "qtoda/triples.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qtoda {

using SMat = std::vector<std::vector<Scalar>>;  // dense, row = target

SMat mat_zero(int n);
SMat mat_id(int n);
SMat mat_mul(const SMat& a, const SMat& b);
bool mat_is_zero(const SMat& a);

struct WeightBasisRep {
  const RootSystem* rs = nullptr;
  std::vector<std::string> labels;
  std::vector<Weight> wt;
  std::vector<SMat> E, F;
  std::vector<int> nilE, nilF;  // smallest r with X^r = 0

  int dim() const { return (int)wt.size(); }
  // fills nilE/nilF; throws if a bound exceeds cap
  void compute_nilpotency(int cap = 8);
};

// Empty string if every defining relation holds, otherwise the first failure.
std::string check_relations(const WeightBasisRep& V);

WeightBasisRep rep_trivial(const RootSystem& rs);
WeightBasisRep rep_first_fundamental(const RootSystem& rs);
// Lambda^k of the first fundamental in type A (basis: k-subsets)
WeightBasisRep rep_exterior_power(const RootSystem& rs, int k);
WeightBasisRep rep_exterior_square(const WeightBasisRep& V1);

// Coefficient of E^r (x) F^r in the truncated R-factor:
//   (v_i - v_i^{-1})^r / (r)_{v_i^s}!
// s = -2 is the universal R-matrix (v_i^{r(r-1)/2}(v_i-v_i^{-1})^r/[r]_{v_i}!); s = -1 and
// s = +1 are kept to reproduce the alternative truncations.
struct DVOptions {
  int exp_sign = -2;
  const std::vector<int>* order_plus = nullptr;   // default: compatible_order(eps^+)
  const std::vector<int>* order_minus = nullptr;  // default: compatible_order(eps^-)
  // overrides the R-factor coefficient of E_i^r (x) F_i^r when set
  std::function<Scalar(int i, int r)> coef;
};

DiffOp build_DV_generic(const TriplePair& P, const WeightBasisRep& V, const DVOptions& opt = {});
// closed form of D_1 as displayed; corrected = true repairs the B, D and G2 coefficients
// that disagree with build_DV_generic (types A and C are unaffected)
DiffOp build_D1_closed(const TriplePair& P, bool corrected = false);
DiffOp build_standard_qToda(const RootSystem& rs);
DiffOp build_affine_D1(const RootSystem& rs, const Scalar& kappa);

// tr_V(v^{2(lambda+rho)}) = sum_k u^{2 mu_k} v^{2(rho, mu_k)}
Scalar trace_eigenvalue(const WeightBasisRep& V);

}  // namespace qtoda
