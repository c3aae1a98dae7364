#pragma once

#include "qtoda/hamiltonians.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace qtoda {

// J~_beta for beta in Q_+ with |beta| <= D, coefficients in q, u_i, cp_i, cm_i
struct JSeries {
  const RootSystem* rs = nullptr;
  int D = 0;
  std::map<RootVec, Scalar> c;

  Scalar at(const RootVec& beta) const;
  nlohmann::json to_json() const;
};

// all beta in Q_+ with 0 <= |beta| <= D, sorted by height
std::vector<RootVec> positive_cone(const RootSystem& rs, int D);

JSeries j_tilde_recursive(const TriplePair& P, int D);
JSeries j_tilde_closed(const TriplePair& P, int D);
// pairing of the two Whittaker vectors computed inside the universal Verma modules
JSeries j_from_verma_oracle(const TriplePair& P, int D);

// J_beta = v^{(beta,beta)/2 - (lambda,beta)} J~_beta as a y-series in N_lambda
FormalSeries j_function(const JSeries& Jt);

struct EigenResult {
  bool ok = false;
  Scalar eigenvalue;
  std::vector<RootVec> failures;
};
// D~ = e^{-rho} D e^{rho} applied to the J-series, compared with tr_V(v^{2(lambda+rho)}) J
EigenResult eigencheck_operator(const DiffOp& D_V, const Scalar& eigenvalue, const JSeries& Jt);
EigenResult eigencheck(const TriplePair& P, const WeightBasisRep& V, int D);

}  // namespace qtoda
