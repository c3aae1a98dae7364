#pragma once

#include "qtoda/cartan.hpp"

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

namespace qtoda {

using IMat = std::vector<std::vector<int>>;

class TripleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triple {
  IMat eps;  // orientation matrix
  IMat n;
  std::vector<Scalar> c;

  // nu_i = sum_k n_{ik} omega_k
  Weight nu(int i) const;
};

struct TriplePair {
  RootSystem rs;
  Triple plus, minus;
  std::vector<int> eps_vec;
};

// Throws TripleError naming the first violation.
void check_orientation(const RootSystem& rs, const IMat& eps);
Triple validate_triple(const RootSystem& rs, const IMat& eps, const IMat& n, const std::vector<Scalar>& c);
TriplePair make_pair(const RootSystem& rs, const Triple& plus, const Triple& minus);

// Total order of simple-root indices (0-based), i before j whenever eps_ij = -1.
std::vector<int> compatible_order(const RootSystem& rs, const IMat& eps);
std::vector<int> epsilon_invariant(const RootSystem& rs, const Triple& plus, const Triple& minus);

// Symbolic characters cp_i / cm_i (1-based names).
std::vector<Scalar> default_c(const RootSystem& rs, char sign);
IMat orientation_from_edges(const RootSystem& rs, const std::vector<int>& signs);  // one sign per edge i<j
std::vector<std::pair<int, int>> dynkin_edges(const RootSystem& rs);
IMat random_orientation(const RootSystem& rs, std::mt19937_64& rng);
IMat random_n(const RootSystem& rs, const IMat& eps, std::mt19937_64& rng, int spread = 2);
// n^+ = n^-, eps^+ = eps^-, c^+ = 1, c^- = -1
TriplePair standard_pair(const RootSystem& rs);
// random pair with symbolic characters
TriplePair random_pair(const RootSystem& rs, std::mt19937_64& rng, int spread = 2);
TriplePair random_pair_with(const RootSystem& rs, const IMat& eps_plus, const IMat& eps_minus, std::mt19937_64& rng,
                            int spread = 2);

nlohmann::json triple_to_json(const RootSystem& rs, const Triple& t);
Triple triple_from_json(const RootSystem& rs, const nlohmann::json& j);
nlohmann::json pair_to_json(const TriplePair& p);
TriplePair pair_from_json(const nlohmann::json& j);

}  // namespace qtoda
