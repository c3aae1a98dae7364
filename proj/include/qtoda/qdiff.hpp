#pragma once

#include "qtoda/cartan.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace qtoda {

// Sum of  s * e^{-beta} T_mu  with the e-part written on the left.
// T_mu e^lambda = v^{(lambda,mu)} e^lambda T_mu.
class DiffOp {
 public:
  using Key = std::pair<RootVec, Weight>;  // (beta, mu)

  explicit DiffOp(const RootSystem& rs) : rs_(&RootSystem::get(rs.type(), rs.rank())) {}
  static DiffOp scalar(const RootSystem& rs, const Scalar& s);
  static DiffOp T(const RootSystem& rs, const Weight& mu, const Scalar& s = Scalar(1));
  // e^{-beta}
  static DiffOp e(const RootSystem& rs, const RootVec& beta, const Scalar& s = Scalar(1));
  static DiffOp term(const RootSystem& rs, const RootVec& beta, const Weight& mu, const Scalar& s);

  const RootSystem& rs() const { return *rs_; }
  const std::map<Key, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  Scalar coeff(const RootVec& beta, const Weight& mu) const;

  void add(const RootVec& beta, const Weight& mu, const Scalar& s);
  DiffOp& operator+=(const DiffOp& b);
  DiffOp& operator-=(const DiffOp& b);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
  DiffOp scaled(const Scalar& s) const;
  DiffOp map_coeffs(const std::function<Scalar(const Scalar&)>& f) const;
  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.rs_ == b.rs_ && a.t_ == b.t_; }

  // every beta in Q_+
  bool in_lower() const;
  // terms with beta = 0
  DiffOp degree_zero() const;
  // e^{lambda} A e^{-lambda}
  DiffOp conj_exp(const Weight& lambda) const;
  DiffOp conj_rho(int sign = 1) const;

  nlohmann::json to_json() const;
  static DiffOp from_json(const RootSystem& rs, const nlohmann::json& j);
  std::string latex() const;
  std::string str() const;

 private:
  const RootSystem* rs_;
  std::map<Key, Scalar> t_;
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);
bool commutator_is_zero(const DiffOp& a, const DiffOp& b);

// Pretty varpi-coordinates of a weight (type A: representative with fewest nonzero entries).
std::vector<Rat> display_varpi(const RootSystem& rs, const Weight& mu);
std::string rat_str(const Rat& r);
Rat rat_parse(const std::string& s);

// u-monomial v^{(lambda,mu)} = prod u_i^{m_i}
Scalar lambda_character(const RootSystem& rs, const Weight& mu);
int u_symbol(int i);  // 0-based index -> symbol id of u_{i+1}

// Sum_{|beta| <= D} a_beta y^{beta - lambda}
class FormalSeries {
 public:
  FormalSeries(const RootSystem& rs, int cutoff) : rs_(&RootSystem::get(rs.type(), rs.rank())), D_(cutoff) {}
  const RootSystem& rs() const { return *rs_; }
  int cutoff() const { return D_; }
  const std::map<RootVec, Scalar>& coeffs() const { return c_; }
  Scalar at(const RootVec& beta) const;
  void set(const RootVec& beta, const Scalar& s);
  void add(const RootVec& beta, const Scalar& s);
  FormalSeries scaled(const Scalar& s) const;
  FormalSeries& operator-=(const FormalSeries& b);
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) { return a.D_ == b.D_ && a.c_ == b.c_; }

 private:
  const RootSystem* rs_;
  int D_;
  std::map<RootVec, Scalar> c_;
};

FormalSeries apply(const DiffOp& a, const FormalSeries& f);

}  // namespace qtoda
