#include "qtoda/qdiff.hpp"

#include <algorithm>

namespace qtoda {

namespace {

// (gamma, mu) for gamma in the root lattice: (alpha_j, omega_i) = d_i delta_ij
Rat root_pair(const RootSystem& rs, const RootVec& g, const Weight& mu) {
  Rat s = 0;
  for (int j = 0; j < rs.rank(); ++j)
    if (g[j]) s += Rat(g[j] * rs.d(j)) * mu[j];
  return s;
}

RootVec radd(const RootVec& a, const RootVec& b) {
  RootVec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Weight wadd(const Weight& a, const Weight& b) {
  Weight r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

void check_same(const RootSystem& a, const RootSystem& b) {
  if (&a != &b) throw MathError("operators over different root systems");
}

}  // namespace

std::string rat_str(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw MathError("bad rational '" + s + "'");
  }
}

int u_symbol(int i) { return symbol("u_" + std::to_string(i + 1)); }

Scalar lambda_character(const RootSystem& rs, const Weight& mu) {
  Monomial m;
  for (int i = 0; i < rs.rank(); ++i) {
    if (mu[i] == 0) continue;
    if (mu[i].denominator() != 1) throw MathError("lambda character needs an integral weight");
    m = m * Monomial::var(u_symbol(i), (int32_t)mu[i].numerator());
  }
  return Scalar(Poly::monomial(m));
}

// ---------------------------------------------------------------- DiffOp

DiffOp DiffOp::scalar(const RootSystem& rs, const Scalar& s) { return term(rs, RootVec(rs.rank(), 0), rs.zero(), s); }

DiffOp DiffOp::T(const RootSystem& rs, const Weight& mu, const Scalar& s) {
  return term(rs, RootVec(rs.rank(), 0), mu, s);
}

DiffOp DiffOp::e(const RootSystem& rs, const RootVec& beta, const Scalar& s) { return term(rs, beta, rs.zero(), s); }

DiffOp DiffOp::term(const RootSystem& rs, const RootVec& beta, const Weight& mu, const Scalar& s) {
  DiffOp d(rs);
  d.add(beta, mu, s);
  return d;
}

Scalar DiffOp::coeff(const RootVec& beta, const Weight& mu) const {
  auto it = t_.find({beta, mu});
  return it == t_.end() ? Scalar() : it->second;
}

void DiffOp::add(const RootVec& beta, const Weight& mu, const Scalar& s) {
  if (s.is_zero()) return;
  if ((int)beta.size() != rs_->rank() || (int)mu.size() != rs_->rank()) throw MathError("term of wrong length");
  auto [it, fresh] = t_.try_emplace({beta, mu}, s);
  if (!fresh) {
    it->second += s;
    if (it->second.is_zero()) t_.erase(it);
  }
}

DiffOp& DiffOp::operator+=(const DiffOp& b) {
  check_same(*rs_, *b.rs_);
  for (auto& [k, s] : b.t_) add(k.first, k.second, s);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& b) {
  check_same(*rs_, *b.rs_);
  for (auto& [k, s] : b.t_) add(k.first, k.second, -s);
  return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  check_same(*a.rs_, *b.rs_);
  const RootSystem& rs = *a.rs_;
  int M = rs.M();
  // collect per key first, sum once: fewer intermediate gcds
  std::map<DiffOp::Key, std::vector<Scalar>> acc;
  for (auto& [ka, sa] : a.t_)
    for (auto& [kb, sb] : b.t_) {
      // (e^{-b1} T_m1)(e^{-b2} T_m2) = v^{-(b2,m1)} e^{-b1-b2} T_{m1+m2}
      Rat ex = -root_pair(rs, kb.first, ka.second);
      acc[{radd(ka.first, kb.first), wadd(ka.second, kb.second)}].push_back(sa * sb * vpow(ex, M));
    }
  DiffOp r(rs);
  for (auto& [k, v] : acc) {
    Scalar s;
    for (auto& x : v) s += x;
    if (!s.is_zero()) r.t_.emplace(k, s);
  }
  return r;
}

DiffOp DiffOp::scaled(const Scalar& s) const {
  DiffOp r(*rs_);
  if (s.is_zero()) return r;
  for (auto& [k, v] : t_) r.t_.emplace(k, v * s);
  return r;
}

DiffOp DiffOp::map_coeffs(const std::function<Scalar(const Scalar&)>& f) const {
  DiffOp r(*rs_);
  for (auto& [k, v] : t_) r.add(k.first, k.second, f(v));
  return r;
}

bool DiffOp::in_lower() const {
  for (auto& [k, v] : t_)
    if (!in_positive_cone(k.first)) return false;
  return true;
}

DiffOp DiffOp::degree_zero() const {
  DiffOp r(*rs_);
  for (auto& [k, v] : t_)
    if (std::all_of(k.first.begin(), k.first.end(), [](int x) { return x == 0; })) r.t_.emplace(k, v);
  return r;
}

DiffOp DiffOp::conj_exp(const Weight& lambda) const {
  DiffOp r(*rs_);
  for (auto& [k, v] : t_) r.t_.emplace(k, v * vpow(-rs_->pair(lambda, k.second), rs_->M()));
  return r;
}

DiffOp DiffOp::conj_rho(int sign) const {
  Weight l = rs_->rho();
  for (auto& x : l) x *= sign;
  return conj_exp(l);
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

bool commutator_is_zero(const DiffOp& a, const DiffOp& b) { return commutator(a, b).is_zero(); }

nlohmann::json DiffOp::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [k, v] : t_) {
    std::vector<std::string> mu;
    for (auto& x : k.second) mu.push_back(rat_str(x));
    arr.push_back({{"beta", k.first}, {"mu", mu}, {"coeff", v.str()}});
  }
  return arr;
}

DiffOp DiffOp::from_json(const RootSystem& rs, const nlohmann::json& j) {
  DiffOp d(rs);
  for (auto& t : j) {
    RootVec b = t.at("beta").get<RootVec>();
    Weight mu;
    for (auto& x : t.at("mu")) mu.push_back(x.is_string() ? rat_parse(x.get<std::string>()) : Rat(x.get<long long>()));
    d.add(b, mu, Scalar::parse(t.at("coeff").get<std::string>()));
  }
  return d;
}

std::vector<Rat> display_varpi(const RootSystem& rs, const Weight& mu) {
  std::vector<Rat> x = rs.to_varpi(mu);
  if (rs.type() != 'A') return x;
  auto score = [](const std::vector<Rat>& y) {
    int nz = 0;
    Rat l1 = 0;
    for (auto& c : y)
      if (c != 0) ++nz, l1 += c < 0 ? -c : c;
    return std::make_pair(nz, l1);
  };
  std::vector<Rat> best = x;
  for (size_t j = 0; j < x.size(); ++j) {
    std::vector<Rat> y = x;
    Rat s = x[j];
    for (auto& c : y) c -= s;
    if (score(y) < score(best)) best = y;
  }
  return best;
}

namespace {

std::string lin_comb(const std::vector<Rat>& c, const std::string& sym) {
  std::string out;
  for (size_t i = 0; i < c.size(); ++i) {
    Rat x = c[i];
    if (x == 0) continue;
    bool neg = x < 0;
    if (neg) x = -x;
    if (!out.empty() || neg) out += neg ? "-" : "+";
    if (x != 1) {
      if (x.denominator() == 1)
        out += std::to_string(x.numerator());
      else
        out += "\\frac{" + std::to_string(x.numerator()) + "}{" + std::to_string(x.denominator()) + "}";
    }
    out += sym + "_" + std::to_string(i + 1);
  }
  return out;
}

std::string paren_if_sum(const std::string& s) {
  if (s.compare(0, 6, "\\frac{") == 0) return s;
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}') --depth;
    if (i > 0 && depth == 0 && (s[i] == '+' || s[i] == '-')) return "(" + s + ")";
  }
  return s;
}

}  // namespace

std::string DiffOp::latex() const {
  if (t_.empty()) return "0";
  std::string out;
  for (auto& [k, v] : t_) {
    std::string body;
    bool nz_beta = std::any_of(k.first.begin(), k.first.end(), [](int x) { return x != 0; });
    if (nz_beta) {
      std::vector<Rat> nb;
      for (int x : k.first) nb.push_back(-x);
      body += "e^{" + lin_comb(nb, "\\alpha") + "}";
    }
    bool nz_mu = std::any_of(k.second.begin(), k.second.end(), [](const Rat& x) { return x != 0; });
    if (nz_mu) body += "T_{" + lin_comb(display_varpi(*rs_, k.second), "\\varpi") + "}";
    std::string c = v.latex(rs_->M());
    std::string piece;
    if (body.empty())
      piece = c;
    else if (c == "1")
      piece = body;
    else if (c == "-1")
      piece = "-" + body;
    else
      piece = paren_if_sum(c) + " " + body;
    if (!out.empty()) out += piece[0] == '-' ? " " : " + ";
    out += piece;
  }
  return out;
}

std::string DiffOp::str() const {
  std::string out;
  for (auto& [k, v] : t_) {
    if (!out.empty()) out += "\n";
    out += "[" + v.str() + "] e^-(";
    for (size_t i = 0; i < k.first.size(); ++i) out += (i ? "," : "") + std::to_string(k.first[i]);
    out += ") T" + weight_str(k.second);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- series

Scalar FormalSeries::at(const RootVec& beta) const {
  auto it = c_.find(beta);
  return it == c_.end() ? Scalar() : it->second;
}

void FormalSeries::set(const RootVec& beta, const Scalar& s) {
  if (!in_positive_cone(beta)) throw MathError("series index outside Q_+");
  if (height(beta) > D_) return;
  if (s.is_zero())
    c_.erase(beta);
  else
    c_[beta] = s;
}

void FormalSeries::add(const RootVec& beta, const Scalar& s) { set(beta, at(beta) + s); }

FormalSeries FormalSeries::scaled(const Scalar& s) const {
  FormalSeries r(*rs_, D_);
  for (auto& [b, x] : c_) r.set(b, x * s);
  return r;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& b) {
  for (auto& [k, x] : b.c_) add(k, -x);
  return *this;
}

FormalSeries apply(const DiffOp& a, const FormalSeries& f) {
  if (&a.rs() != &f.rs()) throw MathError("operator and series over different root systems");
  if (!a.in_lower()) throw MathError("operator is not in the lower subalgebra");
  const RootSystem& rs = a.rs();
  std::map<RootVec, std::vector<Scalar>> acc;
  for (auto& [k, s] : a.terms()) {
    int hb = height(k.first);
    // T_mu y^{g-lambda} = v^{-(mu,g)} v^{(mu,lambda)} y^{g-lambda}
    Scalar chi = lambda_character(rs, k.second);
    for (auto& [g, x] : f.coeffs()) {
      if (hb + height(g) > f.cutoff()) continue;
      acc[radd(g, k.first)].push_back(s * chi * x * vpow(-root_pair(rs, g, k.second), rs.M()));
    }
  }
  FormalSeries r(rs, f.cutoff());
  for (auto& [b, v] : acc) {
    Scalar s;
    for (auto& x : v) s += x;
    r.set(b, s);
  }
  return r;
}

}  // namespace qtoda
