#include "qtoda/cartan.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace qtoda {

bool in_positive_cone(const RootVec& b) {
  for (int x : b)
    if (x < 0) return false;
  return true;
}

int height(const RootVec& b) { return std::accumulate(b.begin(), b.end(), 0); }

namespace {

using RMat = std::vector<std::vector<Rat>>;

RMat rzeros(int r, int c) { return RMat(r, std::vector<Rat>(c, Rat(0))); }

Rat vdot(const RMat& g, const std::vector<Rat>& x, const std::vector<Rat>& y) {
  Rat s = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) s += x[i] * g[i][j] * y[j];
  }
  return s;
}

}  // namespace

RootSystem RootSystem::build(char type, int n) {
  RootSystem rs;
  rs.type_ = type;
  rs.n_ = n;
  int dim = n;
  switch (type) {
    case 'A':
      if (n < 1) throw MathError("A_n needs n >= 1");
      dim = n + 1;
      break;
    case 'B':
    case 'C':
      if (n < 2) throw MathError(std::string(1, type) + "_n needs n >= 2");
      break;
    case 'D':
      if (n < 3) throw MathError("D_n needs n >= 3");
      break;
    case 'G':
      if (n != 2) throw MathError("G_2 only");
      break;
    default:
      throw MathError(std::string("unsupported type ") + type);
  }
  rs.vgram_ = rzeros(dim, dim);
  rs.alpha_v_ = rzeros(n, dim);
  rs.omega_v_ = rzeros(n, dim);
  auto& G = rs.vgram_;
  auto& al = rs.alpha_v_;
  auto& om = rs.omega_v_;

  // shared pieces: alpha_i = varpi_i - varpi_{i+1}, omega_i = varpi_1 + ... + varpi_i
  auto chain = [&](int upto) {
    for (int i = 0; i < upto; ++i) {
      al[i][i] = 1;
      al[i][i + 1] = -1;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i && j < dim; ++j) om[i][j] = 1;
  };

  if (type == 'A') {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) G[i][j] = Rat(i == j ? 1 : 0) - Rat(1, dim);
    chain(n);
  } else if (type == 'C') {
    for (int i = 0; i < dim; ++i) G[i][i] = 1;
    chain(n - 1);
    al[n - 1][n - 1] = 2;
  } else if (type == 'B') {
    for (int i = 0; i < dim; ++i) G[i][i] = 2;
    chain(n - 1);
    al[n - 1][n - 1] = 1;
    for (int j = 0; j < n; ++j) om[n - 1][j] = Rat(1, 2);
  } else if (type == 'D') {
    for (int i = 0; i < dim; ++i) G[i][i] = 1;
    chain(n - 1);
    al[n - 1][n - 2] = 1;
    al[n - 1][n - 1] = 1;
    for (int j = 0; j < n; ++j) {
      om[n - 2][j] = Rat(j == n - 1 ? -1 : 1, 2);
      om[n - 1][j] = Rat(1, 2);
    }
  } else {  // G2
    G[0][0] = G[1][1] = 2;
    G[0][1] = G[1][0] = -1;
    al[0] = {1, 0};
    al[1] = {-1, 1};
    om[0] = {1, 1};
    om[1] = {1, 2};
  }

  rs.d_.assign(n, 0);
  rs.a_.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    Rat l = vdot(G, al[i], al[i]) / 2;
    if (l.denominator() != 1) throw MathError("bad root length");
    rs.d_[i] = (int)l.numerator();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat x = vdot(G, al[i], al[j]) / rs.d_[i];
      if (x.denominator() != 1) throw MathError("bad cartan entry");
      rs.a_[i][j] = (int)x.numerator();
    }
  rs.gram_ = rzeros(n, n);
  long long N = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rs.gram_[i][j] = vdot(G, om[i], om[j]);
      N = std::lcm(N, rs.gram_[i][j].denominator());
    }
  rs.N_ = (int)N;
  return rs;
}

RootSystem RootSystem::parse(const std::string& tag) {
  if (tag.size() < 2 || !std::isalpha((unsigned char)tag[0])) throw MathError("bad root system tag '" + tag + "'");
  char t = (char)std::toupper((unsigned char)tag[0]);
  int r = 0;
  for (size_t i = 1; i < tag.size(); ++i) {
    if (!std::isdigit((unsigned char)tag[i]) || r > 1000) throw MathError("bad root system tag '" + tag + "'");
    r = r * 10 + (tag[i] - '0');
  }
  return build(t, r);
}

const RootSystem& RootSystem::get(char type, int rank) {
  static std::mutex mu;
  static std::map<std::pair<char, int>, std::unique_ptr<RootSystem>> cache;
  std::lock_guard lk(mu);
  auto& slot = cache[{type, rank}];
  if (!slot) slot = std::make_unique<RootSystem>(build(type, rank));
  return *slot;
}

const RootSystem& RootSystem::get(const std::string& tag) {
  RootSystem r = parse(tag);
  return get(r.type(), r.rank());
}

std::string RootSystem::tag() const { return std::string(1, type_) + std::to_string(n_); }

Weight RootSystem::omega(int i) const {
  Weight w = zero();
  w.at(i) = 1;
  return w;
}

Weight RootSystem::alpha(int j) const {
  Weight w = zero();
  for (int i = 0; i < n_; ++i) w[i] = a_[i][j];
  return w;
}

Weight RootSystem::rho() const { return Weight(n_, Rat(1)); }

Weight RootSystem::root_weight(const RootVec& b) const {
  if ((int)b.size() != n_) throw MathError("root vector of wrong length");
  Weight w = zero();
  for (int j = 0; j < n_; ++j)
    if (b[j])
      for (int i = 0; i < n_; ++i) w[i] += Rat(a_[i][j] * b[j]);
  return w;
}

RootVec RootSystem::to_root(const Weight& w) const {
  RootVec b(n_, 0);
  for (int j = 0; j < n_; ++j) {
    Rat x = pair(w, omega(j)) / d_[j];
    if (x.denominator() != 1) throw MathError("weight " + weight_str(w) + " is not in the root lattice");
    b[j] = (int)x.numerator();
  }
  return b;
}

Rat RootSystem::pair(const Weight& x, const Weight& y) const {
  if ((int)x.size() != n_ || (int)y.size() != n_) throw MathError("weight of wrong length");
  return vdot(gram_, x, y);
}

Weight RootSystem::from_varpi(const std::vector<Rat>& x) const {
  if ((int)x.size() != varpi_dim()) throw MathError("varpi vector of wrong length");
  Weight w = zero();
  for (int i = 0; i < n_; ++i) w[i] = vdot(vgram_, x, alpha_v_[i]) / d_[i];
  return w;
}

Weight RootSystem::varpi(int j) const {
  std::vector<Rat> x(varpi_dim(), Rat(0));
  x.at(j) = 1;
  return from_varpi(x);
}

std::vector<Rat> RootSystem::to_varpi(const Weight& w) const {
  std::vector<Rat> x(varpi_dim(), Rat(0));
  for (int i = 0; i < n_; ++i)
    if (w[i] != 0)
      for (int j = 0; j < varpi_dim(); ++j) x[j] += w[i] * omega_v_[i][j];
  return x;
}

std::string weight_str(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i].numerator();
    if (w[i].denominator() != 1) os << '/' << w[i].denominator();
  }
  os << ')';
  return os.str();
}

}  // namespace qtoda
