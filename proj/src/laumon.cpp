#include "qtoda/laumon.hpp"

#include "qtoda/hamiltonians.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace qtoda {

// ---------------------------------------------------------------- fixed points

int FixedPoint::row(int i) const {
  if (i <= 0 || i >= n) return 0;
  int s = 0;
  for (int j = 1; j <= i; ++j) s += at(i, j);
  return s;
}

std::vector<int> FixedPoint::degree() const {
  std::vector<int> r(n - 1);
  for (int i = 1; i < n; ++i) r[i - 1] = row(i);
  return r;
}

int FixedPoint::total() const { return std::accumulate(d.begin(), d.end(), 0); }

bool FixedPoint::valid() const {
  for (int x : d)
    if (x < 0) return false;
  for (int i = 2; i < n; ++i)
    for (int j = 1; j < i; ++j)
      if (at(i - 1, j) < at(i, j)) return false;
  return true;
}

std::string FixedPoint::str() const {
  std::string s = "(";
  for (int i = 1; i < n; ++i) {
    if (i > 1) s += "; ";
    for (int j = 1; j <= i; ++j) s += (j > 1 ? "," : "") + std::to_string(at(i, j));
  }
  return s + ")";
}

std::vector<FixedPoint> enumerate_fixed_points(int n, const std::vector<int>& deg) {
  if (n < 2 || (int)deg.size() != n - 1) throw LaumonError("degree vector must have n-1 entries");
  for (int x : deg)
    if (x < 0) throw LaumonError("negative degree");
  std::vector<FixedPoint> out;
  FixedPoint p{n, std::vector<int>(n * (n - 1) / 2, 0)};
  // fill row i, entry j; entries bounded by the entry above (d_{i-1,j})
  std::function<void(int, int, int)> rec = [&](int i, int j, int left) {
    if (i == n) {
      out.push_back(p);
      return;
    }
    if (j == i) {
      // the last entry of a row has nothing above it
      p.at(i, j) = left;
      rec(i + 1, 1, i + 1 < n ? deg[i] : 0);
      return;
    }
    int cap = p.at(i - 1, j);
    for (int x = 0; x <= std::min(cap, left); ++x) {
      p.at(i, j) = x;
      rec(i, j + 1, left - x);
    }
  };
  rec(1, 1, deg[0]);
  return out;
}

std::vector<std::vector<int>> degrees_up_to(int n, int cutoff) {
  std::vector<std::vector<int>> out;
  std::vector<int> d(n - 1, 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == n - 1) {
      out.push_back(d);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      d[k] = x;
      rec(k + 1, left - x);
    }
  };
  rec(0, cutoff);
  std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) {
    return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
  });
  return out;
}

// ---------------------------------------------------------------- vectors

Scalar GradedVector::at(const FixedPoint& p) const {
  auto it = c.find(p);
  return it == c.end() ? Scalar(0) : it->second;
}

void GradedVector::add(const FixedPoint& p, const Scalar& s) {
  if (s.is_zero()) return;
  auto [it, fresh] = c.emplace(p, s);
  if (!fresh) {
    it->second += s;
    if (it->second.is_zero()) c.erase(it);
  }
}

GradedVector GradedVector::component(const std::vector<int>& deg) const {
  GradedVector r{n, cutoff, {}};
  for (auto& [p, s] : c)
    if (p.degree() == deg) r.c.emplace(p, s);
  return r;
}

GradedVector GradedVector::scaled(const Scalar& s) const {
  GradedVector r{n, cutoff, {}};
  if (s.is_zero()) return r;
  for (auto& [p, x] : c) r.c.emplace(p, x * s);
  return r;
}

GradedVector& GradedVector::operator+=(const GradedVector& o) {
  for (auto& [p, s] : o.c) add(p, s);
  return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& o) {
  for (auto& [p, s] : o.c) add(p, -s);
  return *this;
}

nlohmann::json GradedVector::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (auto& [p, s] : c) j.push_back({{"point", p.str()}, {"d", p.d}, {"coeff", s.str()}});
  return j;
}

std::string op_name(const LOp& op) {
  static const char* names[] = {"E", "F", "L", "K", "e1", "f1", "D"};
  std::string s = names[(int)op.g] + std::string("_") + std::to_string(op.i);
  if (op.power != 1) s += "^" + std::to_string(op.power);
  return s;
}

// ---------------------------------------------------------------- the module

LaumonSpace::LaumonSpace(int n) : n_(n) {
  if (n < 2) throw LaumonError("Laumon space needs n >= 2");
  rs_ = &RootSystem::get('A', n - 1);
  M_ = rs_->M();
  t_.assign(n + 1, Scalar(1));
  Scalar prod(1);
  for (int k = 1; k < n; ++k) {
    t_[k] = Scalar::sym("t_" + std::to_string(k));
    prod *= t_[k];
  }
  t_[n] = prod.inverse();
}

Rat LaumonSpace::ln_shift(int k) const { return Rat(k * (n_ - 1), 2); }

Scalar LaumonSpace::t(int k) const {
  if (k < 1 || k > n_) throw LaumonError("t index out of range");
  return t_[k];
}

Scalar LaumonSpace::s(const FixedPoint& p, int i, int j) const {
  int d = i >= n_ ? 0 : p.at(i, j);
  return t_[j] * t_[j] * v(Rat(-2 * d));
}

Scalar LaumonSpace::u(int k) const {
  if (k <= 0 || k >= n_) return Scalar(1);
  Scalar r = v(Rat(k * (k - 1), 2) - ln_shift(k));
  for (int l = 1; l <= k; ++l) r *= t_[l];
  return r;
}

Scalar LaumonSpace::specialize_u(const Scalar& x, bool displayed) const {
  std::vector<int> uid(n_ - 1), tid(n_);
  for (int k = 1; k < n_; ++k) {
    uid[k - 1] = u_symbol(k - 1);
    tid[k] = symbol("t_" + std::to_string(k));
  }
  int M = M_;
  return x.map_monomials([&](const Monomial& m) {
    Monomial r;
    for (auto [s, e] : m.e) {
      auto it = std::find(uid.begin(), uid.end(), (int)s);
      if (it == uid.end()) {
        r = r * Monomial::var(s, e);
        continue;
      }
      int k = int(it - uid.begin()) + 1;
      Rat ve = Rat(k * (k - 1), 2) - (displayed ? Rat(0) : ln_shift(k));
      r = r * Monomial::var(kQ, e * boost::rational_cast<long long>(ve * Rat(M)));
      for (int l = 1; l <= k; ++l) r = r * Monomial::var(tid[l], e);
    }
    return r;
  });
}

FixedPoint LaumonSpace::origin() const { return FixedPoint{n_, std::vector<int>(n_ * (n_ - 1) / 2, 0)}; }

GradedVector LaumonSpace::vacuum(int cutoff) const {
  GradedVector r{n_, cutoff, {}};
  r.c.emplace(origin(), Scalar(1));
  return r;
}

Scalar LaumonSpace::tweak(LGen g, int i, const FixedPoint& p, Scalar c) const {
  for (auto& b : bad_)
    if (b.g == g && b.i == i && b.at == p) c *= b.factor;
  return c;
}

void LaumonSpace::corrupt(LGen g, int i, const FixedPoint& at, const Scalar& factor) {
  bad_.push_back({g, i, at, factor});
}

static FixedPoint shifted(const FixedPoint& p, int i, int j, int by) {
  FixedPoint q = p;
  q.at(i, j) += by;
  return q;
}

Scalar LaumonSpace::coeff_F(const FixedPoint& p, int i, int j) const {
  if (!shifted(p, i, j, 1).valid()) return Scalar(0);
  Scalar sij = s(p, i, j);
  Scalar c = -(Scalar(1) - v(Rat(2))).inverse() * t_[i].inverse() * v(Rat(p.row(i) - p.row(i - 1) + i)) * sij;
  for (int k = 1; k <= i; ++k)
    if (k != j) c /= Scalar(1) - sij / s(p, i, k);
  for (int k = 1; k <= i - 1; ++k) c *= Scalar(1) - sij / s(p, i - 1, k);
  return tweak(LGen::F, i, p, c);
}

Scalar LaumonSpace::coeff_E(const FixedPoint& p, int i, int j) const {
  if (p.at(i, j) == 0 || !shifted(p, i, j, -1).valid()) return Scalar(0);
  Scalar sij = s(p, i, j);
  Scalar c = (Scalar(1) - v(Rat(2))).inverse() * t_[i + 1].inverse() * v(Rat(p.row(i + 1) - p.row(i) + 1 - i));
  for (int k = 1; k <= i; ++k)
    if (k != j) c /= Scalar(1) - s(p, i, k) / sij;
  for (int k = 1; k <= i + 1; ++k) c *= Scalar(1) - s(p, i + 1, k) / sij;
  return tweak(LGen::E, i, p, c);
}

Scalar LaumonSpace::coeff_e1(const FixedPoint& p, int i, int j) const {
  return v(Rat(i + 2)) * s(p, i, j) * coeff_E(p, i, j);
}

Scalar LaumonSpace::coeff_f1(const FixedPoint& p, int i, int j) const {
  return v(Rat(i)) * s(p, i, j) * coeff_F(p, i, j);
}

Scalar LaumonSpace::eig_L(const FixedPoint& p, int i) const {
  if (i <= 0) return Scalar(1);
  if (i >= n_) return v(Rat(n_ * (n_ - 1), 2));
  Scalar r = v(Rat(-p.row(i)) + Rat(i * (i - 1), 2));
  for (int l = 1; l <= i; ++l) r *= t_[l];
  return r;
}

Scalar LaumonSpace::eig_K(const FixedPoint& p, int i) const {
  return eig_L(p, i) * eig_L(p, i) / (eig_L(p, i - 1) * eig_L(p, i + 1));
}

Scalar LaumonSpace::eig_D(const FixedPoint& p, int i) const {
  Scalar r(1);
  for (int k = 1; k <= i; ++k) {
    int d = p.at(i, k);
    r *= t_[k].pow(2 * (1 - d)) * v(Rat(d * (d - 1)));
  }
  return r;
}

GradedVector LaumonSpace::act(const LOp& op, const GradedVector& x) const {
  if (op.i < 1 || op.i >= n_) throw LaumonError("generator index out of range: " + op_name(op));
  GradedVector r{n_, x.cutoff, {}};
  int i = op.i;
  for (auto& [p, a] : x.c) {
    switch (op.g) {
      case LGen::L:
        r.add(p, a * eig_L(p, i).pow(op.power));
        break;
      case LGen::K:
        r.add(p, a * eig_K(p, i).pow(op.power));
        break;
      case LGen::Dcal:
        r.add(p, a * eig_D(p, i).pow(op.power));
        break;
      case LGen::E:
      case LGen::e1:
        for (int j = 1; j <= i; ++j) {
          Scalar c = op.g == LGen::E ? coeff_E(p, i, j) : coeff_e1(p, i, j);
          if (!c.is_zero()) r.add(shifted(p, i, j, -1), a * c);
        }
        break;
      case LGen::F:
      case LGen::f1:
        if (p.total() + 1 > x.cutoff) throw LaumonError("degree overflow past cutoff " + std::to_string(x.cutoff));
        for (int j = 1; j <= i; ++j) {
          Scalar c = op.g == LGen::F ? coeff_F(p, i, j) : coeff_f1(p, i, j);
          if (!c.is_zero()) r.add(shifted(p, i, j, 1), a * c);
        }
        break;
    }
  }
  return r;
}

GradedVector LaumonSpace::act(const std::vector<LOp>& word, const GradedVector& x) const {
  GradedVector r = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = act(*it, r);
  return r;
}

// ---------------------------------------------------------------- relations

namespace {

GradedVector basis(const LaumonSpace& X, const FixedPoint& p, int cutoff) {
  GradedVector r{X.n(), cutoff, {}};
  r.c.emplace(p, Scalar(1));
  return r;
}

std::vector<FixedPoint> points_up_to(int n, int cutoff) {
  std::vector<FixedPoint> out;
  for (auto& d : degrees_up_to(n, cutoff))
    for (auto& p : enumerate_fixed_points(n, d)) out.push_back(p);
  return out;
}

int cartan_a(int i, int j) { return i == j ? 2 : (std::abs(i - j) == 1 ? -1 : 0); }

}  // namespace

CheckReport relations_check(const LaumonSpace& X, int cutoff) {
  CheckReport rep;
  int n = X.n();
  Scalar v1 = X.v(Rat(1)), vm = X.v(Rat(-1));
  auto check = [&](const GradedVector& a, const GradedVector& b, const std::string& what, const FixedPoint& p) {
    ++rep.checked;
    if (!(a == b)) rep.fail(what + " at " + p.str());
  };
  using W = std::vector<LOp>;
  for (auto& p : points_up_to(n, cutoff)) {
    GradedVector x = basis(X, p, cutoff);
    int room = cutoff - p.total();
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        std::string ij = std::to_string(i) + "," + std::to_string(j);
        check(X.act(W{{LGen::L, i}, {LGen::E, j}, {LGen::L, i, -1}}, x),
              X.act({LGen::E, j}, x).scaled(X.v(Rat(i == j ? 1 : 0))), "L E L^-1 " + ij, p);
        check(X.act(W{{LGen::K, i}, {LGen::E, j}, {LGen::K, i, -1}}, x), X.act({LGen::E, j}, x).scaled(X.v(Rat(cartan_a(i, j)))),
              "K E K^-1 " + ij, p);
        if (room >= 1) {
          check(X.act(W{{LGen::L, i}, {LGen::F, j}, {LGen::L, i, -1}}, x),
                X.act({LGen::F, j}, x).scaled(X.v(Rat(i == j ? -1 : 0))), "L F L^-1 " + ij, p);
          check(X.act(W{{LGen::K, i}, {LGen::F, j}, {LGen::K, i, -1}}, x),
                X.act({LGen::F, j}, x).scaled(X.v(Rat(-cartan_a(i, j)))), "K F K^-1 " + ij, p);
          GradedVector lhs = X.act(W{{LGen::E, i}, {LGen::F, j}}, x);
          lhs -= X.act(W{{LGen::F, j}, {LGen::E, i}}, x);
          GradedVector rhs{n, cutoff, {}};
          if (i == j) {
            rhs = X.act({LGen::K, i}, x);
            rhs -= X.act({LGen::K, i, -1}, x);
            rhs = rhs.scaled((v1 - vm).inverse());
          }
          check(lhs, rhs, "[E,F] " + ij, p);
        }
        if (i == j) continue;
        auto serre = [&](LGen g) {
          GradedVector lhs{n, cutoff, {}};
          if (cartan_a(i, j) == 0) {
            lhs = X.act(W{{g, i}, {g, j}}, x);
            lhs -= X.act(W{{g, j}, {g, i}}, x);
          } else {
            lhs = X.act(W{{g, i}, {g, i}, {g, j}}, x);
            lhs += X.act(W{{g, j}, {g, i}, {g, i}}, x);
            lhs -= X.act(W{{g, i}, {g, j}, {g, i}}, x).scaled(v1 + vm);
          }
          check(lhs, GradedVector{n, cutoff, {}}, std::string(g == LGen::E ? "E" : "F") + " Serre " + ij, p);
        };
        serre(LGen::E);
        if (room >= (cartan_a(i, j) == 0 ? 2 : 3)) serre(LGen::F);
      }
  }
  return rep;
}

// ---------------------------------------------------------------- path models

namespace {

// L_k^p as an op; L_0 and L_n are scalars handled by the caller
void push_L(std::vector<LOp>& w, Scalar& scal, const LaumonSpace& X, int k, int p) {
  if (p == 0 || k <= 0) return;
  if (k >= X.n()) {
    scal *= X.v(Rat(p * X.n() * (X.n() - 1), 2));
    return;
  }
  w.push_back({LGen::L, k, p});
}

// (gamma, omega_k) with omega_0 = omega_n = 0
int gk(const RootVec& g, int k, int n) { return k <= 0 || k >= n ? 0 : g[k - 1]; }

// frak v^{(i)}(gamma)
Scalar edge_weight(const LaumonSpace& X, const RootVec& g, int i) {
  int n = X.n();
  Scalar sum(0);
  for (int k = 0; k < n; ++k) {
    Scalar a = (X.u(k + 1) / X.u(k)).pow(2) * X.v(Rat(n - 2 * k - 1));
    sum += a - a * X.v(Rat(-2 * (gk(g, k + 1, n) - gk(g, k, n))));
  }
  Scalar vv = X.v(Rat(1)) - X.v(Rat(-1));
  Scalar tau = X.u(i - 1) / X.u(i + 1) * X.v(Rat(2 * i - n - (gk(g, i - 1, n) - gk(g, i + 1, n))));
  return tau * sum / (vv * vv);
}

GradedVector path_sum(const LaumonSpace& X, const std::vector<int>& a, int cutoff) {
  int n = X.n();
  std::map<RootVec, GradedVector> V;
  V[RootVec(n - 1, 0)] = X.vacuum(cutoff);
  GradedVector out{n, cutoff, {}};
  Scalar step = X.v(Rat(1)) / (Scalar(1) - X.v(Rat(2)));
  for (auto& g : degrees_up_to(n, cutoff)) {
    int h = std::accumulate(g.begin(), g.end(), 0);
    if (h > 0) {
      GradedVector acc{n, cutoff, {}};
      for (int i = 1; i < n; ++i) {
        if (g[i - 1] == 0) continue;
        RootVec prev = g;
        --prev[i - 1];
        // f_i = L_i L_{i+1}^{-1} F_i, or v^{-i} L_i L_{i+1}^{-1} f_{i,1}
        std::vector<LOp> w;
        Scalar scal = a[i - 1] ? X.v(Rat(-i)) : Scalar(1);
        push_L(w, scal, X, i, 1);
        push_L(w, scal, X, i + 1, -1);
        w.push_back({a[i - 1] ? LGen::f1 : LGen::F, i});
        GradedVector y = X.act(w, V.at(prev)).scaled(scal);
        acc += y.scaled(edge_weight(X, g, i).inverse());
      }
      V[g] = acc;
    }
    out += V[g].scaled(step.pow(h));
  }
  return out;
}

Scalar a_prefactor(const LaumonSpace& X, const std::vector<int>& a) {
  Scalar r(1);
  for (int i = 1; i < X.n(); ++i)
    if (a[i - 1])
      for (int l = 1; l <= i; ++l) r *= X.t(l).pow(-2);
  return r;
}

void check_a(const LaumonSpace& X, const std::vector<int>& a) {
  if ((int)a.size() != X.n() - 1) throw LaumonError("a must have n-1 entries");
  for (int x : a)
    if (x != 0 && x != 1) throw LaumonError("a entries must be 0 or 1");
}

std::vector<LOp> D_a(const std::vector<int>& a, int sign) {
  std::vector<LOp> w;
  for (int i = 1; i <= (int)a.size(); ++i)
    if (a[i - 1]) w.push_back({LGen::Dcal, i, -sign});
  return w;
}

}  // namespace

GradedVector path_model_vector(const LaumonSpace& X, const std::vector<int>& a, int cutoff) {
  check_a(X, a);
  return path_sum(X, a, cutoff);
}

GradedVector k_a_from_D(const LaumonSpace& X, const std::vector<int>& a, int cutoff) {
  check_a(X, a);
  GradedVector k = path_sum(X, std::vector<int>(X.n() - 1, 0), cutoff);
  return X.act(D_a(a, 1), k).scaled(a_prefactor(X, a).inverse());
}

namespace {

// every fixed point strictly below the cutoff
bool below(const FixedPoint& p, int cutoff) { return p.total() < cutoff; }

void compare_below(CheckReport& rep, const GradedVector& lhs, const GradedVector& rhs, int cutoff,
                   const std::string& what) {
  std::map<FixedPoint, bool> seen;
  for (auto& [p, s] : lhs.c) seen[p] = true;
  for (auto& [p, s] : rhs.c) seen[p] = true;
  for (auto& [p, _] : seen) {
    if (!below(p, cutoff)) continue;
    ++rep.checked;
    if (!(lhs.at(p) == rhs.at(p))) rep.fail(what + " at " + p.str());
  }
}

}  // namespace

CheckReport eigen_property_check(const LaumonSpace& X, int cutoff, bool b) {
  CheckReport rep;
  int n = X.n();
  GradedVector k = path_model_vector(X, std::vector<int>(n - 1, 0), cutoff);
  for (int i = 1; i < n; ++i) {
    std::vector<LOp> w;
    Scalar scal(1);
    w.push_back({b ? LGen::e1 : LGen::E, i});
    if (b) push_L(w, scal, X, i - 1, 2);
    push_L(w, scal, X, i, b ? -3 : -1);
    push_L(w, scal, X, i + 1, 1);
    GradedVector lhs = X.act(w, k).scaled(scal);
    Scalar c = X.v(Rat(b ? 5 - i : 1)) / (Scalar(1) - X.v(Rat(2)));
    compare_below(rep, lhs, k.scaled(c), cutoff, std::string(b ? "(b)" : "(a)") + " i=" + std::to_string(i));
  }
  return rep;
}

CheckReport d_conjugacy_check(const LaumonSpace& X, int cutoff) {
  CheckReport rep;
  int n = X.n();
  auto cmp = [&](const GradedVector& l, const GradedVector& r, const std::string& what, const FixedPoint& p) {
    ++rep.checked;
    if (!(l == r)) rep.fail(what + " at " + p.str());
  };
  std::vector<std::vector<int>> all_a;
  for (int m = 0; m < (1 << (n - 1)); ++m) {
    std::vector<int> a(n - 1);
    for (int i = 0; i < n - 1; ++i) a[i] = (m >> i) & 1;
    all_a.push_back(a);
  }
  for (auto& p : points_up_to(n, cutoff)) {
    GradedVector x = basis(X, p, cutoff);
    bool up = p.total() < cutoff;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        std::string ij = std::to_string(i) + "," + std::to_string(j);
        GradedVector l = X.act(std::vector<LOp>{{LGen::Dcal, i}, {LGen::E, j}, {LGen::Dcal, i, -1}}, x);
        cmp(l, i == j ? X.act({LGen::e1, i}, x).scaled(X.v(Rat(-i))) : X.act({LGen::E, j}, x), "D e D^-1 " + ij, p);
      }
    for (auto& a : all_a) {
      std::string as;
      for (int x : a) as += char('0' + x);
      for (int i = 1; i < n; ++i) {
        std::vector<LOp> w = D_a(a, -1);
        w.push_back({LGen::E, i});
        for (auto& o : D_a(a, 1)) w.push_back(o);
        GradedVector r = a[i - 1] ? X.act({LGen::e1, i}, x).scaled(X.v(Rat(-i))) : X.act({LGen::E, i}, x);
        cmp(X.act(w, x), r, "(D^a)^-1 e D^a a=" + as + " i=" + std::to_string(i), p);
        if (!up) continue;
        w = D_a(a, 1);
        w.push_back({LGen::F, i});
        for (auto& o : D_a(a, -1)) w.push_back(o);
        r = a[i - 1] ? X.act({LGen::f1, i}, x).scaled(X.v(Rat(-i))) : X.act({LGen::F, i}, x);
        cmp(X.act(w, x), r, "D^a f (D^a)^-1 a=" + as + " i=" + std::to_string(i), p);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- Whittaker vectors

std::vector<int> a_from_triple(const RootSystem& rs, const Triple& T, int a1) {
  if (rs.type() != 'A') throw LaumonError("geometric Whittaker vectors need type A");
  if (a1 != 0 && a1 != 1) throw LaumonError("a_1 must be 0 or 1");
  int r = rs.rank();
  std::vector<int> a(r, a1);
  for (int i = 2; i <= r; ++i) {
    int e = T.eps[i - 2][i - 1];
    if (e != 1 && e != -1) throw LaumonError("orientation entry eps_{i-1,i} must be +-1");
    a[i - 1] = (1 + e) / 2;
    if (1 - T.n[i - 2][i - 1] + T.n[i - 1][i - 2] != 2 * a[i - 1])
      throw LaumonError("n is inconsistent with eps at i=" + std::to_string(i));
  }
  return a;
}

Triple triple_from_a(const LaumonSpace& X, const std::vector<int>& a) {
  check_a(X, a);
  int r = X.n() - 1;
  IMat eps(r, std::vector<int>(r, 0)), nn(r, std::vector<int>(r, 0));
  std::vector<Scalar> c(r);
  for (int i = 1; i <= r; ++i) {
    if (i < r) {
      eps[i - 1][i] = 2 * a[i] - 1;
      eps[i][i - 1] = -eps[i - 1][i];
    }
    for (int j = 1; j <= r; ++j)
      nn[i - 1][j - 1] = (j == i + 1) - (1 + 2 * a[i - 1]) * (j == i) + 2 * a[i - 1] * (j == i - 1);
    c[i - 1] = X.v(Rat(1 + a[i - 1] * (4 - 2 * i))) / (Scalar(1) - X.v(Rat(2)));
    // the relation carries L_{i+1}, a scalar for i = n-1
    if (i == r) c[i - 1] /= X.eig_L(X.origin(), X.n());
  }
  return validate_triple(X.rs(), eps, nn, c);
}

Scalar X_constant(const LaumonSpace& X, const Triple& T, const std::vector<int>& a, const std::vector<int>& deg) {
  int n = X.n();
  auto d = [&](int i) { return i >= 1 && i < n ? deg[i - 1] : 0; };
  auto aa = [&](int i) { return i >= 1 && i < n ? a[i - 1] : 0; };
  auto nn = [&](int i, int p) { return T.n[i - 1][p - 1]; };
  Scalar r(1);
  Scalar w = Scalar(1) - X.v(Rat(2));
  for (int i = 1; i < n; ++i) r *= (w * T.c[i - 1]).pow(d(i));
  for (int p = 1; p < n; ++p) {
    long e = -2 * aa(p);
    for (int i = 1; i < n; ++i) e -= d(i) * nn(i, p);
    for (int l = 1; l <= p; ++l) r *= X.t(l).pow(e);
    r *= X.t(p).pow(d(p - 1) - 2 * aa(p) * d(p));
  }
  // the p = n factor t_n^{d_{n-1}}; without it e_{n-1} theta = c_{n-1} t_n^{-1} theta
  r *= X.t(n).pow(d(n - 1));
  long ve = 0;
  for (int i = 1; i < n; ++i) {
    ve += (nn(i, i) + i) * d(i) - 2 * aa(i + 1) * d(i) * d(i + 1) +
          (long)d(i) * (d(i) - 1) / 2 * (nn(i, i) + 2 * aa(i) + 1);
    for (int j = i + 1; j < n; ++j) ve += nn(j, i) * d(i) * d(j);
    for (int p = 1; p < n; ++p) ve -= (long)p * (p - 1) / 2 * d(i) * nn(i, p);
  }
  return r * X.v(Rat(ve));
}

GradedVector geometric_whittaker(const LaumonSpace& X, const Triple& T, int cutoff, int a1) {
  std::vector<int> a = a_from_triple(X.rs(), T, a1);
  GradedVector k = path_sum(X, std::vector<int>(X.n() - 1, 0), cutoff);
  GradedVector D = X.act(D_a(a, 1), k);
  GradedVector out{X.n(), cutoff, {}};
  std::map<std::vector<int>, Scalar> cache;
  for (auto& [p, s] : D.c) {
    auto deg = p.degree();
    auto it = cache.find(deg);
    if (it == cache.end()) it = cache.emplace(deg, X_constant(X, T, a, deg)).first;
    out.add(p, s * it->second);
  }
  return out;
}

CheckReport whittaker_check(const LaumonSpace& X, const Triple& T, const GradedVector& theta) {
  CheckReport rep;
  int n = X.n();
  for (int i = 1; i < n; ++i) {
    std::vector<LOp> w{{LGen::E, i}};
    Scalar scal(1);
    for (int p = 1; p < n; ++p) push_L(w, scal, X, p, T.n[i - 1][p - 1]);
    GradedVector lhs = X.act(w, theta).scaled(scal);
    compare_below(rep, lhs, theta.scaled(T.c[i - 1]), theta.cutoff, "e_" + std::to_string(i) + " theta");
  }
  return rep;
}

CheckReport feigin_relation_check(const LaumonSpace& X, const std::vector<int>& a, int cutoff) {
  return whittaker_check(X, triple_from_a(X, a), path_model_vector(X, a, cutoff));
}

std::pair<Scalar, Scalar> residue_sides(const LaumonSpace& X, const FixedPoint& p, int i, int a) {
  Scalar lhs(0);
  for (int j = 1; j <= i; ++j) {
    Scalar sij = X.s(p, i, j);
    Scalar term = sij.pow(a);
    for (int k = 1; k <= i - 1; ++k) term *= Scalar(1) - sij / X.s(p, i - 1, k);
    for (int k = 1; k <= i; ++k)
      if (k != j) term /= Scalar(1) - sij / X.s(p, i, k);
    lhs += term;
  }
  Scalar rhs = (X.t(i).pow(2) * X.v(Rat(2 * p.row(i - 1) - 2 * p.row(i)))).pow(a);
  return {lhs, rhs};
}

CheckReport residues_check(const LaumonSpace& X, int cutoff) {
  CheckReport rep;
  for (auto& p : points_up_to(X.n(), cutoff))
    for (int i = 1; i < X.n(); ++i)
      for (int a = 0; a <= 1; ++a) {
        auto [l, r] = residue_sides(X, p, i, a);
        ++rep.checked;
        if (!(l == r)) rep.fail("residues i=" + std::to_string(i) + " a=" + std::to_string(a) + " at " + p.str());
      }
  return rep;
}

// ---------------------------------------------------------------- Shapovalov form

namespace {

// solve A x = b (A square, nonsingular) over the fraction field
std::vector<Scalar> solve_square(std::vector<std::vector<Scalar>> A, std::vector<Scalar> b) {
  int N = (int)A.size();
  for (int c = 0; c < N; ++c) {
    int piv = -1;
    for (int r = c; r < N; ++r)
      if (!A[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw LaumonError("singular Gram matrix");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    Scalar inv = A[c][c].inverse();
    for (int r = 0; r < N; ++r) {
      if (r == c || A[r][c].is_zero()) continue;
      Scalar f = A[r][c] * inv;
      for (int k = c; k < N; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int c = 0; c < N; ++c) b[c] /= A[c][c];
  return b;
}

int rank_of(std::vector<std::vector<Scalar>> rows) {
  int rank = 0, cols = rows.empty() ? 0 : (int)rows[0].size();
  for (int c = 0; c < cols && rank < (int)rows.size(); ++c) {
    int piv = -1;
    for (int r = rank; r < (int)rows.size(); ++r)
      if (!rows[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int r = rank + 1; r < (int)rows.size(); ++r) {
      if (rows[r][c].is_zero()) continue;
      Scalar f = rows[r][c] / rows[rank][c];
      for (int k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<int>> multiset_words(const std::vector<int>& deg) {
  std::vector<int> letters;
  for (int i = 0; i < (int)deg.size(); ++i) letters.insert(letters.end(), deg[i], i + 1);
  std::vector<std::vector<int>> out;
  do out.push_back(letters);
  while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

}  // namespace

Shapovalov::Shapovalov(const LaumonSpace& X, const std::vector<int>& deg) : X_(&X), deg_(deg) {
  pts_ = enumerate_fixed_points(X.n(), deg);
  int N = (int)pts_.size(), h = std::accumulate(deg.begin(), deg.end(), 0);
  std::vector<std::vector<Scalar>> rows;
  for (auto& w : multiset_words(deg)) {
    if ((int)words_.size() == N) break;
    std::vector<LOp> ops;
    for (int i : w) ops.push_back({LGen::F, i});
    GradedVector img = X.act(ops, X.vacuum(h));
    std::vector<Scalar> row;
    for (auto& p : pts_) row.push_back(img.at(p));
    rows.push_back(row);
    if (rank_of(rows) < (int)rows.size()) {
      rows.pop_back();
      continue;
    }
    words_.push_back(w);
  }
  if ((int)words_.size() < N) throw LaumonError("F-words do not span the degree component");
  phi_.assign(N, std::vector<Scalar>(N));
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) phi_[r][c] = rows[c][r];
  gram_.assign(N, std::vector<Scalar>(N));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      // (F_w 1, F_w' 1) = vacuum coefficient of E_{w_k} ... E_{w_1} F_w' 1
      std::vector<LOp> ops;
      for (int k = (int)words_[a].size() - 1; k >= 0; --k) ops.push_back({LGen::E, words_[a][k]});
      for (int i : words_[b]) ops.push_back({LGen::F, i});
      gram_[a][b] = X.act(ops, X.vacuum(h)).at(X.origin());
    }
}

std::vector<Scalar> Shapovalov::coords(const GradedVector& x) const {
  std::vector<Scalar> b;
  for (auto& p : pts_) b.push_back(x.at(p));
  return solve_square(phi_, b);
}

Scalar Shapovalov::pair(const GradedVector& x, const GradedVector& y) const {
  auto a = coords(x), b = coords(y);
  Scalar r(0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r += a[i] * gram_[i][j] * b[j];
  }
  return r;
}

Scalar shapovalov(const LaumonSpace& X, const GradedVector& x, const GradedVector& y) {
  std::map<std::vector<int>, bool> degs;
  for (auto& [p, s] : x.c) degs[p.degree()] = true;
  Scalar r(0);
  for (auto& [d, _] : degs) {
    GradedVector yd = y.component(d);
    if (yd.is_zero()) continue;
    r += Shapovalov(X, d).pair(x.component(d), yd);
  }
  return r;
}

// ---------------------------------------------------------------- geometric J

std::map<RootVec, Scalar> geometric_pairings(const LaumonSpace& X, const Triple& plus, const Triple& minus, int cutoff) {
  GradedVector tp = geometric_whittaker(X, plus, cutoff), tm = geometric_whittaker(X, minus, cutoff);
  std::map<RootVec, Scalar> out;
  for (auto& d : degrees_up_to(X.n(), cutoff)) out[d] = Shapovalov(X, d).pair(tp.component(d), tm.component(d));
  return out;
}

Scalar true_character_factor(const LaumonSpace& X, const Triple& T, int i) {
  Rat e = 0;
  for (int p = 1; p < X.n(); ++p) e += X.ln_shift(p) * T.n[i - 1][p - 1];
  return X.v(-e);
}

TriplePair geometric_pair(const LaumonSpace& X, const Triple& plus, const Triple& minus, bool true_characters) {
  Triple p = plus, m = minus;
  if (true_characters)
    for (int i = 1; i < X.n(); ++i) {
      p.c[i - 1] *= true_character_factor(X, plus, i);
      m.c[i - 1] *= true_character_factor(X, minus, i);
    }
  for (auto& row : m.eps)
    for (auto& x : row) x = -x;
  for (auto& row : m.n)
    for (auto& x : row) x = -x;
  return make_pair(X.rs(), p, m);
}

namespace {

std::vector<RootVec> eigen_failures(const LaumonSpace& X, const TriplePair& P, const std::map<RootVec, Scalar>& pr,
                                    const Scalar& eig, int cutoff, bool displayed_u) {
  FormalSeries G(X.rs(), cutoff);
  for (auto& [b, s] : pr) G.set(b, s);
  FormalSeries lhs = apply(build_D1_closed(P).conj_rho(-1), G);
  std::vector<RootVec> bad;
  for (auto& [b, s] : pr)
    if (!(X.specialize_u(lhs.at(b), displayed_u) == eig * s)) bad.push_back(b);
  return bad;
}

}  // namespace

GeometricJResult geometric_J_eigencheck(const LaumonSpace& X, const Triple& plus, const Triple& minus, int cutoff) {
  GeometricJResult res;
  int n = X.n();
  res.pairings = geometric_pairings(X, plus, minus, cutoff);
  Scalar sum_t2(0);
  for (int i = 1; i <= n; ++i) sum_t2 += X.t(i).pow(2);

  TriplePair P = geometric_pair(X, plus, minus, true);
  res.eigenvalue = sum_t2;
  res.failures = eigen_failures(X, P, res.pairings, res.eigenvalue, cutoff, false);
  res.eigen_ok = res.failures.empty();

  FormalSeries J = j_function(j_tilde_closed(P, cutoff));
  Scalar p0 = res.pairings.at(RootVec(n - 1, 0));
  res.matches_abstract = true;
  for (auto& [b, s] : res.pairings)
    if (!(X.specialize_u(J.at(b)) * p0 == s)) res.matches_abstract = false;

  // as displayed: untouched characters, u_i = v^{i(i-1)/2} t_1..t_i, eigenvalue v^{n-1} sum t_i^2
  TriplePair L = geometric_pair(X, plus, minus, false);
  res.literal_ok = eigen_failures(X, L, res.pairings, X.v(Rat(n - 1)) * sum_t2, cutoff, true).empty();
  return res;
}

}  // namespace qtoda

