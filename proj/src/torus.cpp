#include "qtoda/torus.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <numeric>

namespace qtoda {

namespace {

std::vector<IVec> delta_table(int n, int scale) {
  std::vector<IVec> e(n, IVec(n, 0));
  for (int i = 0; i < n; ++i) e[i][i] = scale;
  return e;
}

int isum(const IVec& x) { return std::accumulate(x.begin(), x.end(), 0); }

}  // namespace

TorusSpec TorusSpec::plain(int n, int M) {
  if (n < 1) throw MathError("torus needs n >= 1");
  TorusSpec s;
  s.name = "A_" + std::to_string(n);
  s.n = n;
  s.M = M;
  s.e = delta_table(n, 1);
  return s;
}

TorusSpec TorusSpec::C_in_A(int n, int M) {
  TorusSpec s = plain(n, M);
  s.name = "C_" + std::to_string(n);
  s.lattice = Lattice::even;
  return s;
}

TorusSpec TorusSpec::for_root_system(const RootSystem& rs) {
  TorusSpec s;
  s.rs_type = rs.type();
  s.rs_rank = rs.rank();
  s.M = rs.M();
  s.n = rs.varpi_dim();
  switch (rs.type()) {
    case 'A':
      s.name = "Abar_" + std::to_string(s.n);
      s.central = true;
      s.lattice = Lattice::diff;
      break;
    case 'C':
    case 'D':
      s.name = "C_" + std::to_string(s.n);
      if (rs.type() == 'D') s.wden = 2;
      s.lattice = Lattice::even;
      break;
    case 'B':
      s.name = "A2_" + std::to_string(s.n);  // A_n with D_i w_i = v^2 w_i D_i
      s.wden = 2;
      break;
    case 'G':
      s.name = "G_2";
      break;
    default:
      throw MathError("no torus for " + rs.tag());
  }
  for (int i = 0; i < s.n; ++i) s.gamma.push_back(rs.type() == 'G' ? rs.alpha(i) : rs.varpi(i));
  if (rs.type() == 'A') {
    // (varpi_i, varpi_j) = delta - 1/n; the 1/n drops out on the sum-zero D-lattice
    s.e = delta_table(s.n, 1);
    return s;
  }
  s.e.assign(s.n, IVec(s.n, 0));
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      Rat x = rs.pair(s.gamma[i], rs.varpi(j));
      if (x.denominator() != 1) throw MathError("non-integral torus commutation exponent");
      s.e[i][j] = (int)x.numerator();
    }
  return s;
}

const RootSystem* TorusSpec::root_system() const {
  if (!rs_type) return nullptr;
  return &RootSystem::get(rs_type, rs_rank);
}

bool TorusSpec::d_allowed(const IVec& b) const {
  if ((int)b.size() != n) return false;
  switch (lattice) {
    case Lattice::full: return true;
    case Lattice::diff: return isum(b) == 0;
    case Lattice::even: return isum(b) % 2 == 0;
  }
  return false;
}

// ---------------------------------------------------------------- elements

const TorusSpec& TorusElement::intern(const TorusSpec& s) {
  static std::mutex mu;
  static std::deque<TorusSpec> table;
  std::lock_guard lk(mu);
  for (auto& t : table)
    if (&t == &s) return t;
  for (auto& t : table)
    if (t == s) return t;
  table.push_back(s);
  return table.back();
}

TorusElement TorusElement::scalar(const TorusSpec& s, const Scalar& c) {
  return monomial(s, IVec(s.n, 0), IVec(s.n, 0), c);
}

TorusElement TorusElement::monomial(const TorusSpec& s, const IVec& a, const IVec& b, const Scalar& c) {
  TorusElement x(s);
  x.add(a, b, c);
  return x;
}

TorusElement TorusElement::w(const TorusSpec& s, int j, int k) {
  IVec a(s.n, 0);
  a.at(j - 1) = k;
  return monomial(s, a, IVec(s.n, 0));
}

TorusElement TorusElement::D(const TorusSpec& s, int i, int k) {
  IVec b(s.n, 0);
  b.at(i - 1) = k;
  TorusElement x(s);
  // single D generators may lie outside the sublattice; only the check in add() guards products
  x.t_[{IVec(s.n, 0), b}] = Scalar(1);
  return x;
}

Scalar TorusElement::coeff(const IVec& a, const IVec& b) const {
  IVec aa = a;
  if (spec_->central && !aa.empty()) {
    int last = aa.back();
    for (auto& x : aa) x -= last;
  }
  auto it = t_.find({aa, b});
  return it == t_.end() ? Scalar() : it->second;
}

void TorusElement::add(IVec a, const IVec& b, const Scalar& c) {
  if ((int)a.size() != spec_->n || (int)b.size() != spec_->n) throw MathError("torus exponent of wrong length");
  if (!spec_->d_allowed(b)) throw MathError("D-exponent outside the " + spec_->name + " sublattice");
  if (c.is_zero()) return;
  if (spec_->central) {
    int last = a.back();
    for (auto& x : a) x -= last;
  }
  auto [it, fresh] = t_.try_emplace({std::move(a), b}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

TorusElement& TorusElement::operator+=(const TorusElement& o) {
  if (spec_ != o.spec_) throw MathError("torus elements from different algebras");
  for (auto& [k, c] : o.t_) add(k.first, k.second, c);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& o) {
  if (spec_ != o.spec_) throw MathError("torus elements from different algebras");
  for (auto& [k, c] : o.t_) add(k.first, k.second, -c);
  return *this;
}

TorusElement operator*(const TorusElement& x, const TorusElement& y) {
  if (x.spec_ != y.spec_) throw MathError("torus elements from different algebras");
  const TorusSpec& s = *x.spec_;
  TorusElement out(s);
  int n = s.n;
  for (auto& [kx, cx] : x.t_)
    for (auto& [ky, cy] : y.t_) {
      // w^a D^b w^a' D^b' = v^{sum b_i e_ij a'_j} w^{a+a'} D^{b+b'}
      long long ex = 0;
      for (int i = 0; i < n; ++i)
        if (kx.second[i])
          for (int j = 0; j < n; ++j) ex += (long long)kx.second[i] * s.e[i][j] * ky.first[j];
      IVec a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a[i] = kx.first[i] + ky.first[i];
        b[i] = kx.second[i] + ky.second[i];
      }
      Scalar c = cx * cy;
      if (ex) c *= vpow(Rat(ex, s.wden), s.M);
      if (s.central) {
        int last = a.back();
        for (auto& t : a) t -= last;
      }
      auto [it, fresh] = out.t_.try_emplace({std::move(a), std::move(b)}, c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) out.t_.erase(it);
      }
    }
  return out;
}

TorusElement TorusElement::scaled(const Scalar& c) const {
  TorusElement out(*spec_);
  if (c.is_zero()) return out;
  for (auto& [k, v] : t_) out.t_[k] = v * c;
  return out;
}

TorusElement TorusElement::map_coeffs(const std::function<Scalar(const Scalar&)>& f) const {
  TorusElement out(*spec_);
  for (auto& [k, v] : t_) {
    Scalar c = f(v);
    if (!c.is_zero()) out.t_[k] = c;
  }
  return out;
}

TorusElement commutator(const TorusElement& a, const TorusElement& b) { return a * b - b * a; }

TorusElement monomial_inverse(const TorusElement& m) {
  if (m.size() != 1) throw MathError("monomial_inverse needs a single term");
  auto& [k, c] = *m.terms().begin();
  const TorusSpec& s = m.spec();
  IVec a = k.first, b = k.second;
  for (auto& x : a) x = -x;
  for (auto& x : b) x = -x;
  // (w^a D^b)^{-1} = D^{-b} w^{-a} = v^{sum b_i e_ij a_j} w^{-a} D^{-b}
  long long ex = 0;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) ex += (long long)k.second[i] * s.e[i][j] * k.first[j];
  return TorusElement::monomial(s, a, b, c.inverse() * vpow(Rat(ex, s.wden), s.M));
}

TorusElement invert_generators(const TorusElement& x) {
  const TorusSpec& s = x.spec();
  TorusElement out(s);
  for (auto& [k, c] : x.terms()) {
    // w^a D^b -> w^{-a} D^{-b}: the normal order is kept, so no reordering factor
    IVec a = k.first, b = k.second;
    for (auto& t : a) t = -t;
    for (auto& t : b) t = -t;
    out.add(a, b, c);
  }
  return out;
}

TorusElement convert(const TorusElement& x, const TorusSpec& target) {
  const TorusSpec& s = x.spec();
  if (s.n != target.n || s.e != target.e || s.wden != target.wden) throw MathError("convert: " + s.name + " and " + target.name + " differ");
  if (target.M % s.M) throw MathError("convert: cannot rescale v");
  int k = target.M / s.M;
  TorusElement out(target);
  for (auto& [key, c] : x.terms()) {
    Scalar cc = k == 1 ? c : c.map_monomials([k](const Monomial& m) {
      Monomial r = m;
      for (auto& [sym, ex] : r.e)
        if (sym == kQ) ex *= k;
      return r;
    });
    out.add(key.first, key.second, cc);
  }
  return out;
}

bool in_subalgebra(const TorusElement& x, const TorusSpec& sub) {
  for (auto& [k, c] : x.terms())
    if (!sub.d_allowed(k.second)) return false;
  return true;
}

DiffOp to_difference_operator(const TorusElement& x) {
  const TorusSpec& s = x.spec();
  const RootSystem* rs = s.root_system();
  if (!rs) throw MathError(s.name + " carries no anti-isomorphism");
  DiffOp out(*rs);
  for (auto& [k, c] : x.terms()) {
    Weight g = rs->zero(), mu = rs->zero();
    for (int i = 0; i < s.n; ++i) {
      if (k.second[i])
        for (int t = 0; t < rs->rank(); ++t) g[t] += Rat(k.second[i]) * s.gamma[i][t];
      if (k.first[i]) {
        Weight vp = rs->varpi(i);
        for (int t = 0; t < rs->rank(); ++t) mu[t] -= Rat(k.first[i], s.wden) * vp[t];
      }
    }
    // same coefficient: the torus v is the root system's v
    out.add(rs->to_root(g), mu, c);
  }
  return out;
}

TorusElement from_difference_operator(const DiffOp& d) {
  const RootSystem& rs = d.rs();
  TorusSpec s = TorusSpec::for_root_system(rs);
  TorusElement out(s);
  for (auto& [k, c] : d.terms()) {
    IVec a(s.n), b(s.n);
    std::vector<Rat> x = rs.to_varpi(k.second);
    for (int j = 0; j < s.n; ++j) {
      Rat y = -x[j] * Rat(s.wden);
      if (y.denominator() != 1) throw MathError("T-shift " + weight_str(k.second) + " not in the w-lattice");
      a[j] = (int)y.numerator();
    }
    if (rs.type() == 'G') {
      b = k.first;
    } else {
      std::vector<Rat> y = rs.to_varpi(rs.root_weight(k.first));
      for (int j = 0; j < s.n; ++j) {
        if (y[j].denominator() != 1) throw MathError("root shift not in the D-lattice");
        b[j] = (int)y[j].numerator();
      }
      if (rs.type() == 'A') {  // varpi coordinates are only defined modulo (1,...,1)
        int t = isum(b);
        if (t % s.n) throw MathError("root shift not in the D-lattice");
        for (auto& x : b) x -= t / s.n;
      }
    }
    out.add(a, b, c);
  }
  return out;
}

// ---------------------------------------------------------------- text and json

std::string TorusElement::str() const {
  if (t_.empty()) return "0";
  std::string out;
  for (auto& [k, c] : t_) {
    if (!out.empty()) out += " + ";
    out += "[" + c.str() + "]";
    for (int i = 0; i < spec_->n; ++i)
      if (k.first[i]) out += " w" + std::to_string(i + 1) + "^" + rat_str(Rat(k.first[i], spec_->wden));
    for (int i = 0; i < spec_->n; ++i)
      if (k.second[i]) out += " D" + std::to_string(i + 1) + "^" + std::to_string(k.second[i]);
  }
  return out;
}

TorusElement TorusElement::parse(const TorusSpec& s, const std::string& text) {
  TorusElement out(s);
  size_t i = 0;
  auto ws = [&] {
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw MathError("torus parse error at " + std::to_string(i) + ": " + why);
  };
  ws();
  if (text.compare(i, std::string::npos, "0") == 0) return out;
  while (true) {
    ws();
    if (i >= text.size()) break;
    if (text[i] == '+') {
      ++i;
      continue;
    }
    Scalar c(1);
    if (text[i] == '[') {
      int depth = 0;
      size_t j = i;
      for (; j < text.size(); ++j) {
        if (text[j] == '[') ++depth;
        if (text[j] == ']' && --depth == 0) break;
      }
      if (j >= text.size()) fail("unclosed '['");
      c = Scalar::parse(text.substr(i + 1, j - i - 1));
      i = j + 1;
    }
    IVec a(s.n, 0), b(s.n, 0);
    while (true) {
      ws();
      if (i >= text.size() || (text[i] != 'w' && text[i] != 'D')) break;
      char g = text[i++];
      size_t st = i;
      while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
      if (st == i) fail("generator index expected");
      int idx = std::stoi(text.substr(st, i - st));
      if (idx < 1 || idx > s.n) fail("generator index out of range");
      Rat ex = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        st = i;
        if (i < text.size() && text[i] == '-') ++i;
        while (i < text.size() && (std::isdigit((unsigned char)text[i]) || text[i] == '/')) ++i;
        if (st == i || (i == st + 1 && text[st] == '-')) fail("exponent expected");
        ex = rat_parse(text.substr(st, i - st));
      }
      if (g == 'w') ex *= Rat(s.wden);
      if (ex.denominator() != 1) fail("exponent outside the lattice");
      (g == 'w' ? a : b)[idx - 1] += (int)ex.numerator();
    }
    out.add(a, b, c);
  }
  return out;
}

nlohmann::json TorusElement::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [k, c] : t_) {
    std::vector<std::string> a;
    for (int x : k.first) a.push_back(rat_str(Rat(x, spec_->wden)));
    arr.push_back({{"w", a}, {"D", k.second}, {"coeff", c.str()}});
  }
  return {{"algebra", spec_->name}, {"M", spec_->M}, {"terms", arr}};
}

TorusElement TorusElement::from_json(const TorusSpec& s, const nlohmann::json& j) {
  if (j.contains("algebra") && j.at("algebra").get<std::string>() != s.name)
    throw MathError("json torus element belongs to " + j.at("algebra").get<std::string>());
  TorusElement out(s);
  for (auto& t : j.at("terms")) {
    IVec a;
    for (auto& x : t.at("w")) {
      Rat r = (x.is_string() ? rat_parse(x.get<std::string>()) : Rat(x.get<long long>())) * Rat(s.wden);
      if (r.denominator() != 1) throw MathError("json w-exponent outside the lattice");
      a.push_back((int)r.numerator());
    }
    out.add(a, t.at("D").get<IVec>(), Scalar::parse(t.at("coeff").get<std::string>()));
  }
  return out;
}

}  // namespace qtoda
