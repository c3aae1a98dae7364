#include "qtoda/lax.hpp"

#include <sstream>

namespace qtoda {

// ---------------------------------------------------------------- spectral polynomials

SpectralPoly SpectralPoly::term(const TorusElement& c, int z2, int w2) {
  SpectralPoly p(c.spec());
  p.add(z2, w2, c);
  return p;
}

TorusElement SpectralPoly::coeff(int z2, int w2) const {
  auto it = c_.find({z2, w2});
  return it == c_.end() ? TorusElement(*spec_) : it->second;
}

void SpectralPoly::add(int z2, int w2, const TorusElement& c) {
  if (&c.spec() != spec_) throw MathError("spectral coefficient from a different torus");
  if (c.is_zero()) return;
  auto [it, fresh] = c_.try_emplace({z2, w2}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

SpectralPoly& SpectralPoly::operator+=(const SpectralPoly& o) {
  for (auto& [k, c] : o.c_) add(k.first, k.second, c);
  return *this;
}

SpectralPoly& SpectralPoly::operator-=(const SpectralPoly& o) {
  for (auto& [k, c] : o.c_) add(k.first, k.second, c.scaled(Scalar(-1)));
  return *this;
}

SpectralPoly operator*(const SpectralPoly& a, const SpectralPoly& b) {
  SpectralPoly out(*a.spec_);
  for (auto& [ka, ca] : a.c_)
    for (auto& [kb, cb] : b.c_) out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return out;
}

SpectralPoly SpectralPoly::scaled(const Scalar& s) const {
  SpectralPoly out(*spec_);
  for (auto& [k, c] : c_) out.add(k.first, k.second, c.scaled(s));
  return out;
}

SpectralPoly SpectralPoly::z_to_w() const {
  SpectralPoly out(*spec_);
  for (auto& [k, c] : c_) {
    if (k.second) throw MathError("z_to_w on a polynomial already involving w");
    out.add(0, k.first, c);
  }
  return out;
}

LaxMatrix operator*(const LaxMatrix& a, const LaxMatrix& b) {
  LaxMatrix r{{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
               a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
  return r;
}

Rat Monodromy::s() const {
  if (dbl) return Rat(-n());
  Rat t = 0;
  for (int x : k) t += Rat(x - 1, 2);
  return t;
}

// ---------------------------------------------------------------- local Lax matrices

namespace {

// c * w_i^a D_i^b z^{z2/2}
SpectralPoly mono(const TorusSpec& s, int i, int a, int b, int z2, const Scalar& c = Scalar(1)) {
  IVec wa(s.n, 0), db(s.n, 0);
  wa[i - 1] = a * s.wden;
  db[i - 1] = b;
  return SpectralPoly::term(TorusElement::monomial(s, wa, db, c), z2, 0);
}

}  // namespace

LaxMatrix local_lax(const TorusSpec& s, int i, int k, bool barred) {
  if (i < 1 || i > s.n) throw MathError("Lax index out of range");
  if (s.lattice != TorusSpec::Lattice::full) throw MathError("local Lax matrices live on the full torus");
  SpectralPoly zero(s);
  // the barred matrices are the unbarred ones with w_i, D_i inverted; both are written out
  int x = barred ? -1 : 1;
  switch (k) {
    case -1:
      return LaxMatrix{{mono(s, i, -x, 0, 0) - mono(s, i, x, 0, -2), mono(s, i, x, -x, 0),
                        mono(s, i, x, x, -2, Scalar(-1)), mono(s, i, x, 0, 0)}};
    case 0:
      return LaxMatrix{{mono(s, i, -x, 0, 1) - mono(s, i, x, 0, -1), mono(s, i, 0, -x, 1),
                        mono(s, i, 0, x, -1, Scalar(-1)), zero}};
    case 1:
      return LaxMatrix{{mono(s, i, -x, 0, 2) - mono(s, i, x, 0, 0), mono(s, i, -x, -x, 2),
                        mono(s, i, -x, x, 0, Scalar(-1)), mono(s, i, -x, 0, 0, Scalar(-1))}};
  }
  throw MathError("k must be -1, 0 or 1");
}

namespace {

void check_k(const std::vector<int>& k) {
  if (k.empty()) throw MathError("empty k-vector");
  for (int x : k)
    if (x < -1 || x > 1) throw MathError("k entries must lie in {-1,0,1}");
}

}  // namespace

Monodromy monodromy(const std::vector<int>& k, int M) {
  check_k(k);
  int n = (int)k.size();
  TorusSpec s = TorusSpec::plain(n, M);
  LaxMatrix T = local_lax(s, n, k[n - 1], false);
  for (int i = n - 1; i >= 1; --i) T = T * local_lax(s, i, k[i - 1], false);
  return Monodromy{T, k, false};
}

Monodromy double_monodromy(const std::vector<int>& k, int M) {
  check_k(k);
  int n = (int)k.size();
  TorusSpec s = TorusSpec::plain(n, M);
  LaxMatrix T = local_lax(s, 1, -k[0], true);
  for (int i = 2; i <= n; ++i) T = T * local_lax(s, i, -k[i - 1], true);
  for (int i = n; i >= 1; --i) T = T * local_lax(s, i, k[i - 1], false);
  return Monodromy{T, k, true};
}

// ---------------------------------------------------------------- RTT

bool rtt_check(const LaxMatrix& T) {
  const TorusSpec& s = T.m[0].spec();
  int M = s.M;
  using Mat4 = std::array<SpectralPoly, 16>;
  auto zero4 = [&] {
    Mat4 r{SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s),
           SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s),
           SpectralPoly(s), SpectralPoly(s), SpectralPoly(s), SpectralPoly(s)};
    return r;
  };
  auto mul4 = [&](const Mat4& a, const Mat4& b) {
    Mat4 r = zero4();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int t = 0; t < 4; ++t)
          if (!a[4 * i + t].is_zero() && !b[4 * t + j].is_zero()) r[4 * i + j] += a[4 * i + t] * b[4 * t + j];
    return r;
  };
  TorusElement one = TorusElement::scalar(s, 1);
  auto sc = [&](const Scalar& c, int z2, int w2) { return SpectralPoly::term(one.scaled(c), z2, w2); };
  Scalar v = vpow(1, M), vi = vpow(-1, M);
  // w (v z/w - v^{-1}) R(z/w) = (v z - v^{-1} w) R(z/w)
  Mat4 R = zero4();
  SpectralPoly diag = sc(v, 2, 0) - sc(vi, 0, 2);
  SpectralPoly zw = sc(1, 2, 0) - sc(1, 0, 2);
  R[0] = diag;
  R[15] = diag;
  R[5] = zw;
  R[10] = zw;
  R[6] = sc(v - vi, 2, 0);
  R[9] = sc(v - vi, 0, 2);
  // index (a,b) -> 2a+b with a the first auxiliary space
  Mat4 T1 = zero4(), T2 = zero4();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          if (b == d) T1[4 * (2 * a + b) + (2 * c + d)] = T.m[2 * a + c];
          if (a == c) T2[4 * (2 * a + b) + (2 * c + d)] = T.m[2 * b + d].z_to_w();
        }
  Mat4 lhs = mul4(mul4(R, T1), T2), rhs = mul4(mul4(T2, T1), R);
  return lhs == rhs;
}

// ---------------------------------------------------------------- hamiltonians

SpectralPoly trace_combination(const Monodromy& T, const Scalar& eps) {
  return T.T.at(1, 1) + T.T.at(2, 2).scaled(eps);
}

namespace {

TorusElement normalized_coeff(const Monodromy& T, const Scalar& eps, int shift) {
  SpectralPoly p = trace_combination(T, eps);
  Rat s = T.s();
  int z2 = (int)(2 * (s + Rat(shift))).numerator();
  TorusElement c = p.coeff(z2);
  if (T.dbl) return c;
  const TorusSpec& sp = c.spec();
  IVec a(sp.n, sp.wden), b(sp.n, 0);
  Scalar sign = T.n() % 2 ? Scalar(-1) : Scalar(1);
  TorusElement pre = TorusElement::monomial(sp, a, b, sign);
  return monomial_inverse(pre) * c;
}

}  // namespace

TorusElement extract_H1(const Monodromy& T, const Scalar& eps) { return normalized_coeff(T, eps, 0); }

TorusElement extract_H2(const Monodromy& T, const Scalar& eps) {
  return normalized_coeff(T, eps, 1).scaled(Scalar(-1));
}

TorusElement extract_H(const Monodromy& T, const Scalar& eps, int r) {
  TorusElement c = normalized_coeff(T, eps, r);
  return r % 2 ? c.scaled(Scalar(-1)) : c;
}

bool coefficients_commute(const SpectralPoly& p, int max_power) {
  std::vector<TorusElement> cs;
  int lowest = p.terms().empty() ? 0 : p.terms().begin()->first.first;
  for (auto& [k, c] : p.terms()) {
    if (k.second) throw MathError("coefficients_commute expects a polynomial in z only");
    if (max_power >= 0 && k.first - lowest > 2 * max_power) break;
    cs.push_back(c);
  }
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i + 1; j < cs.size(); ++j)
      if (!commutator(cs[i], cs[j]).is_zero()) return false;
  return true;
}

bool commuting_coefficients_check(const Monodromy& T, const Scalar& eps, int max_power) {
  return coefficients_commute(trace_combination(T, eps), max_power);
}

namespace {

// w_lo^{e(lo)} ... w_hi^{e(hi)} as an exponent vector (1-based indices)
struct Builder {
  TorusSpec s;
  int n;
  TorusElement out;
  explicit Builder(int n_, int M) : s(TorusSpec::plain(n_, M)), n(n_), out(s) {}
  void add(const std::map<int, int>& w, const std::map<int, int>& D, const Scalar& c = Scalar(1)) {
    IVec a(n, 0), b(n, 0);
    for (auto [i, e] : w) a[i - 1] += e;
    for (auto [i, e] : D) b[i - 1] += e;
    out.add(a, b, c);
  }
};

}  // namespace

TorusElement mixed_H2(const std::vector<int>& kv, const Scalar& eps, int M) {
  check_k(kv);
  int n = (int)kv.size();
  auto k = [&](int i) { return kv[i - 1]; };
  auto ones = [&](int lo, int hi, int val) {  // k_lo = ... = k_hi = val (vacuous if lo > hi)
    for (int t = lo; t <= hi; ++t)
      if (k(t) != val) return false;
    return true;
  };
  Builder B(n, M);
  for (int j = 1; j <= n; ++j) B.add({{j, -2}}, {});
  for (int i = 1; i < n; ++i) B.add({{i, -k(i) - 1}, {i + 1, -k(i + 1) - 1}}, {{i, 1}, {i + 1, -1}});
  for (int i = 1; i <= n; ++i)
    for (int j = i + 2; j <= n; ++j) {
      if (!ones(i + 1, j - 1, 1)) continue;
      std::map<int, int> w;
      for (int t = i; t <= j; ++t) w[t] = -k(t) - 1;
      B.add(w, {{i, 1}, {j, -1}});
    }
  if (!eps.is_zero()) {
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        if (!ones(1, i - 1, 1) || !ones(j + 1, n, 1)) continue;
        std::map<int, int> w;
        for (int t = 1; t <= i; ++t) w[t] = -k(t) - 1;
        for (int t = j; t <= n; ++t) w[t] = -k(t) - 1;
        B.add(w, {{j, 1}, {i, -1}}, eps);
      }
    for (int j = 1; j <= n; ++j) {
      if (k(j) != -1) continue;
      bool rest = true;
      for (int t = 1; t <= n; ++t)
        if (t != j && k(t) != 1) rest = false;
      if (!rest) continue;
      std::map<int, int> w;
      for (int t = 1; t <= n; ++t)
        if (t != j) w[t] = -2;
      B.add(w, {}, eps);
    }
  }
  return B.out;
}

TorusElement closed_H1(const std::vector<int>& kv, const Scalar& eps, int M) {
  check_k(kv);
  int n = (int)kv.size();
  Builder B(n, M);
  B.add({}, {});
  bool all1 = true;
  for (int x : kv) all1 = all1 && x == 1;
  if (all1) {
    std::map<int, int> w;
    for (int t = 1; t <= n; ++t) w[t] = -2;
    B.add(w, {}, eps);
  }
  return B.out;
}

TorusElement double_mixed_H2(const std::vector<int>& kv, const Scalar& eps, int M) {
  check_k(kv);
  int n = (int)kv.size();
  auto k = [&](int i) { return kv[i - 1]; };
  auto run = [&](int lo, int hi, int val) {
    for (int t = lo; t <= hi; ++t)
      if (k(t) != val) return false;
    return true;
  };
  Scalar v = vpow(1, M);
  Builder B(n, M);
  for (int i = 1; i <= n; ++i) {
    B.add({{i, 2}}, {});
    B.add({{i, -2}}, {});
  }
  for (int i = 1; i < n; ++i) {
    B.add({{i, -k(i) - 1}, {i + 1, -k(i + 1) - 1}}, {{i, 1}, {i + 1, -1}});
    B.add({{i, -k(i) + 1}, {i + 1, -k(i + 1) + 1}}, {{i, 1}, {i + 1, -1}});
  }
  B.add({{n, -2 * k(n)}}, {{n, 2}}, v.pow(-k(n)));
  for (int sg : {1, -1}) {
    // sg = 1: exponents -k-1 and v^{-1} on D_i D_n; sg = -1: -k+1 and v
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!run(i + 1, j, sg)) continue;
        std::map<int, int> w;
        for (int t = i; t <= j + 1; ++t) w[t] = -k(t) - sg;
        B.add(w, {{i, 1}, {j + 1, -1}});
      }
    for (int i = 1; i < n; ++i) {
      if (!run(i + 1, n, sg)) continue;
      std::map<int, int> w;
      for (int t = i; t <= n; ++t) w[t] = -k(t) - sg;
      B.add(w, {{i, 1}, {n, 1}}, v.pow(-sg));
    }
  }
  if (!eps.is_zero()) {
    if (n == 1 && k(1) != 0) B.add({{1, -2 * k(1)}}, {}, eps);
    B.add({{1, -2 * k(1)}}, {{1, -2}}, eps * v.pow(k(1)));
    std::map<int, int> Dn1{{n, 1}};
    Dn1[1] -= 1;
    if (run(1, n, 1)) {
      std::map<int, int> w;
      for (int t = 1; t <= n; ++t) w[t] = -2;
      B.add(w, Dn1, eps);
    }
    if (run(1, n, -1)) {
      std::map<int, int> w;
      for (int t = 1; t <= n; ++t) w[t] = 2;
      B.add(w, Dn1, eps);
    }
    for (int sg : {1, -1})
      for (int i = 1; i < n; ++i) {
        if (!run(1, i, sg)) continue;
        std::map<int, int> w;
        for (int t = 1; t <= i + 1; ++t) w[t] = -k(t) - sg;
        std::map<int, int> D{{1, -1}};
        D[i + 1] -= 1;
        B.add(w, D, eps * v.pow(sg));
      }
  }
  return B.out;
}

std::vector<std::vector<int>> all_k_vectors(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(n, -1);
  while (true) {
    out.push_back(k);
    int i = 0;
    while (i < n && k[i] == 1) k[i++] = -1;
    if (i == n) break;
    ++k[i];
  }
  return out;
}

std::vector<int> parse_k_vector(const std::string& s) {
  std::vector<int> k;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    int x = std::stoi(tok, &used);
    if (used != tok.size() || x < -1 || x > 1) throw MathError("bad k-vector entry '" + tok + "'");
    k.push_back(x);
  }
  if (k.empty()) throw MathError("empty k-vector");
  return std::vector<int>(k.rbegin(), k.rend());
}

std::string k_vector_str(const std::vector<int>& k) {
  std::string out;
  for (auto it = k.rbegin(); it != k.rend(); ++it) out += (out.empty() ? "" : ",") + std::to_string(*it);
  return "(" + out + ")";
}

}  // namespace qtoda
