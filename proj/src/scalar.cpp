#include "qtoda/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace qtoda {

// ---------------------------------------------------------------- symbols

namespace {

struct SymbolTable {
  std::mutex mu;
  std::vector<std::string> names{"q"};
  std::unordered_map<std::string, int> index{{"q", 0}};
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

bool valid_symbol_name(const std::string& name) {
  if (name.empty() || !(std::isalpha((unsigned char)name[0]) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) { return std::isalnum((unsigned char)ch) || ch == '_'; });
}

int symbol(const std::string& name) {
  if (!valid_symbol_name(name)) throw MathError("bad symbol name '" + name + "'");
  auto& t = table();
  std::lock_guard lk(t.mu);
  auto it = t.index.find(name);
  if (it != t.index.end()) return it->second;
  if (t.names.size() >= 65535) throw MathError("symbol table full");
  int id = (int)t.names.size();
  t.names.push_back(name);
  t.index.emplace(name, id);
  return id;
}

const std::string& symbol_name(int id) {
  auto& t = table();
  std::lock_guard lk(t.mu);
  return t.names.at(id);
}

SymbolKind symbol_kind(int id) { return id == kQ ? SymbolKind::deformation : SymbolKind::parameter; }

int symbol_count() {
  auto& t = table();
  std::lock_guard lk(t.mu);
  return (int)t.names.size();
}

// ---------------------------------------------------------------- monomials

Monomial Monomial::var(int s, int32_t k) {
  Monomial m;
  if (k != 0) m.e.emplace_back((uint16_t)s, k);
  return m;
}

int32_t Monomial::exp(int s) const {
  for (auto& [v, k] : e) {
    if (v == s) return k;
    if (v > s) break;
  }
  return 0;
}

Monomial Monomial::inverse() const {
  Monomial r = *this;
  for (auto& x : r.e) x.second = -x.second;
  return r;
}

Monomial Monomial::without(int s) const {
  Monomial r;
  for (auto& x : e)
    if (x.first != s) r.e.push_back(x);
  return r;
}

bool Monomial::nonnegative() const {
  return std::all_of(e.begin(), e.end(), [](auto& x) { return x.second > 0; });
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.e.empty()) return b;
  if (b.e.empty()) return a;
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.e.size() && j < b.e.size()) {
    if (a.e[i].first < b.e[j].first) {
      r.e.push_back(a.e[i++]);
    } else if (b.e[j].first < a.e[i].first) {
      r.e.push_back(b.e[j++]);
    } else {
      int32_t k = a.e[i].second + b.e[j].second;
      if (k != 0) r.e.emplace_back(a.e[i].first, k);
      ++i, ++j;
    }
  }
  for (; i < a.e.size(); ++i) r.e.push_back(a.e[i]);
  for (; j < b.e.size(); ++j) r.e.push_back(b.e[j]);
  return r;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.e.size() && j < b.e.size()) {
    if (a.e[i].first < b.e[j].first) return a.e[i].second > 0 ? 1 : -1;
    if (b.e[j].first < a.e[i].first) return b.e[j].second > 0 ? -1 : 1;
    if (a.e[i].second != b.e[j].second) return a.e[i].second > b.e[j].second ? 1 : -1;
    ++i, ++j;
  }
  if (i < a.e.size()) return a.e[i].second > 0 ? 1 : -1;
  if (j < b.e.size()) return b.e[j].second > 0 ? -1 : 1;
  return 0;
}

namespace {

template <class F>
Monomial mono_combine(const Monomial& a, const Monomial& b, F f) {
  Monomial r;
  std::size_t i = 0, j = 0;
  auto push = [&](uint16_t s, int32_t k) {
    if (k != 0) r.e.emplace_back(s, k);
  };
  while (i < a.e.size() || j < b.e.size()) {
    if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) {
      push(a.e[i].first, f(a.e[i].second, 0)), ++i;
    } else if (i == a.e.size() || b.e[j].first < a.e[i].first) {
      push(b.e[j].first, f(0, b.e[j].second)), ++j;
    } else {
      push(a.e[i].first, f(a.e[i].second, b.e[j].second)), ++i, ++j;
    }
  }
  return r;
}

}  // namespace

Monomial mono_min(const Monomial& a, const Monomial& b) {
  return mono_combine(a, b, [](int32_t x, int32_t y) { return std::min(x, y); });
}
Monomial mono_max(const Monomial& a, const Monomial& b) {
  return mono_combine(a, b, [](int32_t x, int32_t y) { return std::max(x, y); });
}

// ---------------------------------------------------------------- polynomials

Poly::Poly(long c) {
  if (c != 0) t_.push_back({Monomial(), Coef(c)});
}

Poly::Poly(const Coef& c) {
  if (c != 0) t_.push_back({Monomial(), c});
}

Poly Poly::monomial(const Monomial& m, const Coef& c) {
  Poly p;
  if (c != 0) p.t_.push_back({m, c});
  return p;
}

Coef Poly::constant_term() const {
  for (auto& t : t_)
    if (t.m.is_one()) return t.c;
  return 0;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return mono_cmp(a.m, b.m) > 0; });
  Poly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().m == t.m) {
      p.t_.back().c += t.c;
      if (p.t_.back().c == 0) p.t_.pop_back();
    } else if (t.c != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

namespace {

template <bool Sub>
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b) {
  std::vector<Poly::Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = mono_cmp(a[i].m, b[j].m);
    if (c > 0) {
      r.push_back(a[i++]);
    } else if (c < 0) {
      r.push_back(b[j++]);
      if constexpr (Sub) r.back().c = -r.back().c;
    } else {
      Coef s = Sub ? Coef(a[i].c - b[j].c) : Coef(a[i].c + b[j].c);
      if (s != 0) r.push_back({a[i].m, std::move(s)});
      ++i, ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) {
    r.push_back(b[j]);
    if constexpr (Sub) r.back().c = -r.back().c;
  }
  return r;
}

}  // namespace

Poly& Poly::operator+=(const Poly& b) {
  if (b.t_.empty()) return *this;
  if (t_.empty()) return *this = b;
  t_ = merge_terms<false>(t_, b.t_);
  return *this;
}

Poly& Poly::operator-=(const Poly& b) {
  if (b.t_.empty()) return *this;
  t_ = merge_terms<true>(t_, b.t_);
  return *this;
}

Poly Poly::scaled(const Coef& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::shifted(const Monomial& m) const {
  if (m.is_one()) return *this;
  Poly r = *this;
  for (auto& t : r.t_) t.m = t.m * m;  // order preserved: lex order is a group order
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.t_.empty() || b.t_.empty()) return Poly();
  const Poly& s = a.t_.size() <= b.t_.size() ? a : b;
  const Poly& l = a.t_.size() <= b.t_.size() ? b : a;
  if (s.t_.size() == 1) {
    Poly r = l.shifted(s.t_[0].m);
    if (s.t_[0].c != 1)
      for (auto& t : r.t_) t.c *= s.t_[0].c;
    return r;
  }
  std::vector<Poly::Term> out;
  out.reserve(s.t_.size() * l.t_.size());
  for (auto& x : s.t_)
    for (auto& y : l.t_) out.push_back({x.m * y.m, x.c * y.c});
  return Poly::from_terms(std::move(out));
}

Poly Poly::pow(unsigned k) const {
  Poly r(1), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (!(a.t_[i].m == b.t_[i].m) || a.t_[i].c != b.t_[i].c) return false;
  return true;
}

Monomial Poly::min_monomial() const {
  if (t_.empty()) return Monomial();
  Monomial r = t_[0].m;
  for (auto& t : t_) r = mono_min(r, t.m);
  return r;
}

Monomial Poly::max_monomial() const {
  if (t_.empty()) return Monomial();
  Monomial r = t_[0].m;
  for (auto& t : t_) r = mono_max(r, t.m);
  return r;
}

int32_t Poly::min_exp(int s) const {
  if (t_.empty()) return 0;
  int32_t r = t_[0].m.exp(s);
  for (auto& t : t_) r = std::min(r, t.m.exp(s));
  return r;
}

int32_t Poly::max_exp(int s) const {
  if (t_.empty()) return 0;
  int32_t r = t_[0].m.exp(s);
  for (auto& t : t_) r = std::max(r, t.m.exp(s));
  return r;
}

std::vector<int> Poly::symbols() const {
  std::vector<int> r;
  for (auto& t : t_)
    for (auto& [s, k] : t.m.e) r.push_back(s);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

Coef Poly::content() const {
  if (t_.empty()) return 1;
  mpz_class g = 0, l = 1;
  for (auto& t : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
  }
  Coef c(g, l);
  c.canonicalize();
  if (t_[0].c < 0) c = -c;
  return c;
}

Poly Poly::map_monomials(const std::function<Monomial(const Monomial&)>& f) const {
  std::vector<Term> out;
  out.reserve(t_.size());
  for (auto& t : t_) out.push_back({f(t.m), t.c});
  return from_terms(std::move(out));
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MathError("division by zero polynomial");
  if (a.is_zero()) return Poly();
  if (b.is_monomial()) return a.shifted(b.lead().m.inverse()).scaled(1 / b.lead().c);
  // Every quotient exponent lies in a box, and the quotient's lowest term is
  // fixed; both bounds make the loop terminate on Laurent input.
  Monomial lo = a.min_monomial() / b.min_monomial();
  Monomial hi = a.max_monomial() / b.max_monomial();
  std::vector<int> vars = a.symbols();
  {
    auto vb = b.symbols();
    vars.insert(vars.end(), vb.begin(), vb.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }
  for (int s : vars)
    if (lo.exp(s) > hi.exp(s)) return std::nullopt;
  const Monomial tail = a.terms().back().m / b.terms().back().m;
  const Monomial& lb = b.lead().m;
  const Coef& lc = b.lead().c;
  std::vector<Poly::Term> qt;
  Poly r = a;
  while (!r.is_zero()) {
    Monomial m = r.lead().m / lb;
    if (mono_cmp(m, tail) < 0) return std::nullopt;
    for (int s : vars) {
      int32_t k = m.exp(s);
      if (k < lo.exp(s) || k > hi.exp(s)) return std::nullopt;
    }
    for (auto& [s, k] : m.e)
      if (!std::binary_search(vars.begin(), vars.end(), (int)s)) return std::nullopt;
    Coef c = r.lead().c / lc;
    r -= b.shifted(m).scaled(c);
    qt.push_back({std::move(m), std::move(c)});
  }
  return Poly::from_terms(std::move(qt));
}

Poly normalize_unit(const Poly& p, Poly* unit_num, Monomial* unit_mono, Coef* unit_c) {
  Monomial m = p.min_monomial();
  Poly r = p.shifted(m.inverse());
  Coef c = r.content();
  r = r.scaled(1 / c);
  if (unit_mono) *unit_mono = m;
  if (unit_c) *unit_c = c;
  if (unit_num) *unit_num = Poly::monomial(m, c);
  return r;
}

// ---------------------------------------------------------------- gcd

namespace {

using UP = std::vector<Poly>;  // coefficient of x^k at index k

Poly strip(const Poly& p) { return p.shifted(p.min_monomial().inverse()); }

void trim(UP& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

UP to_up(const Poly& p, int x) {
  std::vector<std::vector<Poly::Term>> buckets(p.max_exp(x) + 1);
  for (auto& t : p.terms()) buckets[t.m.exp(x)].push_back({t.m.without(x), t.c});
  UP u;
  u.reserve(buckets.size());
  for (auto& b : buckets) u.push_back(Poly::from_terms(std::move(b)));
  trim(u);
  return u;
}

Poly from_up(const UP& u, int x) {
  std::vector<Poly::Term> out;
  for (std::size_t k = 0; k < u.size(); ++k)
    for (auto& t : u[k].terms()) out.push_back({t.m * Monomial::var(x, (int32_t)k), t.c});
  return Poly::from_terms(std::move(out));
}

Poly exact(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw MathError("internal: inexact division in gcd");
  return *q;
}

UP up_div(const UP& a, const Poly& c) {
  if (c.is_constant() && c.constant_term() == 1) return a;
  UP r;
  r.reserve(a.size());
  for (auto& x : a) r.push_back(exact(x, c));
  return r;
}

// pseudo-remainder lc(B)^(degA-degB+1) A mod B
UP prem(UP A, const UP& B) {
  const long db = (long)B.size() - 1;
  long e = (long)A.size() - 1 - db + 1;
  const Poly& lb = B.back();
  while (!A.empty() && (long)A.size() - 1 >= db) {
    long shift = (long)A.size() - 1 - db;
    Poly la = A.back();
    for (auto& x : A) x = x * lb;
    for (long k = 0; k <= db; ++k) A[k + shift] -= la * B[k];
    A.pop_back();
    trim(A);
    --e;
  }
  if (e > 0) {
    Poly f = lb.pow((unsigned)e);
    for (auto& x : A) x = x * f;
  }
  return A;
}

Poly gcd_impl(const Poly& a0, const Poly& b0);

Poly up_content(const UP& u) {
  Poly g;
  for (auto& c : u) {
    g = g.is_zero() ? normalize_unit(c) : gcd_impl(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

UP subresultant(UP A, UP B) {
  if (A.size() < B.size()) std::swap(A, B);
  Poly g(1), h(1);
  for (;;) {
    long delta = (long)A.size() - (long)B.size();
    UP R = prem(A, B);
    if (R.empty()) return B;
    if (R.size() == 1) return UP{Poly(1)};
    A = B;
    Poly div = g * h.pow((unsigned)delta);
    B = up_div(R, div);
    g = A.back();
    if (delta == 0) {
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact(g.pow((unsigned)delta), h.pow((unsigned)(delta - 1)));
    }
  }
}

// univariate gcd over Q, dense coefficients, low degree first
std::vector<Coef> uni_gcd(std::vector<Coef> a, std::vector<Coef> b) {
  auto tr = [](std::vector<Coef>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  tr(a), tr(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      Coef f = a.back() / b.back();
      std::size_t sh = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + sh] -= f * b[k];
      a.pop_back();
      tr(a);
    }
    std::swap(a, b);
  }
  return a;
}

// deterministic evaluation point for symbol s, attempt k
long eval_point(int s, int k) { return 2 + (s * 37 + k * 101 + 11) % 89; }

std::vector<Coef> specialize(const Poly& p, int x, int attempt) {
  std::vector<Coef> r(p.max_exp(x) + 1);
  for (auto& t : p.terms()) {
    mpz_class val = 1, tmp;
    for (auto& [s, k] : t.m.e) {
      if (s == x) continue;
      mpz_ui_pow_ui(tmp.get_mpz_t(), (unsigned long)eval_point(s, attempt), (unsigned long)k);
      val *= tmp;
    }
    r[t.m.exp(x)] += t.c * val;
  }
  return r;
}

// true if gcd(a,b) certainly has degree 0 in every common variable
bool certainly_coprime(const Poly& a, const Poly& b, const std::vector<int>& common) {
  for (int x : common) {
    bool decided = false;
    for (int attempt = 0; attempt < 2 && !decided; ++attempt) {
      auto sa = specialize(a, x, attempt);
      auto sb = specialize(b, x, attempt);
      if (sa.back() == 0 || sb.back() == 0) continue;  // degree dropped, try again
      decided = true;
      if (uni_gcd(sa, sb).size() > 1) return false;
    }
    if (!decided) return false;
  }
  return true;
}

// gcd of two polynomials with nonnegative exponents
Poly gcd_impl(const Poly& a0, const Poly& b0) {
  if (a0.is_zero()) return normalize_unit(b0);
  if (b0.is_zero()) return normalize_unit(a0);
  Poly a = normalize_unit(a0), b = normalize_unit(b0);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return a;
  if (b.size() <= a.size()) {
    if (divide_exact(a, b)) return b;
  } else if (divide_exact(b, a)) {
    return a;
  }

  auto va = a.symbols(), vb = b.symbols();
  for (int x : va)
    if (!std::binary_search(vb.begin(), vb.end(), x)) return gcd_impl(up_content(to_up(a, x)), b);
  for (int x : vb)
    if (!std::binary_search(va.begin(), va.end(), x)) return gcd_impl(a, up_content(to_up(b, x)));
  // same variable set from here on

  // compress x^g -> x, gcd commutes with this substitution
  std::map<int, int32_t> comp;
  bool any = false;
  for (int x : va) {
    int32_t g = 0;
    for (auto& t : a.terms()) g = std::gcd(g, t.m.exp(x));
    for (auto& t : b.terms()) g = std::gcd(g, t.m.exp(x));
    comp[x] = g;
    any = any || g > 1;
  }
  if (any) {
    auto down = [&](const Monomial& m) {
      Monomial r = m;
      for (auto& [s, k] : r.e) k /= comp[s];
      return r;
    };
    auto up = [&](const Monomial& m) {
      Monomial r = m;
      for (auto& [s, k] : r.e) k *= comp[s];
      return r;
    };
    return gcd_impl(a.map_monomials(down), b.map_monomials(down)).map_monomials(up);
  }

  if (certainly_coprime(a, b, va)) return Poly(1);

  int x = va[0];
  int32_t best = -1;
  for (int s : va) {
    int32_t d = std::max(a.max_exp(s), b.max_exp(s));
    if (best < 0 || d < best) best = d, x = s;
  }
  UP A = to_up(a, x), B = to_up(b, x);
  Poly ca = up_content(A), cb = up_content(B);
  Poly c = gcd_impl(ca, cb);
  A = up_div(A, ca), B = up_div(B, cb);
  UP G = subresultant(A, B);
  G = up_div(G, up_content(G));
  return normalize_unit(from_up(G, x) * c);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(strip(a), strip(b)); }

// ---------------------------------------------------------------- printing

namespace {

std::string mono_text(const Monomial& m) {
  std::string s;
  for (auto& [v, k] : m.e) {
    if (!s.empty()) s += '*';
    s += symbol_name(v);
    if (k != 1) s += '^' + std::to_string(k);
  }
  return s;
}

}  // namespace

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto& t : p.terms()) {
    Coef c = t.c;
    if (!first) {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    first = false;
    if (t.m.is_one()) {
      out += c.get_str();
    } else {
      if (c == -1)
        out += '-';
      else if (c != 1)
        out += c.get_str() + '*';
      out += mono_text(t.m);
    }
  }
  return out;
}

// ---------------------------------------------------------------- scalars

Scalar Scalar::fraction(const Poly& n, const Poly& d) {
  if (d.is_zero()) throw MathError("division by zero");
  Scalar r;
  if (n.is_zero()) return r;
  if (d.is_monomial()) {
    r.num_ = n.shifted(d.lead().m.inverse()).scaled(1 / d.lead().c);
    return r;
  }
  Monomial md = d.min_monomial().inverse();
  Poly nn = n.shifted(md), dd = d.shifted(md);
  Poly g = gcd(nn, dd);
  if (!g.is_constant()) {
    nn = exact(nn, g);
    dd = exact(dd, g);
  }
  if (dd.is_monomial()) {
    r.num_ = nn.shifted(dd.lead().m.inverse()).scaled(1 / dd.lead().c);
    return r;
  }
  Coef c = dd.content();
  r.num_ = nn.scaled(1 / c);
  r.den_ = dd.scaled(1 / c);
  return r;
}

Scalar Scalar::from_reduced(Poly n, Poly d) {
  Scalar r;
  if (n.is_zero()) return r;
  if (d.is_constant()) {
    r.num_ = n.scaled(1 / d.constant_term());
    return r;
  }
  r.num_ = std::move(n);
  r.den_ = std::move(d);
  return r;
}

Scalar Scalar::sym(const std::string& name, int32_t k) { return sym(symbol(name), k); }

Scalar Scalar::sym(int id, int32_t k) { return Scalar(Poly::var(id, k)); }

bool Scalar::is_one() const { return den_.is_constant() && num_.is_constant() && num_.constant_term() == 1; }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

Scalar add_impl(const Scalar& x, const Scalar& y, bool sub) {
  const Poly& a = x.num();
  const Poly& b = x.den();
  const Poly& c = y.num();
  const Poly& d = y.den();
  auto combine = [&](const Poly& p, const Poly& q) { return sub ? p - q : p + q; };
  if (b.is_constant() && d.is_constant()) return Scalar(combine(a, c));
  if (b == d) return Scalar::fraction(combine(a, c), b);
  // Henrici: only the common part of the denominators can cancel
  Poly g = gcd(b, d);
  Poly b1 = exact(b, g), d1 = exact(d, g);
  Poly n = combine(a * d1, c * b1);
  if (n.is_zero()) return Scalar();
  if (!g.is_constant()) {
    Poly g2 = gcd(n, g);
    if (!g2.is_constant()) n = exact(n, g2), g = exact(g, g2);
  }
  return Scalar::from_reduced(std::move(n), b1 * d1 * g);
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return add_impl(a, b, false);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return add_impl(a, b, true);
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  if (x.is_zero() || y.is_zero()) return Scalar();
  if (x.den_.is_constant() && y.den_.is_constant()) return Scalar(x.num_ * y.num_);
  Poly a = x.num_, b = x.den_, c = y.num_, d = y.den_;
  if (!d.is_constant() && !a.is_monomial()) {
    Poly g = gcd(a, d);
    if (!g.is_constant()) a = exact(a, g), d = exact(d, g);
  }
  if (!b.is_constant() && !c.is_monomial()) {
    Poly g = gcd(c, b);
    if (!g.is_constant()) c = exact(c, g), b = exact(b, g);
  }
  Scalar r;
  r.num_ = a * c;
  r.den_ = b * d;
  if (r.den_.is_constant()) {
    r.num_ = r.num_.scaled(1 / r.den_.constant_term());
    r.den_ = Poly(1);
  }
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw MathError("division by zero");
  Poly unit;
  Poly n = normalize_unit(num_, &unit);
  Scalar r;
  if (n.is_constant()) {
    r.num_ = exact(den_, unit);
    return r;
  }
  r.num_ = exact(den_, unit);
  r.den_ = n;
  return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar Scalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  if (den_.is_constant()) return Scalar(num_.pow((unsigned)k));
  Scalar r;
  r.num_ = num_.pow((unsigned)k);
  r.den_ = den_.pow((unsigned)k);
  return r;
}

namespace {

Scalar eval_poly(const Poly& p, const std::map<int, Scalar>& values) {
  std::map<std::pair<int, int32_t>, Scalar> cache;
  auto power = [&](int s, int32_t k) -> const Scalar& {
    auto key = std::make_pair(s, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, values.at(s).pow(k)).first->second;
  };
  // group terms by the substituted part to keep the number of Scalar
  // multiplications small
  std::vector<Poly::Term> plain;
  Scalar acc;
  for (auto& t : p.terms()) {
    Monomial rest;
    Scalar f(1);
    bool touched = false;
    for (auto& [s, k] : t.m.e) {
      if (values.count(s)) {
        f = f * power(s, k);
        touched = true;
      } else {
        rest.e.emplace_back(s, k);
      }
    }
    if (!touched)
      plain.push_back(t);
    else
      acc = acc + f * Scalar(Poly::monomial(rest, t.c));
  }
  return acc + Scalar(Poly::from_terms(std::move(plain)));
}

}  // namespace

Scalar Scalar::subs(const std::map<int, Scalar>& values) const {
  Scalar n = eval_poly(num_, values);
  Scalar d = eval_poly(den_, values);
  if (d.is_zero()) throw MathError("substitution makes a denominator vanish");
  return n / d;
}

Scalar Scalar::map_monomials(const std::function<Monomial(const Monomial&)>& f) const {
  return fraction(num_.map_monomials(f), den_.map_monomials(f));
}

std::string Scalar::str() const {
  if (den_.is_constant()) return to_string(num_);
  return "(" + to_string(num_) + ")/(" + to_string(den_) + ")";
}

std::string to_string(const Scalar& s) { return s.str(); }

namespace {

std::string latex_symbol(const std::string& n) {
  auto idx = [&](std::size_t pos) { return n.substr(pos); };
  if (n == "eps") return "\\epsilon";
  if (n == "kappa") return "\\kappa";
  if (n.rfind("cp_", 0) == 0) return "c^{+}_{" + idx(3) + "}";
  if (n.rfind("cm_", 0) == 0) return "c^{-}_{" + idx(3) + "}";
  auto u = n.find('_');
  if (u != std::string::npos) return n.substr(0, u) + "_{" + idx(u + 1) + "}";
  return n;
}

std::string latex_poly(const Poly& p, int M) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto& t : p.terms()) {
    Coef c = t.c;
    if (!first) {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    } else if (c < 0 && !t.m.is_one()) {
      out += "-";
      c = -c;
    }
    first = false;
    std::string m;
    for (auto& [s, k] : t.m.e) {
      std::string base = s == kQ ? "v" : latex_symbol(symbol_name(s));
      std::string ex;
      if (s == kQ) {
        Rat e(k, M);
        if (e == 1)
          ex = "";
        else if (e.denominator() == 1)
          ex = std::to_string(e.numerator());
        else
          ex = std::to_string(e.numerator()) + "/" + std::to_string(e.denominator());
      } else if (k != 1) {
        ex = std::to_string(k);
      }
      m += base + (ex.empty() ? "" : "^{" + ex + "}");
    }
    if (m.empty()) {
      out += c.get_den() == 1 ? c.get_str() : "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
    } else {
      if (c != 1) out += c.get_den() == 1 ? c.get_str() : "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
      out += m;
    }
  }
  return out;
}

}  // namespace

std::string Scalar::latex(int M) const {
  if (den_.is_constant()) return latex_poly(num_, M);
  return "\\frac{" + latex_poly(num_, M) + "}{" + latex_poly(den_, M) + "}";
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw MathError("parse error at " + std::to_string(i) + ": " + what + " in '" + s + "'");
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  Scalar expr() {
    Scalar r = term();
    for (;;) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }
  Scalar term() {
    Scalar r = unary();
    for (;;) {
      if (eat('*'))
        r = r * unary();
      else if (eat('/'))
        r = r / unary();
      else
        return r;
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  long exponent() {
    ws();
    if (eat('(')) {
      Scalar e = expr();
      if (!eat(')')) fail("expected ')'");
      if (!e.is_polynomial() || !e.num().is_constant()) fail("exponent must be an integer");
      Coef c = e.num().constant_term();
      if (c.get_den() != 1) fail("exponent must be an integer");
      return c.get_num().get_si();
    }
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    ws();
    std::size_t st = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (st == i) fail("expected exponent");
    long k = std::stol(s.substr(st, i - st));
    return neg ? -k : k;
  }
  Scalar power() {
    Scalar b = atom();
    if (eat('^')) return b.pow(exponent());
    return b;
  }
  Scalar atom() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    if (eat('(')) {
      Scalar r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit((unsigned char)s[i])) {
      std::size_t st = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      return Scalar(Coef(mpz_class(s.substr(st, i - st))));
    }
    if (std::isalpha((unsigned char)s[i]) || s[i] == '_') {
      std::size_t st = i;
      while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
      return Scalar::sym(s.substr(st, i - st));
    }
    fail(std::string("unexpected '") + s[i] + "'");
  }
};

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  Parser p{text};
  Scalar r = p.expr();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

// ---------------------------------------------------------------- q-combinatorics

Scalar vpow(const Rat& e, int M) {
  Rat k = e * Rat(M);
  if (k.denominator() != 1) throw MathError("v-exponent not integral in q for this M");
  return Scalar::q((int32_t)k.numerator());
}

Scalar q_number(long r, long s, int M) {
  if (s == 0) throw MathError("q_number at v^0");
  Scalar x = vpow(s, M);
  return (x.pow(r) - x.pow(-r)) / (x - x.inverse());
}

Scalar q_factorial(long r, long s, int M) {
  Scalar f(1);
  for (long k = 1; k <= r; ++k) f = f * q_number(k, s, M);
  return f;
}

Scalar q_binomial(long m, long r, long s, int M) {
  if (r < 0 || r > m) throw MathError("q_binomial needs 0 <= r <= m");
  return q_factorial(m, s, M) / (q_factorial(r, s, M) * q_factorial(m - r, s, M));
}

Scalar round_number(long r, long s, int M) {
  if (s == 0) return Scalar(r);
  Scalar x = vpow(s, M);
  return (Scalar(1) - x.pow(r)) / (Scalar(1) - x);
}

Scalar exp_q_coefficient(long r, long s, int M) {
  if (r < 0) throw MathError("exp_q_coefficient needs r >= 0");
  Scalar f(1);
  for (long k = 1; k <= r; ++k) f = f * round_number(k, s, M);
  return f.inverse();
}

Scalar q_pochhammer(long m, long s, int M) {
  Scalar x = vpow(s, M), f(1);
  for (long k = 1; k <= m; ++k) f = f * (Scalar(1) - x.pow(k));
  return f;
}

}  // namespace qtoda
