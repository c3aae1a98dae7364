#include "qtoda/equivalence.hpp"

#include "qtoda/hamiltonians.hpp"
#include "qtoda/lax.hpp"

#include <algorithm>
#include <sstream>

namespace qtoda {

namespace {

using RMat = std::vector<std::vector<Rat>>;

// Gaussian elimination; free unknowns are set to 0
std::optional<std::vector<Rat>> solve_linear(RMat A, std::vector<Rat> rhs, int unknowns) {
  int rows = (int)A.size();
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < unknowns && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (A[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(A[p], A[r]);
    std::swap(rhs[p], rhs[r]);
    Rat inv = Rat(1) / A[r][c];
    for (auto& x : A[r]) x *= inv;
    rhs[r] *= inv;
    for (int i = 0; i < rows; ++i)
      if (i != r && A[i][c] != 0) {
        Rat f = A[i][c];
        for (int k = 0; k < unknowns; ++k) A[i][k] -= f * A[r][k];
        rhs[i] -= f * rhs[r];
      }
    pivcol.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  std::vector<Rat> x(unknowns, Rat(0));
  for (int i = 0; i < r; ++i) x[pivcol[i]] = rhs[i];
  return x;
}

IVec unit(int n, int i, int k = 1) {
  IVec v(n, 0);
  v[i] = k;
  return v;
}

// u = E^T b: the shift of log w produced by D^b (in units of hbar)
std::vector<Rat> shift_of(const TorusSpec& s, const IVec& b) {
  std::vector<Rat> u(s.n, Rat(0));
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) u[j] += Rat(b[i] * s.e[i][j]);
  return u;
}

std::string ivec_str(const IVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

std::vector<IVec> lattice_generators(const TorusSpec& s) {
  int n = s.n;
  std::vector<IVec> g;
  auto diffs = [&] {
    for (int i = 0; i + 1 < n; ++i) {
      IVec b(n, 0);
      b[i] = 1;
      b[i + 1] = -1;
      g.push_back(b);
    }
  };
  char t = s.rs_type;
  if (t == 'G') return {unit(n, 0), unit(n, 1)};
  if (t == 'A' || (!t && s.lattice == TorusSpec::Lattice::diff)) {
    diffs();
  } else if (t == 'C' || (!t && s.lattice == TorusSpec::Lattice::even)) {
    diffs();
    g.push_back(unit(n, n - 1, 2));
  } else if (t == 'D') {
    diffs();
    IVec b(n, 0);
    b[n - 2] = b[n - 1] = 1;
    g.push_back(b);
  } else if (t == 'B') {
    diffs();
    g.push_back(unit(n, n - 1));
  } else {
    for (int i = 0; i < n; ++i) g.push_back(unit(n, i));
  }
  return g;
}

// ---------------------------------------------------------------- twists

TwistAutomorphism::TwistAutomorphism(const TorusSpec& s, std::vector<IVec> gens, std::vector<IVec> wexp,
                                     std::vector<Scalar> mult)
    : spec_(s), gens_(std::move(gens)), wexp_(std::move(wexp)), mult_(std::move(mult)) {
  size_t m = gens_.size();
  if (wexp_.size() != m || mult_.size() != m) throw EquivalenceError("twist: one exponent and multiplier per generator");
  for (size_t l = 0; l < m; ++l) {
    if (!s.d_allowed(gens_[l])) throw EquivalenceError("twist: generator " + ivec_str(gens_[l]) + " outside the D-lattice");
    if ((int)wexp_[l].size() != s.n) throw EquivalenceError("twist: exponent vector has the wrong length");
    if (mult_[l].is_zero()) throw EquivalenceError("twist: zero multiplier");
    // store the exponents in the reduced form the torus uses
    TorusElement x = image((int)l);
    wexp_[l] = x.terms().begin()->first.first;
  }
  for (size_t l = 0; l < m; ++l)
    for (size_t k = l + 1; k < m; ++k)
      if (!commutator(image((int)l), image((int)k)).is_zero())
        throw EquivalenceError("twist: images of generators " + std::to_string(l + 1) + " and " + std::to_string(k + 1) +
                               " do not commute (no symmetric r_ij)");
}

TwistAutomorphism TwistAutomorphism::identity(const TorusSpec& s) {
  auto g = lattice_generators(s);
  return TwistAutomorphism(s, g, std::vector<IVec>(g.size(), IVec(s.n, 0)), std::vector<Scalar>(g.size(), Scalar(1)));
}

TorusElement TwistAutomorphism::image(int l) const {
  return TorusElement::monomial(spec_, wexp_[l], gens_[l], mult_[l]);
}

std::vector<Rat> TwistAutomorphism::decompose(const IVec& b) const {
  int m = (int)gens_.size(), n = spec_.n;
  RMat A(n, std::vector<Rat>(m));
  std::vector<Rat> rhs(n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < m; ++l) A[j][l] = Rat(gens_[l][j]);
    rhs[j] = Rat(b[j]);
  }
  auto x = solve_linear(A, rhs, m);
  if (!x) throw EquivalenceError("twist: D-exponent " + ivec_str(b) + " outside the generated lattice");
  for (auto& t : *x)
    if (t.denominator() != 1) throw EquivalenceError("twist: D-exponent " + ivec_str(b) + " is not an integral combination");
  return *x;
}

TorusElement TwistAutomorphism::apply(const TorusElement& x) const {
  const TorusSpec& s = x.spec();
  if (!(s == spec_)) throw EquivalenceError("twist on " + spec_.name + " applied to an element of " + s.name);
  std::vector<TorusElement> im, inv;
  for (int l = 0; l < (int)gens_.size(); ++l) {
    im.push_back(image(l));
    inv.push_back(monomial_inverse(im.back()));
  }
  TorusElement out(s);
  IVec zero(s.n, 0);
  for (auto& [k, c] : x.terms()) {
    std::vector<Rat> m = decompose(k.second);
    TorusElement t = TorusElement::monomial(s, k.first, zero, c);
    for (int l = 0; l < (int)m.size(); ++l) {
      long long e = m[l].numerator();
      for (long long r = 0; r < std::abs(e); ++r) t = t * (e > 0 ? im[l] : inv[l]);
    }
    out += t;
  }
  return out;
}

TwistAutomorphism TwistAutomorphism::compose(const TwistAutomorphism& inner) const {
  if (!(spec_ == inner.spec_) || gens_ != inner.gens_) throw EquivalenceError("compose: twists on different tori");
  // phi(psi(g)) = phi(c' w^{a'} g) = c' w^{a'} c w^{a} g: w is fixed, so no reordering
  std::vector<IVec> w = wexp_;
  std::vector<Scalar> m = mult_;
  for (size_t l = 0; l < gens_.size(); ++l) {
    for (int j = 0; j < spec_.n; ++j) w[l][j] += inner.wexp_[l][j];
    m[l] *= inner.mult_[l];
  }
  return TwistAutomorphism(spec_, gens_, w, m);
}

TwistAutomorphism TwistAutomorphism::inverse() const {
  std::vector<IVec> w = wexp_;
  std::vector<Scalar> m;
  for (auto& a : w)
    for (auto& x : a) x = -x;
  for (auto& c : mult_) m.push_back(c.inverse());
  return TwistAutomorphism(spec_, gens_, w, m);
}

bool TwistAutomorphism::is_identity() const {
  for (size_t l = 0; l < gens_.size(); ++l) {
    if (!mult_[l].is_one()) return false;
    for (int x : wexp_[l])
      if (x) return false;
  }
  return true;
}

bool operator==(const TwistAutomorphism& a, const TwistAutomorphism& b) {
  return a.spec_ == b.spec_ && a.gens_ == b.gens_ && a.wexp_ == b.wexp_ && a.mult_ == b.mult_;
}

std::optional<std::vector<std::vector<Rat>>> TwistAutomorphism::quadratic_form(Rat x11) const {
  // unknowns: X (symmetric, X_ii = 2 x_ii, X_ij = x_ij), plus one central shift per generator
  int n = spec_.n, m = (int)gens_.size();
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) idx.push_back({i, j});
  int nx = (int)idx.size(), unknowns = nx + (spec_.central ? m : 0);
  auto col = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    return (int)(std::find(idx.begin(), idx.end(), std::make_pair(i, j)) - idx.begin());
  };
  RMat A;
  std::vector<Rat> rhs;
  for (int l = 0; l < m; ++l) {
    std::vector<Rat> u = shift_of(spec_, gens_[l]);
    for (int j = 0; j < n; ++j) {
      std::vector<Rat> row(unknowns, Rat(0));
      for (int k = 0; k < n; ++k) row[col(j, k)] += u[k];
      if (spec_.central) row[nx + l] = Rat(-1);
      A.push_back(row);
      rhs.push_back(Rat(wexp_[l][j], spec_.wden));
    }
  }
  if (spec_.central) {
    std::vector<Rat> row(unknowns, Rat(0));
    row[col(0, 0)] = 1;
    A.push_back(row);
    rhs.push_back(2 * x11);
  }
  auto sol = solve_linear(A, rhs, unknowns);
  if (!sol) return std::nullopt;
  std::vector<std::vector<Rat>> x(n, std::vector<Rat>(n, Rat(0)));
  for (int t = 0; t < nx; ++t) {
    auto [i, j] = idx[t];
    x[i][j] = i == j ? (*sol)[t] / 2 : (*sol)[t];
  }
  return x;
}

TwistAutomorphism TwistAutomorphism::from_quadratic_form(const TorusSpec& s, const std::vector<std::vector<Rat>>& x,
                                                         std::vector<Scalar> mult) {
  auto gens = lattice_generators(s);
  std::vector<IVec> w;
  for (auto& g : gens) {
    std::vector<Rat> u = shift_of(s, g);
    IVec a(s.n);
    for (int j = 0; j < s.n; ++j) {
      Rat t(0);
      for (int k = 0; k < s.n; ++k) {
        int i0 = std::min(j, k), j0 = std::max(j, k);
        t += (j == k ? 2 * x[j][j] : x[i0][j0]) * u[k];
      }
      t *= s.wden;
      if (t.denominator() != 1) throw EquivalenceError("quadratic form gives a w-exponent outside the lattice");
      a[j] = (int)t.numerator();
    }
    w.push_back(a);
  }
  return TwistAutomorphism(s, gens, w, std::move(mult));
}

nlohmann::json TwistAutomorphism::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (size_t l = 0; l < gens_.size(); ++l) {
    nlohmann::json ex = nlohmann::json::array();
    for (int a : wexp_[l]) ex.push_back(rat_str(Rat(a, spec_.wden)));
    g.push_back({{"D", gens_[l]}, {"exponents", ex}, {"multiplier", mult_[l].str()}});
  }
  return {{"algebra", spec_.name}, {"M", spec_.M}, {"generators", g}};
}

TwistAutomorphism TwistAutomorphism::from_json(const TorusSpec& s, const nlohmann::json& j) {
  std::vector<IVec> gens, w;
  std::vector<Scalar> m;
  for (auto& g : j.at("generators")) {
    gens.push_back(g.at("D").get<IVec>());
    IVec a;
    for (auto& e : g.at("exponents")) {
      Rat r = rat_parse(e.get<std::string>()) * s.wden;
      if (r.denominator() != 1) throw EquivalenceError("twist json: exponent outside the w-lattice");
      a.push_back((int)r.numerator());
    }
    w.push_back(a);
    m.push_back(Scalar::parse(g.at("multiplier").get<std::string>()));
  }
  return TwistAutomorphism(s, gens, w, m);
}

// ---------------------------------------------------------------- solving

TwistAutomorphism solve_twist(const TorusElement& source, const TorusElement& target) {
  const TorusSpec& s = source.spec();
  if (&s != &target.spec()) throw EquivalenceError("source and target live in different tori");
  auto gens = lattice_generators(s);
  std::vector<IVec> wexp;
  std::vector<Scalar> mult;
  auto with_d = [](const TorusElement& x, const IVec& b) {
    std::vector<std::pair<IVec, Scalar>> r;
    for (auto& [k, c] : x.terms())
      if (k.second == b) r.push_back({k.first, c});
    return r;
  };
  for (size_t l = 0; l < gens.size(); ++l) {
    auto S = with_d(source, gens[l]), T = with_d(target, gens[l]);
    if (S.size() != T.size())
      throw EquivalenceError("generator D^" + ivec_str(gens[l]) + ": " + std::to_string(S.size()) + " source terms vs " +
                             std::to_string(T.size()) + " target terms");
    if (S.empty()) {
      wexp.push_back(IVec(s.n, 0));
      mult.push_back(Scalar(1));
      continue;
    }
    bool found = false;
    for (auto& [ta, tc] : T) {
      IVec shift(s.n);
      for (int j = 0; j < s.n; ++j) shift[j] = ta[j] - S[0].first[j];
      Scalar ratio = tc / S[0].second;
      bool ok = true;
      for (auto& [sa, sc] : S) {
        IVec a(s.n);
        for (int j = 0; j < s.n; ++j) a[j] = sa[j] + shift[j];
        auto it = std::find_if(T.begin(), T.end(), [&](auto& t) { return t.first == a; });
        if (it == T.end() || !(it->second == sc * ratio)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        // the normal-ordered product c w^a . (m w^shift g) has no reordering factor
        wexp.push_back(shift);
        mult.push_back(ratio);
        found = true;
        break;
      }
    }
    if (!found) throw EquivalenceError("generator D^" + ivec_str(gens[l]) + ": no common w-shift matches its terms");
  }
  TwistAutomorphism phi(s, gens, wexp, mult);
  TorusElement diff = phi.apply(source) - target;
  if (!diff.is_zero()) {
    TorusElement first(s);
    auto& [k, c] = *diff.terms().begin();
    first.add(k.first, k.second, c);
    throw EquivalenceError("twist fixed by the generator terms leaves " + std::to_string(diff.size()) +
                           " unmatched terms, first: " + first.str());
  }
  return phi;
}

bool conjugate_and_compare(const TwistAutomorphism& phi, const std::vector<TorusElement>& source,
                           const std::vector<TorusElement>& target) {
  if (source.size() != target.size()) return false;
  for (size_t i = 0; i < source.size(); ++i) {
    if (&source[i].spec() != &target[i].spec()) return false;
    if (!(phi.apply(source[i]) == target[i])) return false;
  }
  return true;
}

TorusElement torus_hamiltonian(const TriplePair& P) { return from_difference_operator(build_D1_closed(P, true)); }

TorusElement torus_hamiltonian_exterior(const TriplePair& P, int k) {
  return from_difference_operator(build_DV_generic(P, rep_exterior_power(P.rs, k)));
}

Conjugation solve_pair_conjugation(const TriplePair& A, const TriplePair& B) {
  if (A.rs.tag() != B.rs.tag()) throw EquivalenceError("pairs of different types " + A.rs.tag() + " and " + B.rs.tag());
  if (A.eps_vec != B.eps_vec) {
    std::ostringstream os;
    os << "hypothesis violated: epsilon invariants differ (";
    for (int x : A.eps_vec) os << x << ' ';
    os << "vs ";
    for (int x : B.eps_vec) os << x << ' ';
    os << ')';
    throw EquivalenceError(os.str());
  }
  TorusElement s = torus_hamiltonian(A), t = torus_hamiltonian(B);
  return {solve_twist(s, t), s, t};
}

bool lax_compatible(const TriplePair& P, const std::vector<int>& k) {
  int r = P.rs.rank();
  for (int x : k)
    if (x < -1 || x > 1) return false;
  switch (P.rs.type()) {
    case 'A':
      if ((int)k.size() != r + 1) return false;
      for (int i = 1; i + 1 <= r; ++i)  // k_{i+1} for 1 <= i <= n-2
        if (k[i] != P.eps_vec[i - 1]) return false;
      return true;
    case 'C':
      if ((int)k.size() != r) return false;
      for (int i = 1; i < r; ++i)
        if (k[i] != P.eps_vec[i - 1]) return false;
      return true;
    default:
      return false;
  }
}

namespace {

TorusElement lax_target(const RootSystem& rs, const std::vector<int>& k, const Scalar& eps) {
  TorusSpec S = TorusSpec::for_root_system(rs);
  Monodromy T = rs.type() == 'A' ? monodromy(k, rs.M()) : double_monodromy(k, rs.M());
  return convert(extract_H2(T, eps), S);
}

}  // namespace

Conjugation solve_lax_matching(const TriplePair& P, const std::vector<int>& k) {
  char t = P.rs.type();
  if (t != 'A' && t != 'C') throw EquivalenceError("Lax matching is available in types A and C only");
  if (!lax_compatible(P, k)) throw EquivalenceError("k = " + k_vector_str(k) + " incompatible with the pair's epsilon invariant");
  TorusElement s = torus_hamiltonian(P), tg = lax_target(P.rs, k, Scalar(0));
  return {solve_twist(s, tg), s, tg};
}

Scalar affine_kappa(char type, int n, const Scalar& eps, int M) {
  Scalar v = vpow(1, M), vi = v.inverse(), d = v - vi, d2 = v * v - vi * vi;
  auto pw = [](Scalar x, int e) {
    if (e < 0) x = x.inverse(), e = -e;
    Scalar r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  };
  if (type == 'A') return (n % 2 ? Scalar(-1) : Scalar(1)) * pw(d, -2 * n) * eps;
  if (type == 'C') return pw(v, 2 * n + 2) * pw(d, -4 * (n - 1)) * pw(d2, -4) * eps;
  throw EquivalenceError(std::string("no periodic/affine bridge for type ") + type);
}

Conjugation periodic_affine_conjugacy(char type, int n, const Scalar& eps) {
  const RootSystem& rs = type == 'A' ? RootSystem::get('A', n - 1) : RootSystem::get(type, n);
  if (type != 'A' && type != 'C') throw EquivalenceError(std::string("no periodic/affine bridge for type ") + type);
  TorusElement s = lax_target(rs, std::vector<int>(n, 0), eps);
  TorusElement t = from_difference_operator(build_affine_D1(rs, affine_kappa(type, n, eps, rs.M())));
  return {solve_twist(s, t), s, t};
}

}  // namespace qtoda
