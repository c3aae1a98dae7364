#include "qtoda/hamiltonians.hpp"

#include <algorithm>
#include <functional>

namespace qtoda {

SMat mat_zero(int n) { return SMat(n, std::vector<Scalar>(n)); }

SMat mat_id(int n) {
  SMat m = mat_zero(n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

SMat mat_mul(const SMat& a, const SMat& b) {
  int n = (int)a.size();
  SMat c = mat_zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j)
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

static SMat mat_add(SMat a, const SMat& b, const Scalar& s = Scalar(1)) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (!b[i][j].is_zero()) a[i][j] += s * b[i][j];
  return a;
}

static SMat mat_pow(const SMat& a, int r) {
  SMat p = mat_id((int)a.size());
  for (int k = 0; k < r; ++k) p = mat_mul(p, a);
  return p;
}

bool mat_is_zero(const SMat& a) {
  for (auto& row : a)
    for (auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

void WeightBasisRep::compute_nilpotency(int cap) {
  auto bound = [&](const SMat& m, const char* what, int i) {
    SMat p = m;
    for (int r = 1; r <= cap; ++r) {
      if (mat_is_zero(p)) return r;
      p = mat_mul(p, m);
    }
    throw MathError(std::string(what) + "_" + std::to_string(i + 1) + " is not nilpotent below the cap");
  };
  nilE.clear();
  nilF.clear();
  for (int i = 0; i < rs->rank(); ++i) {
    nilE.push_back(bound(E[i], "E", i));
    nilF.push_back(bound(F[i], "F", i));
  }
}

// ---------------------------------------------------------------- relations

std::string check_relations(const WeightBasisRep& V) {
  const RootSystem& rs = *V.rs;
  int r = rs.rank(), N = V.dim(), M = rs.M();
  auto name = [](const char* s, int i) { return std::string(s) + "_" + std::to_string(i + 1); };
  for (int i = 0; i < r; ++i) {
    Weight a = rs.alpha(i);
    for (int k = 0; k < N; ++k)
      for (int l = 0; l < N; ++l) {
        Weight up = V.wt[k];
        for (int t = 0; t < r; ++t) up[t] += a[t];
        if (!V.E[i][l][k].is_zero() && V.wt[l] != up) return name("E", i) + " does not raise the weight by alpha";
        if (!V.F[i][k][l].is_zero() && V.wt[l] != up) return name("F", i) + " does not lower the weight by alpha";
      }
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      SMat c = mat_add(mat_mul(V.E[i], V.F[j]), mat_mul(V.F[j], V.E[i]), Scalar(-1));
      if (i == j) {
        Scalar vi = vpow(rs.d(i), M), den = vi - vi.inverse();
        for (int k = 0; k < N; ++k) {
          Scalar K = vpow(rs.pair(rs.alpha(i), V.wt[k]), M);
          c[k][k] -= (K - K.inverse()) / den;
        }
      }
      if (!mat_is_zero(c)) return "[" + name("E", i) + "," + name("F", j) + "] relation fails";
    }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      int m = 1 - rs.a(i, j);
      for (int ef = 0; ef < 2; ++ef) {
        const auto& X = ef ? V.F : V.E;
        SMat s = mat_zero(N);
        for (int t = 0; t <= m; ++t) {
          Scalar co = q_binomial(m, t, rs.d(i), M);
          if (t & 1) co = -co;
          s = mat_add(s, mat_mul(mat_mul(mat_pow(X[i], m - t), X[j]), mat_pow(X[i], t)), co);
        }
        if (!mat_is_zero(s))
          return std::string("Serre relation fails for ") + (ef ? "F" : "E") + " at (" + std::to_string(i + 1) + "," +
                 std::to_string(j + 1) + ")";
      }
    }
  return {};
}

// ---------------------------------------------------------------- representations

namespace {

WeightBasisRep blank(const RootSystem& rs, int N) {
  WeightBasisRep V;
  V.rs = &RootSystem::get(rs.type(), rs.rank());
  V.wt.assign(N, rs.zero());
  V.labels.resize(N);
  V.E.assign(rs.rank(), mat_zero(N));
  V.F.assign(rs.rank(), mat_zero(N));
  return V;
}

void finish(WeightBasisRep& V) {
  V.compute_nilpotency();
  std::string err = check_relations(V);
  if (!err.empty()) throw MathError("representation of " + V.rs->tag() + " violates relations: " + err);
}

}  // namespace

WeightBasisRep rep_trivial(const RootSystem& rs) {
  WeightBasisRep V = blank(rs, 1);
  V.labels[0] = "w_0";
  finish(V);
  return V;
}

// Basis labels follow the displays; index 0 of the vectors is the first listed basis vector.
WeightBasisRep rep_first_fundamental(const RootSystem& rs) {
  int n = rs.rank(), M = rs.M();
  auto vp = [&](int j, int sign) {  // weight of +-varpi_j, 1-based
    Weight w = rs.varpi(j - 1);
    for (auto& x : w) x *= sign;
    return w;
  };
  switch (rs.type()) {
    case 'A': {
      int P = n + 1;  // w_1..w_P
      WeightBasisRep V = blank(rs, P);
      for (int j = 1; j <= P; ++j) {
        V.labels[j - 1] = "w_" + std::to_string(j);
        V.wt[j - 1] = vp(j, 1);
      }
      for (int i = 1; i < P; ++i) {
        V.E[i - 1][i - 1][i] = 1;  // E_i w_{i+1} = w_i
        V.F[i - 1][i][i - 1] = 1;  // F_i w_i = w_{i+1}
      }
      finish(V);
      return V;
    }
    case 'C': {
      // w_1..w_n at indices 0..n-1, w_{n+j} at n+j-1
      WeightBasisRep V = blank(rs, 2 * n);
      auto idx = [&](int k) { return k - 1; };
      for (int j = 1; j <= n; ++j) {
        V.labels[idx(j)] = "w_" + std::to_string(j);
        V.labels[idx(n + j)] = "w_" + std::to_string(n + j);
        V.wt[idx(j)] = vp(j, 1);
        V.wt[idx(n + j)] = vp(j, -1);
      }
      for (int i = 1; i < n; ++i) {
        V.E[i - 1][idx(i)][idx(i + 1)] = 1;
        V.E[i - 1][idx(n + i + 1)][idx(n + i)] = 1;
        V.F[i - 1][idx(i + 1)][idx(i)] = 1;
        V.F[i - 1][idx(n + i)][idx(n + i + 1)] = 1;
      }
      V.E[n - 1][idx(n)][idx(2 * n)] = 1;
      V.F[n - 1][idx(2 * n)][idx(n)] = 1;
      finish(V);
      return V;
    }
    case 'D': {
      WeightBasisRep V = blank(rs, 2 * n);
      auto idx = [&](int k) { return k - 1; };
      for (int j = 1; j <= n; ++j) {
        V.labels[idx(2 * j - 1)] = "w_" + std::to_string(2 * j - 1);
        V.labels[idx(2 * j)] = "w_" + std::to_string(2 * j);
        V.wt[idx(2 * j - 1)] = vp(j, 1);
        V.wt[idx(2 * j)] = vp(j, -1);
      }
      for (int i = 1; i < n; ++i) {
        V.E[i - 1][idx(2 * i - 1)][idx(2 * i + 1)] = 1;  // E_i w_{2(i+1)-1} = w_{2i-1}
        V.E[i - 1][idx(2 * i + 2)][idx(2 * i)] = 1;      // E_i w_{2i} = w_{2i+2}
        V.F[i - 1][idx(2 * i + 1)][idx(2 * i - 1)] = 1;
        V.F[i - 1][idx(2 * i)][idx(2 * i + 2)] = 1;
      }
      V.E[n - 1][idx(2 * n - 1)][idx(2 * n - 2)] = 1;
      V.E[n - 1][idx(2 * n - 3)][idx(2 * n)] = 1;
      V.F[n - 1][idx(2 * n)][idx(2 * n - 3)] = 1;
      V.F[n - 1][idx(2 * n - 2)][idx(2 * n - 1)] = 1;
      finish(V);
      return V;
    }
    case 'B': {
      // w_0..w_{2n} at indices 0..2n.  The displayed E_n(w_0)=w_{2n-1}, F_n(w_0)=w_{2n}
      // violate [E_n,F_n] = [K_n] on w_{2n-1}; both get the factor [2]_v.
      WeightBasisRep V = blank(rs, 2 * n + 1);
      for (int k = 0; k <= 2 * n; ++k) V.labels[k] = "w_" + std::to_string(k);
      for (int j = 1; j <= n; ++j) {
        V.wt[2 * j - 1] = vp(j, 1);
        V.wt[2 * j] = vp(j, -1);
      }
      for (int i = 1; i < n; ++i) {
        V.E[i - 1][2 * i - 1][2 * i + 1] = 1;
        V.E[i - 1][2 * i + 2][2 * i] = 1;
        V.F[i - 1][2 * i + 1][2 * i - 1] = 1;
        V.F[i - 1][2 * i][2 * i + 2] = 1;
      }
      Scalar two = q_number(2, 1, M);
      V.E[n - 1][0][2 * n] = 1;
      V.E[n - 1][2 * n - 1][0] = two;
      V.F[n - 1][0][2 * n - 1] = 1;
      V.F[n - 1][2 * n][0] = two;
      finish(V);
      return V;
    }
    case 'G': {
      WeightBasisRep V = blank(rs, 7);
      auto w = [&](int a, int b) { return rs.from_varpi({Rat(a), Rat(b)}); };
      int xy[7][2] = {{0, 0}, {1, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}, {0, 1}};
      for (int k = 0; k < 7; ++k) {
        V.labels[k] = "w_" + std::to_string(k);
        V.wt[k] = w(xy[k][0], xy[k][1]);
      }
      Scalar two = q_number(2, 1, M);
      auto& E1 = V.E[0];
      auto& E2 = V.E[1];
      auto& F1 = V.F[0];
      auto& F2 = V.F[1];
      E1[2][0] = two;  // w0 -> (v+v^-1) w2
      E1[3][4] = 1;
      E1[0][5] = two;
      E1[1][6] = 1;
      E2[6][2] = 1;
      E2[5][3] = 1;
      F1[5][0] = 1;
      F1[6][1] = 1;
      F1[0][2] = 1;
      F1[4][3] = 1;
      F2[3][5] = 1;
      F2[2][6] = 1;
      finish(V);
      return V;
    }
  }
  throw MathError("no first fundamental representation for " + rs.tag());
}

WeightBasisRep rep_exterior_power(const RootSystem& rs, int k) {
  if (rs.type() != 'A') throw MathError("exterior powers are only provided in type A");
  int P = rs.rank() + 1;
  if (k < 1 || k > P - 1) throw MathError("exterior power degree out of range");
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if ((int)cur.size() == k) {
      subsets.push_back(cur);
      return;
    }
    for (int s = start; s <= P; ++s) {
      cur.push_back(s);
      rec(s + 1);
      cur.pop_back();
    }
  };
  rec(1);
  int N = (int)subsets.size();
  WeightBasisRep V = blank(rs, N);
  auto find = [&](const std::vector<int>& s) {
    return (int)(std::find(subsets.begin(), subsets.end(), s) - subsets.begin());
  };
  for (int a = 0; a < N; ++a) {
    std::string lab;
    std::vector<Rat> x(P, Rat(0));
    for (int s : subsets[a]) {
      lab += (lab.empty() ? "w_" : "^w_") + std::to_string(s);
      x[s - 1] = 1;
    }
    V.labels[a] = lab;
    V.wt[a] = rs.from_varpi(x);
  }
  // a wedge of basis vectors is moved by at most one factor; sorted order is kept,
  // so every coefficient is 1
  for (int i = 1; i < P; ++i)
    for (int a = 0; a < N; ++a) {
      const auto& S = subsets[a];
      bool hi = std::count(S.begin(), S.end(), i), lo = std::count(S.begin(), S.end(), i + 1);
      if (lo && !hi) {
        auto T = S;
        std::replace(T.begin(), T.end(), i + 1, i);
        V.E[i - 1][find(T)][a] = 1;
      }
      if (hi && !lo) {
        auto T = S;
        std::replace(T.begin(), T.end(), i, i + 1);
        V.F[i - 1][find(T)][a] = 1;
      }
    }
  finish(V);
  return V;
}

WeightBasisRep rep_exterior_square(const WeightBasisRep& V1) {
  if (!V1.rs || V1.rs->type() != 'A') throw MathError("exterior square is only provided in type A");
  return rep_exterior_power(*V1.rs, 2);
}

Scalar trace_eigenvalue(const WeightBasisRep& V) {
  const RootSystem& rs = *V.rs;
  Scalar s;
  for (auto& mu : V.wt) {
    Weight two = mu;
    for (auto& x : two) x *= 2;
    s += lambda_character(rs, two) * vpow(rs.pair(two, rs.rho()), rs.M());
  }
  return s;
}

// ---------------------------------------------------------------- generic D_V

DiffOp build_DV_generic(const TriplePair& P, const WeightBasisRep& V, const DVOptions& opt) {
  const RootSystem& rs = RootSystem::get(P.rs.type(), P.rs.rank());
  if (!V.rs || !(*V.rs == rs)) throw MathError("representation and pair live on different root systems");
  int r = rs.rank(), N = V.dim(), M = rs.M();
  std::vector<int> op = opt.order_plus ? *opt.order_plus : compatible_order(rs, P.plus.eps);
  std::vector<int> om = opt.order_minus ? *opt.order_minus : compatible_order(rs, P.minus.eps);
  auto check_order = [&](const std::vector<int>& o, const IMat& eps) {
    std::vector<int> pos(r, -1);
    if ((int)o.size() != r) throw TripleError("order has wrong length");
    for (int k = 0; k < r; ++k) {
      if (o[k] < 0 || o[k] >= r || pos[o[k]] >= 0) throw TripleError("order is not a permutation");
      pos[o[k]] = k;
    }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (eps[i][j] == -1 && pos[i] > pos[j]) throw TripleError("order is not compatible with epsilon");
  };
  check_order(op, P.plus.eps);
  check_order(om, P.minus.eps);

  WeightBasisRep W = V;
  if (W.nilE.size() != (size_t)r) W.compute_nilpotency();
  std::vector<int> top(r);
  for (int i = 0; i < r; ++i) top[i] = std::min(W.nilE[i], W.nilF[i]) - 1;

  std::vector<std::vector<SMat>> Ep(r), Fp(r);
  std::vector<std::vector<Scalar>> Rc(r);
  for (int i = 0; i < r; ++i) {
    Scalar vi = vpow(rs.d(i), M), dv = vi - vi.inverse();
    for (int k = 0; k <= top[i]; ++k) {
      Ep[i].push_back(mat_pow(W.E[i], k));
      Fp[i].push_back(mat_pow(W.F[i], k));
      Scalar c = opt.coef ? opt.coef(i, k) : dv.pow(k) * exp_q_coefficient(k, opt.exp_sign * rs.d(i), M);
      Rc[i].push_back(c * c);
    }
  }
  std::vector<Weight> nup(r), num(r);
  for (int i = 0; i < r; ++i) {
    nup[i] = P.plus.nu(i);
    num[i] = P.minus.nu(i);
  }
  Weight two_rho = rs.rho();
  for (auto& x : two_rho) x *= 2;

  DiffOp out(rs);
  std::vector<int> m(r, 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos < r) {
      for (int k = 0; k <= top[pos]; ++k) {
        m[pos] = k;
        rec(pos + 1);
      }
      m[pos] = 0;
      return;
    }
    SMat X = mat_id(N), Y = mat_id(N);
    for (int j : om) X = mat_mul(X, Ep[j][m[j]]);
    for (int i : op) Y = mat_mul(Y, Fp[i][m[i]]);
    if (mat_is_zero(X) || mat_is_zero(Y)) return;

    std::vector<int> fw, ew;  // letters of the F-word (order -) and E-word (order +)
    for (int j : om)
      for (int k = 0; k < m[j]; ++k) fw.push_back(j);
    for (int i : op)
      for (int k = 0; k < m[i]; ++k) ew.push_back(i);
    Rat tau = 0;
    for (size_t s = 0; s < fw.size(); ++s)
      for (size_t t = s; t < fw.size(); ++t) tau -= rs.pair(num[fw[s]], rs.alpha(fw[t]));
    for (size_t s = 0; s < ew.size(); ++s)
      for (size_t t = 0; t <= s; ++t) tau += rs.pair(nup[ew[s]], rs.alpha(ew[t]));

    Scalar base(1);
    Weight shift = rs.zero();
    for (int i = 0; i < r; ++i) {
      if (!m[i]) continue;
      base *= Rc[i][m[i]] * (P.plus.c[i] * P.minus.c[i]).pow(m[i]);
      for (int t = 0; t < r; ++t) shift[t] += Rat(m[i]) * (num[i][t] - nup[i][t]);
    }
    RootVec beta(m.begin(), m.end());
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        if (X[b][a].is_zero() || Y[a][b].is_zero()) continue;
        Weight mu = shift;
        for (int t = 0; t < r; ++t) mu[t] += W.wt[a][t] + W.wt[b][t];
        Rat e = tau + rs.pair(two_rho, W.wt[b]) - rs.pair(beta, W.wt[b]);
        out.add(beta, mu, base * X[b][a] * Y[a][b] * vpow(e, M));
      }
  };
  rec(0);
  return out.conj_rho(1);
}

// ---------------------------------------------------------------- closed forms

namespace {

// 1-based helper for transcribing the displayed formulas
struct Closed {
  const TriplePair& P;
  const RootSystem& rs;
  int n;  // rank, except type A where it is rank+1 as in the displays
  int M;
  bool fix;  // apply the corrections found against the generic construction
  DiffOp out;
  std::vector<std::vector<Rat>> m;  // m[i][k], 1-based

  Closed(const TriplePair& p, const RootSystem& r, bool corrected)
      : P(p), rs(r), n(r.type() == 'A' ? r.rank() + 1 : r.rank()), M(r.M()), fix(corrected), out(r) {}

  int np(int a, int b) const { return P.plus.n[a - 1][b - 1]; }
  int nm(int a, int b) const { return P.minus.n[a - 1][b - 1]; }
  int dn(int a, int b) const { return np(a, b) - nm(a, b); }  // n^+ - n^-
  Scalar V(const Rat& e) const { return vpow(e, M); }
  Scalar b(int i) const {
    int d = rs.d(i - 1);
    Scalar vi = V(d);
    return (vi - vi.inverse()).pow(2) * V(Rat(d * dn(i, i))) * P.plus.c[i - 1] * P.minus.c[i - 1];
  }
  Scalar bprod(const std::vector<int>& S) const {
    Scalar s(1);
    for (int i : S) s *= b(i);
    return s;
  }
  // eps^+ = sign and eps^- = -sign on every listed edge
  bool run(const std::vector<std::pair<int, int>>& edges, int sign) const {
    for (auto [a, c] : edges)
      if (P.plus.eps[a - 1][c - 1] != sign || P.minus.eps[a - 1][c - 1] != -sign) return false;
    return true;
  }
  static std::vector<std::pair<int, int>> chain(int i, int j) {
    std::vector<std::pair<int, int>> e;
    for (int s = i; s < j; ++s) e.emplace_back(s, s + 1);
    return e;
  }
  static std::vector<int> range(int i, int j) {
    std::vector<int> v;
    for (int s = i; s <= j; ++s) v.push_back(s);
    return v;
  }
  std::vector<Rat> zero_x() const { return std::vector<Rat>(rs.varpi_dim(), Rat(0)); }
  // sum_{s in S} m_sk + extra_k as a varpi vector
  std::vector<Rat> msum(const std::vector<int>& S) const {
    auto x = zero_x();
    for (int s : S)
      for (int k = 1; k <= rs.varpi_dim(); ++k) x[k - 1] += m[s][k];
    return x;
  }
  // sum_k sum_{s in S} w(k) m_sk
  Rat mpair(const std::vector<int>& S, const std::function<Rat(int)>& w) const {
    Rat t = 0;
    for (int s : S)
      for (int k = 1; k <= rs.varpi_dim(); ++k) t += w(k) * m[s][k];
    return t;
  }
  void add(const std::vector<int>& roots, const std::vector<Rat>& x, const Scalar& c) {
    RootVec beta(rs.rank(), 0);
    for (int i : roots) ++beta[i - 1];
    out.add(beta, rs.from_varpi(x), c);
  }
  void add_T(const std::vector<Rat>& x, const Scalar& c) { add({}, x, c); }
  std::vector<Rat> dx(std::vector<Rat> x, int k, Rat s) const {
    x[k - 1] += s;
    return x;
  }
  // sum over i<=a<b<=j (or over a set) of f(a,b)
  Rat pairsum(const std::vector<int>& S, const std::function<Rat(int, int)>& f) const {
    Rat t = 0;
    for (size_t x = 0; x < S.size(); ++x)
      for (size_t y = x + 1; y < S.size(); ++y) t += f(S[x], S[y]);
    return t;
  }
};

DiffOp closed_A(Closed& C) {
  int n = C.n;
  C.m.assign(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (int i = 1; i < n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int p = k; p <= n - 1; ++p) C.m[i][k] += Rat(-C.dn(i, p));
  auto w = [&](int k) { return Rat(2 * k - n - 1, 2); };
  for (int j = 1; j <= n; ++j) C.add_T(C.dx(C.zero_x(), j, 2), 1);
  for (int i = 1; i < n; ++i) {
    auto x = C.dx(C.dx(C.msum({i}), i, 1), i + 1, 1);
    C.add({i}, x, C.b(i) * C.V(C.mpair({i}, w)));
  }
  for (int i = 1; i < n; ++i)
    for (int j = i + 2; j <= n; ++j) {
      if (!C.run(C.chain(i, j - 1), 1)) continue;
      auto S = Closed::range(i, j - 1);
      Rat e = Rat(j - i - 1) + C.pairsum(S, [&](int a, int b) { return Rat(C.dn(a, b)); }) + C.mpair(S, w);
      C.add(S, C.dx(C.dx(C.msum(S), i, 1), j, 1), C.bprod(S) * C.V(e));
    }
  return C.out;
}

DiffOp closed_C(Closed& C) {
  int n = C.n;
  C.m.assign(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int p = k; p <= n; ++p) C.m[i][k] += Rat(-C.dn(i, p));
  auto w = [&](int k) { return Rat(k - n - 1); };
  std::function<Rat(int, int)> up = [&](int a, int b) { return Rat(C.dn(a, b)); };
  std::function<Rat(int, int)> down = [&](int a, int b) { return Rat(C.dn(b, a)); };
  for (int i = 1; i <= n; ++i) {
    C.add_T(C.dx(C.zero_x(), i, 2), 1);
    C.add_T(C.dx(C.zero_x(), i, -2), 1);
  }
  C.add({n}, C.msum({n}), C.b(n) * C.V(C.mpair({n}, w)));
  for (int i = 1; i < n; ++i) {
    Scalar c = C.b(i) * C.V(C.mpair({i}, w));
    C.add({i}, C.dx(C.dx(C.msum({i}), i, 1), i + 1, 1), c);
    C.add({i}, C.dx(C.dx(C.msum({i}), i, -1), i + 1, -1), c);
  }
  for (int sign : {1, -1})
    for (int i = 1; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!C.run(C.chain(i, j), sign)) continue;
        auto S = Closed::range(i, j);
        Rat e = Rat(j - i) + C.pairsum(S, sign > 0 ? up : down) + C.mpair(S, w);
        C.add(S, C.dx(C.dx(C.msum(S), i, sign), j + 1, sign), C.bprod(S) * C.V(e));
      }
      if (!C.run(C.chain(i, n), sign)) continue;
      auto S = Closed::range(i, n);
      Rat e = Rat(n + 1 - i) + C.mpair(S, w);
      if (sign > 0)
        e += C.pairsum(S, [&](int a, int b) { return Rat(C.dn(a, b) * (1 + (b == n))); });
      else
        e += C.pairsum(S, down);
      C.add(S, C.dx(C.dx(C.msum(S), i, sign), n, -sign), C.bprod(S) * C.V(e));
    }
  return C.out;
}

DiffOp closed_D(Closed& C) {
  int n = C.n;
  C.m.assign(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (int i = 1; i <= n; ++i) {
    Rat half = Rat(-C.dn(i, n - 1), 2) + Rat(-C.dn(i, n), 2);
    for (int k = 1; k < n; ++k) {
      C.m[i][k] = half;
      for (int p = k; p <= n - 2; ++p) C.m[i][k] += Rat(-C.dn(i, p));
    }
    C.m[i][n] = Rat(C.dn(i, n - 1), 2) + Rat(-C.dn(i, n), 2);
  }
  auto w = [&](int k) { return Rat(k - n); };
  auto up = [&](int a, int b) { return Rat(C.dn(a, b)); };
  auto down = [&](int a, int b) { return Rat(C.dn(b, a)); };
  for (int i = 1; i <= n; ++i) {
    C.add_T(C.dx(C.zero_x(), i, 2), 1);
    C.add_T(C.dx(C.zero_x(), i, -2), 1);
  }
  C.add({n}, C.dx(C.dx(C.msum({n}), n - 1, -1), n, 1), C.b(n) * C.V(C.mpair({n}, w)));
  C.add({n}, C.dx(C.dx(C.msum({n}), n - 1, 1), n, -1), C.b(n) * C.V(Rat(C.fix ? 0 : -2) + C.mpair({n}, w)));
  C.add({n - 1, n}, C.msum({n - 1, n}),
        C.b(n - 1) * C.b(n) * C.V(Rat(C.dn(n - 1, n)) + C.mpair({n - 1, n}, w)));
  for (int i = 1; i < n; ++i) {
    Scalar c = C.b(i) * C.V(C.mpair({i}, w));
    C.add({i}, C.dx(C.dx(C.msum({i}), i, 1), i + 1, 1), c);
    C.add({i}, C.dx(C.dx(C.msum({i}), i, -1), i + 1, -1), c);
  }
  for (int sign : {1, -1}) {
    auto pf = sign > 0 ? std::function<Rat(int, int)>(up) : std::function<Rat(int, int)>(down);
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!C.run(C.chain(i, j), sign)) continue;
        auto S = Closed::range(i, j);
        Rat e = Rat(j - i) + C.pairsum(S, pf) + C.mpair(S, w);
        C.add(S, C.dx(C.dx(C.msum(S), i, sign), j + 1, sign), C.bprod(S) * C.V(e));
      }
    for (int i = 1; i < n - 1; ++i) {
      // chain to n-2 then the fork edge (n-2, n), skipping n-1
      auto edges = C.chain(i, n - 2);
      edges.emplace_back(n - 2, n);
      if (C.run(edges, sign)) {
        auto S = Closed::range(i, n - 2);
        S.push_back(n);
        Rat e = Rat(n - i - 1) + C.pairsum(S, pf) + C.mpair(S, w);
        C.add(S, C.dx(C.dx(C.msum(S), i, sign), n, -sign), C.bprod(S) * C.V(e));
      }
      auto edges2 = C.chain(i, n - 1);
      edges2.emplace_back(n - 2, n);
      if (C.run(edges2, sign)) {
        auto S = Closed::range(i, n);
        Rat e = Rat(n - i) + C.pairsum(S, pf) + C.mpair(S, w);
        C.add(S, C.dx(C.dx(C.msum(S), i, sign), n - 1, -sign), C.bprod(S) * C.V(e));
      }
    }
  }
  return C.out;
}

DiffOp closed_B(Closed& C) {
  int n = C.n;
  C.m.assign(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int p = k; p <= n; ++p) C.m[i][k] += Rat(-C.dn(i, p)) * (Rat(1) - Rat(p == n ? 1 : 0, 2));
  auto w = [&](int k) { return Rat(2 * k - 2 * n - 1); };
  auto w2 = [&](int k) { return Rat(4 * k - 4 * n - 2); };
  std::function<Rat(int, int)> up = [&](int a, int b) { return Rat(C.dn(a, b)); };
  std::function<Rat(int, int)> down = [&](int a, int b) { return Rat(C.dn(b, a)); };
  Scalar onev = Scalar(1) + C.V(1);
  Scalar inv_sq = (onev * onev).inverse();
  // corrected: alpha_n enters with [2]_v, 2alpha_n with (v-v^{-1})^4 and no (1+v)^{-2}
  Scalar two = C.fix ? C.V(1) + C.V(-1) : Scalar(1);
  Scalar dbl = C.fix ? C.V(2) : inv_sq;
  C.add_T(C.zero_x(), 1);
  for (int i = 1; i <= n; ++i) {
    C.add_T(C.dx(C.zero_x(), i, 2), 1);
    C.add_T(C.dx(C.zero_x(), i, -2), 1);
  }
  {
    Scalar c = C.b(n) * C.V(C.mpair({n}, w));
    C.add({n}, C.dx(C.msum({n}), n, -1), two * c * C.V(1));
    C.add({n}, C.dx(C.msum({n}), n, 1), two * c * C.V(-1));
    auto x = C.msum({n});
    for (auto& t : x) t *= 2;
    C.add({n, n}, x, dbl * C.b(n).pow(2) * C.V(Rat(-2 + C.dn(n, n)) + C.mpair({n}, w2)));
  }
  for (int i = 1; i < n; ++i) {
    Scalar c = C.b(i) * C.V(C.mpair({i}, w));
    C.add({i}, C.dx(C.dx(C.msum({i}), i, 1), i + 1, 1), c);
    C.add({i}, C.dx(C.dx(C.msum({i}), i, -1), i + 1, -1), c);
  }
  // sum_k sum_{s=i}^n (2k-2n-1)(1+delta_sn) m_sk
  auto wdbl = [&](const std::vector<int>& S) {
    Rat t = 0;
    for (int s : S)
      for (int k = 1; k <= n; ++k) t += w(k) * Rat(1 + (s == n)) * C.m[s][k];
    return t;
  };
  for (int sign : {1, -1})
    for (int i = 1; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!C.run(C.chain(i, j), sign)) continue;
        auto S = Closed::range(i, j);
        Rat e = Rat(2 * j - 2 * i) + 2 * C.pairsum(S, sign > 0 ? up : down) + C.mpair(S, w);
        C.add(S, C.dx(C.dx(C.msum(S), i, sign), j + 1, sign), C.bprod(S) * C.V(e));
      }
      if (!C.run(C.chain(i, n), sign)) continue;
      auto S = Closed::range(i, n);
      Rat e;
      if (sign > 0)
        e = Rat(2 * n - 2 * i - 1) +
            C.pairsum(S, [&](int a, int b) { return Rat(C.dn(a, b) * (2 - (b == n))); }) + C.mpair(S, w);
      else
        e = Rat(2 * n - 2 * i + 1) + 2 * C.pairsum(S, down) + C.mpair(S, w);
      C.add(S, C.dx(C.msum(S), i, sign), two * C.bprod(S) * C.V(e));
      // the e^{-alpha_i-...-alpha_{n-1}-2alpha_n} companion
      auto S2 = S;
      S2.push_back(n);
      Rat e2 = Rat(2 * n - 2 * i + C.dn(n, n)) + wdbl(S);
      if (sign > 0)
        e2 += 2 * C.pairsum(S, up);
      else
        e2 += C.pairsum(S, [&](int a, int b) { return Rat(C.dn(b, a) * (2 + 2 * (b == n))); });
      auto x = C.msum(S);
      for (int k = 1; k <= n; ++k) x[k - 1] += C.m[n][k];
      x = C.dx(C.dx(x, i, sign), n, -sign);
      C.add(S2, x, dbl * C.bprod(S) * C.b(n) * C.V(e2));
    }
  return C.out;
}

DiffOp closed_G2(Closed& C) {
  C.m.assign(3, std::vector<Rat>(3, Rat(0)));
  for (int i = 1; i <= 2; ++i) {
    C.m[i][1] = Rat(-C.dn(i, 1) - C.dn(i, 2));
    C.m[i][2] = Rat(-C.dn(i, 1) - 2 * C.dn(i, 2));
  }
  auto& m = C.m;
  auto X = [&](Rat a, Rat b) { return std::vector<Rat>{a, b}; };
  Scalar v = C.V(1), vv = v + v.inverse();
  Scalar onev = Scalar(1) + v;
  // corrected: the 2alpha_1 terms lose [2]^2/(1+v)^2 and pick up v^2
  Scalar sq = C.fix ? C.V(2) : vv * vv / (onev * onev);
  C.add_T(X(0, 0), 1);
  for (int s : {1, -1}) {
    C.add_T(X(2 * s, 0), 1);
    C.add_T(X(0, 2 * s), 1);
    C.add_T(X(2 * s, 2 * s), 1);
  }
  {
    Scalar c = C.b(1) * C.V(-m[1][1] - 4 * m[1][2]);
    C.add({1}, X(m[1][1] + 1, m[1][2]), c * v.inverse() * vv);
    C.add({1}, X(m[1][1] - 1, m[1][2]), c * v * vv);
    C.add({1}, X(m[1][1] + 1, m[1][2] + 2), c);
    C.add({1}, X(m[1][1] - 1, m[1][2] - 2), c);
  }
  {
    Scalar c = C.b(2) * C.V(-m[2][1] - 4 * m[2][2]);
    C.add({2}, X(m[2][1] + 1, m[2][2] + 1), c);
    C.add({2}, X(m[2][1] - 1, m[2][2] - 1), c);
  }
  C.add({1, 1}, X(2 * m[1][1], 2 * m[1][2]),
        C.b(1).pow(2) * sq * C.V(Rat(-2 + C.dn(1, 1)) - (2 * m[1][1] + 8 * m[1][2])));
  Rat s12 = m[1][1] + m[2][1] + 4 * m[1][2] + 4 * m[2][2];
  Rat s112 = 2 * m[1][1] + m[2][1] + 8 * m[1][2] + 4 * m[2][2];
  Rat a1 = m[1][1] + m[2][1], a2 = m[1][2] + m[2][2];
  Rat c1 = 2 * m[1][1] + m[2][1], c2 = 2 * m[1][2] + m[2][2];
  if (C.run({{1, 2}}, -1)) {
    Scalar c = C.b(1) * C.b(2) * C.V(Rat(-4 + 3 * C.dn(1, 2)) - s12);
    C.add({1, 2}, X(a1, a2 + 1), c * vv);
    C.add({1, 2}, X(a1 - 2, a2 - 1), c * v);
    C.add({1, 1, 2}, X(c1 - 1, c2 + 1),
          C.b(1).pow(2) * C.b(2) * sq * C.V(Rat(-8 + C.dn(1, 1) + 6 * C.dn(1, 2)) - s112));
  }
  if (C.run({{1, 2}}, 1)) {
    Scalar c = C.b(1) * C.b(2) * C.V(Rat(3 + 3 * C.dn(1, 2)) - s12);
    C.add({1, 2}, X(a1, a2 - 1), c * v * vv);
    C.add({1, 2}, X(a1 + 2, a2 + 1), c);
    C.add({1, 1, 2}, X(c1 + 1, c2 - 1),
          C.b(1).pow(2) * C.b(2) * sq * C.V(Rat(4 + C.dn(1, 1) + 6 * C.dn(1, 2)) - s112));
  }
  return C.out;
}

}  // namespace

DiffOp build_D1_closed(const TriplePair& P, bool corrected) {
  const RootSystem& rs = RootSystem::get(P.rs.type(), P.rs.rank());
  validate_triple(rs, P.plus.eps, P.plus.n, P.plus.c);
  validate_triple(rs, P.minus.eps, P.minus.n, P.minus.c);
  Closed C(P, rs, corrected);
  switch (rs.type()) {
    case 'A': return closed_A(C);
    case 'C': return closed_C(C);
    case 'D': return closed_D(C);
    case 'B': return closed_B(C);
    case 'G': return closed_G2(C);
  }
  throw MathError("no closed form for " + rs.tag());
}

// ---------------------------------------------------------------- standard and affine

namespace {

struct Lit {
  const RootSystem& rs;
  DiffOp out;
  explicit Lit(const RootSystem& r) : rs(r), out(r) {}
  Scalar V(const Rat& e) const { return vpow(e, rs.M()); }
  std::vector<Rat> x(std::initializer_list<std::pair<int, int>> kv) const {
    std::vector<Rat> v(rs.varpi_dim(), Rat(0));
    for (auto [k, c] : kv) v[k - 1] += c;
    return v;
  }
  void add(std::initializer_list<int> roots, const std::vector<Rat>& mu, const Scalar& c) {
    RootVec beta(rs.rank(), 0);
    for (int i : roots) ++beta[i - 1];
    out.add(beta, rs.from_varpi(mu), c);
  }
  // e^{lambda} with lambda given in varpi coordinates (lies in the root lattice)
  void add_exp(const std::vector<Rat>& lambda, const std::vector<Rat>& mu, const Scalar& c) {
    RootVec b = rs.to_root(rs.from_varpi(lambda));
    for (auto& t : b) t = -t;
    out.add(b, rs.from_varpi(mu), c);
  }
  Scalar sq(int a) const {  // (v^a - v^{-a})^2
    Scalar t = V(a) - V(-a);
    return t * t;
  }
};

}  // namespace

DiffOp build_standard_qToda(const RootSystem& rsin) {
  const RootSystem& rs = RootSystem::get(rsin.type(), rsin.rank());
  Lit L(rs);
  int n = rs.type() == 'A' ? rs.rank() + 1 : rs.rank();
  switch (rs.type()) {
    case 'A':
      for (int j = 1; j <= n; ++j) L.add({}, L.x({{j, 2}}), 1);
      for (int i = 1; i < n; ++i) L.add({i}, L.x({{i, 1}, {i + 1, 1}}), -L.sq(1));
      break;
    case 'C':
    case 'D':
    case 'B': {
      char t = rs.type();
      if (t == 'B') L.add({}, L.x({}), 1);
      for (int i = 1; i <= n; ++i) {
        L.add({}, L.x({{i, 2}}), 1);
        L.add({}, L.x({{i, -2}}), 1);
      }
      Scalar s = -L.sq(t == 'B' ? 2 : 1);
      for (int i = 1; i < n; ++i) {
        L.add({i}, L.x({{i, 1}, {i + 1, 1}}), s);
        L.add({i}, L.x({{i, -1}, {i + 1, -1}}), s);
      }
      if (t == 'C') L.add({n}, L.x({}), -L.sq(2));
      if (t == 'D') {
        L.add({n}, L.x({{n - 1, -1}, {n, 1}}), -L.sq(1));
        L.add({n}, L.x({{n - 1, 1}, {n, -1}}), -L.sq(1) * L.V(-2));
        L.add({n - 1, n}, L.x({}), L.sq(1) * L.sq(1));
      }
      if (t == 'B') {
        L.add({n}, L.x({{n, -1}}), -L.sq(1) * L.V(1));
        L.add({n}, L.x({{n, 1}}), -L.sq(1) * L.V(-1));
        Scalar a = Scalar(1) - L.V(-1);
        L.add({n, n}, L.x({}), L.V(-2) * a * a * L.sq(1));
      }
      break;
    }
    case 'G': {
      Scalar v = L.V(1), vv = v + v.inverse();
      L.add({}, L.x({}), 1);
      for (int s : {1, -1}) {
        L.add({}, L.x({{1, 2 * s}}), 1);
        L.add({}, L.x({{2, 2 * s}}), 1);
        L.add({}, L.x({{1, 2 * s}, {2, 2 * s}}), 1);
      }
      Scalar s1 = -L.sq(1);
      L.add({1}, L.x({{1, 1}}), s1 * v.inverse() * vv);
      L.add({1}, L.x({{1, -1}}), s1 * v * vv);
      L.add({1}, L.x({{1, 1}, {2, 2}}), s1);
      L.add({1}, L.x({{1, -1}, {2, -2}}), s1);
      L.add({2}, L.x({{1, 1}, {2, 1}}), -L.sq(3));
      L.add({2}, L.x({{1, -1}, {2, -1}}), -L.sq(3));
      Scalar a = Scalar(1) - L.V(-1);
      L.add({1, 1}, L.x({}), L.V(-2) * a * a * L.sq(2));
      break;
    }
  }
  return L.out;
}

DiffOp build_affine_D1(const RootSystem& rsin, const Scalar& kappa) {
  const RootSystem& rs = RootSystem::get(rsin.type(), rsin.rank());
  Lit L(rs);
  DiffOp base = build_standard_qToda(rs);
  int n = rs.type() == 'A' ? rs.rank() + 1 : rs.rank();
  switch (rs.type()) {
    case 'A':
      L.add_exp(L.x({{n, -1}, {1, 1}}), L.x({{n, 1}, {1, 1}}), -kappa * L.sq(1));
      break;
    case 'C':
      L.add_exp(L.x({{1, 2}}), L.x({}), -kappa * L.V(Rat(-2 * n - 2)) * L.sq(2));
      break;
    case 'D':
    case 'B': {
      bool B = rs.type() == 'B';
      Scalar k = kappa * L.V(B ? Rat(-4 * n + 2) : Rat(-2 * n + 2)), s = L.sq(B ? 2 : 1);
      L.add_exp(L.x({{1, 1}, {2, 1}}), L.x({{1, -1}, {2, 1}}), -k * s);
      L.add_exp(L.x({{1, 1}, {2, 1}}), L.x({{1, 1}, {2, -1}}), -k * s);
      L.add_exp(L.x({{2, 2}}), L.x({}), k * s * s);
      break;
    }
    case 'G': {
      Scalar k = kappa * L.V(-12);
      L.add_exp(L.x({{1, 1}, {2, 2}}), L.x({{1, 1}}), -k * L.sq(3));
      L.add_exp(L.x({{1, 1}, {2, 2}}), L.x({{1, -1}}), -k * L.sq(3));
      L.add_exp(L.x({{2, 2}}), L.x({}), k * L.sq(1) * L.sq(3));
      break;
    }
  }
  return base + L.out;
}

}  // namespace qtoda
