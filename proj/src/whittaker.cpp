#include "qtoda/whittaker.hpp"

#include <algorithm>
#include <functional>

namespace qtoda {

Scalar JSeries::at(const RootVec& beta) const {
  auto it = c.find(beta);
  return it == c.end() ? Scalar() : it->second;
}

nlohmann::json JSeries::to_json() const {
  nlohmann::json j;
  j["type"] = rs->tag();
  j["degree"] = D;
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [b, s] : c) arr.push_back({{"beta", b}, {"coeff", s.str()}});
  j["coefficients"] = arr;
  return j;
}

std::vector<RootVec> positive_cone(const RootSystem& rs, int D) {
  std::vector<RootVec> out;
  RootVec b(rs.rank(), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == rs.rank()) {
      out.push_back(b);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      b[i] = k;
      rec(i + 1, left - k);
    }
    b[i] = 0;
  };
  rec(0, D);
  std::stable_sort(out.begin(), out.end(), [](const RootVec& x, const RootVec& y) { return height(x) < height(y); });
  return out;
}

namespace {

bool leq(const RootVec& a, const RootVec& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

RootVec sub(RootVec a, const RootVec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Weight scale(Weight w, const Rat& s) {
  for (auto& x : w) x *= s;
  return w;
}

// Everything the two fermionic routes need, with lambda kept symbolic through u_i.
struct Fermi {
  const RootSystem& rs;
  int M;
  std::vector<Weight> dnu;  // nu^-_i - nu^+_i
  std::vector<int> pos;     // position in the order +
  std::vector<Scalar> cc;   // -c+_i c-_i (v_i - v_i^{-1})^2

  explicit Fermi(const TriplePair& P) : rs(RootSystem::get(P.rs.type(), P.rs.rank())), M(rs.M()) {
    int r = rs.rank();
    auto op = compatible_order(rs, P.plus.eps);
    pos.assign(r, 0);
    for (int k = 0; k < r; ++k) pos[op[k]] = k;
    for (int i = 0; i < r; ++i) {
      Weight w = P.minus.nu(i), p = P.plus.nu(i);
      for (int t = 0; t < r; ++t) w[t] -= p[t];
      dnu.push_back(w);
      Scalar vi = vpow(rs.d(i), M);
      cc.push_back(-(P.plus.c[i] * P.minus.c[i]) * (vi - vi.inverse()).pow(2));
    }
  }

  // (v^2)_alpha
  Scalar poch(const RootVec& a) const {
    Scalar s(1);
    for (int i = 0; i < rs.rank(); ++i) s *= q_pochhammer(a[i], 2 * rs.d(i), M);
    return s;
  }
  Scalar cpow(const RootVec& a) const {
    Scalar s(1);
    for (int i = 0; i < rs.rank(); ++i)
      if (a[i]) s *= cc[i].pow(a[i]);
    return s;
  }
  // v^{(g,g) - 2(lambda+rho,g)}
  Scalar shift(const RootVec& g) const {
    Weight w = rs.root_weight(g);
    return vpow(rs.pair(w, w) - 2 * rs.pair(w, rs.rho()), M) * lambda_character(rs, scale(w, -2));
  }
  // v^{tau_lambda(alpha, beta)}
  Scalar tau(const RootVec& a, const RootVec& beta) const {
    int r = rs.rank();
    Weight bw = rs.root_weight(beta);
    Rat e = 0;
    Weight lam = rs.zero();  // coefficient of lambda, as a weight to pair with
    for (int i = 0; i < r; ++i) {
      if (!a[i]) continue;
      for (int t = 0; t < r; ++t) lam[t] += Rat(a[i]) * dnu[i][t];
      e -= Rat(a[i]) * rs.pair(dnu[i], bw);
      for (int j = 0; j < r; ++j)
        if (pos[j] < pos[i]) e += Rat(a[i] * a[j]) * rs.pair(dnu[i], rs.alpha(j));
      e += Rat(a[i] * (a[i] - 1), 2) * rs.pair(dnu[i], rs.alpha(i));
    }
    return vpow(e, M) * lambda_character(rs, lam);
  }
};

}  // namespace

JSeries j_tilde_recursive(const TriplePair& P, int D) {
  Fermi F(P);
  JSeries J{&F.rs, D, {}};
  for (auto& beta : positive_cone(F.rs, D)) {
    if (height(beta) == 0) {
      J.c[beta] = 1;
      continue;
    }
    Scalar rhs;
    for (auto& [g, jg] : J.c) {
      if (g == beta || !leq(g, beta) || jg.is_zero()) continue;
      RootVec a = sub(beta, g);
      rhs += F.shift(g) * F.cpow(a) * F.tau(a, beta) * jg / F.poch(a);
    }
    Scalar piv = Scalar(1) - F.shift(beta);
    if (piv.is_zero()) throw MathError("vanishing pivot in the J recursion");
    J.c[beta] = rhs / piv;
  }
  return J;
}

JSeries j_tilde_closed(const TriplePair& P, int D) {
  Fermi F(P);
  JSeries J{&F.rs, D, {}};
  int r = F.rs.rank();
  // sum over ordered decompositions beta = beta_1 + ... + beta_d, beta_e > 0
  for (auto& beta : positive_cone(F.rs, D)) {
    if (height(beta) == 0) {
      J.c[beta] = 1;
      continue;
    }
    Scalar total;
    std::vector<RootVec> parts;
    std::function<void(const RootVec&)> rec = [&](const RootVec& rest) {
      if (height(rest) == 0) {
        Scalar num(1), den(1);
        int d = (int)parts.size();
        for (int e = 0; e < d; ++e) {
          RootVec Se(r, 0), Snext(r, 0);
          for (int f = e; f < d; ++f)
            for (int t = 0; t < r; ++t) Se[t] += parts[f][t];
          Snext = sub(Se, parts[e]);
          num *= F.cpow(parts[e]) * F.tau(parts[e], Se) * F.shift(Snext);
          den *= F.poch(parts[e]) * (Scalar(1) - F.shift(Se));
        }
        total += num / den;
        return;
      }
      for (auto& b : positive_cone(F.rs, height(rest))) {
        if (height(b) == 0 || !leq(b, rest)) continue;
        parts.push_back(b);
        rec(sub(rest, b));
        parts.pop_back();
      }
    };
    rec(beta);
    J.c[beta] = total;
  }
  return J;
}

// ---------------------------------------------------------------- Verma oracle

namespace {

using Word = std::vector<int>;

void words_of(const RootVec& content, Word& cur, std::vector<Word>& out) {
  bool done = true;
  for (size_t i = 0; i < content.size(); ++i) {
    if (!content[i]) continue;
    done = false;
    RootVec c = content;
    --c[i];
    cur.push_back((int)i);
    words_of(c, cur, out);
    cur.pop_back();
  }
  if (done) out.push_back(cur);
}

// Gram entries (F_w 1, Fbar_w' 1bar) of the pairing V x Vbar
struct Gram {
  const RootSystem& rs;
  int M;
  std::map<std::pair<Word, Word>, Scalar> memo;

  // x on Vbar_gamma for Kbar_i:  v^{-(alpha_i, lambda - gamma)}
  Scalar kbar(int i, const RootVec& gamma) const {
    Weight a = rs.alpha(i);
    return vpow(rs.pair(rs.root_weight(gamma), a), M) * lambda_character(rs, scale(a, -1));
  }
  // (1, Ebar_{e_1} ... Ebar_{e_k} Fbar_w 1bar), e applied right-to-left
  Scalar eval(const Word& e, const Word& w) {
    if (e.size() != w.size()) return Scalar();
    if (e.empty()) return Scalar(1);
    auto key = std::make_pair(e, w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int i = e.back();
    Word rest_e(e.begin(), e.end() - 1);
    Scalar vi = vpow(rs.d(i), M), den = vi.inverse() - vi;
    Scalar s;
    for (size_t p = 0; p < w.size(); ++p) {
      if (w[p] != i) continue;
      RootVec g(rs.rank(), 0);  // content of the tail right of p
      for (size_t t = p + 1; t < w.size(); ++t) ++g[w[t]];
      Scalar x = kbar(i, g);
      Word w2 = w;
      w2.erase(w2.begin() + p);
      s += (x - x.inverse()) / den * eval(rest_e, w2);
    }
    memo.emplace(key, s);
    return s;
  }
  // (F_w 1, Fbar_w' 1bar) = (1, sigma(F_w) Fbar_w' 1bar), sigma(F_{i1}...F_{ik}) = Ebar_{ik}...Ebar_{i1}
  Scalar pair(const Word& w, const Word& wbar) {
    Word e(w.rbegin(), w.rend());
    return eval(e, wbar);
  }
};

// solve x^T G = phi^T and return x . psi over an independent subset of words
Scalar bilinear_solve(std::vector<std::vector<Scalar>> G, std::vector<Scalar> phi, std::vector<Scalar> psi) {
  // J = phi^T G^+ psi where G is restricted to a maximal nonsingular minor.
  size_t n = G.size();
  std::vector<size_t> rows, cols;
  // Gaussian elimination with full pivot search on a copy to pick the minor
  auto A = G;
  std::vector<bool> rused(n, false), cused(n, false);
  for (;;) {
    bool found = false;
    for (size_t i = 0; i < n && !found; ++i) {
      if (rused[i]) continue;
      for (size_t j = 0; j < n && !found; ++j) {
        if (cused[j] || A[i][j].is_zero()) continue;
        found = true;
        rused[i] = cused[j] = true;
        rows.push_back(i);
        cols.push_back(j);
        for (size_t k = 0; k < n; ++k) {
          if (k == i || A[k][j].is_zero()) continue;
          Scalar f = A[k][j] / A[i][j];
          for (size_t l = 0; l < n; ++l)
            if (!A[i][l].is_zero()) A[k][l] -= f * A[i][l];
        }
      }
    }
    if (!found) break;
  }
  size_t r = rows.size();
  // theta = sum_{a in rows} x_a F_a 1 with sum_a x_a G[a][b] = phi[b] for b in cols
  std::vector<std::vector<Scalar>> S(r, std::vector<Scalar>(r + 1));
  for (size_t b = 0; b < r; ++b) {
    for (size_t a = 0; a < r; ++a) S[b][a] = G[rows[a]][cols[b]];
    S[b][r] = phi[cols[b]];
  }
  for (size_t c = 0; c < r; ++c) {
    size_t p = c;
    while (p < r && S[p][c].is_zero()) ++p;
    if (p == r) throw MathError("singular Gram minor in the Verma oracle");
    std::swap(S[p], S[c]);
    Scalar inv = S[c][c].inverse();
    for (size_t l = c; l <= r; ++l) S[c][l] *= inv;
    for (size_t k = 0; k < r; ++k) {
      if (k == c || S[k][c].is_zero()) continue;
      Scalar f = S[k][c];
      for (size_t l = c; l <= r; ++l)
        if (!S[c][l].is_zero()) S[k][l] -= f * S[c][l];
    }
  }
  Scalar J;
  for (size_t a = 0; a < r; ++a) J += S[a][r] * psi[rows[a]];
  return J;
}

}  // namespace

JSeries j_from_verma_oracle(const TriplePair& P, int D) {
  const RootSystem& rs = RootSystem::get(P.rs.type(), P.rs.rank());
  int M = rs.M(), r = rs.rank();
  Gram G{rs, M, {}};
  JSeries J{&rs, D, {}};
  std::vector<Weight> nup(r), num(r);
  for (int i = 0; i < r; ++i) {
    nup[i] = P.plus.nu(i);
    num[i] = P.minus.nu(i);
  }
  // (theta_gamma, Fbar_{j} y) = c+_j v^{-(nu+_j, lambda - gamma)} (theta_{gamma - alpha_j}, y)
  auto phi = [&](const Word& w) {
    Scalar s(1);
    RootVec g(r, 0);
    for (int t : w) ++g[t];
    for (int t : w) {
      Weight gw = rs.root_weight(g);
      s *= P.plus.c[t] * vpow(rs.pair(nup[t], gw), M) * lambda_character(rs, scale(nup[t], -1));
      --g[t];
    }
    return s;
  };
  // (F_i x, thetabar_gamma) = c-_i v^{(nu-_i, lambda - gamma)} (x, thetabar_{gamma - alpha_i})
  auto psi = [&](const Word& w) {
    Scalar s(1);
    RootVec g(r, 0);
    for (int t : w) ++g[t];
    for (int t : w) {
      Weight gw = rs.root_weight(g);
      s *= P.minus.c[t] * vpow(-rs.pair(num[t], gw), M) * lambda_character(rs, num[t]);
      --g[t];
    }
    return s;
  };
  for (auto& beta : positive_cone(rs, D)) {
    std::vector<Word> ws;
    Word cur;
    words_of(beta, cur, ws);
    size_t n = ws.size();
    std::vector<std::vector<Scalar>> Gm(n, std::vector<Scalar>(n));
    std::vector<Scalar> ph(n), ps(n);
    for (size_t a = 0; a < n; ++a) {
      ph[a] = phi(ws[a]);
      ps[a] = psi(ws[a]);
      for (size_t b = 0; b < n; ++b) Gm[a][b] = G.pair(ws[a], ws[b]);
    }
    Scalar Jb = bilinear_solve(Gm, ph, ps);
    Weight bw = rs.root_weight(beta);
    J.c[beta] = Jb * vpow(-rs.pair(bw, bw) / 2, M) * lambda_character(rs, bw);
  }
  return J;
}

FormalSeries j_function(const JSeries& Jt) {
  const RootSystem& rs = *Jt.rs;
  FormalSeries f(rs, Jt.D);
  for (auto& [b, s] : Jt.c) {
    Weight w = rs.root_weight(b);
    f.set(b, s * vpow(rs.pair(w, w) / 2, rs.M()) * lambda_character(rs, scale(w, -1)));
  }
  return f;
}

EigenResult eigencheck_operator(const DiffOp& D_V, const Scalar& eigenvalue, const JSeries& Jt) {
  FormalSeries J = j_function(Jt);
  FormalSeries lhs = apply(D_V.conj_rho(-1), J);
  EigenResult res;
  res.eigenvalue = eigenvalue;
  for (auto& beta : positive_cone(*Jt.rs, Jt.D))
    if (!(lhs.at(beta) == eigenvalue * J.at(beta))) res.failures.push_back(beta);
  res.ok = res.failures.empty();
  return res;
}

EigenResult eigencheck(const TriplePair& P, const WeightBasisRep& V, int D) {
  DVOptions opt;
  DiffOp DV = build_DV_generic(P, V, opt);
  return eigencheck_operator(DV, trace_eigenvalue(V), j_tilde_recursive(P, D));
}

}  // namespace qtoda
