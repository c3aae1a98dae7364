#include "qtoda/triples.hpp"

#include <algorithm>
#include <set>

namespace qtoda {

Weight Triple::nu(int i) const {
  Weight w(n.size());
  for (size_t k = 0; k < n.size(); ++k) w[k] = n[i][k];
  return w;
}

static std::string ij(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

void check_orientation(const RootSystem& rs, const IMat& eps) {
  int r = rs.rank();
  if ((int)eps.size() != r) throw TripleError("epsilon has wrong size");
  for (auto& row : eps)
    if ((int)row.size() != r) throw TripleError("epsilon has wrong size");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      int e = eps[i][j];
      if (rs.edge(i, j)) {
        if (e != 1 && e != -1) throw TripleError("epsilon" + ij(i, j) + " must be +-1 on an edge");
        if (eps[j][i] != -e) throw TripleError("epsilon not antisymmetric at " + ij(i, j));
      } else if (e != 0) {
        throw TripleError("epsilon" + ij(i, j) + " must vanish off edges");
      }
    }
}

Triple validate_triple(const RootSystem& rs, const IMat& eps, const IMat& n, const std::vector<Scalar>& c) {
  int r = rs.rank();
  check_orientation(rs, eps);
  if ((int)n.size() != r) throw TripleError("n has wrong size");
  for (auto& row : n)
    if ((int)row.size() != r) throw TripleError("n has wrong size");
  if ((int)c.size() != r) throw TripleError("c has wrong size");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (rs.d(j) * n[i][j] - rs.d(i) * n[j][i] != eps[i][j] * rs.b(i, j))
        throw TripleError("d_j n_ij - d_i n_ji != eps_ij b_ij at " + ij(i, j));
  for (int i = 0; i < r; ++i)
    if (c[i].is_zero()) throw TripleError("c_" + std::to_string(i + 1) + " is zero");
  return Triple{eps, n, c};
}

std::vector<std::pair<int, int>> dynkin_edges(const RootSystem& rs) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < rs.rank(); ++i)
    for (int j = i + 1; j < rs.rank(); ++j)
      if (rs.edge(i, j)) e.emplace_back(i, j);
  return e;
}

std::vector<int> compatible_order(const RootSystem& rs, const IMat& eps) {
  check_orientation(rs, eps);
  int r = rs.rank();
  std::vector<int> indeg(r, 0), out;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (eps[i][j] == -1) ++indeg[j];
  std::set<int> ready;
  for (int i = 0; i < r; ++i)
    if (!indeg[i]) ready.insert(i);
  while (!ready.empty()) {
    int i = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(i);
    for (int j = 0; j < r; ++j)
      if (eps[i][j] == -1 && --indeg[j] == 0) ready.insert(j);
  }
  if ((int)out.size() != r) throw TripleError("orientation has a cycle");
  return out;
}

std::vector<int> epsilon_invariant(const RootSystem& rs, const Triple& plus, const Triple& minus) {
  int r = rs.rank();
  std::vector<int> v;
  for (int i = 0; i + 1 < r; ++i) {
    int a = i, b = i + 1;
    if (rs.type() == 'D' && i == r - 2) a = r - 3, b = r - 1;
    v.push_back((plus.eps[a][b] - minus.eps[a][b]) / 2);
  }
  return v;
}

TriplePair make_pair(const RootSystem& rs, const Triple& plus, const Triple& minus) {
  validate_triple(rs, plus.eps, plus.n, plus.c);
  validate_triple(rs, minus.eps, minus.n, minus.c);
  return TriplePair{rs, plus, minus, epsilon_invariant(rs, plus, minus)};
}

std::vector<Scalar> default_c(const RootSystem& rs, char sign) {
  std::vector<Scalar> c;
  for (int i = 0; i < rs.rank(); ++i) c.push_back(Scalar::sym(std::string(sign == '+' ? "cp_" : "cm_") + std::to_string(i + 1)));
  return c;
}

IMat orientation_from_edges(const RootSystem& rs, const std::vector<int>& signs) {
  auto edges = dynkin_edges(rs);
  if (signs.size() != edges.size()) throw TripleError("need one sign per Dynkin edge");
  IMat e(rs.rank(), std::vector<int>(rs.rank(), 0));
  for (size_t k = 0; k < edges.size(); ++k) {
    auto [i, j] = edges[k];
    e[i][j] = signs[k];
    e[j][i] = -signs[k];
  }
  return e;
}

IMat random_orientation(const RootSystem& rs, std::mt19937_64& rng) {
  std::vector<int> s;
  for (size_t k = 0; k < dynkin_edges(rs).size(); ++k) s.push_back(rng() & 1 ? 1 : -1);
  return orientation_from_edges(rs, s);
}

IMat random_n(const RootSystem& rs, const IMat& eps, std::mt19937_64& rng, int spread) {
  int r = rs.rank();
  IMat n(r, std::vector<int>(r, 0));
  std::uniform_int_distribution<int> pick(-spread, spread);
  for (int i = 0; i < r; ++i) {
    n[i][i] = pick(rng);
    for (int j = i + 1; j < r; ++j) {
      // n_ji = (d_j n_ij - eps_ij b_ij) / d_i must be an integer
      for (int tries = 0;; ++tries) {
        int x = pick(rng) + (tries > 20 ? tries : 0);
        int num = rs.d(j) * x - eps[i][j] * rs.b(i, j);
        if (num % rs.d(i) == 0) {
          n[i][j] = x;
          n[j][i] = num / rs.d(i);
          break;
        }
      }
    }
  }
  return n;
}

TriplePair standard_pair(const RootSystem& rs) {
  IMat eps = orientation_from_edges(rs, std::vector<int>(dynkin_edges(rs).size(), -1));
  IMat n(rs.rank(), std::vector<int>(rs.rank(), 0));
  // eps_ij = -1 for i<j on edges: d_j n_ij - d_i n_ji = -b_ij; take n_ij = 0, n_ji = b_ij / d_i = a_ij
  for (auto [i, j] : dynkin_edges(rs)) n[j][i] = rs.a(i, j);
  std::vector<Scalar> cp(rs.rank(), Scalar(1)), cm(rs.rank(), Scalar(-1));
  Triple p = validate_triple(rs, eps, n, cp), m = validate_triple(rs, eps, n, cm);
  return make_pair(rs, p, m);
}

TriplePair random_pair_with(const RootSystem& rs, const IMat& ep, const IMat& em, std::mt19937_64& rng, int spread) {
  Triple p = validate_triple(rs, ep, random_n(rs, ep, rng, spread), default_c(rs, '+'));
  Triple m = validate_triple(rs, em, random_n(rs, em, rng, spread), default_c(rs, '-'));
  return make_pair(rs, p, m);
}

TriplePair random_pair(const RootSystem& rs, std::mt19937_64& rng, int spread) {
  IMat ep = random_orientation(rs, rng);
  IMat em = random_orientation(rs, rng);
  return random_pair_with(rs, ep, em, rng, spread);
}

// ---------------------------------------------------------------- json

nlohmann::json triple_to_json(const RootSystem& rs, const Triple& t) {
  nlohmann::json j;
  j["type"] = rs.tag();
  j["epsilon"] = t.eps;
  j["n"] = t.n;
  std::vector<std::string> c;
  for (auto& x : t.c) c.push_back(x.str());
  j["c"] = c;
  return j;
}

Triple triple_from_json(const RootSystem& rs, const nlohmann::json& j) {
  if (j.contains("type") && RootSystem::parse(j.at("type").get<std::string>()).tag() != rs.tag())
    throw TripleError("triple type does not match");
  IMat eps = j.at("epsilon").get<IMat>();
  IMat n = j.at("n").get<IMat>();
  std::vector<Scalar> c;
  for (auto& x : j.at("c")) {
    if (x.is_number_integer()) c.emplace_back((long)x.get<long>());
    else c.push_back(Scalar::parse(x.get<std::string>()));
  }
  return validate_triple(rs, eps, n, c);
}

nlohmann::json pair_to_json(const TriplePair& p) {
  nlohmann::json j;
  j["type"] = p.rs.tag();
  j["plus"] = triple_to_json(p.rs, p.plus);
  j["minus"] = triple_to_json(p.rs, p.minus);
  j["eps_vec"] = p.eps_vec;
  return j;
}

TriplePair pair_from_json(const nlohmann::json& j) {
  RootSystem rs = RootSystem::parse(j.at("type").get<std::string>());
  Triple p = triple_from_json(rs, j.at("plus"));
  Triple m = triple_from_json(rs, j.at("minus"));
  return make_pair(rs, p, m);
}

}  // namespace qtoda
