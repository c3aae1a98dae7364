#include "qtoda/equivalence.hpp"
#include "qtoda/hamiltonians.hpp"
#include "qtoda/laumon.hpp"
#include "qtoda/lax.hpp"
#include "qtoda/suites.hpp"
#include "qtoda/whittaker.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace qtoda;
using nlohmann::json;

namespace {

// bad input of any kind: exit 2
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, latex, text };

struct Common {
  std::string format;  // empty: json, or latex for the standard operator
  std::string out;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "json, latex or text")->check(CLI::IsMember({"json", "latex", "text"}));
  app->add_option("--out", c.out, "write the artifact here instead of stdout");
  app->add_option("--seed", c.seed, "seed for random triples");
}

Format fmt(const Common& c) { return c.format == "latex" ? Format::latex : c.format == "text" ? Format::text : Format::json; }

void emit(const Common& c, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InputError("cannot write " + c.out);
  f << body;
  if (!body.empty() && body.back() != '\n') f << '\n';
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2)); }

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

const RootSystem& root_system(const std::string& tag) {
  try {
    return RootSystem::get(tag);
  } catch (const std::exception& e) {
    throw InputError("bad type '" + tag + "': " + e.what());
  }
}

// a pair file holds {"type","plus","minus"}; a single triple is read as the plus side of the
// matching standard-sign pair
TriplePair load_pair(const std::string& path, const RootSystem& rs) {
  json j = read_json(path);
  try {
    if (j.contains("plus")) {
      TriplePair P = pair_from_json(j);
      if (P.rs.tag() != rs.tag()) throw InputError("pair file is of type " + P.rs.tag() + ", expected " + rs.tag());
      return P;
    }
    Triple t = triple_from_json(rs, j);
    Triple m = validate_triple(rs, t.eps, t.n, default_c(rs, '-'));
    return make_pair(rs, t, m);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

TriplePair pair_or_random(const std::string& path, const RootSystem& rs, std::uint64_t seed) {
  if (!path.empty()) return load_pair(path, rs);
  std::mt19937_64 rng(seed);
  return random_pair(rs, rng);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string x; std::getline(ss, x, ',');)
    if (!x.empty()) out.push_back(x);
  return out;
}

Scalar parse_scalar(const std::string& s) {
  try {
    return Scalar::parse(s);
  } catch (const std::exception& e) {
    throw InputError("bad scalar '" + s + "': " + e.what());
  }
}

json report_json(const CheckReport& r) { return {{"ok", r.ok}, {"checked", r.checked}, {"failures", r.failures}}; }

// ---------------------------------------------------------------- hamiltonian

struct HamArgs {
  Common c;
  std::string type, pair;
  bool generic = false, closed = false, standard = false, repaired = false;
};

int run_hamiltonian(const HamArgs& a) {
  const RootSystem& rs = root_system(a.type);
  if (a.generic && a.closed) throw InputError("--generic and --closed exclude each other");
  DiffOp D(rs);
  json meta;
  if (a.standard) {
    D = build_standard_qToda(rs);
    meta["route"] = "standard";
  } else {
    TriplePair P = pair_or_random(a.pair, rs, a.c.seed);
    meta["pair"] = pair_to_json(P);
    if (a.generic) {
      D = build_DV_generic(P, rep_first_fundamental(rs));
      meta["route"] = "generic";
    } else {
      D = build_D1_closed(P, a.repaired);
      meta["route"] = a.repaired ? "closed-repaired" : "closed";
    }
  }
  switch (a.standard && a.c.format.empty() ? Format::latex : fmt(a.c)) {
    case Format::latex: emit(a.c, D.latex()); break;
    case Format::text: emit(a.c, D.str()); break;
    case Format::json:
      meta["type"] = rs.tag();
      meta["operator"] = D.to_json();
      emit_json(a.c, meta);
      break;
  }
  return 0;
}

// ---------------------------------------------------------------- lax

struct LaxArgs {
  Common c;
  std::string type = "A", k, periodic, check;
  int rank = 0;
};

int run_lax(const LaxArgs& a) {
  if (a.type != "A" && a.type != "C") throw InputError("lax: --type must be A or C");
  std::vector<int> k;
  try {
    k = parse_k_vector(a.k);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (a.rank > 0 && (int)k.size() != a.rank)
    throw InputError("--k has " + std::to_string(k.size()) + " entries, --rank says " + std::to_string(a.rank));
  Scalar eps = a.periodic.empty() ? Scalar(0) : parse_scalar(a.periodic);
  bool dbl = a.type == "C";
  Monodromy T = dbl ? double_monodromy(k) : monodromy(k);
  TorusElement H2 = extract_H2(T, eps);
  TorusElement disp = dbl ? double_mixed_H2(k, eps) : mixed_H2(k, eps);
  json j = {{"type", a.type}, {"k", k_vector_str(k)}, {"epsilon", eps.str()}, {"H2", H2.to_json()},
            {"matches_display", H2 == disp}};
  bool ok = true;
  for (auto& ch : split(a.check)) {
    bool r;
    if (ch == "rtt") r = rtt_check(T);
    else if (ch == "commute") r = commuting_coefficients_check(T, eps);
    else if (ch == "display") r = H2 == disp;
    else throw InputError("unknown lax check '" + ch + "'");
    j["checks"][ch] = r;
    ok = ok && r;
  }
  switch (fmt(a.c)) {
    case Format::json: emit_json(a.c, j); break;
    default: emit(a.c, H2.str()); break;
  }
  if (!ok) std::cerr << "lax: a requested check failed\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- whittaker

struct WhitArgs {
  Common c;
  std::string type, pair, route = "closed";
  int degree = 4;
};

int run_whittaker(const WhitArgs& a) {
  const RootSystem& rs = root_system(a.type);
  if (a.degree < 0) throw InputError("--degree must be nonnegative");
  TriplePair P = pair_or_random(a.pair, rs, a.c.seed);
  JSeries J;
  if (a.route == "recursive") J = j_tilde_recursive(P, a.degree);
  else if (a.route == "closed") J = j_tilde_closed(P, a.degree);
  else if (a.route == "oracle") J = j_from_verma_oracle(P, a.degree);
  else throw InputError("unknown route '" + a.route + "'");
  if (fmt(a.c) == Format::json) {
    emit_json(a.c, {{"type", rs.tag()}, {"route", a.route}, {"pair", pair_to_json(P)}, {"J", J.to_json()}});
  } else {
    std::ostringstream os;
    for (auto& [b, s] : J.c) {
      os << "beta=(";
      for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
      os << ") " << (fmt(a.c) == Format::latex ? s.latex(rs.M()) : s.str()) << '\n';
    }
    emit(a.c, os.str());
  }
  return 0;
}

int run_whittaker_eigen(const WhitArgs& a) {
  const RootSystem& rs = root_system(a.type);
  TriplePair P = pair_or_random(a.pair, rs, a.c.seed);
  EigenResult e = eigencheck(P, rep_first_fundamental(rs), a.degree);
  json fails = json::array();
  for (auto& b : e.failures) fails.push_back(b);
  emit_json(a.c, {{"type", rs.tag()}, {"degree", a.degree}, {"ok", e.ok}, {"eigenvalue", e.eigenvalue.str()},
                  {"failures", fails}});
  return e.ok ? 0 : 1;
}

// ---------------------------------------------------------------- laumon

struct LaumonArgs {
  Common c;
  int rank = 2, degree = 3;
  std::string check = "relations", pair;
  bool literal = false;
};

int run_laumon(const LaumonArgs& a) {
  if (a.rank < 2) throw InputError("laumon: --rank must be at least 2");
  if (a.degree < 0) throw InputError("--degree must be nonnegative");
  LaumonSpace X(a.rank);
  json j = {{"n", a.rank}, {"degree", a.degree}};
  bool ok = true;
  auto pair = [&] { return pair_or_random(a.pair, X.rs(), a.c.seed); };
  auto all_a = [&] {
    std::vector<std::vector<int>> out;
    for (int m = 0; m < (1 << (a.rank - 1)); ++m) {
      std::vector<int> v(a.rank - 1);
      for (int i = 0; i < a.rank - 1; ++i) v[i] = (m >> i) & 1;
      out.push_back(v);
    }
    return out;
  };
  for (auto& ch : split(a.check)) {
    json r;
    bool good;
    if (ch == "relations") {
      auto c = relations_check(X, a.degree);
      r = report_json(c), good = c.ok;
    } else if (ch == "eigen") {
      auto ca = eigen_property_check(X, a.degree, false), cb = eigen_property_check(X, a.degree, true);
      r = {{"a", report_json(ca)}, {"b", report_json(cb)}}, good = ca.ok && cb.ok;
    } else if (ch == "dconj") {
      auto c = d_conjugacy_check(X, a.degree);
      r = report_json(c), good = c.ok;
    } else if (ch == "residues") {
      auto c = residues_check(X, a.degree);
      r = report_json(c), good = c.ok;
    } else if (ch == "feigin") {
      good = true;
      for (auto& v : all_a()) {
        auto c = feigin_relation_check(X, v, a.degree);
        r.push_back({{"a", v}, {"report", report_json(c)}});
        good = good && c.ok;
      }
    } else if (ch == "whittaker") {
      TriplePair P = pair();
      auto c = whittaker_check(X, P.plus, geometric_whittaker(X, P.plus, a.degree));
      r = report_json(c), good = c.ok;
    } else if (ch == "dj") {
      TriplePair P = pair();
      auto g = geometric_J_eigencheck(X, P.plus, P.minus, a.degree);
      json pr;
      for (auto& [b, s] : g.pairings) {
        std::string key;
        for (int x : b) key += (key.empty() ? "" : ",") + std::to_string(x);
        pr[key] = s.str();
      }
      r = {{"eigen_ok", g.eigen_ok},
           {"matches_abstract", g.matches_abstract},
           {"displayed_normalization_ok", g.literal_ok},
           {"eigenvalue", g.eigenvalue.str()},
           {"pairings", pr}};
      good = g.eigen_ok && g.matches_abstract && (!a.literal || g.literal_ok);
    } else {
      throw InputError("unknown laumon check '" + ch + "'");
    }
    j["checks"][ch] = {{"ok", good}, {"result", r}};
    ok = ok && good;
  }
  if (fmt(a.c) == Format::json) {
    emit_json(a.c, j);
  } else {
    std::ostringstream os;
    for (auto& [k, v] : j["checks"].items()) os << k << ": " << (v["ok"].get<bool>() ? "ok" : "FAILED") << '\n';
    emit(a.c, os.str());
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- conjugate

struct ConjArgs {
  Common c;
  std::string type, pairA, pairB;
  bool verify_all = false;
};

int run_conjugate(const ConjArgs& a) {
  const RootSystem& rs = root_system(a.type);
  if (a.pairA.empty() || a.pairB.empty()) throw InputError("conjugate needs --pairA and --pairB");
  TriplePair A = load_pair(a.pairA, rs), B = load_pair(a.pairB, rs);
  std::optional<Conjugation> solved;
  try {
    solved = solve_pair_conjugation(A, B);
  } catch (const EquivalenceError& e) {
    std::cerr << "conjugate: " << e.what() << '\n';
    emit_json(a.c, {{"ok", false}, {"error", e.what()}});
    return 2;  // a violated precondition is bad input
  }
  const Conjugation& C = *solved;
  json j = {{"type", rs.tag()}, {"twist", C.phi.to_json()}};
  if (auto x = C.phi.quadratic_form()) {
    json X = json::array();
    for (auto& row : *x) {
      json R = json::array();
      for (auto& r : row) R.push_back(rat_str(r));
      X.push_back(R);
    }
    j["x"] = X;
  }
  bool ok = conjugate_and_compare(C.phi, {C.source}, {C.target});
  j["verified_D1"] = ok;
  if (a.verify_all && rs.type() == 'A') {
    // the same twist carries every D_{Lambda^k V1}
    std::vector<TorusElement> s, t;
    for (int k = 2; k <= rs.rank(); ++k) {
      s.push_back(torus_hamiltonian_exterior(A, k));
      t.push_back(torus_hamiltonian_exterior(B, k));
    }
    bool all = conjugate_and_compare(C.phi, s, t);
    j["verified_exterior_powers"] = all;
    ok = ok && all;
  }
  j["ok"] = ok;
  if (fmt(a.c) == Format::json) emit_json(a.c, j);
  else emit(a.c, std::string(ok ? "verified" : "FAILED") + "\n" + C.phi.to_json().dump(2));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common c;
  std::string suite = "all";
  int rank = 0;
};

int run_verify(const VerifyArgs& a) {
  std::vector<std::string> names;
  if (a.suite == "all") names = suite_names();
  else names = split(a.suite);
  for (auto& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw InputError("unknown suite '" + n + "'");
  json out = json::array();
  std::string text;
  bool ok = true;
  for (auto& n : names) {
    SuiteResult r = run_suite(n, a.c.seed, a.rank);
    ok = ok && r.ok();
    out.push_back(r.to_json());
    text += std::string(r.ok() ? "PASS " : "FAIL ") + n + "\n" + r.text();
  }
  if (fmt(a.c) == Format::json) emit_json(a.c, {{"ok", ok}, {"suites", out}});
  else emit(a.c, text);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Toda hamiltonians, Lax matrices, Whittaker functions and Laumon spaces"};
  app.require_subcommand(1);

  HamArgs ham;
  auto* h = app.add_subcommand("hamiltonian", "first hamiltonian D_1 of a pair");
  add_common(h, ham.c);
  h->add_option("--type", ham.type, "root system tag, e.g. C2")->required();
  h->add_option("--pair", ham.pair, "pair JSON (random pair from --seed when absent)");
  h->add_flag("--generic", ham.generic, "R-matrix construction");
  h->add_flag("--closed", ham.closed, "closed form (default)");
  h->add_flag("--repaired", ham.repaired, "closed form with the B/D/G2 coefficient repairs");
  h->add_flag("--standard", ham.standard, "the standard q-Toda operator, LaTeX by default");

  LaxArgs lax;
  auto* l = app.add_subcommand("lax", "monodromy hamiltonian H_2 and its checks");
  add_common(l, lax.c);
  l->add_option("--type", lax.type, "A (monodromy) or C (double monodromy)");
  l->add_option("--rank", lax.rank, "number of sites");
  l->add_option("--k", lax.k, "k_n,...,k_1 with entries in {-1,0,1}")->required();
  l->add_option("--periodic", lax.periodic, "epsilon (0 when absent)");
  l->add_option("--check", lax.check, "comma list of rtt, commute, display");

  WhitArgs wh;
  auto* w = app.add_subcommand("whittaker", "Whittaker J-series");
  add_common(w, wh.c);
  w->add_option("--type", wh.type, "root system tag");
  w->add_option("--pair", wh.pair, "pair JSON");
  w->add_option("--degree", wh.degree, "cutoff on |beta|");
  w->add_option("--route", wh.route, "recursive, closed or oracle");
  WhitArgs we;
  auto* wec = w->add_subcommand("eigencheck", "J is an eigenfunction of D_V1");
  add_common(wec, we.c);
  wec->add_option("--type", we.type, "root system tag")->required();
  wec->add_option("--pair", we.pair, "pair JSON");
  wec->add_option("--degree", we.degree, "cutoff on |beta|");

  LaumonArgs lm;
  auto* la = app.add_subcommand("laumon", "checks on the localized K-theory of Laumon spaces");
  add_common(la, lm.c);
  la->add_option("--rank", lm.rank, "n, the number of t's (sl_n)");
  la->add_option("--degree", lm.degree, "cutoff on the total degree");
  la->add_option("--check", lm.check, "comma list of relations, eigen, dconj, residues, feigin, whittaker, dj");
  la->add_option("--pair", lm.pair, "pair JSON of type A_{n-1} for whittaker and dj");
  la->add_flag("--literal", lm.literal, "dj also requires the displayed normalization");

  ConjArgs cj;
  auto* co = app.add_subcommand("conjugate", "twist automorphism between two pairs");
  add_common(co, cj.c);
  co->add_option("--type", cj.type, "root system tag")->required();
  co->add_option("--pairA", cj.pairA, "source pair JSON")->required();
  co->add_option("--pairB", cj.pairB, "target pair JSON")->required();
  co->add_flag("--verify-all", cj.verify_all, "also check the higher hamiltonians (type A)");

  VerifyArgs vf;
  auto* ve = app.add_subcommand("verify", "run verification suites");
  add_common(ve, vf.c);
  ve->add_option("--suite", vf.suite, "all or a comma list of suite names");
  ve->add_option("--rank", vf.rank, "size parameter (lax: number of sites)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*h) return run_hamiltonian(ham);
    if (*l) return run_lax(lax);
    if (*wec) return run_whittaker_eigen(we);
    if (*w) {
      if (wh.type.empty()) throw InputError("whittaker: --type is required");
      return run_whittaker(wh);
    }
    if (*la) return run_laumon(lm);
    if (*co) return run_conjugate(cj);
    if (*ve) return run_verify(vf);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TripleError& e) {
    std::cerr << "invalid triple: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
