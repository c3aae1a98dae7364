#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>
#include <boost/rational.hpp>

#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtoda {

using Coef = mpq_class;
using Rat = boost::rational<long long>;

// boost's mixed rational<long long> == int recurses forever
inline bool operator==(const Rat& a, int b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(int b, const Rat& a) { return a == b; }
inline bool operator!=(const Rat& a, int b) { return !(a == b); }
inline bool operator!=(int b, const Rat& a) { return !(a == b); }

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- symbols ---------------------------------------------------------------
// Symbol 0 is the deformation symbol q; everything else is an invertible
// parameter.  The table is process-wide and append-only.

enum class SymbolKind { deformation, parameter };

constexpr int kQ = 0;

int symbol(const std::string& name);
const std::string& symbol_name(int id);
SymbolKind symbol_kind(int id);
int symbol_count();
bool valid_symbol_name(const std::string& name);

// ---- monomials -------------------------------------------------------------

struct Monomial {
  using Entry = std::pair<uint16_t, int32_t>;  // (symbol, nonzero exponent), sorted by symbol
  boost::container::small_vector<Entry, 4> e;

  Monomial() = default;
  static Monomial var(int s, int32_t k = 1);

  int32_t exp(int s) const;
  bool is_one() const { return e.empty(); }
  Monomial inverse() const;
  Monomial without(int s) const;
  bool nonnegative() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.inverse(); }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

// lex order, smaller symbol index is more significant
int mono_cmp(const Monomial& a, const Monomial& b);
Monomial mono_min(const Monomial& a, const Monomial& b);
Monomial mono_max(const Monomial& a, const Monomial& b);

// ---- Laurent polynomials ---------------------------------------------------

class Poly {
 public:
  struct Term {
    Monomial m;
    Coef c;
  };

  Poly() = default;
  Poly(long c);
  Poly(const Coef& c);
  static Poly monomial(const Monomial& m, const Coef& c = 1);
  static Poly var(int s, int32_t k = 1) { return monomial(Monomial::var(s, k)); }

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  bool is_monomial() const { return t_.size() == 1; }
  std::size_t size() const { return t_.size(); }
  const std::vector<Term>& terms() const { return t_; }
  const Term& lead() const { return t_.front(); }
  Coef constant_term() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& b);
  Poly& operator-=(const Poly& b);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Coef& c) const;
  Poly shifted(const Monomial& m) const;
  Poly pow(unsigned k) const;
  friend bool operator==(const Poly& a, const Poly& b);

  // componentwise minimum / maximum exponent over all terms (missing = 0)
  Monomial min_monomial() const;
  Monomial max_monomial() const;
  int32_t min_exp(int s) const;
  int32_t max_exp(int s) const;
  std::vector<int> symbols() const;
  // lcm of coefficient denominators over gcd of numerators, sign of lead
  Coef content() const;

  Poly map_monomials(const std::function<Monomial(const Monomial&)>& f) const;

  static Poly from_terms(std::vector<Term> terms);  // sorts and merges

 private:
  std::vector<Term> t_;  // strictly decreasing in mono_cmp, no zero coefficients
};

std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
// gcd in the Laurent ring, returned without monomial content, integer primitive,
// positive leading coefficient
Poly gcd(const Poly& a, const Poly& b);
// unit normalisation used for denominators: monomial-free, primitive integer, lead > 0
Poly normalize_unit(const Poly& p, Poly* unit_num = nullptr, Monomial* unit_mono = nullptr, Coef* unit_c = nullptr);

std::string to_string(const Poly& p);

// ---- fraction field ----------------------------------------------------------

class Scalar {
 public:
  Scalar() : num_(), den_(1) {}
  Scalar(long c) : num_(c), den_(1) {}
  Scalar(int c) : num_(long(c)), den_(1) {}
  Scalar(const Coef& c) : num_(c), den_(1) {}
  Scalar(const Poly& p) : num_(p), den_(1) {}
  static Scalar fraction(const Poly& n, const Poly& d);
  // n/d already coprime with d normalised (no gcd taken)
  static Scalar from_reduced(Poly n, Poly d);
  static Scalar sym(const std::string& name, int32_t k = 1);
  static Scalar sym(int id, int32_t k = 1);
  static Scalar q(int32_t k) { return sym(kQ, k); }
  static Scalar parse(const std::string& text);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_polynomial() const { return den_.is_constant(); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  Scalar inverse() const;
  Scalar pow(long k) const;

  // substitute symbols by Scalars; throws MathError if a denominator vanishes
  Scalar subs(const std::map<int, Scalar>& values) const;
  // q -> q^k (and optionally other monomial maps), a ring endomorphism
  Scalar map_monomials(const std::function<Monomial(const Monomial&)>& f) const;

  std::string str() const;
  std::string latex(int M = 1) const;

  // re-derive canonical form from scratch (should be a no-op)
  Scalar normalized() const { return fraction(num_, den_); }

 private:
  Poly num_, den_;
};

std::string to_string(const Scalar& s);

// ---- q-combinatorics ---------------------------------------------------------
// v = q^M.  Exponents of v may be rational as long as the q-exponent is an integer.

Scalar vpow(const Rat& e, int M);
inline Scalar vpow(long long e, int M) { return vpow(Rat(e), M); }
// [r]_{v^s}
Scalar q_number(long r, long s, int M);
Scalar q_factorial(long r, long s, int M);
Scalar q_binomial(long m, long r, long s, int M);
// (r)_x = (1 - x^r)/(1 - x) at x = v^s
Scalar round_number(long r, long s, int M);
// 1/(r)_{v^s}!, the coefficient of x^r in exp_{v^s}(x)
Scalar exp_q_coefficient(long r, long s, int M);
// (x; x)_m at x = v^s:  prod_{k=1}^m (1 - x^k)
Scalar q_pochhammer(long m, long s, int M);

}  // namespace qtoda
