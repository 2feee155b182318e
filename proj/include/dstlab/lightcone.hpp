#pragma once

#include <array>
#include <climits>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dstlab/types.hpp"

namespace dstlab::lightcone {

using Rational = boost::multiprecision::cpp_rational;

enum class Symbol { C0, C1, C2, C3, D0, D1, D2, D3 };
constexpr int symbol_count = 8;
const char* to_string(Symbol s);
Symbol symbol_from_string(const std::string& name);

// re + i im, exact.
struct GaussRational {
  Rational re{0}, im{0};
  bool is_zero() const { return re == 0 && im == 0; }
};

GaussRational operator+(const GaussRational& a, const GaussRational& b);
GaussRational operator*(const GaussRational& a, const GaussRational& b);
inline bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }

using Monomial = std::array<int, symbol_count>;  // exponents

// Polynomial in C0..D3 with exact Gaussian-rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const GaussRational& c);
  static Polynomial symbol(Symbol s, const GaussRational& c = {Rational(1), Rational(0)});

  Polynomial& operator+=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial conjugate() const;
  Polynomial substitute(Symbol s, const Rational& value) const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, GaussRational>& terms() const { return terms_; }
  // coefficient of one monomial, zero if absent
  GaussRational coefficient(const Monomial& mono) const;
  std::string to_string() const;

 private:
  void add(const Monomial& m, const GaussRational& c);
  std::map<Monomial, GaussRational> terms_;
};

Monomial monomial(std::initializer_list<std::pair<Symbol, int>> powers);

enum class Grade { Scalar, Vector };  // Vector carries one slash(xi)
// Regular: PP / log / polynomial, defined off the cone.
enum class Support { Regular, Theta, Delta, DeltaPrime };
const char* to_string(Grade g);
const char* to_string(Support s);

// slash(xi)^grade * (xi^2)^(-inv_pow) * log(xi^2)^log_pow * support * eps(xi^0)^eps
struct TermKey {
  Grade grade = Grade::Scalar;
  int inv_pow = 0;
  int log_pow = 0;
  Support support = Support::Regular;
  bool eps = false;
  auto operator<=>(const TermKey&) const = default;
  // length dimension: slash +1, 1/xi^2 -2, delta -2, delta' -4, log and Theta 0
  int degree() const;
};

struct Expansion {
  std::map<TermKey, Polynomial> terms;
  // all omitted terms have degree >= omitted_degree
  int omitted_degree = INT_MAX;

  void add(const TermKey& k, const Polynomial& c);
  int min_degree() const;
  // highest degree known exactly
  int valid_through() const { return omitted_degree == INT_MAX ? INT_MAX : omitted_degree - 1; }
  Polynomial coefficient(const TermKey& k) const;
  Expansion conjugate() const;
  Expansion substitute(Symbol s, const Rational& value) const;
};

enum class Region {
  AwayFromCone,  // delta terms vanish, PP products are pointwise
  Distributional // products of cone singularities are rejected
};

// Throws UnimplementedProduct for products that are undefined in the chosen region.
Expansion multiply(const Expansion& a, const Expansion& b, Region region = Region::AwayFromCone);

// Kernel expansion near the cone with symbolic C_j, D_j. Entries of `fixed` are substituted.
// Omitted terms start at degree 1.
Expansion kernel_expansion(const std::map<Symbol, Rational>& fixed = {});

// A = P P^*, adjoint flips i and keeps slash(xi).
Expansion closed_chain_expansion(const Expansion& P);

// M = 2A - Tr(A)/2 for 4x4 spinors: twice the vector part.
Expansion trace_free_gradient(const Expansion& A);

}  // namespace dstlab::lightcone
