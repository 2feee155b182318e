#include "dstlab/lightcone.hpp"

#include <algorithm>
#include <sstream>

namespace dstlab::lightcone {

namespace {
const char* const kNames[symbol_count] = {"C0", "C1", "C2", "C3", "D0", "D1", "D2", "D3"};

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}
}  // namespace

const char* to_string(Symbol s) { return kNames[static_cast<int>(s)]; }

Symbol symbol_from_string(const std::string& name) {
  for (int i = 0; i < symbol_count; ++i)
    if (name == kNames[i]) return static_cast<Symbol>(i);
  throw Error(ErrorCode::Validation, "unknown coefficient symbol '" + name + "'");
}

GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Monomial monomial(std::initializer_list<std::pair<Symbol, int>> powers) {
  Monomial m{};
  for (const auto& [s, p] : powers) m[static_cast<int>(s)] += p;
  return m;
}

Polynomial Polynomial::constant(const GaussRational& c) {
  Polynomial p;
  p.add(Monomial{}, c);
  return p;
}

Polynomial Polynomial::symbol(Symbol s, const GaussRational& c) {
  Polynomial p;
  p.add(monomial({{s, 1}}), c);
  return p;
}

void Polynomial::add(const Monomial& m, const GaussRational& c) {
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(m, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      for (int i = 0; i < symbol_count; ++i) m[i] = ma[i] + mb[i];
      r.add(m, ca * cb);
    }
  return r;
}

Polynomial Polynomial::conjugate() const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add(m, {c.re, -c.im});
  return r;
}

Polynomial Polynomial::substitute(Symbol s, const Rational& value) const {
  Polynomial r;
  const int k = static_cast<int>(s);
  for (const auto& [m, c] : terms_) {
    Rational f = 1;
    for (int e = 0; e < m[k]; ++e) f *= value;
    Monomial mm = m;
    mm[k] = 0;
    r.add(mm, {c.re * f, c.im * f});
  }
  return r;
}

GaussRational Polynomial::coefficient(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? GaussRational{} : it->second;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string coef;
    if (c.im == 0) coef = rational_string(c.re);
    else if (c.re == 0) coef = rational_string(c.im) + "*i";
    else coef = "(" + rational_string(c.re) + " + " + rational_string(c.im) + "*i)";
    std::string mono;
    for (int i = 0; i < symbol_count; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += kNames[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (!out.empty()) out += " + ";
    if (mono.empty()) out += coef;
    else if (coef == "1") out += mono;
    else out += coef + "*" + mono;
  }
  return out;
}

const char* to_string(Grade g) { return g == Grade::Scalar ? "Scalar" : "Vector"; }

const char* to_string(Support s) {
  switch (s) {
    case Support::Regular: return "Regular";
    case Support::Theta: return "Theta";
    case Support::Delta: return "Delta";
    case Support::DeltaPrime: return "DeltaPrime";
  }
  return "?";
}

int TermKey::degree() const {
  int d = (grade == Grade::Vector ? 1 : 0) - 2 * inv_pow;
  if (support == Support::Delta) d -= 2;
  if (support == Support::DeltaPrime) d -= 4;
  return d;
}

void Expansion::add(const TermKey& k, const Polynomial& c) {
  if (c.is_zero()) return;
  auto it = terms.find(k);
  if (it == terms.end()) {
    terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

int Expansion::min_degree() const {
  int d = INT_MAX;
  for (const auto& [k, c] : terms) d = std::min(d, k.degree());
  return d;
}

Polynomial Expansion::coefficient(const TermKey& k) const {
  auto it = terms.find(k);
  return it == terms.end() ? Polynomial{} : it->second;
}

Expansion Expansion::conjugate() const {
  Expansion e;
  e.omitted_degree = omitted_degree;
  for (const auto& [k, c] : terms) e.add(k, c.conjugate());
  return e;
}

Expansion Expansion::substitute(Symbol s, const Rational& value) const {
  Expansion e;
  e.omitted_degree = omitted_degree;
  for (const auto& [k, c] : terms) e.add(k, c.substitute(s, value));
  return e;
}

namespace {

bool on_cone(Support s) { return s == Support::Delta || s == Support::DeltaPrime; }

// false when the product vanishes in the region
bool combine(const TermKey& a, const TermKey& b, Region region, TermKey& out) {
  if (on_cone(a.support) || on_cone(b.support)) {
    if (region == Region::AwayFromCone) return false;
    throw Error(ErrorCode::UnimplementedProduct, std::string("product involving ") + to_string(a.support) + " and " +
                                                     to_string(b.support) + " is not defined as a distribution");
  }
  if (region == Region::Distributional && a.inv_pow > 0 && b.inv_pow > 0)
    throw Error(ErrorCode::UnimplementedProduct, "product of two principal-value poles on the light cone");
  out.inv_pow = a.inv_pow + b.inv_pow;
  out.log_pow = a.log_pow + b.log_pow;
  out.eps = a.eps != b.eps;
  out.support = (a.support == Support::Theta || b.support == Support::Theta) ? Support::Theta : Support::Regular;
  if (a.grade == Grade::Vector && b.grade == Grade::Vector) {
    out.grade = Grade::Scalar;
    out.inv_pow -= 1;  // slash(xi)^2 = xi^2
  } else {
    out.grade = (a.grade == Grade::Vector || b.grade == Grade::Vector) ? Grade::Vector : Grade::Scalar;
  }
  return true;
}

}  // namespace

Expansion multiply(const Expansion& a, const Expansion& b, Region region) {
  Expansion r;
  // an omitted term of a times the lowest term of b, and vice versa
  long omit = INT_MAX;
  if (a.omitted_degree != INT_MAX) omit = std::min(omit, long(a.omitted_degree) + (b.terms.empty() ? 0 : b.min_degree()));
  if (b.omitted_degree != INT_MAX) omit = std::min(omit, long(b.omitted_degree) + (a.terms.empty() ? 0 : a.min_degree()));
  r.omitted_degree = static_cast<int>(omit);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      TermKey k;
      if (!combine(ka, kb, region, k)) continue;
      if (k.degree() >= r.omitted_degree) continue;
      r.add(k, ca * cb);
    }
  return r;
}

Expansion kernel_expansion(const std::map<Symbol, Rational>& fixed) {
  const GaussRational one{1, 0}, i{0, 1};
  auto sym = [](Symbol s, const GaussRational& c) { return Polynomial::symbol(s, c); };
  Expansion P;
  // i C0 slash/xi^4 + C1/xi^2 + i C2 slash/xi^2 + C3 log(xi^2)
  P.add({Grade::Vector, 2, 0, Support::Regular, false}, sym(Symbol::C0, i));
  P.add({Grade::Scalar, 1, 0, Support::Regular, false}, sym(Symbol::C1, one));
  P.add({Grade::Vector, 1, 0, Support::Regular, false}, sym(Symbol::C2, i));
  P.add({Grade::Scalar, 0, 1, Support::Regular, false}, sym(Symbol::C3, one));
  // eps(xi^0) (D0 slash delta' + i D1 delta + D2 slash delta + i D3 Theta)
  P.add({Grade::Vector, 0, 0, Support::DeltaPrime, true}, sym(Symbol::D0, one));
  P.add({Grade::Scalar, 0, 0, Support::Delta, true}, sym(Symbol::D1, i));
  P.add({Grade::Vector, 0, 0, Support::Delta, true}, sym(Symbol::D2, one));
  P.add({Grade::Scalar, 0, 0, Support::Theta, true}, sym(Symbol::D3, i));
  P.omitted_degree = 1;
  for (const auto& [s, v] : fixed) P = P.substitute(s, v);
  return P;
}

Expansion closed_chain_expansion(const Expansion& P) { return multiply(P, P.conjugate(), Region::AwayFromCone); }

Expansion trace_free_gradient(const Expansion& A) {
  Expansion M;
  M.omitted_degree = A.omitted_degree;
  const Polynomial two = Polynomial::constant({Rational(2), Rational(0)});
  for (const auto& [k, c] : A.terms)
    if (k.grade == Grade::Vector) M.add(k, two * c);
  return M;
}

}  // namespace dstlab::lightcone
