#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dbsll/grading.hpp"
#include "dbsll/rational.hpp"

// Sparse multivariate polynomials with exact rational coefficients.
// Monomials are exponent vectors (trailing zeros trimmed) ordered by
// graded lexicographic order.

namespace dbsll {

using Monomial = std::vector<unsigned>;

inline unsigned mono_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    // same degree: compare exponents left to right, higher first wins
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
      unsigned ea = k < a.size() ? a[k] : 0;
      unsigned eb = k < b.size() ? b[k] : 0;
      if (ea != eb) return ea < eb;
    }
    return false;
  }
};

struct Poly {
  std::map<Monomial, Rat, GrlexLess> terms; // nonzero coefficients only

  friend bool operator==(const Poly&, const Poly&) = default;

  bool is_zero() const { return terms.empty(); }

  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
  }

  Rat constant_value() const {
    return terms.empty() ? Rat(0) : terms.begin()->second;
  }

  unsigned degree() const {
    return terms.empty() ? 0 : mono_degree(terms.rbegin()->first);
  }

  std::size_t num_vars() const {
    std::size_t n = 0;
    for (const auto& [m, c] : terms) n = std::max(n, m.size());
    return n;
  }

  // leading term under grlex
  std::pair<Monomial, Rat> leading() const { return *terms.rbegin(); }
};

namespace polydetail {

inline Monomial trim(Monomial m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

} // namespace polydetail

inline void poly_add_term(Poly& p, Monomial m, const Rat& c) {
  if (c == 0) return;
  m = polydetail::trim(std::move(m));
  auto [it, fresh] = p.terms.try_emplace(std::move(m), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.terms.erase(it);
  }
}

inline Poly poly_const(const Rat& c) {
  Poly p;
  poly_add_term(p, {}, c);
  return p;
}

inline Poly poly_var(std::size_t idx) { // X1 is index 0
  Poly p;
  Monomial m(idx + 1, 0);
  m[idx] = 1;
  poly_add_term(p, std::move(m), 1);
  return p;
}

inline Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) poly_add_term(out, m, c);
  return out;
}

inline Poly operator-(const Poly& a) {
  Poly out;
  for (const auto& [m, c] : a.terms) out.terms[m] = -c;
  return out;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t k = 0; k < m.size(); ++k)
        m[k] = (k < ma.size() ? ma[k] : 0) + (k < mb.size() ? mb[k] : 0);
      poly_add_term(out, std::move(m), ca * cb);
    }
  return out;
}

inline Poly operator*(const Rat& c, const Poly& a) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, k] : a.terms) out.terms[m] = c * k;
  return out;
}

inline Poly poly_pow(const Poly& a, unsigned e) {
  Poly out = poly_const(1);
  for (unsigned k = 0; k < e; ++k) out = out * a;
  return out;
}

inline Rat poly_eval(const Poly& p, const std::vector<Rat>& point) {
  Rat out = 0;
  for (const auto& [m, c] : p.terms) {
    Rat t = c;
    for (std::size_t k = 0; k < m.size(); ++k) {
      Rat x = k < point.size() ? point[k] : Rat(0);
      for (unsigned e = 0; e < m[k]; ++e) t *= x;
    }
    out += t;
  }
  return out;
}

inline Poly poly_derivative(const Poly& p, std::size_t var) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    if (var >= m.size() || m[var] == 0) continue;
    Monomial m2 = m;
    unsigned e = m2[var]--;
    poly_add_term(out, std::move(m2), c * e);
  }
  return out;
}

// iterated partial derivative by an exponent vector
inline Poly poly_derive_multi(Poly p, const Monomial& alpha) {
  for (std::size_t v = 0; v < alpha.size(); ++v)
    for (unsigned k = 0; k < alpha[v]; ++k) p = poly_derivative(p, v);
  return p;
}

// substitution X_i -> -X_i for every variable
inline Poly poly_negate_vars(const Poly& p) {
  Poly out;
  for (const auto& [m, c] : p.terms)
    out.terms[m] = mono_degree(m) % 2 == 0 ? c : -c;
  return out;
}

// Writes p over a fresh second block of n variables: X_i -> X_{n+i}.
inline Poly poly_shift_block(const Poly& p, std::size_t n) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    Monomial m2(n + m.size(), 0);
    for (std::size_t k = 0; k < m.size(); ++k) m2[n + k] = m[k];
    poly_add_term(out, std::move(m2), c);
  }
  return out;
}

// Expands p(X + Y) over n variables into a polynomial in 2n variables
// (the first block is X, the second block is Y).
inline Poly poly_shift_expand(const Poly& p, std::size_t n) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    Poly term = poly_const(c);
    for (std::size_t v = 0; v < m.size(); ++v)
      term = term * poly_pow(poly_var(v) + poly_var(n + v), m[v]);
    out = out + term;
  }
  return out;
}

// content/primitive-part normalization: returns (unit, primitive) with
// unit * primitive == p, primitive integral with coprime coefficients and a
// positive leading coefficient
inline std::pair<Rat, Poly> poly_primitive(const Poly& p) {
  if (p.is_zero()) return {Rat(1), p};
  Int den = 1;
  for (const auto& [m, c] : p.terms)
    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
  Int num = 0;
  for (const auto& [m, c] : p.terms) {
    Rat scaled = c * Rat(den);
    num = boost::multiprecision::gcd(num, boost::multiprecision::numerator(scaled));
  }
  if (num == 0) num = 1;
  Rat unit(num, den);
  if (p.leading().second < 0) unit = -unit;
  Poly prim;
  for (const auto& [m, c] : p.terms) prim.terms[m] = c / unit;
  return {unit, prim};
}

// canonical rendering: descending grlex, `*` between parts, `^` for powers
inline std::string to_string(const Poly& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "X" + std::to_string(k + 1);
      if (m[k] > 1) mono += "^" + std::to_string(m[k]);
    }
    std::string term;
    if (mono.empty()) {
      term = c.str();
    } else if (c == 1) {
      term = mono;
    } else if (c == -1) {
      term = "-" + mono;
    } else {
      term = c.str() + "*" + mono;
    }
    if (out.empty()) out = term;
    else if (!term.empty() && term[0] == '-') out += term;
    else out += "+" + term;
  }
  return out;
}

// --- parsing: +, -, *, ^, parentheses, rationals, X1 X2 ... ---

namespace polydetail {

struct PolyParser {
  const std::string& src;
  std::size_t pos = 0;

  explicit PolyParser(const std::string& s) : src(s) {}

  void skip() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw PreconditionViolated("polynomial syntax error at position " +
                               std::to_string(pos) + ": " + what);
  }

  Poly parse_expr() {
    skip();
    bool neg = false;
    while (true) {
      if (eat('+')) continue;
      if (eat('-')) { neg = !neg; continue; }
      break;
    }
    Poly acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      skip();
      if (eat('+')) acc = acc + parse_term();
      else if (eat('-')) acc = acc - parse_term();
      else break;
    }
    return acc;
  }

  Poly parse_term() {
    Poly acc = parse_power();
    for (;;) {
      skip();
      if (eat('*')) acc = acc * parse_power();
      else break;
    }
    return acc;
  }

  Poly parse_power() {
    Poly base = parse_atom();
    skip();
    if (eat('^')) {
      unsigned e = parse_uint();
      return poly_pow(base, e);
    }
    return base;
  }

  unsigned parse_uint() {
    skip();
    if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
      fail("expected an exponent");
    unsigned v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      v = v * 10 + static_cast<unsigned>(src[pos++] - '0');
    return v;
  }

  Poly parse_atom() {
    skip();
    if (eat('(')) {
      Poly p = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (pos < src.size() && (src[pos] == 'X' || src[pos] == 'x')) {
      ++pos;
      unsigned idx = parse_uint();
      if (idx == 0) fail("variables are numbered from X1");
      return poly_var(idx - 1);
    }
    if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      Int num = 0;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        num = num * 10 + (src[pos++] - '0');
      Int den = 1;
      if (eat('/')) {
        den = 0;
        skip();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
          fail("expected a denominator");
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
          den = den * 10 + (src[pos++] - '0');
        if (den == 0) fail("zero denominator");
      }
      return poly_const(Rat(num, den));
    }
    fail("expected a polynomial atom");
  }
};

} // namespace polydetail

inline Poly parse_poly(const std::string& s) {
  polydetail::PolyParser p(s);
  Poly out = p.parse_expr();
  p.skip();
  if (p.pos != s.size())
    throw PreconditionViolated("trailing input after polynomial: " + s.substr(p.pos));
  return out;
}

} // namespace dbsll
