#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "dbsll/poly.hpp"

// Linear partial differential operators with constant coefficients, kept in
// factored form: a nonzero rational unit times a multiset of primitive
// polynomial factors (the operator is the product, read through the
// characteristic-polynomial isomorphism). Composition of operators is
// multiplication of their polynomials, which makes factored operators a
// commutative grade monoid; divisibility is the sum-induced preorder.

namespace dbsll {

struct FactoredOp {
  bool zero_op = false;       // the absorbing zero operator
  Rat unit = 1;               // nonzero when zero_op is false
  std::vector<Poly> factors;  // primitive, positive leading coeff, sorted

  friend bool operator==(const FactoredOp&, const FactoredOp&) = default;

  static bool poly_less(const Poly& a, const Poly& b) {
    return dbsll::to_string(a) < dbsll::to_string(b);
  }

  void canonicalize() {
    if (zero_op) {
      unit = 1;
      factors.clear();
      return;
    }
    std::vector<Poly> out;
    for (const Poly& f : factors) {
      if (f.is_zero()) {
        zero_op = true;
        unit = 1;
        factors.clear();
        return;
      }
      auto [u, prim] = poly_primitive(f);
      unit *= u;
      if (prim.is_constant()) continue; // constants live in the unit
      out.push_back(std::move(prim));
    }
    if (unit == 0) {
      zero_op = true;
      factors.clear();
      unit = 1;
      return;
    }
    std::sort(out.begin(), out.end(), poly_less);
    factors = std::move(out);
  }

  static FactoredOp zero() { return {}; } // the identity operator (monoid unit)

  static FactoredOp make_zero_op() {
    FactoredOp d;
    d.zero_op = true;
    return d;
  }

  static FactoredOp from(Rat u, std::vector<Poly> fs) {
    FactoredOp d;
    d.unit = std::move(u);
    d.factors = std::move(fs);
    d.canonicalize();
    return d;
  }

  static FactoredOp add(const FactoredOp& a, const FactoredOp& b) { // composition
    if (a.zero_op || b.zero_op) return make_zero_op();
    FactoredOp d;
    d.unit = a.unit * b.unit;
    d.factors = a.factors;
    d.factors.insert(d.factors.end(), b.factors.begin(), b.factors.end());
    std::sort(d.factors.begin(), d.factors.end(), poly_less);
    return d;
  }

  // multiset difference of factors; nullopt when not contained
  static std::optional<std::vector<Poly>> factor_quotient(
      const std::vector<Poly>& big, const std::vector<Poly>& small) {
    std::vector<Poly> rest = big;
    for (const Poly& f : small) {
      auto it = std::find(rest.begin(), rest.end(), f);
      if (it == rest.end()) return std::nullopt;
      rest.erase(it);
    }
    return rest;
  }

  static std::optional<FactoredOp> leq_witness(const FactoredOp& x,
                                               const FactoredOp& y) {
    if (x.zero_op) return y.zero_op ? std::optional(zero()) : std::nullopt;
    if (y.zero_op) return make_zero_op();
    auto rest = factor_quotient(y.factors, x.factors);
    if (!rest) return std::nullopt;
    FactoredOp w;
    w.unit = y.unit / x.unit;
    w.factors = std::move(*rest);
    return w;
  }

  // splits x1 o x2 == x3 o x4 into a 2x2 grid of operators; the unit of the
  // x1/x3 corner carries x1's unit, the x1/x4 corner is unitary, and the
  // remaining units are forced
  static SplitCertificate<FactoredOp> additive_split(const FactoredOp& x1,
                                                     const FactoredOp& x2,
                                                     const FactoredOp& x3,
                                                     const FactoredOp& x4) {
    if (!(add(x1, x2) == add(x3, x4)))
      throw PreconditionViolated("operator split: compositions differ");
    auto id = zero();
    auto z = make_zero_op();
    if (x1.zero_op) {
      if (x3.zero_op) return {z, x4, x2, id};
      return {x3, z, id, x2}; // then x4 is the zero operator
    }
    if (x2.zero_op) {
      if (x3.zero_op) return {x1, id, z, x4};
      return {id, x1, x3, z}; // then x4 is the zero operator
    }
    // all four are nonzero: match factor multisets
    std::vector<Poly> a13, a14, rest3 = x3.factors;
    for (const Poly& f : x1.factors) {
      auto it = std::find(rest3.begin(), rest3.end(), f);
      if (it != rest3.end()) {
        a13.push_back(f);
        rest3.erase(it);
      } else {
        a14.push_back(f);
      }
    }
    auto a24 = factor_quotient(x4.factors, a14);
    if (!a24)
      throw PreconditionViolated("operator split: factor multisets do not match");
    FactoredOp x13, x14, x23, x24;
    x13.unit = x1.unit;
    x13.factors = a13;
    x14.unit = 1;
    x14.factors = a14;
    x23.unit = x3.unit / x1.unit;
    x23.factors = rest3;
    x24.unit = x1.unit * x2.unit / x3.unit;
    x24.factors = std::move(*a24);
    std::sort(x13.factors.begin(), x13.factors.end(), poly_less);
    std::sort(x14.factors.begin(), x14.factors.end(), poly_less);
    std::sort(x23.factors.begin(), x23.factors.end(), poly_less);
    std::sort(x24.factors.begin(), x24.factors.end(), poly_less);
    return {x13, x14, x23, x24};
  }

  static MultSplit<FactoredOp> mult_split(const FactoredOp&, const FactoredOp&,
                                          const FactoredOp&, const FactoredOp&) {
    throw NotSupported("operator grades form a monoid without a product");
  }

  Poly polynomial() const { // the characteristic polynomial
    if (zero_op) return Poly{};
    Poly p = poly_const(unit);
    for (const Poly& f : factors) p = p * f;
    return p;
  }

  std::string to_string() const {
    if (zero_op) return "0";
    std::string out;
    if (factors.empty() || unit != 1) out = unit.str();
    for (const Poly& f : factors) {
      if (!out.empty()) out += "*";
      out += "(" + dbsll::to_string(f) + ")";
    }
    return out;
  }
};

static_assert(GradeMonoid<FactoredOp>);

// reflection X -> -X on every variable; an involution
inline FactoredOp hat(const FactoredOp& d) {
  if (d.zero_op) return d;
  FactoredOp out;
  out.unit = d.unit;
  out.factors.reserve(d.factors.size());
  std::vector<Poly> fs;
  for (const Poly& f : d.factors) fs.push_back(poly_negate_vars(f));
  out.factors = std::move(fs);
  out.canonicalize();
  return out;
}

// apply the operator to a polynomial: sum over the characteristic
// polynomial's monomials of coefficient times iterated partial derivative
inline Poly apply_op(const FactoredOp& d, const Poly& f) {
  Poly out;
  if (d.zero_op) return out;
  for (const auto& [alpha, c] : d.polynomial().terms)
    out = out + c * poly_derive_multi(f, alpha);
  return out;
}

// --- distributions: finite sums  c * (delta_p o D) ---

struct DTerm {
  Rat coeff;
  std::vector<Rat> point; // trailing zeros trimmed
  FactoredOp op;
};

struct Distribution {
  std::vector<DTerm> terms; // canonical: sorted, merged, no zeros
};

namespace lpdodetail {

inline std::vector<Rat> trim_point(std::vector<Rat> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline std::string term_key(const DTerm& t) {
  std::string k = "@";
  for (const Rat& x : t.point) k += x.str() + ",";
  return k + "|" + t.op.to_string();
}

} // namespace lpdodetail

inline void canonicalize(Distribution& d) {
  for (auto& t : d.terms) t.point = lpdodetail::trim_point(std::move(t.point));
  std::sort(d.terms.begin(), d.terms.end(), [](const DTerm& a, const DTerm& b) {
    return lpdodetail::term_key(a) < lpdodetail::term_key(b);
  });
  std::vector<DTerm> out;
  for (auto& t : d.terms) {
    if (t.op.zero_op) continue; // delta o 0 is the zero functional
    if (!out.empty() && lpdodetail::term_key(out.back()) == lpdodetail::term_key(t))
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
  }
  d.terms = std::move(out);
}

inline bool operator==(const Distribution& a, const Distribution& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t k = 0; k < a.terms.size(); ++k) {
    if (a.terms[k].coeff != b.terms[k].coeff) return false;
    if (lpdodetail::term_key(a.terms[k]) != lpdodetail::term_key(b.terms[k]))
      return false;
  }
  return true;
}

inline Distribution dirac(std::vector<Rat> point, FactoredOp op, Rat coeff = 1) {
  Distribution d;
  d.terms.push_back({std::move(coeff), std::move(point), std::move(op)});
  canonicalize(d);
  return d;
}

inline Distribution dist_add(const Distribution& a, const Distribution& b) {
  Distribution out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  canonicalize(out);
  return out;
}

inline Distribution dist_scale(const Rat& c, const Distribution& a) {
  Distribution out = a;
  for (auto& t : out.terms) t.coeff *= c;
  canonicalize(out);
  return out;
}

// (delta_p o D) * (delta_q o E) = delta_{p+q} o (D o E), extended bilinearly;
// delta_0 o id is the neutral element
inline Distribution convolve(const Distribution& a, const Distribution& b) {
  Distribution out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      std::vector<Rat> p(std::max(ta.point.size(), tb.point.size()), 0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (k < ta.point.size()) p[k] += ta.point[k];
        if (k < tb.point.size()) p[k] += tb.point[k];
      }
      out.terms.push_back(
          {ta.coeff * tb.coeff, std::move(p), FactoredOp::add(ta.op, tb.op)});
    }
  canonicalize(out);
  return out;
}

// post-composition of every term's operator (the codereliction action)
inline Distribution dist_compose(const Distribution& a, const FactoredOp& d) {
  Distribution out = a;
  for (auto& t : out.terms) t.op = FactoredOp::add(t.op, d);
  canonicalize(out);
  return out;
}

// application to a test polynomial: (delta_p o D)(u) = (D u)(p)
inline Rat dist_apply(const Distribution& a, const Poly& u) {
  Rat out = 0;
  for (const auto& t : a.terms)
    out += t.coeff * poly_eval(apply_op(t.op, u), t.point);
  return out;
}

// --- function representatives (D, u) standing for Phi_D * u ---

struct FunRep {
  FactoredOp op;
  Poly param;

  friend bool operator==(const FunRep&, const FunRep&) = default;
};

// the semantic dictionary for the exponential rules
inline FunRep rep_weaken(const FactoredOp& d) { return {d, poly_const(1)}; }
inline FunRep rep_contract(const FunRep& a, const FunRep& b) {
  return {FactoredOp::add(a.op, b.op), a.param * b.param};
}
inline FunRep rep_dereliction(const FunRep& a, const FactoredOp& d) {
  return {FactoredOp::add(a.op, d), a.param};
}
inline Distribution dist_coweaken(const FactoredOp& d) {
  return dirac({}, d);
}
inline Distribution dist_cocontract(const Distribution& a, const Distribution& b) {
  return convolve(a, b);
}
inline Distribution dist_codereliction(const Distribution& a, const FactoredOp& d) {
  return dist_compose(a, d);
}

// pairing of a distribution in the stratum of f.op against the function it
// represents: each term's operator must factor through f.op
inline Rat pair_dist_rep(const Distribution& dist, const FunRep& f) {
  if (f.op.zero_op)
    throw PreconditionViolated("cannot pair against the zero operator");
  Rat out = 0;
  for (const auto& t : dist.terms) {
    auto rest = FactoredOp::leq_witness(f.op, t.op);
    if (!rest)
      throw PreconditionViolated(
          "distribution term does not lie in the stratum of " + f.op.to_string());
    out += t.coeff * poly_eval(apply_op(*rest, f.param), t.point);
  }
  return out;
}

// pairing of a convolution against a test polynomial through the separation
// u(x + y) = sum of products, without forming the convolution
inline Rat conv_apply_separated(const Distribution& a, const Distribution& b,
                                const Poly& u, std::size_t nvars) {
  Poly expanded = poly_shift_expand(u, nvars);
  Rat out = 0;
  for (const auto& [m, c] : expanded.terms) {
    Monomial ma(nvars, 0), mb;
    for (std::size_t k = 0; k < m.size() && k < nvars; ++k) ma[k] = m[k];
    for (std::size_t k = nvars; k < m.size(); ++k) mb.push_back(m[k]);
    Poly pa, pb;
    poly_add_term(pa, ma, 1);
    poly_add_term(pb, mb, 1);
    out += c * dist_apply(a, pa) * dist_apply(b, pb);
  }
  return out;
}

// --- operator literals: 2*(X1)*(X1+X2^2+1) ---

inline FactoredOp parse_op(const std::string& s) {
  // a product of rational constants, bare variables, and parenthesized
  // polynomials, each optionally raised to a power
  polydetail::PolyParser p(s);
  FactoredOp out;
  bool first = true;
  for (;;) {
    p.skip();
    if (p.pos >= s.size()) break;
    if (!first && !p.eat('*'))
      throw PreconditionViolated("operator syntax error: expected '*' in " + s);
    bool neg = false;
    while (p.eat('-')) neg = !neg;
    Poly factor;
    p.skip();
    if (p.pos < s.size() && s[p.pos] == '(') {
      p.eat('(');
      factor = p.parse_expr();
      if (!p.eat(')'))
        throw PreconditionViolated("operator syntax error: expected ')' in " + s);
    } else {
      factor = p.parse_atom();
    }
    p.skip();
    if (p.eat('^')) factor = poly_pow(factor, p.parse_uint());
    if (neg) factor = -factor;
    out.factors.push_back(std::move(factor));
    first = false;
  }
  if (first) throw PreconditionViolated("empty operator literal");
  out.canonicalize();
  return out;
}

} // namespace dbsll
