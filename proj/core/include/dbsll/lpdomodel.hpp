#pragma once

#include <string>
#include <vector>

#include "dbsll/lpdo.hpp"
#include "dbsll/proofs.hpp"

// Executable semantics over the operator grades: ?-coordinates denote
// function representatives (an operator with a polynomial parameter),
// !-coordinates denote finite sums of shifted Dirac operators.

namespace dbsll::lpdosem {

inline std::string to_string(const FactoredOp& d) { return d.to_string(); }

inline std::string to_string(const Distribution& d) {
  if (d.terms.empty()) return "0";
  std::string out;
  for (const auto& t : d.terms) {
    if (!out.empty()) out += " + ";
    out += t.coeff.str() + "*delta(";
    for (std::size_t k = 0; k < t.point.size(); ++k) {
      if (k) out += ",";
      out += t.point[k].str();
    }
    out += ")";
    if (!(t.op == FactoredOp::zero())) out += "@{" + t.op.to_string() + "}";
  }
  return out;
}

inline std::string to_string(const FunRep& f) {
  return "[{" + f.op.to_string() + "}; " + dbsll::to_string(f.param) + "]";
}

// A coordinate value: a distribution for !-coordinates, a function
// representative for ?-coordinates.
struct LVal {
  bool is_dist = false;
  Distribution dist;
  FunRep rep;

  static LVal make_dist(Distribution d) {
    LVal v;
    v.is_dist = true;
    v.dist = std::move(d);
    return v;
  }
  static LVal make_rep(FunRep f) {
    LVal v;
    v.rep = std::move(f);
    return v;
  }
  std::string to_string() const {
    return is_dist ? lpdosem::to_string(dist) : lpdosem::to_string(rep);
  }
};

using LEnv = std::vector<LVal>;

// Evaluates a cut-free, axiom-free proof in the exponential fragment.
inline LEnv eval_proof(const TreePtr<FactoredOp>& t) {
  using G = FactoredOp;
  const Rule<G>& r = t->rule;
  std::vector<LEnv> prem;
  prem.reserve(t->premises.size());
  for (const auto& p : t->premises) prem.push_back(eval_proof(p));

  auto drop = [](const LEnv& env, std::size_t i) {
    LEnv out;
    for (std::size_t k = 0; k < env.size(); ++k)
      if (k != i) out.push_back(env[k]);
    return out;
  };

  switch (r.tag) {
    case RuleTag::W: {
      LEnv out = prem[0];
      out.push_back(LVal::make_rep(rep_weaken(G::zero())));
      return out;
    }
    case RuleTag::WI: {
      LEnv out = prem[0];
      out.push_back(LVal::make_rep(rep_weaken(r.grade)));
      return out;
    }
    case RuleTag::C: {
      LEnv out = drop(prem[0], std::max(r.i, r.j));
      out = drop(out, std::min(r.i, r.j));
      out.push_back(LVal::make_rep(rep_contract(prem[0][r.i].rep, prem[0][r.j].rep)));
      return out;
    }
    case RuleTag::DI: {
      LEnv out = prem[0];
      out[r.i] = LVal::make_rep(rep_dereliction(out[r.i].rep, r.witness));
      return out;
    }
    case RuleTag::CoW:
      return {LVal::make_dist(dist_coweaken(G::zero()))};
    case RuleTag::CoWI:
      return {LVal::make_dist(dist_coweaken(r.grade))};
    case RuleTag::CoC: {
      LEnv out = drop(prem[0], r.i);
      LEnv rhs = drop(prem[1], r.j);
      out.insert(out.end(), rhs.begin(), rhs.end());
      out.push_back(
          LVal::make_dist(dist_cocontract(prem[0][r.i].dist, prem[1][r.j].dist)));
      return out;
    }
    case RuleTag::CoDI: {
      LEnv out = prem[0];
      out[r.i] = LVal::make_dist(dist_codereliction(out[r.i].dist, r.witness));
      return out;
    }
    case RuleTag::Exch: {
      LEnv out(prem[0].size());
      for (std::size_t k = 0; k < prem[0].size(); ++k) out[r.perm[k]] = prem[0][k];
      return out;
    }
    default:
      throw NotSupported(std::string("the operator semantics evaluates only the "
                                     "exponential fragment; rule not supported: ") +
                         tag_name(r.tag));
  }
}

// --- semantic identities on generator grids ---

struct LawResult {
  std::string name;
  bool ok = true;
};

struct Generators {
  std::vector<FactoredOp> ops;
  std::vector<Poly> polys;
  std::vector<std::vector<Rat>> points;
  std::size_t nvars = 2;
};

inline Generators default_generators() {
  Generators g;
  std::vector<FactoredOp> base = {
      FactoredOp::zero(),
      FactoredOp::from(1, {parse_poly("X1")}),
      FactoredOp::from(1, {parse_poly("X1+1")}),
      FactoredOp::from(1, {parse_poly("X1"), parse_poly("X1")}),
      FactoredOp::from(1, {parse_poly("X1*X2+1")}),
  };
  g.ops = base;
  for (const auto& a : base)
    for (const auto& b : base) {
      auto c = FactoredOp::add(a, b);
      bool seen = false;
      for (const auto& d : g.ops)
        if (d == c) { seen = true; break; }
      if (!seen) g.ops.push_back(c);
    }
  g.polys = {
      poly_const(1),
      parse_poly("X1"),
      parse_poly("X1+X2"),
      parse_poly("X1^2*X2+2*X1-3"),
      parse_poly("X2^3+X1*X2"),
  };
  for (Rat a : {Rat(-1), Rat(0), Rat(1), Rat(2)})
    for (Rat b : {Rat(-1), Rat(0), Rat(1), Rat(2)})
      g.points.push_back({a, b});
  return g;
}

// Every law is checked pointwise on the generator grid; a single failure
// marks the law false.
inline std::vector<LawResult> check_laws(const Generators& g = default_generators()) {
  std::vector<LawResult> out;
  auto law = [&](std::string name, bool ok) { out.push_back({std::move(name), ok}); };

  // pairing a point mass at zero against the unit parameter gives 1
  {
    bool ok = true;
    for (const auto& d : g.ops)
      ok = ok && pair_dist_rep(dist_coweaken(d), rep_weaken(d)) == 1;
    law("weakening-coweakening", ok);
  }

  // a merged parameter pairs as the product of its parts
  {
    bool ok = true;
    for (const auto& d1 : g.ops)
      for (const auto& d2 : g.ops)
        for (const auto& u : g.polys)
          for (const auto& v : g.polys) {
            FunRep f{d1, u}, h{d2, v};
            Rat lhs = pair_dist_rep(dist_coweaken(FactoredOp::add(d1, d2)),
                                    rep_contract(f, h));
            Rat rhs = pair_dist_rep(dist_coweaken(d1), f) *
                      pair_dist_rep(dist_coweaken(d2), h);
            ok = ok && lhs == rhs;
          }
    law("contraction-coweakening", ok);
  }

  // a convolution pairs against a unit parameter factorwise
  {
    bool ok = true;
    for (const auto& d1 : g.ops)
      for (const auto& d2 : g.ops)
        for (const auto& p1 : g.points)
          for (const auto& p2 : g.points) {
            auto a = dirac(p1, d1);
            auto b = dirac(p2, d2);
            Rat lhs = pair_dist_rep(dist_cocontract(a, b),
                                    rep_weaken(FactoredOp::add(d1, d2)));
            Rat rhs = pair_dist_rep(a, rep_weaken(d1)) *
                      pair_dist_rep(b, rep_weaken(d2));
            ok = ok && lhs == rhs;
          }
    law("cocontraction-weakening", ok);
  }

  // lifting a fresh weakening is the same as weakening at the lifted grade
  {
    bool ok = true;
    for (const auto& d : g.ops)
      for (const auto& e : g.ops)
        ok = ok && rep_dereliction(rep_weaken(d), e) ==
                       rep_weaken(FactoredOp::add(d, e));
    law("dereliction-merge", ok);
  }

  // lifting commutes with merging parameters
  {
    bool ok = true;
    for (const auto& d1 : g.ops)
      for (const auto& d2 : g.ops)
        for (const auto& e : g.ops)
          for (const auto& u : g.polys)
            for (const auto& v : g.polys) {
              FunRep f{d1, u}, h{d2, v};
              ok = ok && rep_dereliction(rep_contract(f, h), e) ==
                             rep_contract(rep_dereliction(f, e), h);
            }
    law("dereliction-contraction", ok);
  }

  // lifting commutes with convolution
  {
    bool ok = true;
    for (const auto& d1 : g.ops)
      for (const auto& e : g.ops)
        for (const auto& p1 : g.points)
          for (const auto& p2 : g.points) {
            auto a = dirac(p1, d1);
            auto b = dirac(p2, FactoredOp::zero());
            ok = ok && dist_codereliction(dist_cocontract(a, b), e) ==
                           dist_cocontract(dist_codereliction(a, e), b);
          }
    law("codereliction-cocontraction", ok);
  }

  // lifting both sides of a pairing cancels
  {
    bool ok = true;
    for (const auto& d : g.ops)
      for (const auto& e : g.ops)
        for (const auto& u : g.polys)
          for (const auto& p : g.points) {
            auto psi = dirac(p, d);
            FunRep f{d, u};
            ok = ok && pair_dist_rep(dist_codereliction(psi, e),
                                     rep_dereliction(f, e)) == pair_dist_rep(psi, f);
          }
    law("dereliction-axiom", ok);
  }

  // the 2x2 operator split reassembles its corners
  {
    bool ok = true;
    for (const auto& x1 : g.ops)
      for (const auto& x3 : g.ops) {
        // build matching decompositions x1 + x2 = x3 + x4 by picking the
        // total as x1 o x3 and the complements accordingly
        FactoredOp total = FactoredOp::add(x1, x3);
        auto w2 = FactoredOp::leq_witness(x1, total);
        auto w4 = FactoredOp::leq_witness(x3, total);
        if (!w2 || !w4) { ok = false; continue; }
        auto cert = FactoredOp::additive_split(x1, *w2, x3, *w4);
        ok = ok && FactoredOp::add(cert.x13, cert.x14) == x1;
        ok = ok && FactoredOp::add(cert.x23, cert.x24) == *w2;
        ok = ok && FactoredOp::add(cert.x13, cert.x23) == x3;
        ok = ok && FactoredOp::add(cert.x14, cert.x24) == *w4;
      }
    law("contraction-cocontraction-square", ok);
  }

  // pairing a convolution through the two-block expansion of the parameter
  {
    bool ok = true;
    for (const auto& d1 : g.ops)
      for (const auto& u : g.polys)
        for (const auto& p1 : g.points)
          for (const auto& p2 : g.points) {
            if (u.degree() > 4) continue;
            auto a = dirac(p1, d1);
            auto b = dirac(p2, FactoredOp::zero());
            Rat lhs = conv_apply_separated(a, b, u, g.nvars);
            Rat rhs = dist_apply(dist_cocontract(a, b), u);
            ok = ok && lhs == rhs;
          }
    law("convolution-pairing", ok);
  }

  // variable reflection is an involution
  {
    bool ok = true;
    for (const auto& d : g.ops) ok = ok && hat(hat(d)) == d;
    law("reflection-involution", ok);
  }

  // applying a composite operator is applying its parts in sequence
  {
    bool ok = true;
    for (const auto& d : g.ops)
      for (const auto& e : g.ops)
        for (const auto& u : g.polys)
          ok = ok && apply_op(FactoredOp::add(d, e), u) == apply_op(d, apply_op(e, u));
    law("composition-application", ok);
  }

  return out;
}

} // namespace dbsll::lpdosem
