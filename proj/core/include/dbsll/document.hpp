#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbsll/lpdo.hpp"
#include "dbsll/proofs.hpp"
#include "dbsll/sexpr.hpp"

// Textual proof documents:
//   (document (mode dbsll) (monoid nat) (proof <node>))
// Formulas use the canonical rendering from the syntax module; grades appear
// as brace tokens, {3} for naturals and {2*(X1)*(X1+1)} for operators.

namespace dbsll {

template <typename G>
struct GradeIO;

template <>
struct GradeIO<NatGrade> {
  static constexpr const char* name = "nat";
  static NatGrade parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty grade");
    std::uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw ParseError("bad natural grade: " + s);
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return NatGrade{v};
  }
};

template <>
struct GradeIO<FactoredOp> {
  static constexpr const char* name = "lpdo";
  static FactoredOp parse(const std::string& s) {
    try {
      return parse_op(s);
    } catch (const PreconditionViolated& e) {
      throw ParseError(e.what());
    }
  }
};

inline Mode parse_mode(const std::string& s) {
  if (s == "dbsll") return Mode::DBSLL;
  if (s == "idill") return Mode::IDiLL;
  if (s == "dbsll-prom") return Mode::DBSLLProm;
  if (s == "dill") return Mode::DiLL;
  throw ParseError("unknown mode: " + s);
}

namespace docdetail {

template <typename G>
G parse_grade_token(const std::string& tok) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    throw ParseError("expected a {grade} token, got: " + tok);
  return GradeIO<G>::parse(tok.substr(1, tok.size() - 2));
}

inline std::size_t parse_index(const SExpr& e) {
  if (!e.is_atom) throw ParseError("expected an occurrence index");
  std::size_t v = 0;
  if (e.atom.empty()) throw ParseError("expected an occurrence index");
  for (char c : e.atom) {
    if (c < '0' || c > '9') throw ParseError("bad occurrence index: " + e.atom);
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline const SExpr& expect_atom(const SExpr& e, const char* what) {
  if (!e.is_atom) throw ParseError(std::string("expected ") + what);
  return e;
}

} // namespace docdetail

template <GradeMonoid G>
FormulaPtr<G> parse_formula(const SExpr& e) {
  using F = Formula<G>;
  if (e.is_atom) {
    const std::string& s = e.atom;
    if (s == "1") return F::make_unit(Conn::One);
    if (s == "bot") return F::make_unit(Conn::Bot);
    if (s == "top") return F::make_unit(Conn::Top);
    if (s == "0") return F::make_unit(Conn::Zero);
    if (s.size() > 1 && s.back() == '^')
      return F::make_atom(s.substr(0, s.size() - 1), false);
    return F::make_atom(s, true);
  }
  const std::string& h = e.head();
  if (h == "tensor" || h == "par" || h == "with" || h == "plus") {
    if (e.size() != 3) throw ParseError(h + " takes two formulas");
    Conn c = h == "tensor" ? Conn::Tensor
             : h == "par"  ? Conn::Par
             : h == "with" ? Conn::With
                           : Conn::Plus;
    return F::make_binary(c, parse_formula<G>(e.at(1)), parse_formula<G>(e.at(2)));
  }
  if (h == "?" || h == "!") {
    if (e.size() != 2) throw ParseError(h + " takes one formula");
    return F::make_exp(h == "?" ? Conn::WhyNot : Conn::OfCourse,
                       parse_formula<G>(e.at(1)));
  }
  if (h.size() > 3 && (h[0] == '?' || h[0] == '!') && h[1] == '{' && h.back() == '}') {
    if (e.size() != 2) throw ParseError(h + " takes one formula");
    G g = GradeIO<G>::parse(h.substr(2, h.size() - 3));
    return F::make_graded(h[0] == '?' ? Conn::WhyNotG : Conn::OfCourseG,
                          std::move(g), parse_formula<G>(e.at(1)));
  }
  throw ParseError("unknown formula form: " + h);
}

namespace docdetail {

template <GradeMonoid G>
TreePtr<G> parse_proof(const SExpr& e, Mode mode, std::vector<std::size_t>& path) {
  if (e.is_atom) throw ParseError("expected a proof node, got: " + e.atom);
  const std::string& h = e.head();
  Rule<G> rule;
  std::vector<const SExpr*> prem_exprs;

  auto args = [&](std::size_t n) {
    if (e.size() != n + 1)
      throw ParseError(h + " takes " + std::to_string(n) + " arguments");
  };

  if (h == "ax") {
    args(1);
    rule.tag = RuleTag::Ax;
    rule.formula = parse_formula<G>(e.at(1));
  } else if (h == "cut" || h == "tensor" || h == "with" || h == "coc") {
    args(4);
    rule.tag = h == "cut"      ? RuleTag::Cut
               : h == "tensor" ? RuleTag::Tensor
               : h == "with"   ? RuleTag::With
                               : RuleTag::CoC;
    rule.i = parse_index(e.at(1));
    rule.j = parse_index(e.at(2));
    prem_exprs = {&e.at(3), &e.at(4)};
  } else if (h == "par" || h == "c") {
    args(3);
    rule.tag = h == "par" ? RuleTag::Par : RuleTag::C;
    rule.i = parse_index(e.at(1));
    rule.j = parse_index(e.at(2));
    prem_exprs = {&e.at(3)};
  } else if (h == "one") {
    args(0);
    rule.tag = RuleTag::One;
  } else if (h == "bot") {
    args(1);
    rule.tag = RuleTag::Bot;
    prem_exprs = {&e.at(1)};
  } else if (h == "plus1" || h == "plus2") {
    args(3);
    rule.tag = h == "plus1" ? RuleTag::Plus1 : RuleTag::Plus2;
    rule.i = parse_index(e.at(1));
    rule.formula = parse_formula<G>(e.at(2));
    prem_exprs = {&e.at(3)};
  } else if (h == "top") {
    rule.tag = RuleTag::Top;
    for (std::size_t k = 1; k < e.size(); ++k)
      rule.context.push_back(parse_formula<G>(e.at(k)));
  } else if (h == "w") {
    args(2);
    rule.tag = RuleTag::W;
    rule.formula = parse_formula<G>(e.at(1));
    prem_exprs = {&e.at(2)};
  } else if (h == "wi") {
    args(3);
    rule.tag = RuleTag::WI;
    rule.grade = parse_grade_token<G>(expect_atom(e.at(1), "a grade").atom);
    rule.formula = parse_formula<G>(e.at(2));
    prem_exprs = {&e.at(3)};
  } else if (h == "cow") {
    args(1);
    rule.tag = RuleTag::CoW;
    rule.formula = parse_formula<G>(e.at(1));
  } else if (h == "cowi") {
    args(2);
    rule.tag = RuleTag::CoWI;
    rule.grade = parse_grade_token<G>(expect_atom(e.at(1), "a grade").atom);
    rule.formula = parse_formula<G>(e.at(2));
  } else if (h == "di" || h == "codi") {
    args(3);
    rule.tag = h == "di" ? RuleTag::DI : RuleTag::CoDI;
    rule.i = parse_index(e.at(1));
    rule.grade = parse_grade_token<G>(expect_atom(e.at(2), "a grade").atom);
    prem_exprs = {&e.at(3)};
  } else if (h == "d" || h == "cod") {
    args(2);
    rule.tag = h == "d" ? RuleTag::D : RuleTag::CoD;
    rule.i = parse_index(e.at(1));
    prem_exprs = {&e.at(2)};
  } else if (h == "prom") {
    args(3);
    rule.tag = RuleTag::Prom;
    rule.i = parse_index(e.at(1));
    rule.grade = parse_grade_token<G>(expect_atom(e.at(2), "a grade").atom);
    prem_exprs = {&e.at(3)};
  } else if (h == "xch") {
    args(2);
    rule.tag = RuleTag::Exch;
    const SExpr& ix = e.at(1);
    if (ix.is_atom) throw ParseError("xch takes a list of indices");
    for (const SExpr& k : ix.items) rule.perm.push_back(parse_index(k));
    prem_exprs = {&e.at(2)};
  } else {
    throw ParseError("unknown proof rule: " + h);
  }

  std::vector<TreePtr<G>> premises;
  premises.reserve(prem_exprs.size());
  for (std::size_t k = 0; k < prem_exprs.size(); ++k) {
    path.push_back(k);
    premises.push_back(parse_proof<G>(*prem_exprs[k], mode, path));
    path.pop_back();
  }

  // the indexed (co)dereliction witness is recomputed from the sub-proof
  if (rule.tag == RuleTag::DI || rule.tag == RuleTag::CoDI) {
    if (!premises.empty() && rule.i < premises[0]->conclusion.size()) {
      const auto& f = premises[0]->conclusion[rule.i];
      if (f->conn == Conn::WhyNotG || f->conn == Conn::OfCourseG) {
        if (auto w = G::leq_witness(f->grade, rule.grade)) rule.witness = *w;
      }
    }
  }

  try {
    return apply_rule<G>(std::move(rule), std::move(premises), mode);
  } catch (CheckError& err) {
    err.diag.path = path;
    throw CheckError(err.diag);
  }
}

} // namespace docdetail

template <GradeMonoid G>
TreePtr<G> parse_proof(const SExpr& e, Mode mode) {
  std::vector<std::size_t> path;
  return docdetail::parse_proof<G>(e, mode, path);
}

template <GradeMonoid G>
std::string print_proof(const TreePtr<G>& t) {
  const Rule<G>& r = t->rule;
  auto idx = [](std::size_t k) { return std::to_string(k); };
  auto grd = [](const G& g) { return "{" + g.to_string() + "}"; };
  std::string out = "(";
  out += tag_name(r.tag);
  switch (r.tag) {
    case RuleTag::Ax:
    case RuleTag::CoW:
    case RuleTag::W:
      out += " " + to_string<G>(r.formula);
      break;
    case RuleTag::WI:
    case RuleTag::CoWI:
      out += " " + grd(r.grade) + " " + to_string<G>(r.formula);
      break;
    case RuleTag::Cut:
    case RuleTag::Tensor:
    case RuleTag::With:
    case RuleTag::CoC:
    case RuleTag::Par:
    case RuleTag::C:
      out += " " + idx(r.i) + " " + idx(r.j);
      break;
    case RuleTag::Plus1:
    case RuleTag::Plus2:
      out += " " + idx(r.i) + " " + to_string<G>(r.formula);
      break;
    case RuleTag::Top:
      for (const auto& f : r.context) out += " " + to_string<G>(f);
      break;
    case RuleTag::DI:
    case RuleTag::CoDI:
    case RuleTag::Prom:
      out += " " + idx(r.i) + " " + grd(r.grade);
      break;
    case RuleTag::D:
    case RuleTag::CoD:
      out += " " + idx(r.i);
      break;
    case RuleTag::Exch: {
      out += " (";
      for (std::size_t k = 0; k < r.perm.size(); ++k) {
        if (k) out += " ";
        out += idx(r.perm[k]);
      }
      out += ")";
      break;
    }
    case RuleTag::One:
    case RuleTag::Bot:
      break;
  }
  for (const auto& p : t->premises) out += " " + print_proof<G>(p);
  out += ")";
  return out;
}

template <GradeMonoid G>
struct Document {
  Mode mode = Mode::DBSLL;
  TreePtr<G> proof;
};

inline std::string document_field(const SExpr& doc, const std::string& field) {
  if (doc.is_atom || doc.head() != "document")
    throw ParseError("expected a (document ...) form");
  for (std::size_t k = 1; k < doc.size(); ++k) {
    const SExpr& item = doc.at(k);
    if (!item.is_atom && item.head() == field && item.size() == 2 &&
        item.at(1).is_atom)
      return item.at(1).atom;
  }
  throw ParseError("document is missing its (" + field + " ...) field");
}

inline const SExpr& document_proof_expr(const SExpr& doc) {
  if (doc.is_atom || doc.head() != "document")
    throw ParseError("expected a (document ...) form");
  for (std::size_t k = 1; k < doc.size(); ++k) {
    const SExpr& item = doc.at(k);
    if (!item.is_atom && item.head() == "proof" && item.size() == 2)
      return item.at(1);
  }
  throw ParseError("document is missing its (proof ...) field");
}

template <GradeMonoid G>
Document<G> parse_document(const SExpr& doc) {
  Document<G> out;
  out.mode = parse_mode(document_field(doc, "mode"));
  std::string monoid = document_field(doc, "monoid");
  if (monoid != GradeIO<G>::name)
    throw ParseError("document monoid is " + monoid + ", expected " +
                     GradeIO<G>::name);
  out.proof = parse_proof<G>(document_proof_expr(doc), out.mode);
  return out;
}

template <GradeMonoid G>
Document<G> parse_document(const std::string& src) {
  return parse_document<G>(parse_sexpr(src));
}

template <GradeMonoid G>
std::string print_document(const Document<G>& doc) {
  return "(document (mode " + to_string(doc.mode) + ") (monoid " +
         GradeIO<G>::name + ") (proof " + print_proof<G>(doc.proof) + "))";
}

} // namespace dbsll
