#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dbsll/syntax.hpp"

namespace dbsll {

enum class Mode {
  DBSLL,     // graded rules + un-indexed d / cod
  IDiLL,     // finitary operator-indexed calculus: no d / cod
  DBSLLProm, // DBSLL plus the experimental graded promotion
  DiLL,      // un-graded target of the forgetful translation
};

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::DBSLL: return "dbsll";
    case Mode::IDiLL: return "idill";
    case Mode::DBSLLProm: return "dbsll-prom";
    case Mode::DiLL: return "dill";
  }
  return "";
}

enum class RuleTag {
  Ax, Cut,
  Tensor, Par, One, Bot, With, Plus1, Plus2, Top,
  W, C, DI, D,        // ?-side
  CoW, CoC, CoDI, CoD, // !-side
  WI, CoWI,            // indexed (co)weakening
  Prom,
  Exch, // explicit permutation of conclusion occurrences (engine-internal)
};

inline const char* tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::Ax: return "ax";
    case RuleTag::Cut: return "cut";
    case RuleTag::Tensor: return "tensor";
    case RuleTag::Par: return "par";
    case RuleTag::One: return "one";
    case RuleTag::Bot: return "bot";
    case RuleTag::With: return "with";
    case RuleTag::Plus1: return "plus1";
    case RuleTag::Plus2: return "plus2";
    case RuleTag::Top: return "top";
    case RuleTag::W: return "w";
    case RuleTag::C: return "c";
    case RuleTag::DI: return "di";
    case RuleTag::D: return "d";
    case RuleTag::CoW: return "cow";
    case RuleTag::CoC: return "coc";
    case RuleTag::CoDI: return "codi";
    case RuleTag::CoD: return "cod";
    case RuleTag::WI: return "wi";
    case RuleTag::CoWI: return "cowi";
    case RuleTag::Prom: return "prom";
    case RuleTag::Exch: return "xch";
  }
  return "";
}

// Rule instance: the tag plus everything needed to rebuild the conclusion
// from the premises. Occurrence indices address formulas in premise
// conclusions; `i` is in the first premise, `j` in the second (or both in
// the single premise for par / c).
template <GradeMonoid G>
struct Rule {
  RuleTag tag = RuleTag::Ax;
  std::size_t i = 0;
  std::size_t j = 0;
  FormulaPtr<G> formula;  // ax / (co)weakenings: principal A; plus1/2: the added disjunct
  G grade = G::zero();    // wi/cowi grade; di/codi target; prom grade
  G witness = G::zero();  // di/codi: w with x + w = target
  std::vector<FormulaPtr<G>> context; // top only
  std::vector<std::size_t> perm;      // xch only: conclusion[perm[t]] = premise[t]
};

template <GradeMonoid G>
struct ProofTree;

template <GradeMonoid G>
using TreePtr = std::shared_ptr<const ProofTree<G>>;

template <GradeMonoid G>
struct ProofTree {
  Rule<G> rule;
  std::vector<TreePtr<G>> premises;
  Sequent<G> conclusion; // cached; the checker recomputes and compares
};

struct Diag {
  std::vector<std::size_t> path; // premise indices from the root
  std::string code;
  std::string message;
};

struct CheckReport {
  std::vector<Diag> errors;
  bool ok() const { return errors.empty(); }
};

struct CheckError : std::runtime_error {
  Diag diag;
  explicit CheckError(Diag d)
      : std::runtime_error(d.code + ": " + d.message), diag(std::move(d)) {}
};

namespace detail {

template <GradeMonoid G>
std::vector<FormulaPtr<G>> without(const Sequent<G>& s, std::size_t i) {
  std::vector<FormulaPtr<G>> out;
  out.reserve(s.size() - 1);
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != i) out.push_back(s[k]);
  return out;
}

template <GradeMonoid G>
std::vector<FormulaPtr<G>> without2(const Sequent<G>& s, std::size_t i, std::size_t j) {
  std::vector<FormulaPtr<G>> out;
  out.reserve(s.size() - 2);
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != i && k != j) out.push_back(s[k]);
  return out;
}

} // namespace detail

// Computes the conclusion a rule node must have, validating the schema.
// Throws CheckError with an empty path; callers prepend the node path.
template <GradeMonoid G>
Sequent<G> conclude(const Rule<G>& rule, const std::vector<Sequent<G>>& prem, Mode mode) {
  using F = Formula<G>;
  auto fail = [&](std::string code, std::string msg) -> Sequent<G> {
    throw CheckError(Diag{{}, std::move(code), std::move(msg)});
  };
  auto need_premises = [&](std::size_t n) {
    if (prem.size() != n)
      fail("ArityMismatch", std::string(tag_name(rule.tag)) + " expects " +
                                std::to_string(n) + " premises, got " +
                                std::to_string(prem.size()));
  };
  auto need_index = [&](const Sequent<G>& s, std::size_t i) {
    if (i >= s.size())
      fail("BadIndex", "occurrence index " + std::to_string(i) + " out of range");
  };
  const bool graded_mode = mode != Mode::DiLL;

  switch (rule.tag) {
    case RuleTag::Ax: {
      need_premises(0);
      if (!rule.formula) fail("WrongPrincipalFormula", "ax needs a formula");
      return Sequent<G>{{negate<G>(rule.formula), rule.formula}};
    }
    case RuleTag::Cut: {
      need_premises(2);
      need_index(prem[0], rule.i);
      need_index(prem[1], rule.j);
      if (!equal<G>(negate<G>(prem[0][rule.i]), prem[1][rule.j]))
        fail("WrongPrincipalFormula", "cut formulas are not exact duals");
      auto out = detail::without<G>(prem[0], rule.i);
      auto rhs = detail::without<G>(prem[1], rule.j);
      out.insert(out.end(), rhs.begin(), rhs.end());
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::Tensor: {
      need_premises(2);
      need_index(prem[0], rule.i);
      need_index(prem[1], rule.j);
      auto out = detail::without<G>(prem[0], rule.i);
      auto rhs = detail::without<G>(prem[1], rule.j);
      out.insert(out.end(), rhs.begin(), rhs.end());
      out.push_back(F::make_binary(Conn::Tensor, prem[0][rule.i], prem[1][rule.j]));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::Par: {
      need_premises(1);
      need_index(prem[0], rule.i);
      need_index(prem[0], rule.j);
      if (rule.i == rule.j) fail("BadIndex", "par needs two distinct occurrences");
      auto out = detail::without2<G>(prem[0], rule.i, rule.j);
      out.push_back(F::make_binary(Conn::Par, prem[0][rule.i], prem[0][rule.j]));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::One:
      need_premises(0);
      return Sequent<G>{{F::make_unit(Conn::One)}};
    case RuleTag::Bot: {
      need_premises(1);
      auto out = prem[0].formulas;
      out.push_back(F::make_unit(Conn::Bot));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::With: {
      need_premises(2);
      need_index(prem[0], rule.i);
      need_index(prem[1], rule.j);
      auto ctx1 = detail::without<G>(prem[0], rule.i);
      auto ctx2 = detail::without<G>(prem[1], rule.j);
      if (ctx1.size() != ctx2.size())
        fail("ContextPartitionInvalid", "with premises have different contexts");
      for (std::size_t k = 0; k < ctx1.size(); ++k)
        if (!equal<G>(ctx1[k], ctx2[k]))
          fail("ContextPartitionInvalid", "with premises have different contexts");
      ctx1.push_back(F::make_binary(Conn::With, prem[0][rule.i], prem[1][rule.j]));
      return Sequent<G>{std::move(ctx1)};
    }
    case RuleTag::Plus1:
    case RuleTag::Plus2: {
      need_premises(1);
      need_index(prem[0], rule.i);
      if (!rule.formula) fail("WrongPrincipalFormula", "plus needs the other disjunct");
      auto out = detail::without<G>(prem[0], rule.i);
      if (rule.tag == RuleTag::Plus1)
        out.push_back(F::make_binary(Conn::Plus, prem[0][rule.i], rule.formula));
      else
        out.push_back(F::make_binary(Conn::Plus, rule.formula, prem[0][rule.i]));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::Top: {
      need_premises(0);
      auto out = rule.context;
      out.push_back(F::make_unit(Conn::Top));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::W: {
      need_premises(1);
      if (!rule.formula) fail("WrongPrincipalFormula", "w needs a formula");
      auto out = prem[0].formulas;
      out.push_back(graded_mode
                        ? F::make_graded(Conn::WhyNotG, G::zero(), rule.formula)
                        : F::make_exp(Conn::WhyNot, rule.formula));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::WI: {
      need_premises(1);
      if (mode == Mode::DiLL) fail("ModeForbidsRule", "wi is not a dill rule");
      if (!rule.formula) fail("WrongPrincipalFormula", "wi needs a formula");
      auto out = prem[0].formulas;
      out.push_back(F::make_graded(Conn::WhyNotG, rule.grade, rule.formula));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::C: {
      need_premises(1);
      need_index(prem[0], rule.i);
      need_index(prem[0], rule.j);
      if (rule.i == rule.j) fail("BadIndex", "c needs two distinct occurrences");
      const auto& a = prem[0][rule.i];
      const auto& b = prem[0][rule.j];
      Conn want = graded_mode ? Conn::WhyNotG : Conn::WhyNot;
      if (a->conn != want || b->conn != want)
        fail("WrongPrincipalFormula", "c expects two ? occurrences");
      if (!equal<G>(a->left, b->left))
        fail("WrongPrincipalFormula", "c expects the same formula under ?");
      auto out = detail::without2<G>(prem[0], rule.i, rule.j);
      out.push_back(graded_mode
                        ? F::make_graded(Conn::WhyNotG, G::add(a->grade, b->grade), a->left)
                        : F::make_exp(Conn::WhyNot, a->left));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::DI: {
      need_premises(1);
      if (mode == Mode::DiLL) fail("ModeForbidsRule", "di is not a dill rule");
      need_index(prem[0], rule.i);
      const auto& a = prem[0][rule.i];
      if (a->conn != Conn::WhyNotG)
        fail("WrongPrincipalFormula", "di expects a graded ? occurrence");
      if (!(G::add(a->grade, rule.witness) == rule.grade)) {
        if (!G::leq_witness(a->grade, rule.grade))
          fail("NoLeqWitness", "source grade does not precede target grade");
        fail("GradeMismatch", "stored witness does not connect source and target grades");
      }
      auto out = prem[0].formulas;
      out[rule.i] = F::make_graded(Conn::WhyNotG, rule.grade, a->left);
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::D: {
      need_premises(1);
      if (mode == Mode::IDiLL) fail("ModeForbidsRule", "d is not an idill rule");
      need_index(prem[0], rule.i);
      auto out = prem[0].formulas;
      out[rule.i] = F::make_exp(Conn::WhyNot, prem[0][rule.i]);
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::CoW: {
      need_premises(0);
      if (!rule.formula) fail("WrongPrincipalFormula", "cow needs a formula");
      return Sequent<G>{{graded_mode
                             ? F::make_graded(Conn::OfCourseG, G::zero(), rule.formula)
                             : F::make_exp(Conn::OfCourse, rule.formula)}};
    }
    case RuleTag::CoWI: {
      need_premises(0);
      if (mode == Mode::DiLL) fail("ModeForbidsRule", "cowi is not a dill rule");
      if (!rule.formula) fail("WrongPrincipalFormula", "cowi needs a formula");
      return Sequent<G>{{F::make_graded(Conn::OfCourseG, rule.grade, rule.formula)}};
    }
    case RuleTag::CoC: {
      need_premises(2);
      need_index(prem[0], rule.i);
      need_index(prem[1], rule.j);
      const auto& a = prem[0][rule.i];
      const auto& b = prem[1][rule.j];
      Conn want = graded_mode ? Conn::OfCourseG : Conn::OfCourse;
      if (a->conn != want || b->conn != want)
        fail("WrongPrincipalFormula", "coc expects two ! occurrences");
      if (!equal<G>(a->left, b->left))
        fail("WrongPrincipalFormula", "coc expects the same formula under !");
      auto out = detail::without<G>(prem[0], rule.i);
      auto rhs = detail::without<G>(prem[1], rule.j);
      out.insert(out.end(), rhs.begin(), rhs.end());
      out.push_back(graded_mode
                        ? F::make_graded(Conn::OfCourseG, G::add(a->grade, b->grade), a->left)
                        : F::make_exp(Conn::OfCourse, a->left));
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::CoDI: {
      need_premises(1);
      if (mode == Mode::DiLL) fail("ModeForbidsRule", "codi is not a dill rule");
      need_index(prem[0], rule.i);
      const auto& a = prem[0][rule.i];
      if (a->conn != Conn::OfCourseG)
        fail("WrongPrincipalFormula", "codi expects a graded ! occurrence");
      if (!(G::add(a->grade, rule.witness) == rule.grade)) {
        if (!G::leq_witness(a->grade, rule.grade))
          fail("NoLeqWitness", "source grade does not precede target grade");
        fail("GradeMismatch", "stored witness does not connect source and target grades");
      }
      auto out = prem[0].formulas;
      out[rule.i] = F::make_graded(Conn::OfCourseG, rule.grade, a->left);
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::CoD: {
      need_premises(1);
      if (mode == Mode::IDiLL) fail("ModeForbidsRule", "cod is not an idill rule");
      need_index(prem[0], rule.i);
      auto out = prem[0].formulas;
      out[rule.i] = F::make_exp(Conn::OfCourse, prem[0][rule.i]);
      return Sequent<G>{std::move(out)};
    }
    case RuleTag::Prom: {
      need_premises(1);
      if (mode != Mode::DBSLLProm)
        fail("ModeForbidsRule", "promotion requires dbsll-prom mode");
      if constexpr (GradeSemiring<G>) {
        need_index(prem[0], rule.i);
        std::vector<FormulaPtr<G>> out;
        for (std::size_t k = 0; k < prem[0].size(); ++k) {
          const auto& f = prem[0][k];
          if (k == rule.i) {
            out.push_back(F::make_graded(Conn::OfCourseG, rule.grade, f));
            continue;
          }
          if (f->conn != Conn::WhyNotG)
            fail("ContextPartitionInvalid", "promotion context must be graded ? formulas");
          out.push_back(F::make_graded(Conn::WhyNotG, G::mul(f->grade, rule.grade), f->left));
        }
        return Sequent<G>{std::move(out)};
      } else {
        fail("ModeForbidsRule", "grade monoid has no product; promotion unavailable");
      }
    }
    case RuleTag::Exch: {
      need_premises(1);
      const std::size_t n = prem[0].size();
      if (rule.perm.size() != n)
        fail("ContextPartitionInvalid", "xch permutation has the wrong size");
      std::vector<bool> seen(n, false);
      for (std::size_t t : rule.perm) {
        if (t >= n || seen[t])
          fail("ContextPartitionInvalid", "xch permutation is not a bijection");
        seen[t] = true;
      }
      std::vector<FormulaPtr<G>> out(n);
      for (std::size_t t = 0; t < n; ++t) out[rule.perm[t]] = prem[0][t];
      return Sequent<G>{std::move(out)};
    }
  }
  return Sequent<G>{};
}

namespace detail {

template <GradeMonoid G>
void check_formula_restrictions(const Sequent<G>& s, Mode mode,
                                const std::vector<std::size_t>& path,
                                std::vector<Diag>& errors) {
  if (mode != Mode::IDiLL && mode != Mode::DiLL) return;
  for (const auto& f : s.formulas) {
    if (mode == Mode::IDiLL && !is_finitary<G>(f))
      errors.push_back({path, "NonFinitaryFormula",
                        "idill forbids nested exponentials: " + to_string<G>(f)});
    // un-graded exponentials never occur in idill (d / cod are rejected), but
    // an axiom can smuggle one in through its formula parameter
    if (mode == Mode::IDiLL) {
      std::vector<FormulaPtr<G>> stack{f};
      while (!stack.empty()) {
        auto g = stack.back();
        stack.pop_back();
        if (!g) continue;
        if (g->conn == Conn::WhyNot || g->conn == Conn::OfCourse) {
          errors.push_back({path, "ModeForbidsRule",
                            "idill formulas cannot use un-indexed exponentials"});
          break;
        }
        stack.push_back(g->left);
        stack.push_back(g->right);
      }
    }
  }
}

template <GradeMonoid G>
void check_node(const ProofTree<G>& node, Mode mode, std::vector<std::size_t>& path,
                std::vector<Diag>& errors) {
  for (std::size_t k = 0; k < node.premises.size(); ++k) {
    path.push_back(k);
    check_node(*node.premises[k], mode, path, errors);
    path.pop_back();
  }
  std::vector<Sequent<G>> prem;
  prem.reserve(node.premises.size());
  for (const auto& p : node.premises) prem.push_back(p->conclusion);
  try {
    Sequent<G> expect = conclude<G>(node.rule, prem, mode);
    bool same = expect.size() == node.conclusion.size();
    for (std::size_t k = 0; same && k < expect.size(); ++k)
      same = equal<G>(expect[k], node.conclusion[k]);
    if (!same)
      errors.push_back({path, "ConclusionMismatch",
                        "cached conclusion " + to_string<G>(node.conclusion) +
                            " differs from derived " + to_string<G>(expect)});
  } catch (const CheckError& e) {
    Diag d = e.diag;
    d.path = path;
    errors.push_back(std::move(d));
  }
  check_formula_restrictions<G>(node.conclusion, mode, path, errors);
}

} // namespace detail

template <GradeMonoid G>
CheckReport check(const TreePtr<G>& tree, Mode mode) {
  CheckReport report;
  std::vector<std::size_t> path;
  detail::check_node(*tree, mode, path, report.errors);
  return report;
}

// Builds a node, deriving its conclusion. Throws CheckError on a schema
// violation; rewrite-engine internals rely on this to never happen.
template <GradeMonoid G>
TreePtr<G> apply_rule(Rule<G> rule, std::vector<TreePtr<G>> premises, Mode mode) {
  std::vector<Sequent<G>> prem;
  prem.reserve(premises.size());
  for (const auto& p : premises) prem.push_back(p->conclusion);
  Sequent<G> conc = conclude<G>(rule, prem, mode);
  auto node = std::make_shared<ProofTree<G>>();
  node->rule = std::move(rule);
  node->premises = std::move(premises);
  node->conclusion = std::move(conc);
  return node;
}

// Admissible indexed weakening: a primitive node in IDiLL, the w;di
// expansion in DBSLL (the di step is elided at grade zero).
template <GradeMonoid G>
TreePtr<G> derive_wi(TreePtr<G> premise, FormulaPtr<G> formula, G grade, Mode mode) {
  if (mode == Mode::IDiLL) {
    Rule<G> r;
    r.tag = RuleTag::WI;
    r.formula = std::move(formula);
    r.grade = std::move(grade);
    return apply_rule<G>(std::move(r), {std::move(premise)}, mode);
  }
  Rule<G> w;
  w.tag = RuleTag::W;
  w.formula = formula;
  auto tree = apply_rule<G>(std::move(w), {std::move(premise)}, mode);
  if (grade == G::zero()) return tree;
  Rule<G> di;
  di.tag = RuleTag::DI;
  di.i = tree->conclusion.size() - 1;
  di.grade = grade;
  di.witness = grade;
  return apply_rule<G>(std::move(di), {std::move(tree)}, mode);
}

template <GradeMonoid G>
TreePtr<G> derive_cowi(FormulaPtr<G> formula, G grade, Mode mode) {
  if (mode == Mode::IDiLL) {
    Rule<G> r;
    r.tag = RuleTag::CoWI;
    r.formula = std::move(formula);
    r.grade = std::move(grade);
    return apply_rule<G>(std::move(r), {}, mode);
  }
  Rule<G> cow;
  cow.tag = RuleTag::CoW;
  cow.formula = formula;
  auto tree = apply_rule<G>(std::move(cow), {}, mode);
  if (grade == G::zero()) return tree;
  Rule<G> codi;
  codi.tag = RuleTag::CoDI;
  codi.i = 0;
  codi.grade = grade;
  codi.witness = grade;
  return apply_rule<G>(std::move(codi), {std::move(tree)}, mode);
}

// Rule-by-rule admissibility translation. DBSLL -> IDiLL rejects d / cod;
// IDiLL -> DBSLL expands the primitive indexed (co)weakenings.
template <GradeMonoid G>
TreePtr<G> translate(const TreePtr<G>& tree, Mode from, Mode to) {
  std::vector<TreePtr<G>> premises;
  premises.reserve(tree->premises.size());
  for (const auto& p : tree->premises) premises.push_back(translate<G>(p, from, to));
  const Rule<G>& r = tree->rule;
  if (to == Mode::IDiLL && (r.tag == RuleTag::D || r.tag == RuleTag::CoD))
    throw CheckError({{}, "ModeForbidsRule", "d / cod have no idill counterpart"});
  if (to == Mode::DBSLL && r.tag == RuleTag::WI)
    return derive_wi<G>(premises[0], r.formula, r.grade, to);
  if (to == Mode::DBSLL && r.tag == RuleTag::CoWI)
    return derive_cowi<G>(r.formula, r.grade, to);
  return apply_rule<G>(r, std::move(premises), to);
}

} // namespace dbsll
