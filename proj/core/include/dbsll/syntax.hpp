#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dbsll/grading.hpp"

namespace dbsll {

enum class Conn {
  Atom,
  One,
  Bot,
  Top,
  Zero,
  Tensor,
  Par,
  With,
  Plus,
  WhyNot,    // un-indexed ?A
  OfCourse,  // un-indexed !A
  WhyNotG,   // ?_x A
  OfCourseG, // !_x A
};

// Immutable formula trees; subtrees are shared freely.
template <GradeMonoid G>
struct Formula {
  using Ptr = std::shared_ptr<const Formula>;

  Conn conn;
  std::string atom;     // Atom only
  bool positive = true; // Atom only; a^ is the negative occurrence
  G grade = G::zero();  // WhyNotG / OfCourseG only
  Ptr left, right;      // children (right only for binary connectives)

  static Ptr make_atom(std::string name, bool positive = true) {
    auto f = std::make_shared<Formula>();
    f->conn = Conn::Atom;
    f->atom = std::move(name);
    f->positive = positive;
    return f;
  }
  static Ptr make_unit(Conn c) {
    auto f = std::make_shared<Formula>();
    f->conn = c;
    return f;
  }
  static Ptr make_binary(Conn c, Ptr a, Ptr b) {
    auto f = std::make_shared<Formula>();
    f->conn = c;
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
  }
  static Ptr make_exp(Conn c, Ptr a) {
    auto f = std::make_shared<Formula>();
    f->conn = c;
    f->left = std::move(a);
    return f;
  }
  static Ptr make_graded(Conn c, G grade, Ptr a) {
    auto f = std::make_shared<Formula>();
    f->conn = c;
    f->grade = std::move(grade);
    f->left = std::move(a);
    return f;
  }
};

template <GradeMonoid G>
using FormulaPtr = typename Formula<G>::Ptr;

template <GradeMonoid G>
bool equal(const FormulaPtr<G>& a, const FormulaPtr<G>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->conn != b->conn) return false;
  switch (a->conn) {
    case Conn::Atom:
      return a->atom == b->atom && a->positive == b->positive;
    case Conn::One:
    case Conn::Bot:
    case Conn::Top:
    case Conn::Zero:
      return true;
    case Conn::Tensor:
    case Conn::Par:
    case Conn::With:
    case Conn::Plus:
      return equal<G>(a->left, b->left) && equal<G>(a->right, b->right);
    case Conn::WhyNot:
    case Conn::OfCourse:
      return equal<G>(a->left, b->left);
    case Conn::WhyNotG:
    case Conn::OfCourseG:
      return a->grade == b->grade && equal<G>(a->left, b->left);
  }
  return false;
}

// Involutive de Morgan negation. Graded duality preserves the grade:
// (!_x A)^ = ?_x A^.
template <GradeMonoid G>
FormulaPtr<G> negate(const FormulaPtr<G>& f) {
  using F = Formula<G>;
  switch (f->conn) {
    case Conn::Atom:
      return F::make_atom(f->atom, !f->positive);
    case Conn::One:
      return F::make_unit(Conn::Bot);
    case Conn::Bot:
      return F::make_unit(Conn::One);
    case Conn::Top:
      return F::make_unit(Conn::Zero);
    case Conn::Zero:
      return F::make_unit(Conn::Top);
    case Conn::Tensor:
      return F::make_binary(Conn::Par, negate<G>(f->left), negate<G>(f->right));
    case Conn::Par:
      return F::make_binary(Conn::Tensor, negate<G>(f->left), negate<G>(f->right));
    case Conn::With:
      return F::make_binary(Conn::Plus, negate<G>(f->left), negate<G>(f->right));
    case Conn::Plus:
      return F::make_binary(Conn::With, negate<G>(f->left), negate<G>(f->right));
    case Conn::WhyNot:
      return F::make_exp(Conn::OfCourse, negate<G>(f->left));
    case Conn::OfCourse:
      return F::make_exp(Conn::WhyNot, negate<G>(f->left));
    case Conn::WhyNotG:
      return F::make_graded(Conn::OfCourseG, f->grade, negate<G>(f->left));
    case Conn::OfCourseG:
      return F::make_graded(Conn::WhyNotG, f->grade, negate<G>(f->left));
  }
  return nullptr;
}

template <GradeMonoid G>
bool has_exponential(const FormulaPtr<G>& f) {
  if (!f) return false;
  switch (f->conn) {
    case Conn::WhyNot:
    case Conn::OfCourse:
    case Conn::WhyNotG:
    case Conn::OfCourseG:
      return true;
    default:
      return has_exponential<G>(f->left) || has_exponential<G>(f->right);
  }
}

// True iff no exponential occurs under another exponential (the grammar
// restriction of the operator-indexed calculus).
template <GradeMonoid G>
bool is_finitary(const FormulaPtr<G>& f) {
  if (!f) return true;
  switch (f->conn) {
    case Conn::WhyNot:
    case Conn::OfCourse:
    case Conn::WhyNotG:
    case Conn::OfCourseG:
      return !has_exponential<G>(f->left);
    default:
      return is_finitary<G>(f->left) && is_finitary<G>(f->right);
  }
}

// Canonical ASCII rendering; doubles as the structural-equality key for
// multiset comparisons (printing is injective on formulas).
template <GradeMonoid G>
std::string to_string(const FormulaPtr<G>& f) {
  switch (f->conn) {
    case Conn::Atom:
      return f->positive ? f->atom : f->atom + "^";
    case Conn::One:
      return "1";
    case Conn::Bot:
      return "bot";
    case Conn::Top:
      return "top";
    case Conn::Zero:
      return "0";
    case Conn::Tensor:
      return "(tensor " + to_string<G>(f->left) + " " + to_string<G>(f->right) + ")";
    case Conn::Par:
      return "(par " + to_string<G>(f->left) + " " + to_string<G>(f->right) + ")";
    case Conn::With:
      return "(with " + to_string<G>(f->left) + " " + to_string<G>(f->right) + ")";
    case Conn::Plus:
      return "(plus " + to_string<G>(f->left) + " " + to_string<G>(f->right) + ")";
    case Conn::WhyNot:
      return "(? " + to_string<G>(f->left) + ")";
    case Conn::OfCourse:
      return "(! " + to_string<G>(f->left) + ")";
    case Conn::WhyNotG:
      return "(?{" + f->grade.to_string() + "} " + to_string<G>(f->left) + ")";
    case Conn::OfCourseG:
      return "(!{" + f->grade.to_string() + "} " + to_string<G>(f->left) + ")";
  }
  return "";
}

// One-sided sequent: a multiset of formulas, kept as a vector so rules can
// address occurrences by index. Equality ignores order.
template <GradeMonoid G>
struct Sequent {
  std::vector<FormulaPtr<G>> formulas;

  std::size_t size() const { return formulas.size(); }
  const FormulaPtr<G>& operator[](std::size_t i) const { return formulas[i]; }
};

template <GradeMonoid G>
std::map<std::string, int> occurrence_counts(const Sequent<G>& s) {
  std::map<std::string, int> m;
  for (const auto& f : s.formulas) ++m[to_string<G>(f)];
  return m;
}

template <GradeMonoid G>
bool multiset_equal(const Sequent<G>& a, const Sequent<G>& b) {
  if (a.size() != b.size()) return false;
  return occurrence_counts(a) == occurrence_counts(b);
}

template <GradeMonoid G>
std::string to_string(const Sequent<G>& s) {
  std::string out = "|-";
  for (const auto& f : s.formulas) out += " " + to_string<G>(f);
  return out;
}

} // namespace dbsll
