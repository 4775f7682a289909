#include "doctest.h"

#include "dbsll/proofs.hpp"
#include "dbsll/syntax.hpp"
#include "support/gen.hpp"

using namespace dbsll;
using testsupport::Gen;
using G = NatGrade;
using F = Formula<G>;

TEST_CASE("formula printing") {
  auto a = F::make_atom("a", true);
  auto an = F::make_atom("a", false);
  CHECK(to_string<G>(a) == "a");
  CHECK(to_string<G>(an) == "a^");
  CHECK(to_string<G>(F::make_binary(Conn::Tensor, a, an)) == "(tensor a a^)");
  CHECK(to_string<G>(F::make_graded(Conn::WhyNotG, G{3}, a)) == "(?{3} a)");
  CHECK(to_string<G>(F::make_unit(Conn::Top)) == "top");
}

TEST_CASE("negation is a grade-preserving involution") {
  Gen g(11);
  for (int k = 0; k < 200; ++k) {
    auto f = g.formula(3);
    CHECK(equal<G>(negate<G>(negate<G>(f)), f));
  }
  auto bang = F::make_graded(Conn::OfCourseG, G{4}, F::make_atom("a", true));
  auto dual = negate<G>(bang);
  CHECK(dual->conn == Conn::WhyNotG);
  CHECK(dual->grade.value == 4);
}

TEST_CASE("finitary formulas have no nested exponentials") {
  auto a = F::make_atom("a", true);
  CHECK(is_finitary<G>(F::make_binary(Conn::Tensor, a, a)));
  CHECK(is_finitary<G>(F::make_graded(Conn::WhyNotG, G{2}, a)));
  CHECK_FALSE(is_finitary<G>(F::make_graded(
      Conn::WhyNotG, G{2}, F::make_graded(Conn::OfCourseG, G{1}, a))));
}

TEST_CASE("checker accepts generated proofs") {
  Gen g(23);
  for (int k = 0; k < 100; ++k) {
    auto t = g.proof();
    auto rep = check<G>(t, Mode::DBSLL);
    CHECK(rep.ok());
  }
}

TEST_CASE("checker rejects a cut on non-dual occurrences") {
  Gen g(1);
  auto l = g.ax(F::make_atom("a", true));
  Rule<G> cut;
  cut.tag = RuleTag::Cut;
  cut.i = 1;
  cut.j = 1;
  CHECK_THROWS_AS(apply_rule<G>(cut, {l, l}, Mode::DBSLL), CheckError);
  try {
    apply_rule<G>(cut, {l, l}, Mode::DBSLL);
  } catch (const CheckError& e) {
    CHECK(e.diag.code == "WrongPrincipalFormula");
  }
}

TEST_CASE("graded lift needs a preorder witness") {
  Gen g(2);
  auto base = g.mk(
      [&] {
        Rule<G> r;
        r.tag = RuleTag::WI;
        r.grade = G{3};
        r.formula = F::make_atom("a", true);
        return r;
      }(),
      {g.mk({RuleTag::One}, {})});
  Rule<G> di;
  di.tag = RuleTag::DI;
  di.i = 1;
  di.grade = G{2}; // below the source grade
  di.witness = G{0};
  CHECK_THROWS_AS(apply_rule<G>(di, {base}, Mode::DBSLL), CheckError);
}

TEST_CASE("plain dereliction is forbidden in the indexed fragment") {
  Gen g(3);
  auto t = g.mk(
      [&] {
        Rule<G> r;
        r.tag = RuleTag::D;
        r.i = 1;
        return r;
      }(),
      {g.ax(F::make_atom("a", true))});
  auto rep = check<G>(t, Mode::IDiLL);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.errors[0].code == "ModeForbidsRule");
}

TEST_CASE("derived graded weakenings expand and translate back") {
  auto a = F::make_atom("a", true);
  Gen g(4);
  auto one = g.mk({RuleTag::One}, {});
  auto wi = derive_wi<G>(one, a, G{2}, Mode::DBSLL);
  CHECK(to_string<G>(wi->conclusion) == "|- 1 (?{2} a)");
  auto cowi = derive_cowi<G>(a, G{2}, Mode::DBSLL);
  CHECK(to_string<G>(cowi->conclusion) == "|- (!{2} a)");

  auto wi_prim = derive_wi<G>(one, a, G{2}, Mode::IDiLL);
  CHECK(wi_prim->rule.tag == RuleTag::WI);
  auto round = translate<G>(wi_prim, Mode::IDiLL, Mode::DBSLL);
  CHECK(check<G>(round, Mode::DBSLL).ok());
  CHECK(multiset_equal<G>(round->conclusion, wi_prim->conclusion));
  auto back = translate<G>(round, Mode::DBSLL, Mode::IDiLL);
  CHECK(check<G>(back, Mode::IDiLL).ok());
}

TEST_CASE("conclusion multisets ignore order") {
  Gen g(5);
  auto t = g.ax(F::make_atom("a", true));
  auto s = g.xch(t, {1, 0});
  CHECK(multiset_equal<G>(t->conclusion, s->conclusion));
  CHECK_FALSE(equal<G>(t->conclusion[0], s->conclusion[0]));
}
