#include "doctest.h"

#include "dbsll/document.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace dbsll;
using testsupport::Gen;
using G = NatGrade;

TEST_CASE("s-expression lexing keeps brace spans inside atoms") {
  auto e = parse_sexpr("(wi {2*(X1)} a (one))");
  REQUIRE_FALSE(e.is_atom);
  CHECK(e.at(1).atom == "{2*(X1)}");
  CHECK_THROWS_AS(parse_sexpr("(ax a"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(ax a) junk"), ParseError);
}

TEST_CASE("documents round-trip through print and parse") {
  for (const auto& fx : testsupport::cut_fixtures()) {
    CAPTURE(fx.name);
    auto doc = parse_document<G>(fx.doc);
    auto printed = print_document<G>(doc);
    auto again = parse_document<G>(printed);
    CHECK(print_document<G>(again) == printed);
    CHECK(to_string<G>(again.proof->conclusion) ==
          to_string<G>(doc.proof->conclusion));
  }
}

TEST_CASE("generated proofs survive a print/parse round trip") {
  Gen g(606);
  for (int k = 0; k < 60; ++k) {
    Document<G> doc{Mode::DBSLL, g.proof()};
    auto printed = print_document<G>(doc);
    auto again = parse_document<G>(printed);
    CHECK(print_document<G>(again) == printed);
    CHECK(check<G>(again.proof, Mode::DBSLL).ok());
  }
}

TEST_CASE("operator grades parse inside documents") {
  std::string src =
      "(document (mode idill) (monoid lpdo) (proof"
      " (c 1 2 (wi {X1} a (wi {(X1+1)} a (cowi {1} b))))))";
  auto doc = parse_document<FactoredOp>(src);
  CHECK(doc.mode == Mode::IDiLL);
  CHECK(check<FactoredOp>(doc.proof, doc.mode).ok());
  auto printed = print_document<FactoredOp>(doc);
  auto again = parse_document<FactoredOp>(printed);
  CHECK(print_document<FactoredOp>(again) == printed);
  // the merged grade is the composition of the two factors
  CHECK(doc.proof->conclusion[1]->grade.to_string() == "(X1)*(X1+1)");
}

TEST_CASE("lift witnesses are recomputed at parse time") {
  std::string good =
      "(document (mode dbsll) (monoid nat) (proof (di 1 {4} (wi {2} a (one)))))";
  auto doc = parse_document<G>(good);
  CHECK(doc.proof->rule.witness.value == 2);

  std::string bad =
      "(document (mode dbsll) (monoid nat) (proof (di 1 {1} (wi {2} a (one)))))";
  try {
    parse_document<G>(bad);
    FAIL("expected a check failure");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == "NoLeqWitness");
    CHECK(e.diag.path.empty());
  }
}

TEST_CASE("diagnostics carry the premise path") {
  std::string src =
      "(document (mode dbsll) (monoid nat) (proof"
      " (bot (cut 1 1 (ax a) (ax a)))))";
  try {
    parse_document<G>(src);
    FAIL("expected a check failure");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == "WrongPrincipalFormula");
    REQUIRE(e.diag.path.size() == 1);
    CHECK(e.diag.path[0] == 0);
  }
}

TEST_CASE("unknown monoids and modes are parse errors") {
  CHECK_THROWS_AS(parse_document<G>(
                      "(document (mode dbsll) (monoid lpdo) (proof (one)))"),
                  ParseError);
  CHECK_THROWS_AS(parse_document<G>(
                      "(document (mode nonsense) (monoid nat) (proof (one)))"),
                  ParseError);
}
