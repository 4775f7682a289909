#include "doctest.h"

#include <string>

#include "dbsll/document.hpp"
#include "dbsll/promotion.hpp"
#include "dbsll/rewrite.hpp"

using namespace dbsll;
using G = NatGrade;

namespace {

TreePtr<G> parse(const std::string& proof) {
  std::string doc =
      "(document (mode dbsll-prom) (monoid nat) (proof " + proof + "))";
  return parse_document<G>(doc).proof;
}

std::string n(std::uint64_t v) { return "{" + std::to_string(v) + "}"; }

std::size_t count_cuts(const TreePtr<G>& t) {
  std::size_t c = t->rule.tag == RuleTag::Cut ? 1 : 0;
  for (const auto& p : t->premises) c += count_cuts(p);
  return c;
}

// a promotion of |- !{y}c, ?{x}a at grade r, boxing the first coordinate
std::string boxed(std::uint64_t x, std::uint64_t y, std::uint64_t r) {
  return "(prom 0 " + n(r) + " (wi " + n(x) + " a (cowi " + n(y) + " c)))";
}

void check_normalizes(const std::string& proof) {
  CAPTURE(proof);
  auto t = parse(proof);
  REQUIRE(check<G>(t, Mode::DBSLLProm).ok());
  auto before = to_string<G>(t->conclusion);
  auto res = normalize<G>(t, Mode::DBSLLProm, {}, promotion_hook<G>());
  CHECK(count_cuts(res.tree) == 0);
  CHECK(check<G>(res.tree, Mode::DBSLLProm).ok());
  CHECK(to_string<G>(res.tree->conclusion) == before);
}

// direct single-step reduction of cut(L at i, R at j)
void check_step(const std::string& lp, std::size_t i, const std::string& rp,
                std::size_t j, const std::string& want_name) {
  CAPTURE(lp);
  CAPTURE(rp);
  auto L = parse(lp);
  auto R = parse(rp);
  auto [res, name] = promotion_cut_step<G>(L, i, R, j, Mode::DBSLLProm);
  CHECK(name == want_name);
  CHECK(check<G>(res, Mode::DBSLLProm).ok());
  Sequent<G> want{[&] {
    auto out = detail::without<G>(L->conclusion, i);
    auto rhs = detail::without<G>(R->conclusion, j);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
  }()};
  CHECK(to_string<G>(res->conclusion) == to_string<G>(want));
}

} // namespace

TEST_CASE("a boxed cut against a graded weakening") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 4, y = (k / 4) % 5, r = k % 5 + 1;
    std::string rp = "(wi " + n(r) + " (?" + n(y) + " c^) (one))";
    check_normalizes("(cut 0 1 " + boxed(x, y, r) + " " + rp + ")");
    check_step(boxed(x, y, r), 0, rp, 1, "cut-promotion-weakening");
  }
}

TEST_CASE("a boxed cut against a graded contraction") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 3, y = k % 4, y1 = k % 5, y2 = (k / 5) % 4 + 1;
    std::string rp = "(c 1 2 (wi " + n(y1) + " (?" + n(y) + " c^) (wi " +
                     n(y2) + " (?" + n(y) + " c^) (one))))";
    check_normalizes("(cut 0 1 " + boxed(x, y, y1 + y2) + " " + rp + ")");
    check_step(boxed(x, y, y1 + y2), 0, rp, 1, "cut-promotion-contraction");
  }
}

TEST_CASE("a boxed cut against a lifted dereliction") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 3, y = k % 4, s = k % 3, r = s + k % 4;
    std::string rp =
        "(di 1 " + n(r) + " (wi " + n(s) + " (?" + n(y) + " c^) (one)))";
    check_step(boxed(x, y, r), 0, rp, 1, "cut-promotion-dereliction");
  }
}

TEST_CASE("a boxed cut inside another box") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 3, y = k % 4, r = k % 4, s = k % 3 + 1;
    // the right box carries ?{r*s}(dual) in its context
    std::string rp = "(prom 0 " + n(s) + " (wi " + n(r) + " (?" + n(y) +
                     " c^) (cowi " + n(2) + " b)))";
    check_normalizes("(cut 0 1 " + boxed(x, y, r * s) + " " + rp + ")");
    check_step(boxed(x, y, r * s), 0, rp, 1, "cut-promotion-promotion");
  }
}

TEST_CASE("a box context at grade zero absorbs a coweakening") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t y = k % 5, r = k % 5 + 1;
    std::string rp = "(cowi {0} a^)";
    check_normalizes("(cut 1 0 " + boxed(0, y, r) + " " + rp + ")");
    check_step(boxed(0, y, r), 1, rp, 0, "cut-promotion-coweakening");
  }
}

TEST_CASE("a box at grade zero absorbs a coweakening on its context") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 5 + 1, y = k % 4;
    std::string rp = "(cowi {0} a^)";
    check_normalizes("(cut 1 0 " + boxed(x, y, 0) + " " + rp + ")");
    check_step(boxed(x, y, 0), 1, rp, 0, "cut-promotion-coweakening");
  }
}

TEST_CASE("a box context at a nonzero grade rejects graded costructure") {
  auto L = parse(boxed(2, 1, 3)); // context coordinate ?{6}a
  auto R = parse("(cowi {6} a^)");
  CHECK_THROWS_WITH_AS(
      (void)promotion_cut_step<G>(L, 1, R, 0, Mode::DBSLLProm),
      doctest::Contains("PromotionVsIndexedDereliction"), CheckError);
  auto R2 = parse("(codi 0 {6} (cowi {2} a^))");
  CHECK_THROWS_AS((void)promotion_cut_step<G>(L, 1, R2, 0, Mode::DBSLLProm),
                  CheckError);
}

TEST_CASE("a box context cut against a cocontraction splits the box") {
  // one step each; the residual cuts against the cocontracted premises may
  // be stuck on purpose when their grades are nonzero
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 3 + 1, y = k % 4, r = k % 3 + 1;
    std::uint64_t z1 = k % (x * r + 1), z2 = x * r - z1;
    std::string rp = "(coc 0 0 (cowi " + n(z1) + " a^) (cowi " + n(z2) + " a^))";
    check_step(boxed(x, y, r), 1, rp, 0, "cut-promotion-cocontraction");
  }
  // at grade zero the whole split collapses and normalization finishes
  for (std::uint64_t r = 1; r <= 4; ++r)
    check_normalizes("(cut 1 0 " + boxed(0, 2, r) +
                     " (coc 0 0 (cowi {0} a^) (cowi {0} a^)))");
}

TEST_CASE("promotion cuts need the promotion engine") {
  auto t = parse("(cut 0 1 " + boxed(1, 1, 2) +
                 " (wi {2} (?{1} c^) (one)))");
  Budget b{1000};
  Trace tr;
  CHECK_THROWS_AS(eliminate_cuts<G>(t, Mode::DBSLLProm, b, tr), CheckError);
}
