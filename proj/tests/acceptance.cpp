// End-to-end acceptance run: one pass/fail line per criterion, nonzero exit
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "dbsll/document.hpp"
#include "dbsll/lpdomodel.hpp"
#include "dbsll/promotion.hpp"
#include "dbsll/relmodel.hpp"
#include "dbsll/rewrite.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace dbsll;
using testsupport::Gen;
using G = NatGrade;
using Clock = std::chrono::steady_clock;

namespace {

std::size_t count_tag(const TreePtr<G>& t, RuleTag tag) {
  std::size_t n = t->rule.tag == tag ? 1 : 0;
  for (const auto& p : t->premises) n += count_tag(p, tag);
  return n;
}

std::vector<TreePtr<G>> corpus(std::size_t n, unsigned seed) {
  Gen g(seed);
  std::vector<TreePtr<G>> out;
  while (out.size() < n) {
    auto t = g.proof();
    if (testsupport::count_nodes(t) <= 40) out.push_back(std::move(t));
  }
  return out;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1,000 random well-typed proofs normalize within budget to checked,
// cut- and lift-free proofs with the same conclusion, in under 30 s
bool criterion_normalization() {
  auto t0 = Clock::now();
  for (const auto& t : corpus(1000, 42)) {
    auto res = normalize<G>(t, Mode::DBSLL);
    if (count_tag(res.tree, RuleTag::Cut) != 0) return false;
    if (count_tag(res.tree, RuleTag::DI) != 0) return false;
    if (count_tag(res.tree, RuleTag::CoDI) != 0) return false;
    if (!check<G>(res.tree, Mode::DBSLL).ok()) return false;
    if (!multiset_equal<G>(res.tree->conclusion, t->conclusion)) return false;
  }
  return seconds_since(t0) < 30.0;
}

// phase one strictly decreases its measure at every step (asserted inside
// the traversal) and leaves no lifted (co)derelictions behind
bool criterion_measure() {
  for (const auto& t : corpus(1000, 42)) {
    Budget budget{1000000};
    Trace trace;
    TreePtr<G> out;
    try {
      out = push_derelictions<G>(t, Mode::DBSLL, budget, trace);
    } catch (const EngineInvariantViolated&) {
      return false; // a step failed to decrease the measure
    }
    if (count_tag(out, RuleTag::DI) != 0) return false;
    if (count_tag(out, RuleTag::CoDI) != 0) return false;
  }
  return true;
}

// additive splitting certificates, exhaustively up to 8
bool criterion_nat_split() {
  for (std::uint64_t a = 0; a <= 8; ++a)
    for (std::uint64_t b = 0; b <= 8; ++b)
      for (std::uint64_t c = 0; c <= 8 && c <= a + b; ++c) {
        std::uint64_t d = a + b - c;
        auto cert = G::additive_split({a}, {b}, {c}, {d});
        if (G::add(cert.x13, cert.x14).value != a) return false;
        if (G::add(cert.x23, cert.x24).value != b) return false;
        if (G::add(cert.x13, cert.x23).value != c) return false;
        if (G::add(cert.x14, cert.x24).value != d) return false;
      }
  return true;
}

// operator splitting certificates on 200 random balanced quadruples,
// verified by exact expanded-polynomial equality
bool criterion_op_split() {
  std::mt19937 rng(2024);
  std::vector<Poly> pool = {poly_var(0),
                            poly_var(1),
                            poly_var(0) + poly_const(1),
                            poly_var(1) + poly_const(1),
                            poly_var(0) + poly_var(1),
                            poly_var(0) * poly_var(1) + poly_const(1)};
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Poly> fs;
    for (std::size_t k = 0, total = pick(6) + 1; k < total; ++k)
      fs.push_back(pool[pick(pool.size())]);
    std::vector<Poly> f1, f2, f3, f4;
    for (const auto& f : fs) (pick(2) ? f1 : f2).push_back(f);
    for (const auto& f : fs) (pick(2) ? f3 : f4).push_back(f);
    Rat u1 = Rat(static_cast<int>(pick(3)) + 1);
    Rat u2 = Rat(static_cast<int>(pick(3)) + 1, 2);
    auto x1 = FactoredOp::from(u1, f1);
    auto x2 = FactoredOp::from(u2, f2);
    auto x3 = FactoredOp::from(u1 * u2, f3);
    auto x4 = FactoredOp::from(1, f4);
    auto c = FactoredOp::additive_split(x1, x2, x3, x4);
    if (FactoredOp::add(c.x13, c.x14).polynomial() != x1.polynomial())
      return false;
    if (FactoredOp::add(c.x23, c.x24).polynomial() != x2.polynomial())
      return false;
    if (FactoredOp::add(c.x13, c.x23).polynomial() != x3.polynomial())
      return false;
    if (FactoredOp::add(c.x14, c.x24).polynomial() != x4.polynomial())
      return false;
  }
  return true;
}

// relational denotations are preserved exactly by normalization on 300
// random proofs plus the hand-written reduction fixtures
bool criterion_rel_invariance() {
  rel::Assignment asg;
  asg.atom_sizes = {{"a", 2}, {"b", 3}, {"c", 2}};
  asg.unindexed_bound = 3;
  for (const auto& fx : testsupport::cut_fixtures()) {
    auto doc = parse_document<G>(fx.doc);
    auto before = rel::interp_proof<G>(doc.proof, asg);
    auto res = normalize<G>(doc.proof, doc.mode);
    if (!(before == rel::interp_proof<G>(res.tree, asg))) return false;
  }
  rel::Assignment small;
  small.atom_sizes = {{"a", 2}, {"b", 2}};
  small.unindexed_bound = 2;
  for (const auto& t : corpus(300, 7)) {
    auto before = rel::interp_proof<G>(t, small);
    auto res = normalize<G>(t, Mode::DBSLL);
    if (!(before == rel::interp_proof<G>(res.tree, small))) return false;
  }
  return true;
}

// relational model laws by exhaustive enumeration, under a minute
bool criterion_rel_laws() {
  auto t0 = Clock::now();
  for (const auto& r : rel::check_model_laws(2, 2, 3))
    if (!r.ok) return false;
  return seconds_since(t0) < 60.0;
}

// distribution semantics: every reduction law agrees exactly on the
// generator grids of points, operators, and low-degree test polynomials
bool criterion_lpdo_laws() {
  for (const auto& r : lpdosem::check_laws())
    if (!r.ok) return false;
  return true;
}

// the convolution law on Dirac terms, validated through pairings against
// polynomials of total degree at most four
bool criterion_convolution() {
  std::mt19937 rng(99);
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::vector<Poly> pool = {poly_var(0), poly_var(1),
                            poly_var(0) + poly_const(1),
                            poly_var(0) + poly_var(1)};
  std::vector<Poly> tests = {
      poly_const(1), poly_var(0), poly_var(0) * poly_var(1),
      poly_pow(poly_var(0), 3) + poly_var(1),
      poly_pow(poly_var(0), 2) * poly_pow(poly_var(1), 2)};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rat> p = {Rat(static_cast<int>(pick(5)) - 2),
                          Rat(static_cast<int>(pick(5)) - 2)};
    std::vector<Rat> q = {Rat(static_cast<int>(pick(5)) - 2),
                          Rat(static_cast<int>(pick(5)) - 2)};
    std::vector<Poly> df, ef;
    for (std::size_t k = 0; k < pick(3); ++k) df.push_back(pool[pick(pool.size())]);
    for (std::size_t k = 0; k < pick(3); ++k) ef.push_back(pool[pick(pool.size())]);
    auto D = FactoredOp::from(Rat(static_cast<int>(pick(3)) + 1), df);
    auto E = FactoredOp::from(Rat(1, static_cast<int>(pick(2)) + 1), ef);
    auto lhs = convolve(dirac(p, D), dirac(q, E));
    auto rhs = dirac({p[0] + q[0], p[1] + q[1]}, FactoredOp::add(D, E));
    if (!(lhs == rhs)) return false;
    for (const auto& u : tests)
      if (conv_apply_separated(dirac(p, D), dirac(q, E), u, 2) !=
          dist_apply(rhs, u))
        return false;
  }
  return true;
}

// the grade-forgetting translation of phase-one outputs checks in the
// ungraded calculus; forgetting a normal form stays cut-free
bool criterion_forget() {
  for (const auto& t : corpus(200, 13)) {
    Budget budget{1000000};
    Trace trace;
    auto phase1 = push_derelictions<G>(t, Mode::DBSLL, budget, trace);
    if (!check<G>(forget<G>(phase1), Mode::DiLL).ok()) return false;
    auto res = normalize<G>(t, Mode::DBSLL);
    auto u = forget<G>(res.tree);
    if (!check<G>(u, Mode::DiLL).ok()) return false;
    if (count_tag(u, RuleTag::Cut) != 0) return false;
  }
  return true;
}

// each promotion reduction, 20 grade instances per case, preserves the
// conclusion and stays checker-valid
bool criterion_promotion() {
  auto parse = [](const std::string& proof) {
    return parse_document<G>("(document (mode dbsll-prom) (monoid nat) (proof " +
                             proof + "))")
        .proof;
  };
  auto n = [](std::uint64_t v) { return "{" + std::to_string(v) + "}"; };
  auto boxed = [&](std::uint64_t x, std::uint64_t y, std::uint64_t r) {
    return "(prom 0 " + n(r) + " (wi " + n(x) + " a (cowi " + n(y) + " c)))";
  };
  auto step_ok = [&](const std::string& lp, std::size_t i,
                     const std::string& rp, std::size_t j) {
    auto L = parse(lp);
    auto R = parse(rp);
    auto [res, name] = promotion_cut_step<G>(L, i, R, j, Mode::DBSLLProm);
    (void)name;
    if (!check<G>(res, Mode::DBSLLProm).ok()) return false;
    auto want = detail::without<G>(L->conclusion, i);
    auto rhs = detail::without<G>(R->conclusion, j);
    want.insert(want.end(), rhs.begin(), rhs.end());
    return to_string<G>(res->conclusion) == to_string<G>(Sequent<G>{want});
  };
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::uint64_t x = k % 4, y = (k / 4) % 5, r = k % 5 + 1;
    if (!step_ok(boxed(x, y, r), 0,
                 "(wi " + n(r) + " (?" + n(y) + " c^) (one))", 1))
      return false;
    std::uint64_t y1 = k % 5, y2 = (k / 5) % 4 + 1;
    if (!step_ok(boxed(x, y, y1 + y2), 0,
                 "(c 1 2 (wi " + n(y1) + " (?" + n(y) + " c^) (wi " + n(y2) +
                     " (?" + n(y) + " c^) (one))))",
                 1))
      return false;
    std::uint64_t s = k % 3;
    if (!step_ok(boxed(x, y, s + k % 4), 0,
                 "(di 1 " + n(s + k % 4) + " (wi " + n(s) + " (?" + n(y) +
                     " c^) (one)))",
                 1))
      return false;
    std::uint64_t bs = k % 3 + 1, br = k % 4;
    if (!step_ok(boxed(x, y, br * bs), 0,
                 "(prom 0 " + n(bs) + " (wi " + n(br) + " (?" + n(y) +
                     " c^) (cowi {2} b)))",
                 1))
      return false;
    // coweakening against a zero context grade, both integral-domain splits
    if (!step_ok(boxed(0, y, k % 5 + 1), 1, "(cowi {0} a^)", 0)) return false;
    if (!step_ok(boxed(k % 5 + 1, y, 0), 1, "(cowi {0} a^)", 0)) return false;
    std::uint64_t cx = k % 3 + 1, cr = k % 3 + 1, z1 = k % (cx * cr + 1);
    if (!step_ok(boxed(cx, y, cr), 1,
                 "(coc 0 0 (cowi " + n(z1) + " a^) (cowi " + n(cx * cr - z1) +
                     " a^))",
                 0))
      return false;
  }
  return true;
}

// CLI contract: each command against golden expectations, plus a
// parse/print round trip over the whole fixture corpus
bool criterion_cli() {
  const char* cli = std::getenv("DBSLL_CLI");
  if (!cli) {
    std::cerr << "DBSLL_CLI is not set\n";
    return false;
  }
  auto dir = std::filesystem::temp_directory_path() /
             ("dbsll-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  int serial = 0;
  auto run = [&](const std::string& args,
                 const std::string& input) -> std::pair<int, std::string> {
    auto base = dir / ("r" + std::to_string(serial++));
    std::ofstream(base.string() + ".in") << input;
    std::string cmd = std::string(cli) + " " + args + " < " + base.string() +
                      ".in > " + base.string() + ".out 2> " + base.string() +
                      ".err";
    int status = std::system(cmd.c_str());
    std::ifstream outf(base.string() + ".out");
    std::ostringstream ss;
    ss << outf.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  };

  std::string good =
      "(document (mode dbsll) (monoid nat) (proof (cut 1 0 (ax a) (ax a))))";
  if (run("check -", good) != std::pair<int, std::string>{0, "ok |- a^ a\n"})
    return false;
  if (run("check -", "(oops").first != 1) return false;
  if (run("check -",
          "(document (mode dbsll) (monoid nat) (proof (cut 1 1 (ax a) (ax a))))")
          .first != 2)
    return false;
  if (run("normalize --budget 1 -", testsupport::cut_fixtures()[1].doc).first !=
      3)
    return false;
  if (run("eval --backend lpdo -", good).first != 4) return false;
  auto ev = run("eval --assignment a=2 -",
                "(document (mode dbsll) (monoid nat) (proof (ax a)))");
  if (ev.first != 0 || ev.second.find("2 tuples") == std::string::npos)
    return false;
  if (run("invariance --assignment a=2,b=2,c=2 -", good).first != 0)
    return false;
  if (run("laws --backend rel --size-a 2 --size-b 2 --bound 2", "").first != 0)
    return false;
  if (run("split 1 2 3 0", "").second != "x13 = 1\nx14 = 0\nx23 = 2\nx24 = 0\n")
    return false;

  // cut-free documents normalize to themselves, byte for byte
  std::string cutfree =
      "(document (mode dbsll) (monoid nat) (proof (tensor 1 1 (ax a) (ax b))))";
  if (run("normalize -", cutfree).second != cutfree + "\n") return false;

  // the full corpus round-trips through normalize / print / parse
  for (const auto& fx : testsupport::cut_fixtures()) {
    auto r = run("normalize -", fx.doc);
    if (r.first != 0) return false;
    auto doc = parse_document<G>(r.second);
    if (!check<G>(doc.proof, doc.mode).ok()) return false;
    if (run("normalize -", r.second).second != r.second) return false;
  }
  return true;
}

struct Criterion {
  std::string label;
  std::function<bool()> body;
};

} // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1. random corpus normalizes to checked cut- and lift-free proofs",
       criterion_normalization},
      {"2. phase one strictly decreases its measure and clears all lifts",
       criterion_measure},
      {"3. additive splitting certificates, exhaustive to 8", criterion_nat_split},
      {"4. operator splitting certificates on 200 random quadruples",
       criterion_op_split},
      {"5. relational denotation invariance on 300 random + 20 fixed proofs",
       criterion_rel_invariance},
      {"6. relational model laws by exhaustive enumeration", criterion_rel_laws},
      {"7. distribution semantics laws on generator grids", criterion_lpdo_laws},
      {"8. Dirac convolution law via 100 random pairings", criterion_convolution},
      {"9. grade forgetting lands in the ungraded calculus", criterion_forget},
      {"10. promotion reductions preserve conclusions, 20 instances each",
       criterion_promotion},
      {"11. CLI contract and golden outputs", criterion_cli},
  };
  bool all = true;
  for (const auto& c : criteria) {
    bool ok = false;
    std::string note;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.label << note << "\n";
    all = all && ok;
  }
  return all ? 0 : 1;
}
