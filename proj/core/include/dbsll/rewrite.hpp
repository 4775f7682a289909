#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dbsll/proofs.hpp"

namespace dbsll {

struct StepBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EngineInvariantViolated : std::logic_error {
  using std::logic_error::logic_error;
};

// Termination measure for the dereliction-pushing phase: the number of
// indexed (co)derelictions still present and the sum of their depths
// (tree height minus distance from the root). Every step decreases the
// pair lexicographically.
struct Measure {
  std::size_t count = 0;
  std::size_t depth_sum = 0;
  friend bool operator==(const Measure&, const Measure&) = default;
  bool lex_less(const Measure& o) const {
    return count < o.count || (count == o.count && depth_sum < o.depth_sum);
  }
};

struct TraceEntry {
  std::size_t step = 0;
  std::string rewrite;
  std::vector<std::size_t> path;
  Measure before, after;
};
using Trace = std::vector<TraceEntry>;

struct Budget {
  std::size_t remaining = 1'000'000;
  void tick() {
    if (remaining == 0) throw StepBudgetExceeded("rewrite step budget exhausted");
    --remaining;
  }
};

enum class Pick { LeftmostInnermost, RightmostInnermost };

namespace detail {

// --- permutation helpers (xch semantics: conclusion[perm[t]] = premise[t]) ---

inline std::vector<std::size_t> perm_insert_last_at(std::size_t n, std::size_t pos) {
  // premise = [rest, x]; conclusion = rest with x re-inserted at `pos`
  std::vector<std::size_t> q(n);
  for (std::size_t t = 0; t + 1 < n; ++t) q[t] = t < pos ? t : t + 1;
  if (n) q[n - 1] = pos;
  return q;
}

inline std::vector<std::size_t> perm_block_swap(std::size_t a, std::size_t b) {
  // premise = [X(a), Y(b)]; conclusion = [Y, X]
  std::vector<std::size_t> q(a + b);
  for (std::size_t t = 0; t < a; ++t) q[t] = b + t;
  for (std::size_t t = a; t < a + b; ++t) q[t] = t - a;
  return q;
}

inline std::vector<std::size_t> perm_rotate3(std::size_t a, std::size_t b, std::size_t c) {
  // premise = [A(a), B(b), C(c)]; conclusion = [A, C, B]
  std::vector<std::size_t> q(a + b + c);
  for (std::size_t t = 0; t < a; ++t) q[t] = t;
  for (std::size_t t = a; t < a + b; ++t) q[t] = a + c + (t - a);
  for (std::size_t t = a + b; t < a + b + c; ++t) q[t] = a + (t - a - b);
  return q;
}

template <GradeMonoid G>
TreePtr<G> make_exch(TreePtr<G> t, std::vector<std::size_t> perm, Mode mode) {
  bool identity = true;
  for (std::size_t k = 0; k < perm.size(); ++k)
    if (perm[k] != k) { identity = false; break; }
  if (identity) return t;
  Rule<G> r;
  r.tag = RuleTag::Exch;
  r.perm = std::move(perm);
  return apply_rule<G>(std::move(r), {std::move(t)}, mode);
}

// --- provenance of conclusion occurrences ---

struct Origin {
  int premise = -1;      // -1: produced by the rule itself
  std::size_t index = 0; // premise position, or ordinal among produced ones
  friend bool operator==(const Origin&, const Origin&) = default;
};

template <GradeMonoid G>
std::vector<Origin> origins(const Rule<G>& r, const std::vector<std::size_t>& sz) {
  std::vector<Origin> out;
  auto ctx1 = [&](int k, std::size_t skip) {
    for (std::size_t t = 0; t < sz[k]; ++t)
      if (t != skip) out.push_back({k, t});
  };
  auto all1 = [&](int k) {
    for (std::size_t t = 0; t < sz[k]; ++t) out.push_back({k, t});
  };
  auto produced = [&](std::size_t ord) { out.push_back({-1, ord}); };
  switch (r.tag) {
    case RuleTag::Ax: produced(0); produced(1); break;
    case RuleTag::One:
    case RuleTag::CoW:
    case RuleTag::CoWI: produced(0); break;
    case RuleTag::Top:
      for (std::size_t t = 0; t <= r.context.size(); ++t) produced(t);
      break;
    case RuleTag::Cut: ctx1(0, r.i); ctx1(1, r.j); break;
    case RuleTag::Tensor:
    case RuleTag::CoC: ctx1(0, r.i); ctx1(1, r.j); produced(0); break;
    case RuleTag::Par:
    case RuleTag::C:
      for (std::size_t t = 0; t < sz[0]; ++t)
        if (t != r.i && t != r.j) out.push_back({0, t});
      produced(0);
      break;
    case RuleTag::Bot:
    case RuleTag::W:
    case RuleTag::WI: all1(0); produced(0); break;
    case RuleTag::With:   // context positions also shadow premise 1
    case RuleTag::Plus1:
    case RuleTag::Plus2: ctx1(0, r.i); produced(0); break;
    case RuleTag::D:
    case RuleTag::DI:
    case RuleTag::CoD:
    case RuleTag::CoDI:
      for (std::size_t t = 0; t < sz[0]; ++t)
        if (t == r.i) produced(0); else out.push_back({0, t});
      break;
    case RuleTag::Prom:
      for (std::size_t t = 0; t < sz[0]; ++t) produced(t);
      break;
    case RuleTag::Exch:
      out.resize(sz[0]);
      for (std::size_t t = 0; t < sz[0]; ++t) out[r.perm[t]] = {0, t};
      break;
  }
  return out;
}

template <GradeMonoid G>
std::vector<std::size_t> premise_sizes(const ProofTree<G>& node) {
  std::vector<std::size_t> sz;
  sz.reserve(node.premises.size());
  for (const auto& p : node.premises) sz.push_back(p->conclusion.size());
  return sz;
}

// --- tree surgery ---

template <GradeMonoid G>
const TreePtr<G>& node_at(const TreePtr<G>& root, const std::vector<std::size_t>& path) {
  const TreePtr<G>* cur = &root;
  for (std::size_t k : path) cur = &(*cur)->premises[k];
  return *cur;
}

template <GradeMonoid G>
TreePtr<G> replace_at(const TreePtr<G>& root, const std::vector<std::size_t>& path,
                      std::size_t depth, TreePtr<G> repl, Mode mode) {
  if (depth == path.size()) return repl;
  auto prem = root->premises;
  prem[path[depth]] = replace_at<G>(prem[path[depth]], path, depth + 1,
                                    std::move(repl), mode);
  return apply_rule<G>(root->rule, std::move(prem), mode);
}

template <GradeMonoid G>
bool find_tag(const TreePtr<G>& t, RuleTag tag, Pick pick,
              std::vector<std::size_t>& path) {
  const std::size_t n = t->premises.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = pick == Pick::LeftmostInnermost ? k : n - 1 - k;
    path.push_back(idx);
    if (find_tag<G>(t->premises[idx], tag, pick, path)) return true;
    path.pop_back();
  }
  return t->rule.tag == tag;
}

template <GradeMonoid G>
void measure_walk(const TreePtr<G>& t, bool codi, std::size_t depth,
                  std::size_t& height, std::vector<std::size_t>& found) {
  if (depth > height) height = depth;
  RuleTag want = codi ? RuleTag::CoDI : RuleTag::DI;
  if (t->rule.tag == want) found.push_back(depth);
  for (const auto& p : t->premises) measure_walk<G>(p, codi, depth + 1, height, found);
}

template <GradeMonoid G>
Measure dereliction_measure(const TreePtr<G>& t, bool codi) {
  std::size_t height = 0;
  std::vector<std::size_t> found;
  measure_walk<G>(t, codi, 0, height, found);
  Measure m{found.size(), 0};
  for (std::size_t d : found) m.depth_sum += height - d;
  return m;
}

template <GradeMonoid G>
void require_same_conclusion(const Sequent<G>& a, const Sequent<G>& b,
                             const char* where) {
  bool same = a.size() == b.size();
  for (std::size_t k = 0; same && k < a.size(); ++k) same = equal<G>(a[k], b[k]);
  if (!same)
    throw EngineInvariantViolated(std::string(where) +
                                  ": rewrite changed the conclusion from " +
                                  to_string<G>(a) + " to " + to_string<G>(b));
}

// --- phase 1: pushing indexed (co)derelictions upward ---

// One step at a di / codi node. The result has the same conclusion sequence.
template <GradeMonoid G>
std::pair<TreePtr<G>, std::string> dereliction_step(const TreePtr<G>& node, Mode mode) {
  const bool codi = node->rule.tag == RuleTag::CoDI;
  const TreePtr<G>& P = node->premises[0];
  const Rule<G>& r = P->rule;
  const std::size_t i = node->rule.i;
  const G& target = node->rule.grade;
  const G& wit = node->rule.witness;
  const FormulaPtr<G> inner = P->conclusion[i]->left;
  const std::size_t m = P->conclusion.size();

  if (r.tag == RuleTag::Prom)
    throw CheckError({{}, "PromotionVsIndexedDereliction",
                      "no reduction is defined between promotion and an indexed "
                      "(co)dereliction"});

  // merge into the matching indexed (co)weakening
  if (!codi && (r.tag == RuleTag::W || r.tag == RuleTag::WI) && i == m - 1) {
    Rule<G> wi;
    wi.tag = RuleTag::WI;
    wi.formula = inner;
    wi.grade = target;
    return {apply_rule<G>(std::move(wi), {P->premises[0]}, mode), "di-weakening"};
  }
  if (codi && (r.tag == RuleTag::CoW || r.tag == RuleTag::CoWI)) {
    Rule<G> cw;
    cw.tag = RuleTag::CoWI;
    cw.formula = inner;
    cw.grade = target;
    return {apply_rule<G>(std::move(cw), {}, mode), "codi-coweakening"};
  }

  // commute through an explicit exchange
  if (r.tag == RuleTag::Exch) {
    std::size_t i2 = 0;
    while (r.perm[i2] != i) ++i2;
    Rule<G> d = node->rule;
    d.i = i2;
    auto moved = apply_rule<G>(std::move(d), {P->premises[0]}, mode);
    return {apply_rule<G>(r, {std::move(moved)}, mode),
            codi ? "codi-commute" : "di-commute"};
  }

  // cases where the step introduces a fresh indexed (co)weakening and a
  // (co)contraction absorbing the dereliction in place: axiom, principal
  // (co)contraction, a shared with-context, and a top context
  const bool absorb =
      r.tag == RuleTag::Ax || r.tag == RuleTag::Top || r.tag == RuleTag::With ||
      (!codi && r.tag == RuleTag::C && i == m - 1) ||
      (codi && r.tag == RuleTag::CoC && i == m - 1);
  if (absorb) {
    std::string name = codi ? "codi-" : "di-";
    name += r.tag == RuleTag::Ax ? "axiom"
            : r.tag == RuleTag::Top ? "top"
            : r.tag == RuleTag::With ? "with"
                                     : "contraction";
    TreePtr<G> merged;
    if (!codi) {
      Rule<G> wi;
      wi.tag = RuleTag::WI;
      wi.formula = inner;
      wi.grade = wit;
      auto t1 = apply_rule<G>(std::move(wi), {P}, mode); // |- P, ?_w A
      Rule<G> c;
      c.tag = RuleTag::C;
      c.i = i;
      c.j = m;
      merged = apply_rule<G>(std::move(c), {std::move(t1)}, mode); // |- P\i, ?_y A
    } else {
      Rule<G> cw;
      cw.tag = RuleTag::CoWI;
      cw.formula = inner;
      cw.grade = wit;
      auto t1 = apply_rule<G>(std::move(cw), {}, mode); // |- !_w A
      Rule<G> cc;
      cc.tag = RuleTag::CoC;
      cc.i = i;
      cc.j = 0;
      merged = apply_rule<G>(std::move(cc), {P, std::move(t1)}, mode);
    }
    return {make_exch<G>(std::move(merged), perm_insert_last_at(m, i), mode),
            std::move(name)};
  }

  // non-principal: commute into the premise owning the occurrence
  auto og = origins<G>(r, premise_sizes<G>(*P));
  const Origin o = og[i];
  if (o.premise < 0)
    throw EngineInvariantViolated("unexpected principal occurrence for a dereliction");
  Rule<G> d = node->rule;
  d.i = o.index;
  auto prem = P->premises;
  prem[o.premise] = apply_rule<G>(std::move(d), {prem[o.premise]}, mode);
  return {apply_rule<G>(r, std::move(prem), mode),
          codi ? "codi-commute" : "di-commute"};
}

} // namespace detail

// Removes every indexed (co)dereliction: derelictions first, then
// coderelictions, each by repeated upward commutation until absorbed.
template <GradeMonoid G>
TreePtr<G> push_derelictions(TreePtr<G> t, Mode mode, Budget& budget, Trace& trace,
                             Pick pick = Pick::LeftmostInnermost) {
  for (bool codi : {false, true}) {
    RuleTag tag = codi ? RuleTag::CoDI : RuleTag::DI;
    for (;;) {
      std::vector<std::size_t> path;
      if (!detail::find_tag<G>(t, tag, pick, path)) break;
      budget.tick();
      Measure before = detail::dereliction_measure<G>(t, codi);
      const TreePtr<G>& node = detail::node_at<G>(t, path);
      auto [repl, name] = detail::dereliction_step<G>(node, mode);
      detail::require_same_conclusion<G>(node->conclusion, repl->conclusion,
                                         name.c_str());
      t = detail::replace_at<G>(t, path, 0, std::move(repl), mode);
      Measure after = detail::dereliction_measure<G>(t, codi);
      if (!after.lex_less(before))
        throw EngineInvariantViolated("dereliction measure did not decrease at " + name);
      trace.push_back({trace.size(), std::move(name), std::move(path), before, after});
    }
  }
  return t;
}

// Hook invoked for a cut whose principal reduction involves a promotion;
// provided by the promotion module.
template <GradeMonoid G>
using PromCutHook = std::function<std::pair<TreePtr<G>, std::string>(
    const TreePtr<G>& L, std::size_t i, const TreePtr<G>& R, std::size_t j, Mode)>;

namespace detail {

template <GradeMonoid G>
FormulaPtr<G> mk_why(const FormulaPtr<G>& a, const G& g, Mode mode) {
  return mode == Mode::DiLL ? Formula<G>::make_exp(Conn::WhyNot, a)
                            : Formula<G>::make_graded(Conn::WhyNotG, g, a);
}

template <GradeMonoid G>
FormulaPtr<G> mk_bang(const FormulaPtr<G>& a, const G& g, Mode mode) {
  return mode == Mode::DiLL ? Formula<G>::make_exp(Conn::OfCourse, a)
                            : Formula<G>::make_graded(Conn::OfCourseG, g, a);
}

template <GradeMonoid G>
G grade_of(const FormulaPtr<G>& f) {
  return (f->conn == Conn::WhyNotG || f->conn == Conn::OfCourseG) ? f->grade
                                                                  : G::zero();
}

template <GradeMonoid G>
TreePtr<G> mk_cut(TreePtr<G> a, std::size_t i, TreePtr<G> b, std::size_t j, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::Cut;
  r.i = i;
  r.j = j;
  return apply_rule<G>(std::move(r), {std::move(a), std::move(b)}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_weak(TreePtr<G> premise, FormulaPtr<G> a, const G& g, Mode mode) {
  Rule<G> r;
  r.tag = mode == Mode::DiLL ? RuleTag::W : RuleTag::WI;
  r.formula = std::move(a);
  r.grade = g;
  return apply_rule<G>(std::move(r), {std::move(premise)}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_coweak(FormulaPtr<G> a, const G& g, Mode mode) {
  Rule<G> r;
  r.tag = mode == Mode::DiLL ? RuleTag::CoW : RuleTag::CoWI;
  r.formula = std::move(a);
  r.grade = g;
  return apply_rule<G>(std::move(r), {}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_contr(TreePtr<G> premise, std::size_t i, std::size_t j, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::C;
  r.i = i;
  r.j = j;
  return apply_rule<G>(std::move(r), {std::move(premise)}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_cocontr(TreePtr<G> a, std::size_t i, TreePtr<G> b, std::size_t j, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::CoC;
  r.i = i;
  r.j = j;
  return apply_rule<G>(std::move(r), {std::move(a), std::move(b)}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_ax(FormulaPtr<G> f, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::Ax;
  r.formula = std::move(f);
  return apply_rule<G>(std::move(r), {}, mode);
}

// One reduction step at a topmost cut (both premises are cut-free). The
// result has exactly the conclusion sequence of the original cut.
template <GradeMonoid G>
std::pair<TreePtr<G>, std::string> cut_step(const TreePtr<G>& L, std::size_t i,
                                            const TreePtr<G>& R, std::size_t j,
                                            Mode mode, const PromCutHook<G>& hook) {
  const Rule<G>& lr = L->rule;
  const Rule<G>& rr = R->rule;
  const std::size_t m = L->conclusion.size();
  const std::size_t n = R->conclusion.size();

  // rebuilds a step done on the swapped cut in the original occurrence order
  auto mirrored = [&](const char* note) -> std::pair<TreePtr<G>, std::string> {
    auto [res, name] = cut_step<G>(R, j, L, i, mode, hook);
    (void)note;
    res = make_exch<G>(std::move(res), perm_block_swap(n - 1, m - 1), mode);
    return {std::move(res), std::move(name)};
  };

  // fuse an exchange below the cut into the cut
  if (lr.tag == RuleTag::Exch) {
    std::size_t i2 = 0;
    while (lr.perm[i2] != i) ++i2;
    auto fused = mk_cut<G>(L->premises[0], i2, R, j, mode);
    std::vector<std::size_t> q(m - 1 + n - 1);
    std::size_t p2 = 0;
    for (std::size_t t = 0; t < m; ++t) {
      if (t == i2) continue;
      std::size_t old = lr.perm[t];
      q[p2++] = old - (old > i ? 1 : 0);
    }
    for (std::size_t u = 0; u + 1 < n; ++u) q[m - 1 + u] = m - 1 + u;
    return {make_exch<G>(std::move(fused), std::move(q), mode), "cut-exchange"};
  }
  if (rr.tag == RuleTag::Exch) return mirrored("xch-right");

  // axiom cut: the other premise already is the reduct
  if (lr.tag == RuleTag::Ax) {
    std::vector<std::size_t> q(n);
    q[j] = 0;
    for (std::size_t u = 0; u < n; ++u)
      if (u != j) q[u] = u < j ? u + 1 : u;
    return {make_exch<G>(R, std::move(q), mode), "cut-axiom"};
  }
  if (rr.tag == RuleTag::Ax) return mirrored("ax-right");

  // a cut against the context of a top node disappears into it
  if (lr.tag == RuleTag::Top && i != m - 1) {
    Rule<G> top;
    top.tag = RuleTag::Top;
    for (std::size_t t = 0; t < lr.context.size(); ++t)
      if (t != i) top.context.push_back(lr.context[t]);
    for (std::size_t u = 0; u < n; ++u)
      if (u != j) top.context.push_back(R->conclusion[u]);
    auto res = apply_rule<G>(std::move(top), {}, mode);
    return {make_exch<G>(std::move(res), perm_insert_last_at(m + n - 2, m - 2), mode),
            "cut-top"};
  }
  if (rr.tag == RuleTag::Top && j != n - 1) return mirrored("top-right");

  auto ogl = origins<G>(lr, premise_sizes<G>(*L));
  auto ogr = origins<G>(rr, premise_sizes<G>(*R));
  const bool left_principal = ogl[i].premise < 0;
  const bool right_principal = ogr[j].premise < 0;

  // commute the cut above a rule that does not introduce the cut formula
  if (!left_principal) {
    if (lr.tag == RuleTag::With) {
      // the occurrence is shared: duplicate the right premise into both sides
      const TreePtr<G>&P1 = L->premises[0], &P2 = L->premises[1];
      std::size_t t1 = i < lr.i ? i : i + 1;
      std::size_t t2 = i < lr.j ? i : i + 1;
      auto c1 = mk_cut<G>(P1, t1, R, j, mode);
      auto c2 = mk_cut<G>(P2, t2, R, j, mode);
      Rule<G> wr;
      wr.tag = RuleTag::With;
      wr.i = lr.i - (lr.i > t1 ? 1 : 0);
      wr.j = lr.j - (lr.j > t2 ? 1 : 0);
      auto res = apply_rule<G>(std::move(wr), {std::move(c1), std::move(c2)}, mode);
      return {make_exch<G>(std::move(res), perm_insert_last_at(m + n - 2, m - 2), mode),
              "cut-commute-with"};
    }
    const Origin o = ogl[i];
    const std::size_t k = static_cast<std::size_t>(o.premise);
    const std::size_t i2 = o.index;
    const std::size_t psz = L->premises[k]->conclusion.size();
    auto prem = L->premises;
    prem[k] = mk_cut<G>(prem[k], i2, R, j, mode);
    Rule<G> nr = lr;
    auto remap = [&](std::size_t idx, int which_prem) -> std::size_t {
      return (static_cast<std::size_t>(which_prem) == k && idx > i2) ? idx - 1 : idx;
    };
    switch (lr.tag) {
      case RuleTag::Tensor:
      case RuleTag::CoC:
        nr.i = remap(lr.i, 0);
        nr.j = remap(lr.j, 1);
        break;
      case RuleTag::Par:
      case RuleTag::C:
        nr.i = remap(lr.i, 0);
        nr.j = remap(lr.j, 0);
        break;
      case RuleTag::Plus1:
      case RuleTag::Plus2:
      case RuleTag::D:
      case RuleTag::CoD:
      case RuleTag::DI:
      case RuleTag::CoDI:
        nr.i = remap(lr.i, 0);
        break;
      default:
        break; // bot / w / wi carry no premise indices
    }
    auto rebuilt = apply_rule<G>(nr, std::move(prem), mode);
    // map the old conclusion order through the commuted layout
    std::vector<std::size_t> nsz = premise_sizes<G>(*rebuilt);
    auto ogn = origins<G>(nr, nsz);
    auto locate = [&](const Origin& want) -> std::size_t {
      for (std::size_t p = 0; p < ogn.size(); ++p)
        if (ogn[p] == want) return p;
      throw EngineInvariantViolated("lost an occurrence while commuting a cut");
    };
    std::vector<std::size_t> q(m - 1 + n - 1);
    for (std::size_t p = 0; p + 1 < m; ++p) {
      std::size_t a = p < i ? p : p + 1;
      Origin o2 = ogl[a];
      Origin want = o2;
      if (o2.premise == static_cast<int>(k))
        want.index = o2.index - (o2.index > i2 ? 1 : 0);
      q[locate(want)] = p;
    }
    for (std::size_t u = 0; u + 1 < n; ++u)
      q[locate(Origin{static_cast<int>(k), (psz - 1) + u})] = (m - 1) + u;
    // invert: we filled q[new] = old, which is exactly the xch convention
    return {make_exch<G>(std::move(rebuilt), std::move(q), mode), "cut-commute"};
  }
  if (!right_principal) return mirrored("commute-right");

  // principal against principal
  if (lr.tag == RuleTag::Prom || rr.tag == RuleTag::Prom) {
    if (!hook)
      throw CheckError({{}, "PromotionDisabled",
                        "cut against a promotion requires promotion support"});
    return hook(L, i, R, j, mode);
  }

  auto is_w = [](RuleTag t) { return t == RuleTag::W || t == RuleTag::WI; };
  auto is_cow = [](RuleTag t) { return t == RuleTag::CoW || t == RuleTag::CoWI; };

  switch (lr.tag) {
    case RuleTag::Tensor: {
      if (rr.tag != RuleTag::Par) break;
      const TreePtr<G>&P1 = L->premises[0], &P2 = L->premises[1], &P3 = R->premises[0];
      std::size_t a = lr.i, b = lr.j, c = rr.i, d = rr.j;
      std::size_t m1 = P1->conclusion.size();
      auto c1 = mk_cut<G>(P1, a, P3, c, mode); // |- P1\a, P3\c
      std::size_t dpos = (m1 - 1) + (d - (d > c ? 1 : 0));
      std::size_t b2 = b; // cut formula B in P2
      auto c2 = mk_cut<G>(std::move(c1), dpos, P2, b2, mode);
      std::size_t g1 = m1 - 1, x = P3->conclusion.size() - 2,
                  g2 = P2->conclusion.size() - 1;
      return {make_exch<G>(std::move(c2), perm_rotate3(g1, x, g2), mode),
              "cut-tensor-par"};
    }
    case RuleTag::Par:
      if (rr.tag == RuleTag::Tensor) return mirrored("par-tensor");
      break;
    case RuleTag::One:
      if (rr.tag == RuleTag::Bot) return {R->premises[0], "cut-one-bot"};
      break;
    case RuleTag::Bot:
      if (rr.tag == RuleTag::One) return mirrored("bot-one");
      break;
    case RuleTag::With: {
      if (rr.tag != RuleTag::Plus1 && rr.tag != RuleTag::Plus2) break;
      const TreePtr<G>& P3 = R->premises[0];
      bool first = rr.tag == RuleTag::Plus1;
      const TreePtr<G>& Pk = first ? L->premises[0] : L->premises[1];
      std::size_t a = first ? lr.i : lr.j;
      return {mk_cut<G>(Pk, a, P3, rr.i, mode),
              first ? "cut-with-plus1" : "cut-with-plus2"};
    }
    case RuleTag::Plus1:
    case RuleTag::Plus2:
      if (rr.tag == RuleTag::With) return mirrored("plus-with");
      break;
    case RuleTag::D: {
      if (rr.tag != RuleTag::CoD) break;
      return {mk_cut<G>(L->premises[0], lr.i, R->premises[0], rr.i, mode),
              "cut-dereliction"};
    }
    case RuleTag::CoD:
      if (rr.tag == RuleTag::D) return mirrored("cod-d");
      break;
    case RuleTag::W:
    case RuleTag::WI:
      if (is_cow(rr.tag)) return {L->premises[0], "cut-weakening"};
      if (rr.tag == RuleTag::CoC) return mirrored("w-coc");
      break;
    case RuleTag::CoW:
    case RuleTag::CoWI:
      if (is_w(rr.tag) || rr.tag == RuleTag::C) return mirrored("cow-left");
      break;
    case RuleTag::C: {
      if (is_cow(rr.tag)) {
        // two cuts against fresh indexed coweakenings
        const TreePtr<G>& P1 = L->premises[0];
        std::size_t p1 = lr.i, p2 = lr.j;
        auto dualA = negate<G>(P1->conclusion[p2]->left);
        G x2 = grade_of<G>(P1->conclusion[p2]);
        G x1 = grade_of<G>(P1->conclusion[p1]);
        auto c1 = mk_cut<G>(P1, p2, mk_coweak<G>(dualA, x2, mode), 0, mode);
        std::size_t p1b = p1 - (p1 > p2 ? 1 : 0);
        auto c2 = mk_cut<G>(std::move(c1), p1b, mk_coweak<G>(dualA, x1, mode), 0, mode);
        return {std::move(c2), "cut-contraction-coweakening"};
      }
      if (rr.tag == RuleTag::CoC) {
        // the contraction / cocontraction square, resolved by splitting
        const TreePtr<G>& P1 = L->premises[0];
        const TreePtr<G>&P2 = R->premises[0], &P3 = R->premises[1];
        std::size_t q1 = lr.i, q2 = lr.j, p2 = rr.i, p3 = rr.j;
        G x1 = grade_of<G>(P1->conclusion[q1]);
        G x2 = grade_of<G>(P1->conclusion[q2]);
        G x3 = grade_of<G>(P2->conclusion[p2]);
        G x4 = grade_of<G>(P3->conclusion[p3]);
        auto cert = G::additive_split(x1, x2, x3, x4);
        auto dualA = negate<G>(P1->conclusion[q1]->left); // the ! side
        auto cc_a = mk_cocontr<G>(mk_ax<G>(mk_bang<G>(dualA, cert.x23, mode), mode), 1,
                                  mk_ax<G>(mk_bang<G>(dualA, cert.x24, mode), mode), 1,
                                  mode); // |- ?_{x23} A', ?_{x24} A', !_{x2} A
        auto cut_a = mk_cut<G>(std::move(cc_a), 2, P1, q2, mode);
        std::size_t q1b = 2 + (q1 - (q1 > q2 ? 1 : 0));
        auto cc_b = mk_cocontr<G>(mk_ax<G>(mk_bang<G>(dualA, cert.x13, mode), mode), 1,
                                  mk_ax<G>(mk_bang<G>(dualA, cert.x14, mode), mode), 1,
                                  mode); // |- ?_{x13} A', ?_{x14} A', !_{x1} A
        auto cut_b = mk_cut<G>(std::move(cut_a), q1b, std::move(cc_b), 2, mode);
        // |- ?_{x23} A', ?_{x24} A', G, ?_{x13} A', ?_{x14} A'
        std::size_t g = m - 1;
        auto c3 = mk_contr<G>(std::move(cut_b), 2 + g, 0, mode);
        // |- ?_{x24} A', G, ?_{x14} A', ?_{x3} A'
        auto cut2 = mk_cut<G>(std::move(c3), 2 + g, P2, p2, mode);
        // |- ?_{x24} A', G, ?_{x14} A', D
        auto c4 = mk_contr<G>(std::move(cut2), 1 + g, 0, mode);
        // |- G, D, ?_{x4} A'
        std::size_t last = c4->conclusion.size() - 1;
        auto cut3 = mk_cut<G>(std::move(c4), last, P3, p3, mode);
        return {std::move(cut3), "cut-contraction-cocontraction"};
      }
      break;
    }
    case RuleTag::CoC: {
      if (is_w(rr.tag)) {
        const TreePtr<G>&P1 = L->premises[0], &P2 = L->premises[1];
        const TreePtr<G>& P3 = R->premises[0];
        std::size_t p1 = lr.i, p2 = lr.j;
        auto dualA = negate<G>(P1->conclusion[p1]->left); // the ? side
        G x = grade_of<G>(P1->conclusion[p1]);
        G y = grade_of<G>(P2->conclusion[p2]);
        std::size_t xi = P3->conclusion.size();
        auto wx = mk_weak<G>(P3, dualA, x, mode);             // |- Xi, ?_x A'
        auto c1 = mk_cut<G>(P1, p1, std::move(wx), xi, mode); // |- G, Xi
        auto wy = mk_weak<G>(std::move(c1), dualA, y, mode);  // |- G, Xi, ?_y A'
        std::size_t last = wy->conclusion.size() - 1;
        auto c2 = mk_cut<G>(std::move(wy), last, P2, p2, mode); // |- G, Xi, D
        std::size_t g = P1->conclusion.size() - 1;
        std::size_t d = P2->conclusion.size() - 1;
        return {make_exch<G>(std::move(c2), perm_rotate3(g, xi, d), mode),
                "cut-cocontraction-weakening"};
      }
      if (rr.tag == RuleTag::C) return mirrored("coc-c");
      break;
    }
    default:
      break;
  }

  throw EngineInvariantViolated(
      std::string("no principal reduction for ") + tag_name(lr.tag) + " against " +
      tag_name(rr.tag));
}

} // namespace detail

// Cut elimination on a dereliction-free proof. Works topmost-cut-first;
// termination is enforced by the step budget (the graded steps project onto
// terminating un-graded ones).
template <GradeMonoid G>
TreePtr<G> eliminate_cuts(TreePtr<G> t, Mode mode, Budget& budget, Trace& trace,
                          const PromCutHook<G>& hook = {}) {
  for (;;) {
    std::vector<std::size_t> path;
    if (!detail::find_tag<G>(t, RuleTag::Cut, Pick::LeftmostInnermost, path)) break;
    budget.tick();
    const TreePtr<G>& node = detail::node_at<G>(t, path);
    auto [repl, name] = detail::cut_step<G>(node->premises[0], node->rule.i,
                                            node->premises[1], node->rule.j, mode, hook);
    detail::require_same_conclusion<G>(node->conclusion, repl->conclusion, name.c_str());
    t = detail::replace_at<G>(t, path, 0, std::move(repl), mode);
    trace.push_back({trace.size(), std::move(name), std::move(path), {}, {}});
  }
  return t;
}

struct NormalizeOptions {
  std::size_t budget = 1'000'000;
  Pick pick = Pick::LeftmostInnermost;
};

template <GradeMonoid G>
struct NormalizeResult {
  TreePtr<G> tree;
  Trace trace;
};

// Two-phase normalization: push every indexed (co)dereliction out of the
// proof, then eliminate cuts.
template <GradeMonoid G>
NormalizeResult<G> normalize(TreePtr<G> t, Mode mode,
                             NormalizeOptions opts = {},
                             const PromCutHook<G>& hook = {}) {
  Budget budget{opts.budget};
  Trace trace;
  t = push_derelictions<G>(std::move(t), mode, budget, trace, opts.pick);
  t = eliminate_cuts<G>(std::move(t), mode, budget, trace, hook);
  return {std::move(t), std::move(trace)};
}

// --- the grade-forgetting translation ---

template <GradeMonoid G>
FormulaPtr<G> forget_formula(const FormulaPtr<G>& f) {
  using F = Formula<G>;
  if (!f) return nullptr;
  switch (f->conn) {
    case Conn::WhyNotG:
      return F::make_exp(Conn::WhyNot, forget_formula<G>(f->left));
    case Conn::OfCourseG:
      return F::make_exp(Conn::OfCourse, forget_formula<G>(f->left));
    case Conn::Atom:
    case Conn::One:
    case Conn::Bot:
    case Conn::Top:
    case Conn::Zero:
      return f;
    case Conn::WhyNot:
    case Conn::OfCourse:
      return F::make_exp(f->conn, forget_formula<G>(f->left));
    default:
      return F::make_binary(f->conn, forget_formula<G>(f->left),
                            forget_formula<G>(f->right));
  }
}

// Erases grades, sending indexed (co)weakenings to the plain ones. The
// result checks in dill mode. Indexed (co)derelictions have no un-graded
// counterpart; push them out first.
template <GradeMonoid G>
TreePtr<G> forget(const TreePtr<G>& t) {
  std::vector<TreePtr<G>> prem;
  prem.reserve(t->premises.size());
  for (const auto& p : t->premises) prem.push_back(forget<G>(p));
  Rule<G> r = t->rule;
  switch (r.tag) {
    case RuleTag::DI:
    case RuleTag::CoDI:
      throw CheckError({{}, "ContainsIndexedDereliction",
                        "indexed (co)derelictions do not survive grade erasure"});
    case RuleTag::Prom:
      throw CheckError({{}, "ModeForbidsRule", "promotion has no un-graded counterpart here"});
    case RuleTag::WI:
      r.tag = RuleTag::W;
      break;
    case RuleTag::CoWI:
      r.tag = RuleTag::CoW;
      break;
    default:
      break;
  }
  r.grade = G::zero();
  r.witness = G::zero();
  if (r.formula) r.formula = forget_formula<G>(r.formula);
  for (auto& c : r.context) c = forget_formula<G>(c);
  return apply_rule<G>(std::move(r), std::move(prem), Mode::DiLL);
}

} // namespace dbsll
