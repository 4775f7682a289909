#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dbsll/rewrite.hpp"

// Cut reductions involving the graded promotion rule. Each reduction builds
// its reduct in whatever coordinate order is convenient and restores the
// original conclusion sequence with a single explicit exchange at the end
// (promotion proofs are outside the scope of the executable models, so only
// the sequence itself matters, not which of two equal coordinates is which).

namespace dbsll {

namespace detail {

template <GradeMonoid G>
TreePtr<G> exch_to(TreePtr<G> t, const Sequent<G>& target, Mode mode) {
  const Sequent<G>& src = t->conclusion;
  if (src.size() != target.size())
    throw EngineInvariantViolated("promotion reduct has the wrong width");
  std::vector<std::size_t> perm(src.size());
  std::vector<bool> used(target.size(), false);
  for (std::size_t k = 0; k < src.size(); ++k) {
    bool found = false;
    for (std::size_t u = 0; u < target.size(); ++u) {
      if (used[u] || !equal<G>(src[k], target[u])) continue;
      perm[k] = u;
      used[u] = true;
      found = true;
      break;
    }
    if (!found)
      throw EngineInvariantViolated("promotion reduct lost the occurrence " +
                                    to_string<G>(src[k]));
  }
  return make_exch<G>(std::move(t), std::move(perm), mode);
}

template <GradeMonoid G>
TreePtr<G> mk_prom(TreePtr<G> t, std::size_t i, G grade, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::Prom;
  r.i = i;
  r.grade = std::move(grade);
  return apply_rule<G>(std::move(r), {std::move(t)}, mode);
}

template <GradeMonoid G>
TreePtr<G> mk_di(TreePtr<G> t, std::size_t i, G grade, G witness, Mode mode) {
  Rule<G> r;
  r.tag = RuleTag::DI;
  r.i = i;
  r.grade = std::move(grade);
  r.witness = std::move(witness);
  return apply_rule<G>(std::move(r), {std::move(t)}, mode);
}

// Contracts the coordinates listed in groups[gi] into one, keeping every
// other tracked position in step. The merged coordinate replaces the group.
template <GradeMonoid G>
TreePtr<G> fold_group(TreePtr<G> t, std::vector<std::vector<std::size_t>>& groups,
                      std::size_t gi, Mode mode) {
  auto& grp = groups[gi];
  while (grp.size() > 1) {
    std::size_t p = grp[0], q = grp[1];
    grp.erase(grp.begin(), grp.begin() + 2);
    t = mk_contr<G>(std::move(t), p, q, mode);
    for (auto& g2 : groups)
      for (auto& r : g2) r = r - (r > p ? 1 : 0) - (r > q ? 1 : 0);
    grp.insert(grp.begin(), t->conclusion.size() - 1);
  }
  return t;
}

} // namespace detail

// One reduction step for a cut with a promotion on at least one side; both
// cut coordinates are principal (the commuting cases never reach here).
template <GradeSemiring G>
std::pair<TreePtr<G>, std::string> promotion_cut_step(const TreePtr<G>& L,
                                                      std::size_t i,
                                                      const TreePtr<G>& R,
                                                      std::size_t j, Mode mode) {
  using namespace detail;
  Sequent<G> target;
  {
    auto out = without<G>(L->conclusion, i);
    auto rhs = without<G>(R->conclusion, j);
    out.insert(out.end(), rhs.begin(), rhs.end());
    target = Sequent<G>{std::move(out)};
  }
  auto finish = [&](TreePtr<G> t, std::string name) {
    return std::pair{exch_to<G>(std::move(t), target, mode), std::move(name)};
  };

  const bool lprom = L->rule.tag == RuleTag::Prom;
  const bool rprom = R->rule.tag == RuleTag::Prom;
  if (!lprom && !rprom)
    throw CheckError({{}, "NotAPromotionCut", "neither premise is a promotion"});
  // orient so that P is a promotion; for a box-against-box cut pick the side
  // whose boxed formula is being cut (the other side's coordinate is context)
  bool pick_left = lprom && (!rprom || i == L->rule.i || j != R->rule.i);
  const TreePtr<G>& P = pick_left ? L : R;
  const std::size_t pc = pick_left ? i : j;
  const TreePtr<G>& O = pick_left ? R : L;
  const std::size_t oc = pick_left ? j : i;
  const TreePtr<G>& Pi = P->premises[0];
  const std::size_t pi = P->rule.i;
  const G r = P->rule.grade;
  const std::size_t m = P->conclusion.size();
  const Rule<G>& orr = O->rule;
  (void)oc;

  if (pc == pi) {
    // the boxed formula !_r B is cut; O introduces ?_r B' principally
    switch (orr.tag) {
      case RuleTag::W:
      case RuleTag::WI: {
        // discard the box: weaken O's premise by the promoted context
        TreePtr<G> t = O->premises[0];
        for (std::size_t k = 0; k < m; ++k) {
          if (k == pi) continue;
          t = mk_weak<G>(std::move(t), P->conclusion[k]->left,
                         P->conclusion[k]->grade, mode);
        }
        return finish(std::move(t), "cut-promotion-weakening");
      }
      case RuleTag::C: {
        // duplicate the box at the two contracted grades, then contract the
        // doubled context back together
        const TreePtr<G>& Psi = O->premises[0];
        G y1 = grade_of<G>(Psi->conclusion[orr.i]);
        G y2 = grade_of<G>(Psi->conclusion[orr.j]);
        auto c1 = mk_cut<G>(mk_prom<G>(Pi, pi, y1, mode), pi, Psi, orr.i, mode);
        std::size_t g = m - 1;
        std::size_t jpos = g + (orr.j - (orr.j > orr.i ? 1 : 0));
        auto t = mk_cut<G>(mk_prom<G>(Pi, pi, y2, mode), pi, std::move(c1), jpos, mode);
        std::vector<std::vector<std::size_t>> groups(g);
        for (std::size_t k = 0; k < g; ++k) groups[k] = {k, g + k};
        for (std::size_t k = 0; k < g; ++k)
          t = fold_group<G>(std::move(t), groups, k, mode);
        return finish(std::move(t), "cut-promotion-contraction");
      }
      case RuleTag::DI: {
        // shrink the box to the source grade, then lift the context grades
        const TreePtr<G>& Psi = O->premises[0];
        G yp = grade_of<G>(Psi->conclusion[orr.i]);
        auto t = mk_cut<G>(mk_prom<G>(Pi, pi, yp, mode), pi, Psi, orr.i, mode);
        std::size_t kk = 0;
        for (std::size_t k = 0; k < m; ++k) {
          if (k == pi) continue;
          G xk = grade_of<G>(Pi->conclusion[k]);
          t = mk_di<G>(std::move(t), kk, G::mul(xk, orr.grade),
                       G::mul(xk, orr.witness), mode);
          ++kk;
        }
        return finish(std::move(t), "cut-promotion-dereliction");
      }
      case RuleTag::Prom: {
        // the box enters the other box: cut above and re-promote
        const TreePtr<G>& Sig = O->premises[0];
        G z = grade_of<G>(Sig->conclusion[oc]);
        auto inner = mk_cut<G>(mk_prom<G>(Pi, pi, z, mode), pi, Sig, oc, mode);
        std::size_t qpi = (m - 1) + (orr.i - (orr.i > oc ? 1 : 0));
        return finish(mk_prom<G>(std::move(inner), qpi, orr.grade, mode),
                      "cut-promotion-promotion");
      }
      default:
        break;
    }
    throw EngineInvariantViolated(std::string("no promotion reduction for ") +
                                  tag_name(orr.tag) + " against a boxed formula");
  }

  // a promoted context coordinate ?_{x r} A is cut; O introduces !_{x r} A'
  const FormulaPtr<G> A = Pi->conclusion[pc]->left;
  const G x = grade_of<G>(Pi->conclusion[pc]);
  const FormulaPtr<G> Adual = negate<G>(A);
  const FormulaPtr<G> B = Pi->conclusion[pi];

  switch (orr.tag) {
    case RuleTag::CoW:
    case RuleTag::CoWI: {
      if (x == G::zero()) {
        // the premise coordinate is already at grade zero: discharge it
        // above the box
        auto c = mk_cut<G>(Pi, pc, mk_coweak<G>(Adual, G::zero(), mode), 0, mode);
        return finish(mk_prom<G>(std::move(c), pi - (pi > pc ? 1 : 0), r, mode),
                      "cut-promotion-coweakening");
      }
      if (r == G::zero()) {
        // a box at grade zero collapses to (co)weakenings
        TreePtr<G> t = mk_coweak<G>(B, r, mode);
        for (std::size_t k = 0; k < m; ++k) {
          if (k == pi || k == pc) continue;
          t = mk_weak<G>(std::move(t), P->conclusion[k]->left,
                         P->conclusion[k]->grade, mode);
        }
        return finish(std::move(t), "cut-promotion-coweakening");
      }
      if (G::mul(x, r) == G::zero())
        throw CheckError({{},
                          "NotIntegralDomain",
                          "a grade-zero coweakening meets a context grade " +
                              x.to_string() + " * " + r.to_string() +
                              " with no zero factor; the case split needs an "
                              "integral domain"});
      throw CheckError({{},
                        "PromotionVsIndexedDereliction",
                        "an indexed coweakening at a nonzero grade carries a "
                        "hidden indexed codereliction; no reduction against "
                        "promotion is defined"});
    }
    case RuleTag::CoDI:
      throw CheckError({{},
                        "PromotionVsIndexedDereliction",
                        "no reduction is defined between promotion and an "
                        "indexed (co)dereliction"});
    case RuleTag::CoC: {
      // split the product grade x * r into a grid: rows decompose x,
      // columns decompose r; one promotion per column, the context
      // coordinate pre-split per row, cells regrouped to match the two
      // cocontracted grades
      const TreePtr<G>& R0 = O->premises[0];
      const TreePtr<G>& R1 = O->premises[1];
      G z1 = grade_of<G>(R0->conclusion[orr.i]);
      G z2 = grade_of<G>(R1->conclusion[orr.j]);
      auto split = G::mult_split(x, r, z1, z2);
      const auto& sp = split.s_parts;
      const auto& tp = split.r_parts;
      const std::size_t rows = sp.size(), cols = tp.size();
      std::vector<std::vector<char>> inz1(rows, std::vector<char>(cols, 0));
      for (auto [a, b] : split.chosen) inz1[a][b] = 1;

      // context coordinates of the box other than the cut one
      std::vector<std::size_t> ctx_src; // indices into P's conclusion
      for (std::size_t k = 0; k < m; ++k)
        if (k != pc && k != pi) ctx_src.push_back(k);
      const std::size_t g2 = ctx_src.size();

      TreePtr<G> t;
      // groups: one per surviving context coordinate, then the cells that
      // make up z1, then the cells that make up z2
      std::vector<std::vector<std::size_t>> groups(g2 + 2);

      if (cols == 0) {
        // no columns: the whole box degenerates to (co)weakenings
        t = mk_coweak<G>(B, r, mode);
        for (std::size_t kk = 0; kk < g2; ++kk) {
          std::size_t k = ctx_src[kk];
          t = mk_weak<G>(t, P->conclusion[k]->left, P->conclusion[k]->grade, mode);
          groups[kk] = {t->conclusion.size() - 1};
        }
      } else {
        std::vector<G> suf(rows + 1, G::zero());
        for (std::size_t a = rows; a-- > 0;) suf[a] = G::add(sp[a], suf[a + 1]);

        struct Col {
          TreePtr<G> t;
          std::vector<std::size_t> cells;
          std::vector<std::size_t> ctx;
          std::size_t principal = 0;
        };
        auto build_column = [&](const G& tb) -> Col {
          Col col;
          TreePtr<G> cur = Pi;
          std::size_t idx = pc;
          if (rows == 0) {
            cur = mk_cut<G>(cur, idx, mk_coweak<G>(Adual, x, mode), 0, mode);
          } else {
            for (std::size_t a = 0; a + 1 < rows; ++a) {
              auto coc = mk_cocontr<G>(
                  mk_ax<G>(mk_bang<G>(Adual, sp[a], mode), mode), 1,
                  mk_ax<G>(mk_bang<G>(Adual, suf[a + 1], mode), mode), 1, mode);
              cur = mk_cut<G>(std::move(cur), idx, std::move(coc), 2, mode);
              col.cells.push_back(cur->conclusion.size() - 2);
              idx = cur->conclusion.size() - 1;
            }
            col.cells.push_back(idx); // the last row keeps the running rest
          }
          for (std::size_t k : ctx_src) col.ctx.push_back(k - (k > pc ? 1 : 0));
          col.principal = pi - (pi > pc ? 1 : 0);
          col.t = mk_prom<G>(std::move(cur), col.principal, tb, mode);
          return col;
        };

        Col acc = build_column(tp[0]);
        std::vector<std::vector<std::size_t>> cell_pos(1, acc.cells); // per column
        std::vector<std::vector<std::size_t>> ctx_pos(g2);
        for (std::size_t kk = 0; kk < g2; ++kk) ctx_pos[kk] = {acc.ctx[kk]};
        std::size_t principal = acc.principal;
        for (std::size_t b = 1; b < cols; ++b) {
          Col col = build_column(tp[b]);
          std::size_t left = acc.t->conclusion.size();
          auto merged = mk_cocontr<G>(acc.t, principal, col.t, col.principal, mode);
          auto remap_left = [&](std::size_t p) {
            return p - (p > principal ? 1 : 0);
          };
          auto remap_right = [&](std::size_t p) {
            return (left - 1) + (p - (p > col.principal ? 1 : 0));
          };
          for (auto& cp : cell_pos)
            for (auto& p : cp) p = remap_left(p);
          for (auto& cp : ctx_pos)
            for (auto& p : cp) p = remap_left(p);
          cell_pos.emplace_back();
          for (std::size_t p : col.cells) cell_pos.back().push_back(remap_right(p));
          for (std::size_t kk = 0; kk < g2; ++kk)
            ctx_pos[kk].push_back(remap_right(col.ctx[kk]));
          acc.t = std::move(merged);
          principal = acc.t->conclusion.size() - 1;
        }
        t = acc.t;
        for (std::size_t kk = 0; kk < g2; ++kk) groups[kk] = std::move(ctx_pos[kk]);
        for (std::size_t a = 0; a < rows; ++a)
          for (std::size_t b = 0; b < cols; ++b)
            groups[g2 + (inz1[a][b] ? 0 : 1)].push_back(cell_pos[b][a]);
      }

      for (std::size_t kk = 0; kk < g2; ++kk)
        t = fold_group<G>(std::move(t), groups, kk, mode);
      for (std::size_t which : {std::size_t(0), std::size_t(1)}) {
        auto& grp = groups[g2 + which];
        if (grp.empty()) {
          t = mk_weak<G>(std::move(t), A, which == 0 ? z1 : z2, mode);
          grp = {t->conclusion.size() - 1};
        } else {
          t = fold_group<G>(std::move(t), groups, g2 + which, mode);
        }
      }
      std::size_t pz1 = groups[g2][0], pz2 = groups[g2 + 1][0];
      t = mk_cut<G>(std::move(t), pz1, R0, orr.i, mode);
      pz2 -= pz2 > pz1 ? 1 : 0;
      t = mk_cut<G>(std::move(t), pz2, R1, orr.j, mode);
      return finish(std::move(t), "cut-promotion-cocontraction");
    }
    default:
      break;
  }
  throw EngineInvariantViolated(std::string("no promotion reduction for ") +
                                tag_name(orr.tag) + " against a boxed context");
}

template <GradeSemiring G>
PromCutHook<G> promotion_hook() {
  return [](const TreePtr<G>& L, std::size_t i, const TreePtr<G>& R, std::size_t j,
            Mode mode) { return promotion_cut_step<G>(L, i, R, j, mode); };
}

} // namespace dbsll
