#pragma once

#include <random>
#include <utility>
#include <vector>

#include "dbsll/proofs.hpp"

// Random well-typed proofs over natural-number grades: an identity expansion
// of a random formula, wrapped in structural noise, closed by a cut on the
// dual pair. Deterministic for a fixed seed.

namespace testsupport {

using dbsll::Conn;
using dbsll::Mode;
using dbsll::NatGrade;
using dbsll::Rule;
using dbsll::RuleTag;
using F = dbsll::Formula<NatGrade>;
using FP = dbsll::FormulaPtr<NatGrade>;
using TP = dbsll::TreePtr<NatGrade>;

inline std::size_t count_nodes(const TP& t) {
  std::size_t n = 1;
  for (const auto& p : t->premises) n += count_nodes(p);
  return n;
}

struct Gen {
  std::mt19937 rng;

  explicit Gen(unsigned seed) : rng(seed) {}

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  NatGrade grade(std::uint64_t max = 5) { return NatGrade{pick(max + 1)}; }

  FP formula(int depth) {
    std::size_t c = pick(depth <= 0 ? 3 : 9);
    switch (c) {
      case 0:
      case 1:
        return F::make_atom(std::string(1, static_cast<char>('a' + pick(2))),
                            pick(2) == 0);
      case 2:
        return F::make_unit(pick(2) ? Conn::One : Conn::Bot);
      case 3:
        return F::make_binary(Conn::Tensor, formula(depth - 1), formula(depth - 1));
      case 4:
        return F::make_binary(Conn::Par, formula(depth - 1), formula(depth - 1));
      case 5:
        return F::make_binary(Conn::With, formula(depth - 1), formula(depth - 1));
      case 6:
        return F::make_binary(Conn::Plus, formula(depth - 1), formula(depth - 1));
      case 7:
        return F::make_graded(Conn::WhyNotG, grade(3), formula(depth - 1));
      default:
        return F::make_graded(Conn::OfCourseG, grade(3), formula(depth - 1));
    }
  }

  TP mk(Rule<NatGrade> r, std::vector<TP> prem) {
    return dbsll::apply_rule<NatGrade>(std::move(r), std::move(prem), Mode::DBSLL);
  }
  TP ax(FP f) {
    Rule<NatGrade> r;
    r.tag = RuleTag::Ax;
    r.formula = std::move(f);
    return mk(std::move(r), {});
  }
  TP xch(TP t, std::vector<std::size_t> perm) {
    Rule<NatGrade> r;
    r.tag = RuleTag::Exch;
    r.perm = std::move(perm);
    return mk(std::move(r), {std::move(t)});
  }

  // identity expansion: a proof of |- F^, F
  TP eta(const FP& f) {
    using dbsll::negate;
    switch (f->conn) {
      case Conn::Tensor: {
        Rule<NatGrade> t;
        t.tag = RuleTag::Tensor;
        t.i = 1;
        t.j = 1;
        auto q = mk(std::move(t), {eta(f->left), eta(f->right)});
        Rule<NatGrade> p;
        p.tag = RuleTag::Par;
        p.i = 0;
        p.j = 1;
        return xch(mk(std::move(p), {std::move(q)}), {1, 0});
      }
      case Conn::Par: {
        Rule<NatGrade> t;
        t.tag = RuleTag::Tensor;
        t.i = 0;
        t.j = 0;
        auto q = mk(std::move(t), {eta(f->left), eta(f->right)});
        Rule<NatGrade> p;
        p.tag = RuleTag::Par;
        p.i = 0;
        p.j = 1;
        return mk(std::move(p), {std::move(q)});
      }
      case Conn::With: {
        Rule<NatGrade> pl1;
        pl1.tag = RuleTag::Plus1;
        pl1.i = 0;
        pl1.formula = negate<NatGrade>(f->right);
        auto q1 = mk(std::move(pl1), {eta(f->left)});
        Rule<NatGrade> pl2;
        pl2.tag = RuleTag::Plus2;
        pl2.i = 0;
        pl2.formula = negate<NatGrade>(f->left);
        auto q2 = mk(std::move(pl2), {eta(f->right)});
        Rule<NatGrade> w;
        w.tag = RuleTag::With;
        w.i = 0;
        w.j = 0;
        return mk(std::move(w), {std::move(q1), std::move(q2)});
      }
      case Conn::Plus: {
        auto q = eta(F::make_binary(Conn::With, negate<NatGrade>(f->left),
                                    negate<NatGrade>(f->right)));
        return xch(std::move(q), {1, 0});
      }
      case Conn::One: {
        Rule<NatGrade> o;
        o.tag = RuleTag::One;
        Rule<NatGrade> b;
        b.tag = RuleTag::Bot;
        return xch(mk(std::move(b), {mk(std::move(o), {})}), {1, 0});
      }
      case Conn::Bot: {
        Rule<NatGrade> o;
        o.tag = RuleTag::One;
        Rule<NatGrade> b;
        b.tag = RuleTag::Bot;
        return mk(std::move(b), {mk(std::move(o), {})});
      }
      case Conn::Top: {
        Rule<NatGrade> t;
        t.tag = RuleTag::Top;
        t.context = {F::make_unit(Conn::Zero)};
        return mk(std::move(t), {});
      }
      case Conn::Zero: {
        Rule<NatGrade> t;
        t.tag = RuleTag::Top;
        t.context = {F::make_unit(Conn::Zero)};
        return xch(mk(std::move(t), {}), {1, 0});
      }
      default:
        return ax(f);
    }
  }

  // structural noise that leaves the tracked coordinate alone
  std::pair<TP, std::size_t> noise(TP t, std::size_t track, int steps) {
    for (int s = 0; s < steps; ++s) {
      std::size_t c = pick(6);
      if (c == 0) {
        Rule<NatGrade> r;
        r.tag = RuleTag::W;
        r.formula = formula(1);
        t = mk(std::move(r), {std::move(t)});
      } else if (c == 1) {
        Rule<NatGrade> r;
        r.tag = RuleTag::WI;
        r.grade = grade();
        r.formula = formula(1);
        t = mk(std::move(r), {std::move(t)});
      } else if (c == 2) {
        Rule<NatGrade> r;
        r.tag = RuleTag::Bot;
        t = mk(std::move(r), {std::move(t)});
      } else if (c == 3) {
        std::vector<std::size_t> cand;
        for (std::size_t k = 0; k < t->conclusion.size(); ++k)
          if (k != track && t->conclusion[k]->conn == Conn::WhyNotG)
            cand.push_back(k);
        if (cand.empty()) continue;
        std::size_t i = cand[pick(cand.size())];
        NatGrade w = grade(3);
        Rule<NatGrade> r;
        r.tag = RuleTag::DI;
        r.i = i;
        r.witness = w;
        r.grade = NatGrade::add(t->conclusion[i]->grade, w);
        t = mk(std::move(r), {std::move(t)});
      } else if (c == 4) {
        // contract two matching graded ?-coordinates
        std::vector<std::pair<std::size_t, std::size_t>> cand;
        for (std::size_t i = 0; i < t->conclusion.size(); ++i)
          for (std::size_t j = i + 1; j < t->conclusion.size(); ++j)
            if (i != track && j != track &&
                t->conclusion[i]->conn == Conn::WhyNotG &&
                t->conclusion[j]->conn == Conn::WhyNotG &&
                dbsll::equal<NatGrade>(t->conclusion[i]->left,
                                       t->conclusion[j]->left))
              cand.push_back({i, j});
        if (cand.empty()) continue;
        auto [i, j] = cand[pick(cand.size())];
        Rule<NatGrade> r;
        r.tag = RuleTag::C;
        r.i = i;
        r.j = j;
        t = mk(std::move(r), {std::move(t)});
        track -= (i < track ? 1 : 0) + (j < track ? 1 : 0);
      } else {
        std::vector<std::size_t> cand;
        for (std::size_t k = 0; k < t->conclusion.size(); ++k)
          if (k != track) cand.push_back(k);
        if (cand.empty()) continue;
        Rule<NatGrade> r;
        r.tag = RuleTag::D;
        r.i = cand[pick(cand.size())];
        t = mk(std::move(r), {std::move(t)});
      }
    }
    return {std::move(t), track};
  }

  // a random proof containing at least one cut
  TP proof(std::size_t max_nodes = 40) {
    FP f = formula(2);
    auto [p1, i1] = noise(eta(f), 1, static_cast<int>(pick(4)));
    auto [p2, i2] = noise(xch(eta(dbsll::negate<NatGrade>(f)), {1, 0}), 0,
                          static_cast<int>(pick(4)));
    Rule<NatGrade> cut;
    cut.tag = RuleTag::Cut;
    cut.i = i1;
    cut.j = i2;
    TP t = mk(std::move(cut), {std::move(p1), std::move(p2)});
    if (count_nodes(t) < max_nodes / 2 && pick(2) == 0) {
      // occasionally add more structure around the cut
      std::size_t nc = t->conclusion.size();
      auto [t2, tr] = noise(std::move(t), nc, 2);
      t = std::move(t2);
      (void)tr;
    }
    return t;
  }
};

} // namespace testsupport
