#pragma once

#include <string>
#include <utility>
#include <vector>

// Hand-written documents, one per cut-reduction or commutation shape.
// Each parses, checks, and normalizes in dbsll mode over nat grades.

namespace testsupport {

struct Fixture {
  std::string name;
  std::string doc;
};

inline const std::vector<Fixture>& cut_fixtures() {
  static const std::vector<Fixture> fs = {
      {"axiom",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (ax a) (ax a))))"},
      {"tensor-par",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 2 1 (tensor 1 1 (ax a) (ax b))"
       "          (par 0 1 (tensor 1 1 (ax a) (ax b))))))"},
      {"one-bot",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 2 (one) (bot (ax c)))))"},
      {"with-plus1",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 1 (with 0 0 (plus1 0 b^ (ax a)) (plus2 0 a^ (ax b)))"
       "          (plus1 0 b^ (ax a)))))"},
      {"with-plus2",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 1 (with 0 0 (plus1 0 b^ (ax a)) (plus2 0 a^ (ax b)))"
       "          (plus2 0 a^ (ax b)))))"},
      {"top-context",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (top c^) (ax c))))"},
      {"dereliction",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (d 1 (ax a)) (cod 0 (ax a)))))"},
      {"weakening-zero",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (w a (one)) (cow a^))))"},
      {"weakening-graded",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (wi {2} a (one)) (cowi {2} a^))))"},
      {"contraction-coweakening",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (c 1 2 (wi {1} a (wi {2} a (one)))) (cowi {3} a^))))"},
      {"cocontraction-weakening",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (coc 0 0 (cowi {1} a) (cowi {2} a)) (wi {3} a^ (one)))))"},
      {"contraction-cocontraction",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (c 1 2 (wi {1} a (wi {2} a (one))))"
       "          (coc 0 0 (cowi {1} a^) (cowi {2} a^)))))"},
      {"commute-bot",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (bot (ax a)) (ax a))))"},
      {"commute-tensor",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (tensor 1 1 (ax a) (ax b)) (ax a))))"},
      {"commute-par",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (par 0 1 (tensor 1 1 (ax a) (ax b)))"
       "          (par 0 1 (tensor 1 1 (ax a) (ax b))))))"},
      {"commute-with",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (with 0 0 (plus1 0 b^ (ax a)) (plus2 0 a^ (ax b)))"
       "          (with 0 0 (plus1 0 b^ (ax a)) (plus2 0 a^ (ax b))))))"},
      {"commute-contraction",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (c 1 2 (wi {1} a (wi {2} a (one)))) (bot (one)))))"},
      {"lifted-dereliction",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 1 0 (di 1 {4} (wi {2} a (one))) (cowi {4} a^))))"},
      {"lifted-codereliction",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (codi 0 {3} (cowi {1} a)) (wi {3} a^ (one)))))"},
      {"exchange",
       "(document (mode dbsll) (monoid nat) (proof"
       " (cut 0 1 (xch (1 0) (ax a)) (ax a^))))"},
  };
  return fs;
}

} // namespace testsupport
