#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbsll {

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2x2 decomposition of an equality x1 + x2 = x3 + x4:
//   x1 = x13 + x14, x2 = x23 + x24, x3 = x13 + x23, x4 = x14 + x24.
template <typename G>
struct SplitCertificate {
  G x13, x14, x23, x24;
};

// Commutative monoid of grades with a sum-induced preorder
// (x <= y iff some w has x + w = y) and an additive splitting procedure.
// The preorder may fail antisymmetry; nothing here relies on it.
template <typename G>
concept GradeMonoid = std::equality_comparable<G> && requires(const G a, const G b) {
  { G::zero() } -> std::convertible_to<G>;
  { G::add(a, b) } -> std::convertible_to<G>;
  { G::leq_witness(a, b) } -> std::convertible_to<std::optional<G>>;
  { G::additive_split(a, b, a, b) } -> std::convertible_to<SplitCertificate<G>>;
  { a.to_string() } -> std::convertible_to<std::string>;
};

// Semiring extension used only by the promotion rule.
template <typename G>
concept GradeSemiring = GradeMonoid<G> && requires(const G a, const G b) {
  { G::one() } -> std::convertible_to<G>;
  { G::mul(a, b) } -> std::convertible_to<G>;
  { G::is_integral_domain() } -> std::convertible_to<bool>;
};

// Output of multiplicative splitting: s = sum(s_parts), r = sum(r_parts),
// x = sum over cells in `chosen` of s_i * r_j, y = the complement sum.
template <typename G>
struct MultSplit {
  std::vector<G> s_parts;
  std::vector<G> r_parts;
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
};

// The natural numbers: the canonical resource semiring (discrete, positive,
// additive and multiplicative splitting, integral domain).
struct NatGrade {
  std::uint64_t value = 0;

  friend bool operator==(NatGrade, NatGrade) = default;

  static NatGrade zero() { return {0}; }
  static NatGrade one() { return {1}; }
  static NatGrade add(NatGrade a, NatGrade b) { return {a.value + b.value}; }
  static NatGrade mul(NatGrade a, NatGrade b) { return {a.value * b.value}; }
  static bool is_integral_domain() { return true; }

  static std::optional<NatGrade> leq_witness(NatGrade x, NatGrade y) {
    if (x.value > y.value) return std::nullopt;
    return NatGrade{y.value - x.value};
  }

  // Canonical choice: x13 = min(x1, x3), the rest is forced. Splittings are
  // not unique; a fixed choice keeps normal forms reproducible.
  static SplitCertificate<NatGrade> additive_split(NatGrade x1, NatGrade x2,
                                                   NatGrade x3, NatGrade x4) {
    if (x1.value + x2.value != x3.value + x4.value)
      throw PreconditionViolated("additive_split: x1+x2 != x3+x4");
    std::uint64_t x13 = std::min(x1.value, x3.value);
    std::uint64_t x14 = x1.value - x13;
    std::uint64_t x23 = x3.value - x13;
    std::uint64_t x24 = x4.value - x14;
    return {NatGrade{x13}, NatGrade{x14}, NatGrade{x23}, NatGrade{x24}};
  }

  // All-units decomposition: s and r split into units, x picks the first
  // x cells in row-major order.
  static MultSplit<NatGrade> mult_split(NatGrade s, NatGrade r, NatGrade x,
                                        NatGrade y) {
    if (s.value * r.value != x.value + y.value)
      throw PreconditionViolated("mult_split: s*r != x+y");
    MultSplit<NatGrade> out;
    out.s_parts.assign(s.value, NatGrade{1});
    out.r_parts.assign(r.value, NatGrade{1});
    std::uint64_t left = x.value;
    for (std::size_t i = 0; i < s.value && left > 0; ++i)
      for (std::size_t j = 0; j < r.value && left > 0; ++j, --left)
        out.chosen.emplace_back(i, j);
    return out;
  }

  std::string to_string() const { return std::to_string(value); }
};

static_assert(GradeMonoid<NatGrade>);
static_assert(GradeSemiring<NatGrade>);

} // namespace dbsll
