#include <benchmark/benchmark.h>

#include "dbsll/lpdo.hpp"
#include "dbsll/relmodel.hpp"
#include "dbsll/rewrite.hpp"
#include "support/gen.hpp"

using namespace dbsll;
using testsupport::Gen;
using G = NatGrade;

namespace {

std::vector<TreePtr<G>> make_corpus(std::size_t n) {
  Gen g(1234);
  std::vector<TreePtr<G>> out;
  while (out.size() < n) {
    auto t = g.proof();
    if (testsupport::count_nodes(t) <= 40) out.push_back(std::move(t));
  }
  return out;
}

void BM_normalize(benchmark::State& state) {
  auto corpus = make_corpus(64);
  std::size_t k = 0;
  for (auto _ : state) {
    auto res = normalize<G>(corpus[k++ % corpus.size()], Mode::DBSLL);
    benchmark::DoNotOptimize(res.tree);
  }
}
BENCHMARK(BM_normalize);

void BM_additive_split(benchmark::State& state) {
  std::uint64_t a = 0;
  for (auto _ : state) {
    std::uint64_t x3 = a % 9;
    auto c = G::additive_split({3}, {5}, {x3}, {8 - x3});
    benchmark::DoNotOptimize(c);
    ++a;
  }
}
BENCHMARK(BM_additive_split);

void BM_op_compose(benchmark::State& state) {
  auto d = parse_op("2*(X1)*(X1+X2)*(X1*X2+1)");
  auto e = parse_op("(X2)*(X2+1)");
  for (auto _ : state) {
    auto c = FactoredOp::add(d, e);
    benchmark::DoNotOptimize(c.polynomial());
  }
}
BENCHMARK(BM_op_compose);

void BM_rel_interp(benchmark::State& state) {
  auto corpus = make_corpus(32);
  rel::Assignment asg;
  asg.atom_sizes = {{"a", 2}, {"b", 2}};
  asg.unindexed_bound = 2;
  std::size_t k = 0;
  for (auto _ : state) {
    auto den = rel::interp_proof<G>(corpus[k++ % corpus.size()], asg);
    benchmark::DoNotOptimize(den);
  }
}
BENCHMARK(BM_rel_interp);

} // namespace

BENCHMARK_MAIN();
