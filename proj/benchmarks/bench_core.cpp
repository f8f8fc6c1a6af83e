#include <benchmark/benchmark.h>

#include "permpoly/constructions.hpp"
#include "permpoly/field_tower.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/oracle.hpp"
#include "permpoly/rng.hpp"
#include "permpoly/translators.hpp"

namespace {

using namespace permpoly;

void BM_FieldMul(benchmark::State& state) {
  FieldCtx F = make_field(3, 2, 4);
  Element a = F.find_primitive(FieldCtx::Level::outer);
  Element x = F.one();
  for (auto _ : state) {
    x = F.mul(x, a);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_FieldMul);

void BM_LinStructure(benchmark::State& state) {
  FieldCtx F = make_field(3, 2, 4);
  LinearizedPoly L = lin_diff(F, 2);
  for (auto _ : state) {
    auto S = structure(F, L);
    benchmark::DoNotOptimize(S);
  }
}
BENCHMARK(BM_LinStructure);

void BM_RankCriterion(benchmark::State& state) {
  FieldCtx F = make_field(3, 1, 6);
  Element gamma = F.find_primitive(FieldCtx::Level::outer);
  std::vector<FqMap> fs{fq_map_linear(F, F.one())};
  std::vector<Element> gammas{gamma};
  BuildOpts opts;
  opts.oracle = false;
  for (auto _ : state) {
    auto cert = build_rank_criterion(F, gammas, fs, opts);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_RankCriterion);

void BM_OracleScan(benchmark::State& state) {
  FieldCtx F = make_field(3, 1, 8);
  std::vector<eidx_t> table(F.order);
  for (eidx_t i = 0; i < F.order; ++i) table[i] = (i + 1) % F.order;
  for (auto _ : state) {
    bool ok = permpoly::is_permutation(table);
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_OracleScan);

void BM_TranslatorSearch(benchmark::State& state) {
  FieldCtx F = make_field(3, 2, 2);
  FqMap f = fq_map_linear(F, F.find_primitive(FieldCtx::Level::outer));
  for (auto _ : state) {
    auto certs = all_translators(F, f);
    benchmark::DoNotOptimize(certs);
  }
}
BENCHMARK(BM_TranslatorSearch);

}  // namespace

BENCHMARK_MAIN();
