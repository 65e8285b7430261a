#include <benchmark/benchmark.h>

#include "finsite/overtopos.hpp"
#include "helpers.hpp"

using namespace finsite;
using namespace finsite::testing;

static void BM_ValidateCategory(benchmark::State& state) {
  FragmentSite frag = objects_fragment(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_category(*frag.compiled).ok());
  }
}
BENCHMARK(BM_ValidateCategory)->Arg(2)->Arg(3);

static void BM_SieveClosure(benchmark::State& state) {
  FragmentSite frag = objects_fragment(3);
  OverSite over = antecedent_basis(frag);
  Presieve p = over.raw_families.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sieve_closure(*over.elements, p).arrows.size());
  }
}
BENCHMARK(BM_SieveClosure);

static void BM_AntecedentBasis(benchmark::State& state) {
  FragmentSite frag = objects_fragment(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    OverSite over = antecedent_basis(frag);
    benchmark::DoNotOptimize(over.basis.family_count());
  }
}
BENCHMARK(BM_AntecedentBasis)->Arg(2)->Arg(3);

static void BM_ComputeLimitCospan(benchmark::State& state) {
  FragmentSite frag = objects_fragment(2);
  ElementsResult e = category_of_elements(frag.interp);
  const std::string d = e.arrow_id("delta", encode_tuple({"a"}));
  Diagram dia = cospan_diagram(e.category, d, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_limit(*e.category, dia).has_value());
  }
}
BENCHMARK(BM_ComputeLimitCospan);

static void BM_EnumeratePoints(benchmark::State& state) {
  FragmentSite frag = objects_fragment(2);
  OverSite over = antecedent_basis(frag);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        enumerate_points(frag, over, static_cast<std::size_t>(state.range(0)))
            .size());
  }
}
BENCHMARK(BM_EnumeratePoints)->Arg(1)->Arg(2);

static void BM_EnumerateFunctors(benchmark::State& state) {
  auto A = arrow_category();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        enumerate_set_valued_functors(A, static_cast<std::size_t>(state.range(0)))
            .size());
  }
}
BENCHMARK(BM_EnumerateFunctors)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
