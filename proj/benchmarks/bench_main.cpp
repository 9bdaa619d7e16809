#include <random>

#include <benchmark/benchmark.h>

#include "resilog/global.hpp"
#include "resilog/matrix.hpp"
#include "resilog/parse.hpp"
#include "support.hpp"

using namespace resilog;

static void BM_DetExact(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  RatMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Rational(num(rng), den(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(det_exact(m));
}
BENCHMARK(BM_DetExact)->Arg(3)->Arg(6)->Arg(10);

static void BM_ParsePoly(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  const std::string text = print_poly(testkit::random_poly(rng, vars, 6, 40, true));
  for (auto _ : state) benchmark::DoNotOptimize(parse_poly(text, vars));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParsePoly);

static void BM_SimpleResidues(benchmark::State& state) {
  const auto problem = testkit::load_fixture("p3_example.toml").problem;
  const SingularSet set = enumerate_singularities(problem, Enumeration{});
  const SingularPoint& p = set.points.front();
  for (auto _ : state) benchmark::DoNotOptimize(simple_residues(set.charts[p.chart], p, 1));
}
BENCHMARK(BM_SimpleResidues);

static void BM_VerifyP3(benchmark::State& state) {
  const auto problem = testkit::load_fixture("p3_example.toml").problem;
  for (auto _ : state) {
    const SingularSet set = enumerate_singularities(problem, Enumeration{});
    benchmark::DoNotOptimize(verify_identities(problem, set));
  }
}
BENCHMARK(BM_VerifyP3)->Unit(benchmark::kMicrosecond);

static void BM_PerturbedResidue(benchmark::State& state) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {parse_poly("x^2", v), parse_poly("-y", v)}, MultiPoly(v));
  const auto p = SingularPoint::exact(0, {Rational(0), Rational(0)});
  for (auto _ : state) benchmark::DoNotOptimize(perturbed_residue(cf, p, 0, NumericConfig{}));
}
BENCHMARK(BM_PerturbedResidue)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
