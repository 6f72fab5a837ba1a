#include <benchmark/benchmark.h>

#include <vector>

#include "rpup/decimation.hpp"
#include "rpup/givens.hpp"
#include "rpup/paraunitary.hpp"
#include "rpup/rng.hpp"

namespace {

using namespace rpup;

std::vector<double> noise(std::size_t count, std::uint64_t seed) {
  RandomStream stream(seed);
  std::vector<double> v(count);
  for (double& s : v) s = stream.normal();
  return v;
}

void BM_apply_unitary(benchmark::State& state) {
  const std::size_t m = std::size_t(state.range(0));
  const UnitarySpec spec{m, 0x11, 0};
  std::vector<double> x = noise(m, 0x12);
  for (auto _ : state) {
    apply_unitary(spec, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(m));
}
BENCHMARK(BM_apply_unitary)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);

void BM_apply_unitary_inverse(benchmark::State& state) {
  const std::size_t m = std::size_t(state.range(0));
  const UnitarySpec spec{m, 0x11, 0};
  std::vector<double> x = noise(m, 0x13);
  for (auto _ : state) {
    apply_unitary_inverse(spec, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(m));
}
BENCHMARK(BM_apply_unitary_inverse)->Arg(64)->Arg(256);

void BM_project(benchmark::State& state) {
  const std::size_t m = std::size_t(state.range(0));
  const std::size_t n = std::size_t(state.range(1));
  const ProjectionSpec spec{m, n, 0x14, 0};
  const std::vector<double> x = noise(m, 0x15);
  std::vector<double> out(n);
  for (auto _ : state) {
    project(spec, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(m));
}
BENCHMARK(BM_project)->Args({256, 16})->Args({256, 256})->Args({1024, 64});

void BM_sample_angle(benchmark::State& state) {
  const std::size_t d = std::size_t(state.range(0));
  RandomStream stream(0x16);
  double acc = 0.0;
  for (auto _ : state) acc += stream.sample_angle(d);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(std::int64_t(state.iterations()));
}
BENCHMARK(BM_sample_angle)->Arg(1)->Arg(4)->Arg(32);

void BM_lattice_forward(benchmark::State& state) {
  const std::size_t m = 8;
  const std::size_t k = std::size_t(state.range(0));
  Lattice lattice({m, k, 0x17, 0});
  std::vector<double> block = noise(m, 0x18);
  for (auto _ : state) {
    lattice.forward_block(block);
    benchmark::DoNotOptimize(block.data());
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(m));
}
BENCHMARK(BM_lattice_forward)->Arg(1)->Arg(4);

// The full stream at q = 1 against demand-driven evaluation at q = K+1;
// the savings_ratio counter lands in the report.
void BM_decimated_stream(benchmark::State& state) {
  const std::size_t m = 8, k = 4;
  const std::size_t q = std::size_t(state.range(0));
  const ParaunitarySpec spec{m, k, 0x19, 0};
  const std::size_t blocks = 512;
  const std::vector<double> input = noise(blocks * m, 0x1a);
  double ratio = 1.0;
  for (auto _ : state) {
    DecimationSchedule schedule;
    schedule.append(q, blocks);
    const DecimatedResult run = forward_decimated(spec, input, schedule);
    ratio = run.work.savings_ratio();
    benchmark::DoNotOptimize(run.retained.data());
  }
  state.counters["savings_ratio"] = ratio;
  state.SetItemsProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(blocks * m));
}
BENCHMARK(BM_decimated_stream)->Arg(1)->Arg(2)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
