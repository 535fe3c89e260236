#include <benchmark/benchmark.h>

#include <cmath>

#include "icore/cluster.hpp"
#include "icore/core.hpp"
#include "icore/transforms.hpp"

using namespace icore;

namespace {

Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

std::vector<std::vector<long long>> level_cells(std::size_t level) {
  std::vector<std::vector<long long>> cells;
  const long long span = 4LL << level;
  for (long long a = -span; a <= span; ++a)
    for (long long b = -span; b <= span; ++b)
      if (level == 0 ? (a % 2 == 0 && b % 2 == 0) : (a % 2 != 0 && b % 2 != 0)) cells.push_back({a, b});
  return cells;
}

const SequenceWindow& plane_window() {
  static const auto x = generate("cycle((0,0),(1,0),(0.5,1))+noise(0.2,4)", 100000);
  return x;
}

void BM_cell_hits_scan(benchmark::State& s) {
  const CellGrid grid{{0.5, 0.5}, 0.25};
  const auto cells = level_cells(2);
  for (auto _ : s) benchmark::DoNotOptimize(cell_hits_scan(plane_window(), grid, 2, cells));
}

void BM_cell_hits_bucketed(benchmark::State& s) {
  const CellGrid grid{{0.5, 0.5}, 0.25};
  const auto cells = level_cells(2);
  for (auto _ : s) benchmark::DoNotOptimize(cell_hits_bucketed(plane_window(), grid, 2, cells, mode(s)));
}

// range(1) is -log10(delta); the reference scan walks the whole value grid
void BM_support_halfspaces(benchmark::State& s) {
  const auto x = generate("cycle((0,0,0),(1,0,0),(0,1,0),(0,0,1))+noise(0.05,2)", 20000);
  const auto dirs = direction_set(3, 256);
  const auto ideal = make_density_zero();
  const double delta = std::pow(10.0, -static_cast<double>(s.range(1)));
  for (auto _ : s) benchmark::DoNotOptimize(support_halfspaces(x, ideal, dirs, delta, mode(s)));
}

void BM_support_halfspaces_reference(benchmark::State& s) {
  const auto x = generate("cycle((0,0,0),(1,0,0),(0,1,0),(0,0,1))+noise(0.05,2)", 20000);
  const auto dirs = direction_set(3, 256);
  const auto ideal = make_density_zero();
  const double delta = std::pow(10.0, -static_cast<double>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(support_halfspaces_reference(x, ideal, dirs, delta));
}

void BM_euler_transform(benchmark::State& s) {
  const auto x = generate("alt+noise(0.1,1)", static_cast<std::size_t>(s.range(1)));
  for (auto _ : s) benchmark::DoNotOptimize(euler_transform(x, 0.5, mode(s)));
}

void BM_compensated_dot(benchmark::State& s) {
  std::vector<double> a(1 << 20, 0.5), b(1 << 20, 1.5);
  for (auto _ : s) benchmark::DoNotOptimize(compensated_dot(a, b, mode(s)));
}

}  // namespace

// argument 0 is serial, 1 is OpenMP
BENCHMARK(BM_cell_hits_scan)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cell_hits_bucketed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_support_halfspaces)->ArgsProduct({{0, 1}, {2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_support_halfspaces_reference)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_euler_transform)->Args({0, 5000})->Args({1, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_compensated_dot)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
