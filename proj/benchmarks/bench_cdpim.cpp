// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "cdpim/cu_datapath.hpp"
#include "cdpim/kv_mapping.hpp"
#include "cdpim/perf_sim.hpp"

namespace {

cdpim::Int8Matrix random_tile(std::uint32_t rows, std::uint32_t cols) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-8, 8);
  cdpim::Int8Matrix m = cdpim::Int8Matrix::zeros(rows, cols);
  for (auto& v : m.data) v = static_cast<std::int8_t>(d(rng));
  return m;
}

std::vector<std::int8_t> random_vec(std::size_t n) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-8, 8);
  std::vector<std::int8_t> v(n);
  for (auto& x : v) x = static_cast<std::int8_t>(d(rng));
  return v;
}

void BM_KFlowTile(benchmark::State& state) {
  const auto tile = random_tile(64, 128);
  const auto input = random_vec(64);
  for (auto _ : state) {
    auto res = cdpim::run_k_flow(input, tile);
    benchmark::DoNotOptimize(res.out[0]);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 64 * 128);
}
BENCHMARK(BM_KFlowTile);

void BM_VFlowTile(benchmark::State& state) {
  const auto tile = random_tile(64, 128);
  const auto input = random_vec(64);
  for (auto _ : state) {
    auto res = cdpim::run_v_flow(input, tile);
    benchmark::DoNotOptimize(res.out[0]);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 64 * 128);
}
BENCHMARK(BM_VFlowTile);

void BM_LayoutChunkWalk(benchmark::State& state) {
  const auto plan = cdpim::map_k(static_cast<std::uint64_t>(state.range(0)), 4096,
                                 cdpim::PimOrg{}, 4);
  for (auto _ : state) {
    std::uint64_t pads = 0;
    const std::uint64_t n = plan.chunk_count();
    for (std::uint64_t i = 0; i < n; i += 97) {
      pads += plan.chunk_at(i).padding ? 1 : 0;
    }
    benchmark::DoNotOptimize(pads);
  }
}
BENCHMARK(BM_LayoutChunkWalk)->Arg(1024)->Arg(4096);

void BM_LayoutStats(benchmark::State& state) {
  const auto plan = cdpim::map_k(4096, 4096, cdpim::PimOrg{}, 4);
  for (auto _ : state) {
    auto st = plan.stats();
    benchmark::DoNotOptimize(st.padding_chunks);
  }
}
BENCHMARK(BM_LayoutStats);

void BM_SimulateHbcem(benchmark::State& state) {
  cdpim::RunParams p;
  p.device = cdpim::device_preset("jetson-agx-orin");
  p.model = cdpim::model_preset("llama-7b");
  p.lin = 128;
  p.lout = static_cast<std::uint64_t>(state.range(0));
  p.batch = 1;
  for (auto _ : state) {
    auto r = cdpim::simulate_hbcem(p);
    benchmark::DoNotOptimize(r.end_to_end_s);
  }
}
BENCHMARK(BM_SimulateHbcem)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
