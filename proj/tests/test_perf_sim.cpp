// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/perf_sim.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

using namespace cdpim;

namespace {

RunParams base_params(const std::string& device, const std::string& model,
                      std::uint64_t lin, std::uint64_t lout, std::uint32_t batch) {
  RunParams p;
  p.device = device_preset(device);
  p.model = model_preset(model);
  p.lin = lin;
  p.lout = lout;
  p.batch = batch;
  return p;
}

}  // namespace

TEST_CASE("latency primitives follow the published bandwidth math") {
  const DeviceConfig jetson = device_preset("jetson-agx-orin");
  CHECK(host_gemm_latency_s(1.0e12, jetson, 0.85) == 1.0e12 / (42.5e12 * 0.85));
  CHECK(host_memory_latency_s(1u << 20, jetson, 0.32) ==
        1048576.0 / (204'800'000'000.0 * 0.32));
  CHECK(host_gemv_latency_s(4096, jetson, 0.5) ==
        host_memory_latency_s(4096, jetson, 0.5));

  // Full mode streams over the whole internal bus; inputs ride the raw
  // external bus, untouched by the host efficiency factor.
  const double full = pim_gemv_latency_s(1u << 20, 2048, PimMode::kFull, jetson, PimOrg{}, 0.1);
  CHECK(full == 1048576.0 / (6'553'600'000'000.0 * 0.1) + 2048.0 / 204'800'000'000.0);

  const double f0 = pim_gemv_latency_s(1u << 20, 0, PimMode::kFull, jetson, PimOrg{}, 0.1);
  const double h0 = pim_gemv_latency_s(1u << 20, 0, PimMode::kHalf, jetson, PimOrg{}, 0.1);
  CHECK(h0 == 2.0 * f0);

  CHECK_THROWS_AS(host_memory_latency_s(1, jetson, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(host_gemm_latency_s(1.0, jetson, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(pim_gemv_latency_s(1, 0, PimMode::kFull, jetson, PimOrg{}, -0.1),
                  std::invalid_argument);
}

TEST_CASE("host prefill sits on the compute/memory roofline") {
  const DeviceConfig jetson = device_preset("jetson-agx-orin");
  const ModelConfig m = model_preset("llama-7b");
  const CalibrationConfig c;
  double flops = 0.0;
  for (const auto& op : prefill_ops(m, 128)) flops += static_cast<double>(op.flops);
  const double compute = flops / (42.5e12 * c.processor_utilization);
  const double memory = static_cast<double>(m.param_count + kv_cache_bytes(m, 128)) /
                        (204'800'000'000.0 * c.host_memory_efficiency);
  CHECK(host_prefill_s(m, 128, jetson, c) == std::max(compute, memory));
  // Short prompts on a big model are memory bound.
  CHECK(memory > compute);
}

TEST_CASE("host decode amortizes shared weights across the batch") {
  const DeviceConfig jetson = device_preset("jetson-agx-orin");
  const ModelConfig m = model_preset("llama-7b");
  const CalibrationConfig c;
  const std::uint64_t l = 1024;

  std::uint64_t shared = 0, kv = 0, act = 0;
  double flops = 0.0;
  for (const auto& op : decode_step_ops(m, l)) {
    flops += static_cast<double>(op.flops);
    if (op.kind == OpKind::kHostActivation) {
      act += op.activation_bytes;
    } else if (op.flow.has_value()) {
      kv += op.weight_bytes;
    } else {
      shared += op.weight_bytes;
    }
  }
  for (const std::uint32_t b : {1u, 2u, 8u}) {
    const double memory = static_cast<double>(shared + std::uint64_t{b} * (kv + act)) /
                          (204'800'000'000.0 * c.host_memory_efficiency);
    const double compute = flops * b / (42.5e12 * c.processor_utilization);
    CHECK(host_decode_step_s(m, l, b, jetson, c) == std::max(memory, compute));
  }
  const double s1 = host_decode_step_s(m, l, 1, jetson, c);
  const double s2 = host_decode_step_s(m, l, 2, jetson, c);
  CHECK(s2 < 2.0 * s1);  // shared weights stream once
  CHECK(s2 > s1);
  CHECK_THROWS_AS(host_decode_step_s(m, l, 0, jetson, c), std::invalid_argument);
}

TEST_CASE("pim decode step matches an op-by-op recomputation") {
  const DeviceConfig jetson = device_preset("jetson-agx-orin");
  const ModelConfig m = model_preset("llama-1b");
  const CalibrationConfig c;
  const std::uint64_t l = 256;
  for (auto mode : {PimMode::kFull, PimMode::kHalf}) {
    const double internal = mode == PimMode::kFull ? 6.5536e12 : 3.2768e12;
    double expect = 0.0;
    for (const auto& op : decode_step_ops(m, l)) {
      if (op.placement == Placement::kPim) {
        expect += static_cast<double>(op.weight_bytes) /
                      (internal * c.pim_bandwidth_efficiency) +
                  static_cast<double>(op.activation_bytes) / 204.8e9;
      } else {
        expect += static_cast<double>(op.activation_bytes) /
                  (204.8e9 * c.host_memory_efficiency);
      }
    }
    expect += m.layers * c.pim_layer_sync_s;
    CHECK(pim_decode_step_s(m, l, mode, jetson, PimOrg{}, c) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("gpu-only run is one serial host lane") {
  const RunParams p = base_params("jetson-agx-orin", "llama-1b", 32, 5, 3);
  const LatencyReport r = simulate_gpu_only(p);
  CHECK(r.mode == ExecMode::kGpuOnly);
  REQUIRE(r.requests.size() == 3);
  REQUIRE(r.timeline.size() == 3 + 5);  // prefills then batched steps

  const double prefill = host_prefill_s(p.model, p.lin, p.device, p.calib);
  double t = 3 * prefill;
  for (std::uint64_t j = 0; j < p.lout; ++j) {
    t += host_decode_step_s(p.model, p.lin + j, p.batch, p.device, p.calib);
    if (j == 0) {
      for (const auto& req : r.requests) CHECK(req.ttft_s == t);
    }
  }
  CHECK(r.end_to_end_s == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.host_busy_s == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.pim_busy_s == 0.0);
  CHECK(r.pim_weight_bytes == 0);
  CHECK(r.full_mode_steps == 0);
  CHECK(r.host_bytes > p.batch * p.model.param_count);  // weights stream every step
}

TEST_CASE("hbcem gates decode behind the last prefill and stays in full mode") {
  const RunParams p = base_params("jetson-agx-orin", "llama-1b", 64, 4, 2);
  const LatencyReport r = simulate_hbcem(p);
  CHECK(r.mode == ExecMode::kHbcem);
  CHECK(r.full_mode_steps == std::uint64_t{p.batch} * p.lout);
  CHECK(r.half_mode_steps == 0);
  CHECK(r.mode_switches.empty());

  const double prefill = host_prefill_s(p.model, p.lin, p.device, p.calib);
  for (const auto& ev : r.timeline) {
    if (ev.resource == Resource::kPim) {
      CHECK(ev.start_s >= 2 * prefill - 1e-15);
      CHECK(ev.label == std::string("PIM_MAC_FM"));
    }
  }
  // Serial per-request decode: request 0 finishes all tokens first.
  CHECK(r.requests[0].done_s < r.requests[1].done_s);
  CHECK(r.requests[0].decode_s > 0.0);
}

TEST_CASE("hbcem batch-1 end-to-end decomposes into prefill plus PIM steps") {
  const RunParams p = base_params("iphone-15-pro", "llama-1b", 16, 6, 1);
  const LatencyReport r = simulate_hbcem(p);
  double t = host_prefill_s(p.model, p.lin, p.device, p.calib);
  const double ttft_expect =
      t + pim_decode_step_s(p.model, p.lin, PimMode::kFull, p.device, p.org, p.calib);
  for (std::uint64_t j = 0; j < p.lout; ++j) {
    t += pim_decode_step_s(p.model, p.lin + j, PimMode::kFull, p.device, p.org, p.calib);
  }
  CHECK(r.end_to_end_s == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.ttft_s == doctest::Approx(ttft_expect).epsilon(1e-12));
  CHECK(r.pim_internal_bw_used ==
        doctest::Approx(static_cast<double>(r.pim_weight_bytes) / r.pim_busy_s));
}

TEST_CASE("lbim equals hbcem at batch 1") {
  for (const char* dev : {"jetson-agx-orin", "iphone-15-pro"}) {
    const RunParams p = base_params(dev, "llama-1b", 48, 7, 1);
    const LatencyReport hb = simulate_hbcem(p);
    const LatencyReport lb = simulate_lbim(p);
    CHECK(lb.end_to_end_s == hb.end_to_end_s);
    CHECK(lb.ttft_s == hb.ttft_s);
    CHECK(lb.pim_busy_s == hb.pim_busy_s);
    CHECK(lb.host_bytes == hb.host_bytes);
    CHECK(lb.half_mode_steps == 0);
  }
}

TEST_CASE("lbim overlaps prefill with half-rate decode") {
  const RunParams p = base_params("jetson-agx-orin", "llama-7b", 512, 4, 4);
  const LatencyReport hb = simulate_hbcem(p);
  const LatencyReport lb = simulate_lbim(p);
  CHECK(lb.end_to_end_s <= hb.end_to_end_s * (1.0 + 1e-12));
  CHECK(lb.half_mode_steps > 0);
  CHECK(lb.full_mode_steps + lb.half_mode_steps == std::uint64_t{p.batch} * p.lout);
  CHECK(lb.ttft_s < hb.ttft_s);  // request 0 starts decoding before prefill 3 lands

  // Half-mode steps alternate the two host-window instructions by step parity.
  std::uint64_t step = 0;
  bool saw_half = false;
  const double last_prefill = lb.requests.back().prefill_done_s;
  for (const auto& ev : lb.timeline) {
    if (ev.resource != Resource::kPim) continue;
    if (ev.label == "PIM_MAC_FM") {
      CHECK(ev.start_s >= last_prefill - 1e-15);
    } else {
      saw_half = true;
      CHECK(ev.start_s < last_prefill);
      CHECK(ev.label == std::string(step % 2 == 0 ? "MACT_LDB" : "MACB_LDT"));
    }
    ++step;
  }
  CHECK(saw_half);
  REQUIRE_FALSE(lb.mode_switches.empty());
  CHECK(lb.mode_switches.back().to == PimMode::kFull);
}

TEST_CASE("speedup guards against mismatched workloads") {
  const RunParams a = base_params("jetson-agx-orin", "llama-1b", 16, 4, 1);
  RunParams b = a;
  b.lout = 5;
  const LatencyReport ra = simulate_hbcem(a);
  const LatencyReport rb = simulate_hbcem(b);
  CHECK(speedup(ra, ra) == 1.0);
  CHECK_THROWS_AS(speedup(ra, rb), std::invalid_argument);
  const LatencyReport gpu = simulate_gpu_only(a);
  CHECK(speedup(ra, gpu) == gpu.end_to_end_s / ra.end_to_end_s);
}

TEST_CASE("run parameter and calibration validation") {
  RunParams p = base_params("jetson-agx-orin", "llama-1b", 16, 4, 1);
  p.lin = 0;
  CHECK_THROWS_AS(simulate_hbcem(p), std::invalid_argument);
  p.lin = 16;
  p.batch = 0;
  CHECK_THROWS_AS(simulate_lbim(p), std::invalid_argument);
  p.batch = 1;
  p.calib.pim_bandwidth_efficiency = 0.0;
  CHECK_THROWS_AS(simulate_hbcem(p), std::invalid_argument);
  p.calib.pim_bandwidth_efficiency = 1.5;
  CHECK_THROWS_AS(simulate_gpu_only(p), std::invalid_argument);
}

TEST_CASE("mode names round trip") {
  for (auto m : {ExecMode::kGpuOnly, ExecMode::kHbcem, ExecMode::kLbim}) {
    CHECK(exec_mode_from_string(exec_mode_name(m)) == m);
  }
  CHECK_THROWS_AS(exec_mode_from_string("fast"), std::invalid_argument);
}

TEST_CASE("calibration json round trip") {
  CalibrationConfig c;
  c.processor_utilization = 0.7;
  c.pim_layer_sync_s = 3.5e-6;
  const CalibrationConfig back = calibration_from_json(calibration_to_json(c));
  CHECK(back.processor_utilization == 0.7);
  CHECK(back.host_memory_efficiency == c.host_memory_efficiency);
  CHECK(back.pim_bandwidth_efficiency == c.pim_bandwidth_efficiency);
  CHECK(back.pim_layer_sync_s == 3.5e-6);
  CHECK(back.lbim_host_bw_fraction == 1.0);
  // Partial documents keep defaults for unset keys.
  const CalibrationConfig partial =
      calibration_from_json(nlohmann::json{{"pim_layer_sync_s", 0.0}});
  CHECK(partial.pim_layer_sync_s == 0.0);
  CHECK(partial.processor_utilization == CalibrationConfig{}.processor_utilization);
}
