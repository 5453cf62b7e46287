// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "cdpim/arch_config.hpp"
#include "cdpim/pim_isa.hpp"
#include "cdpim/workload.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cdpim {

enum class ExecMode { kGpuOnly, kHbcem, kLbim };

const char* exec_mode_name(ExecMode mode);
ExecMode exec_mode_from_string(const std::string& name);

// Calibration of the analytic latency model against measured end-to-end
// numbers. Utilization/efficiency factors are fractions of the raw peak;
// pim_layer_sync_s is the host<->PIM handshake charged once per decoder
// layer whenever a decode step runs on the PIM.
struct CalibrationConfig {
  double processor_utilization = 0.85;
  double host_memory_efficiency = 0.32;
  double pim_bandwidth_efficiency = 0.10;
  double pim_layer_sync_s = 8.0e-6;
  double lbim_host_bw_fraction = 1.0;  // host share of external BW in half mode
};

struct RunParams {
  DeviceConfig device;
  PimOrg org;
  ModelConfig model;
  std::uint64_t lin = 0;   // prompt tokens per request
  std::uint64_t lout = 0;  // generated tokens per request
  std::uint32_t batch = 1;
  CalibrationConfig calib;
};

enum class Resource { kHost, kPim };

struct TimelineEvent {
  Resource resource = Resource::kHost;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
  std::uint32_t request = 0;
};

struct ModeSwitchEvent {
  double time_s = 0.0;
  PimMode from = PimMode::kFull;
  PimMode to = PimMode::kFull;
  std::uint64_t step_index = 0;
};

struct RequestStats {
  double prefill_done_s = 0.0;
  double ttft_s = 0.0;    // arrival (t=0) to first generated token
  double decode_s = 0.0;  // summed decode step durations
  double done_s = 0.0;
};

struct LatencyReport {
  ExecMode mode = ExecMode::kGpuOnly;
  std::string fingerprint;  // device|model|lin|lout|batch guard for speedup()
  double end_to_end_s = 0.0;
  double ttft_s = 0.0;  // first request's TTFT
  std::vector<RequestStats> requests;
  double host_busy_s = 0.0;
  double pim_busy_s = 0.0;
  std::uint64_t host_bytes = 0;  // weight + KV + activation traffic on the host bus
  std::uint64_t pim_weight_bytes = 0;
  std::uint64_t full_mode_steps = 0;
  std::uint64_t half_mode_steps = 0;
  double pim_internal_bw_used = 0.0;  // pim_weight_bytes / pim_busy_s
  double pim_utilization = 0.0;       // pim_busy_s / end_to_end_s
  std::vector<TimelineEvent> timeline;
  std::vector<ModeSwitchEvent> mode_switches;
};

// Latency primitives (exposed for unit tests and tools).
double host_gemm_latency_s(double flops, const DeviceConfig& device, double utilization);
double host_memory_latency_s(std::uint64_t bytes, const DeviceConfig& device,
                             double efficiency);
// Streamed-weight GEMV on the host bus: memory-bound by construction.
double host_gemv_latency_s(std::uint64_t weight_bytes, const DeviceConfig& device,
                           double efficiency = 1.0);
// Weight stream on the internal PIM bus plus the input broadcast over the
// external bus. Half mode halves the internal bandwidth.
double pim_gemv_latency_s(std::uint64_t weight_bytes, std::uint64_t input_bytes, PimMode mode,
                          const DeviceConfig& device, const PimOrg& org,
                          double efficiency = 1.0);

// One host prefill of `lin` tokens (compute/memory roofline).
double host_prefill_s(const ModelConfig& model, std::uint64_t lin, const DeviceConfig& device,
                      const CalibrationConfig& calib);
// One batched host decode step at context l_ctx (weights amortized across the
// batch, KV and activations per request).
double host_decode_step_s(const ModelConfig& model, std::uint64_t l_ctx, std::uint32_t batch,
                          const DeviceConfig& device, const CalibrationConfig& calib);
// One PIM decode step for a single request at context l_ctx.
double pim_decode_step_s(const ModelConfig& model, std::uint64_t l_ctx, PimMode mode,
                         const DeviceConfig& device, const PimOrg& org,
                         const CalibrationConfig& calib);

LatencyReport simulate_gpu_only(const RunParams& params);
LatencyReport simulate_hbcem(const RunParams& params);
LatencyReport simulate_lbim(const RunParams& params);
LatencyReport simulate(ExecMode mode, const RunParams& params);

// end-to-end of `baseline` over `report` (how much faster `report` is).
// Throws if the two reports describe different workloads.
double speedup(const LatencyReport& report, const LatencyReport& baseline);

nlohmann::json calibration_to_json(const CalibrationConfig& calib);
CalibrationConfig calibration_from_json(const nlohmann::json& j);

}  // namespace cdpim
