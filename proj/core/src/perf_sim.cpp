// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/perf_sim.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cdpim {

namespace {

void check_calibration(const CalibrationConfig& c) {
  auto frac = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!frac(c.processor_utilization) || !frac(c.host_memory_efficiency) ||
      !frac(c.pim_bandwidth_efficiency) || !frac(c.lbim_host_bw_fraction) ||
      c.pim_layer_sync_s < 0.0) {
    throw std::invalid_argument("calibration factors must be in (0,1], sync >= 0");
  }
}

void check_params(const RunParams& p) {
  check_calibration(p.calib);
  if (p.lin == 0) throw std::invalid_argument("lin must be >= 1");
  if (p.lout == 0) throw std::invalid_argument("lout must be >= 1");
  if (p.batch == 0) throw std::invalid_argument("batch must be >= 1");
}

std::string make_fingerprint(const RunParams& p) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s|%s|lin=%llu|lout=%llu|batch=%u",
                p.device.name.c_str(), p.model.name.c_str(),
                static_cast<unsigned long long>(p.lin),
                static_cast<unsigned long long>(p.lout), p.batch);
  return buf;
}

struct StepBytes {
  std::uint64_t pim_weight = 0;   // streamed over the internal bus
  std::uint64_t input = 0;        // vector broadcasts over the external bus
  std::uint64_t host_act = 0;     // host-side activation traffic
};

double pim_step_cost(const ModelConfig& model, std::uint64_t l_ctx, PimMode mode,
                     const DeviceConfig& device, const PimOrg& org,
                     const CalibrationConfig& calib, StepBytes* bytes) {
  const auto ops = decode_step_ops(model, l_ctx);
  double t = 0.0;
  StepBytes b;
  for (const auto& op : ops) {
    if (op.placement == Placement::kPim) {
      t += pim_gemv_latency_s(op.weight_bytes, op.activation_bytes, mode, device, org,
                              calib.pim_bandwidth_efficiency);
      b.pim_weight += op.weight_bytes;
      b.input += op.activation_bytes;
    } else {
      t += host_memory_latency_s(op.activation_bytes, device, calib.host_memory_efficiency);
      b.host_act += op.activation_bytes;
    }
  }
  t += static_cast<double>(model.layers) * calib.pim_layer_sync_s;
  if (bytes != nullptr) *bytes = b;
  return t;
}

LatencyReport run_pim_schedule(const RunParams& p, bool dual_mode) {
  check_params(p);
  derive_bandwidths(p.device, p.org);  // validates device/org up front

  LatencyReport r;
  r.mode = dual_mode ? ExecMode::kLbim : ExecMode::kHbcem;
  r.fingerprint = make_fingerprint(p);
  const std::uint32_t B = p.batch;
  r.requests.resize(B);

  const double prefill = host_prefill_s(p.model, p.lin, p.device, p.calib);
  const std::uint64_t prefill_bytes =
      p.model.param_count + kv_cache_bytes(p.model, p.lin, 1);
  std::vector<double> pf(B);
  double t = 0.0;
  for (std::uint32_t i = 0; i < B; ++i) {
    r.timeline.push_back({Resource::kHost, t, t + prefill, "prefill", i});
    t += prefill;
    pf[i] = t;
    r.requests[i].prefill_done_s = t;
    r.host_busy_s += prefill;
    r.host_bytes += prefill_bytes;
  }

  std::vector<std::uint64_t> tokens_left(B, p.lout);
  std::vector<std::uint64_t> l_ctx(B, p.lin);
  std::uint64_t remaining = std::uint64_t{B} * p.lout;
  double tau = 0.0;
  std::uint64_t step_index = 0;
  bool have_prev_mode = false;
  PimMode prev_mode = PimMode::kFull;

  if (!dual_mode && tau < pf[B - 1]) tau = pf[B - 1];

  while (remaining > 0) {
    std::uint32_t pick = B;
    for (std::uint32_t i = 0; i < B; ++i) {
      if (tokens_left[i] > 0 && pf[i] <= tau) {
        pick = i;
        break;
      }
    }
    if (pick == B) {
      double next = std::numeric_limits<double>::infinity();
      for (std::uint32_t i = 0; i < B; ++i) {
        if (tokens_left[i] > 0) next = std::min(next, pf[i]);
      }
      tau = next;
      continue;
    }

    PimMode mode = PimMode::kFull;
    if (dual_mode) {
      for (std::uint32_t i = 0; i < B; ++i) {
        if (pf[i] > tau) {
          mode = PimMode::kHalf;
          break;
        }
      }
    }
    const PimInstruction instr = instruction_for_mode(mode, static_cast<int>(step_index % 2));
    StepBytes bytes;
    const double dur =
        pim_step_cost(p.model, l_ctx[pick], mode, p.device, p.org, p.calib, &bytes);

    if (have_prev_mode && mode != prev_mode) {
      r.mode_switches.push_back({tau, prev_mode, mode, step_index});
    }
    have_prev_mode = true;
    prev_mode = mode;

    r.timeline.push_back({Resource::kPim, tau, tau + dur, mnemonic(instr), pick});
    r.pim_busy_s += dur;
    r.pim_weight_bytes += bytes.pim_weight;
    r.host_bytes += bytes.input + bytes.host_act;
    if (mode == PimMode::kFull) {
      ++r.full_mode_steps;
    } else {
      ++r.half_mode_steps;
    }

    if (l_ctx[pick] == p.lin) r.requests[pick].ttft_s = tau + dur;
    r.requests[pick].decode_s += dur;
    tau += dur;
    ++l_ctx[pick];
    --tokens_left[pick];
    --remaining;
    ++step_index;
    if (tokens_left[pick] == 0) r.requests[pick].done_s = tau;
  }

  r.end_to_end_s = std::max(tau, pf[B - 1]);
  r.ttft_s = r.requests.front().ttft_s;
  r.pim_internal_bw_used =
      r.pim_busy_s > 0.0 ? static_cast<double>(r.pim_weight_bytes) / r.pim_busy_s : 0.0;
  r.pim_utilization = r.end_to_end_s > 0.0 ? r.pim_busy_s / r.end_to_end_s : 0.0;
  return r;
}

}  // namespace

const char* exec_mode_name(ExecMode mode) {
  switch (mode) {
    case ExecMode::kGpuOnly:
      return "gpu-only";
    case ExecMode::kHbcem:
      return "hbcem";
    case ExecMode::kLbim:
      return "lbim";
  }
  return "unknown";
}

ExecMode exec_mode_from_string(const std::string& name) {
  if (name == "gpu-only") return ExecMode::kGpuOnly;
  if (name == "hbcem") return ExecMode::kHbcem;
  if (name == "lbim") return ExecMode::kLbim;
  throw std::invalid_argument("unknown execution mode: " + name);
}

double host_gemm_latency_s(double flops, const DeviceConfig& device, double utilization) {
  if (flops < 0.0 || utilization <= 0.0 || utilization > 1.0) {
    throw std::invalid_argument("bad gemm latency arguments");
  }
  return flops / (device.compute_throughput_flops * utilization);
}

double host_memory_latency_s(std::uint64_t bytes, const DeviceConfig& device,
                             double efficiency) {
  if (efficiency <= 0.0 || efficiency > 1.0) {
    throw std::invalid_argument("memory efficiency must be in (0,1]");
  }
  return static_cast<double>(bytes) /
         (static_cast<double>(device.external_bandwidth_bytes_per_s) * efficiency);
}

double host_gemv_latency_s(std::uint64_t weight_bytes, const DeviceConfig& device,
                           double efficiency) {
  return host_memory_latency_s(weight_bytes, device, efficiency);
}

double pim_gemv_latency_s(std::uint64_t weight_bytes, std::uint64_t input_bytes, PimMode mode,
                          const DeviceConfig& device, const PimOrg& org, double efficiency) {
  if (efficiency <= 0.0 || efficiency > 1.0) {
    throw std::invalid_argument("pim efficiency must be in (0,1]");
  }
  const BandwidthSummary bw = derive_bandwidths(device, org);
  const std::uint64_t internal =
      mode == PimMode::kFull ? bw.internal_hbcem_bytes_per_s : bw.internal_lbim_bytes_per_s;
  return static_cast<double>(weight_bytes) / (static_cast<double>(internal) * efficiency) +
         static_cast<double>(input_bytes) /
             static_cast<double>(device.external_bandwidth_bytes_per_s);
}

double host_prefill_s(const ModelConfig& model, std::uint64_t lin, const DeviceConfig& device,
                      const CalibrationConfig& calib) {
  check_calibration(calib);
  const auto ops = prefill_ops(model, lin);
  double flops = 0.0;
  for (const auto& op : ops) flops += static_cast<double>(op.flops);
  const double compute = host_gemm_latency_s(flops, device, calib.processor_utilization);
  const double memory = host_memory_latency_s(
      model.param_count + kv_cache_bytes(model, lin, 1), device, calib.host_memory_efficiency);
  return std::max(compute, memory);
}

double host_decode_step_s(const ModelConfig& model, std::uint64_t l_ctx, std::uint32_t batch,
                          const DeviceConfig& device, const CalibrationConfig& calib) {
  check_calibration(calib);
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
  const auto ops = decode_step_ops(model, l_ctx);
  std::uint64_t shared_weights = 0;
  std::uint64_t kv_weights = 0;
  std::uint64_t act_bytes = 0;
  double flops = 0.0;
  for (const auto& op : ops) {
    flops += static_cast<double>(op.flops);
    if (op.kind == OpKind::kHostActivation) {
      act_bytes += op.activation_bytes;
    } else if (op.flow.has_value()) {
      kv_weights += op.weight_bytes;
    } else {
      shared_weights += op.weight_bytes;
    }
  }
  const std::uint64_t bytes = shared_weights + std::uint64_t{batch} * (kv_weights + act_bytes);
  const double memory = host_memory_latency_s(bytes, device, calib.host_memory_efficiency);
  const double compute =
      host_gemm_latency_s(flops * batch, device, calib.processor_utilization);
  return std::max(memory, compute);
}

double pim_decode_step_s(const ModelConfig& model, std::uint64_t l_ctx, PimMode mode,
                         const DeviceConfig& device, const PimOrg& org,
                         const CalibrationConfig& calib) {
  check_calibration(calib);
  return pim_step_cost(model, l_ctx, mode, device, org, calib, nullptr);
}

LatencyReport simulate_gpu_only(const RunParams& p) {
  check_params(p);
  LatencyReport r;
  r.mode = ExecMode::kGpuOnly;
  r.fingerprint = make_fingerprint(p);
  const std::uint32_t B = p.batch;
  r.requests.resize(B);

  const double prefill = host_prefill_s(p.model, p.lin, p.device, p.calib);
  const std::uint64_t prefill_bytes =
      p.model.param_count + kv_cache_bytes(p.model, p.lin, 1);
  double t = 0.0;
  for (std::uint32_t i = 0; i < B; ++i) {
    r.timeline.push_back({Resource::kHost, t, t + prefill, "prefill", i});
    t += prefill;
    r.requests[i].prefill_done_s = t;
    r.host_busy_s += prefill;
    r.host_bytes += prefill_bytes;
  }

  for (std::uint64_t j = 0; j < p.lout; ++j) {
    const std::uint64_t l = p.lin + j;
    const double dur = host_decode_step_s(p.model, l, B, p.device, p.calib);
    r.timeline.push_back({Resource::kHost, t, t + dur, "decode_step", 0});
    const auto ops = decode_step_ops(p.model, l);
    for (const auto& op : ops) {
      if (op.kind == OpKind::kHostActivation) {
        r.host_bytes += std::uint64_t{B} * op.activation_bytes;
      } else if (op.flow.has_value()) {
        r.host_bytes += std::uint64_t{B} * op.weight_bytes;
      } else {
        r.host_bytes += op.weight_bytes;
      }
    }
    t += dur;
    r.host_busy_s += dur;
    for (std::uint32_t i = 0; i < B; ++i) {
      if (j == 0) r.requests[i].ttft_s = t;
      r.requests[i].decode_s += dur;
      if (j + 1 == p.lout) r.requests[i].done_s = t;
    }
  }

  r.end_to_end_s = t;
  r.ttft_s = r.requests.front().ttft_s;
  return r;
}

LatencyReport simulate_hbcem(const RunParams& p) { return run_pim_schedule(p, false); }

LatencyReport simulate_lbim(const RunParams& p) { return run_pim_schedule(p, true); }

LatencyReport simulate(ExecMode mode, const RunParams& params) {
  switch (mode) {
    case ExecMode::kGpuOnly:
      return simulate_gpu_only(params);
    case ExecMode::kHbcem:
      return simulate_hbcem(params);
    case ExecMode::kLbim:
      return simulate_lbim(params);
  }
  throw std::invalid_argument("unknown execution mode");
}

double speedup(const LatencyReport& report, const LatencyReport& baseline) {
  if (report.fingerprint != baseline.fingerprint) {
    throw std::invalid_argument("speedup requires reports of the same workload: " +
                                report.fingerprint + " vs " + baseline.fingerprint);
  }
  if (report.end_to_end_s <= 0.0) {
    throw std::invalid_argument("report has non-positive end-to-end time");
  }
  return baseline.end_to_end_s / report.end_to_end_s;
}

nlohmann::json calibration_to_json(const CalibrationConfig& c) {
  return nlohmann::json{{"processor_utilization", c.processor_utilization},
                        {"host_memory_efficiency", c.host_memory_efficiency},
                        {"pim_bandwidth_efficiency", c.pim_bandwidth_efficiency},
                        {"pim_layer_sync_s", c.pim_layer_sync_s},
                        {"lbim_host_bw_fraction", c.lbim_host_bw_fraction}};
}

CalibrationConfig calibration_from_json(const nlohmann::json& j) {
  CalibrationConfig c;
  c.processor_utilization = j.value("processor_utilization", c.processor_utilization);
  c.host_memory_efficiency = j.value("host_memory_efficiency", c.host_memory_efficiency);
  c.pim_bandwidth_efficiency = j.value("pim_bandwidth_efficiency", c.pim_bandwidth_efficiency);
  c.pim_layer_sync_s = j.value("pim_layer_sync_s", c.pim_layer_sync_s);
  c.lbim_host_bw_fraction = j.value("lbim_host_bw_fraction", c.lbim_host_bw_fraction);
  return c;
}

}  // namespace cdpim
