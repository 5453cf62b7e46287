// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/arch_config.hpp"

#include <json.hpp>

#include <stdexcept>

namespace cdpim {

using nlohmann::json;

std::vector<ValidationError> validate(const DeviceConfig& device, const PimOrg& org) {
  std::vector<ValidationError> errs;
  auto bad = [&errs](const std::string& field, const std::string& msg) {
    errs.push_back({field, msg});
  };

  if (device.name.empty()) bad("device.name", "must be non-empty");
  if (device.compute_throughput_flops == 0)
    bad("device.compute_throughput_flops", "must be > 0");
  if (device.die_count == 0) bad("device.die_count", "must be > 0");
  if (device.pins_per_die == 0) bad("device.pins_per_die", "must be > 0");
  if (device.pin_rate_bits_per_s == 0) bad("device.pin_rate_bits_per_s", "must be > 0");
  if (device.die_capacity_bytes == 0) bad("device.die_capacity_bytes", "must be > 0");

  if (device.die_count != 0 && device.pins_per_die != 0 && device.pin_rate_bits_per_s != 0) {
    const std::uint64_t bits =
        std::uint64_t{device.die_count} * device.pins_per_die * device.pin_rate_bits_per_s;
    if (bits % 8 != 0) {
      bad("device.pin_rate_bits_per_s", "aggregate pin bits/s not divisible by 8");
    } else if (device.external_bandwidth_bytes_per_s != bits / 8) {
      bad("device.external_bandwidth_bytes_per_s",
          "must equal die_count * pins_per_die * pin_rate / 8 exactly");
    }
  }

  if (org.banks_per_die == 0) bad("org.banks_per_die", "must be > 0");
  if (org.cus_per_bank == 0) bad("org.cus_per_bank", "must be > 0");
  if (org.pbanks_per_bank != 2 * org.cus_per_bank)
    bad("org.pbanks_per_bank", "must equal 2 * cus_per_bank");
  if (org.internal_clock_hz == 0) bad("org.internal_clock_hz", "must be > 0");
  if (org.cu_clock_hz != 2 * org.internal_clock_hz)
    bad("org.cu_clock_hz", "must equal 2 * internal_clock_hz");
  if (org.burst_bytes_per_pbank == 0) bad("org.burst_bytes_per_pbank", "must be > 0");
  if (org.input_buffer_bytes == 0) bad("org.input_buffer_bytes", "must be > 0");
  if (org.output_buffer_bytes == 0) bad("org.output_buffer_bytes", "must be > 0");
  if (org.cu_area_um2 <= 0.0) bad("org.cu_area_um2", "must be > 0");
  if (org.cu_power_mw < 0.0) bad("org.cu_power_mw", "must be >= 0");
  if (org.die_area_um2 <= 0.0) bad("org.die_area_um2", "must be > 0");
  return errs;
}

BandwidthSummary derive_bandwidths(const DeviceConfig& device, const PimOrg& org) {
  const auto errs = validate(device, org);
  if (!errs.empty()) {
    throw std::invalid_argument("derive_bandwidths: invalid config: " + errs.front().field +
                                " " + errs.front().message);
  }
  BandwidthSummary bw;
  bw.external_bytes_per_s = device.external_bandwidth_bytes_per_s;
  bw.per_bank_bytes_per_cycle =
      std::uint64_t{org.pbanks_per_bank} * org.burst_bytes_per_pbank;
  const std::uint64_t bytes_per_cycle =
      std::uint64_t{device.die_count} * org.banks_per_die * bw.per_bank_bytes_per_cycle;
  bw.internal_hbcem_bytes_per_s = bytes_per_cycle * org.internal_clock_hz;
  bw.internal_lbim_bytes_per_s = bw.internal_hbcem_bytes_per_s / 2;
  // One INT8 MAC per streamed weight byte in full mode.
  bw.mac_throughput_per_s = bw.internal_hbcem_bytes_per_s;
  return bw;
}

OverheadReport estimate_overhead(const PimOrg& org, std::uint32_t die_count) {
  OverheadReport rep;
  rep.cu_count = std::uint64_t{die_count} * org.banks_per_die * org.cus_per_bank;
  rep.total_cu_area_um2 = static_cast<double>(rep.cu_count) * org.cu_area_um2;
  rep.total_cu_power_mw = static_cast<double>(rep.cu_count) * org.cu_power_mw;
  const double per_die_area =
      static_cast<double>(org.banks_per_die) * org.cus_per_bank * org.cu_area_um2;
  rep.area_fraction_per_die = org.die_area_um2 > 0.0 ? per_die_area / org.die_area_um2 : 0.0;
  return rep;
}

DeviceConfig device_preset(const std::string& name) {
  DeviceConfig d;
  d.name = name;
  d.pins_per_die = 16;
  d.pin_rate_bits_per_s = 6'400'000'000ULL;
  d.die_capacity_bytes = 4ULL * 1024 * 1024 * 1024;
  if (name == "jetson-agx-orin") {
    d.compute_throughput_flops = 42'500'000'000'000ULL;
    d.die_count = 16;
  } else if (name == "iphone-15-pro") {
    d.compute_throughput_flops = 4'290'000'000'000ULL;
    d.die_count = 4;
  } else {
    throw std::invalid_argument("unknown device preset: " + name);
  }
  d.external_bandwidth_bytes_per_s =
      std::uint64_t{d.die_count} * d.pins_per_die * d.pin_rate_bits_per_s / 8;
  return d;
}

std::vector<std::string> device_preset_names() {
  return {"jetson-agx-orin", "iphone-15-pro"};
}

namespace {

void require_schema_v1(const json& j, const char* what) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
    throw std::invalid_argument(std::string(what) + ": missing or unsupported schema_version");
  }
}

}  // namespace

DeviceConfig device_from_json(const json& j) {
  if (j.contains("preset")) {
    DeviceConfig d = device_preset(j.at("preset").get<std::string>());
    if (j.contains("name")) d.name = j.at("name").get<std::string>();
    return d;
  }
  require_schema_v1(j, "device config");
  DeviceConfig d;
  d.name = j.at("name").get<std::string>();
  d.compute_throughput_flops = j.at("compute_throughput_flops").get<std::uint64_t>();
  d.external_bandwidth_bytes_per_s =
      j.at("external_bandwidth_bytes_per_s").get<std::uint64_t>();
  d.die_count = j.at("die_count").get<std::uint32_t>();
  d.die_capacity_bytes = j.at("die_capacity_bytes").get<std::uint64_t>();
  d.pins_per_die = j.at("pins_per_die").get<std::uint32_t>();
  d.pin_rate_bits_per_s = j.at("pin_rate_bits_per_s").get<std::uint64_t>();
  return d;
}

json device_to_json(const DeviceConfig& d) {
  json j;
  j["schema_version"] = 1;
  j["name"] = d.name;
  j["compute_throughput_flops"] = d.compute_throughput_flops;
  j["external_bandwidth_bytes_per_s"] = d.external_bandwidth_bytes_per_s;
  j["die_count"] = d.die_count;
  j["die_capacity_bytes"] = d.die_capacity_bytes;
  j["pins_per_die"] = d.pins_per_die;
  j["pin_rate_bits_per_s"] = d.pin_rate_bits_per_s;
  return j;
}

PimOrg org_from_json(const json& j) {
  require_schema_v1(j, "pim org config");
  PimOrg o;
  auto get = [&j](const char* key, auto& out) {
    if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
  };
  get("banks_per_die", o.banks_per_die);
  get("pbanks_per_bank", o.pbanks_per_bank);
  get("cus_per_bank", o.cus_per_bank);
  get("internal_clock_hz", o.internal_clock_hz);
  get("cu_clock_hz", o.cu_clock_hz);
  get("burst_bytes_per_pbank", o.burst_bytes_per_pbank);
  get("input_buffer_bytes", o.input_buffer_bytes);
  get("output_buffer_bytes", o.output_buffer_bytes);
  get("cu_area_um2", o.cu_area_um2);
  get("cu_power_mw", o.cu_power_mw);
  get("die_area_um2", o.die_area_um2);
  get("tile_setup_cycles", o.tile_setup_cycles);
  return o;
}

json org_to_json(const PimOrg& o) {
  json j;
  j["schema_version"] = 1;
  j["banks_per_die"] = o.banks_per_die;
  j["pbanks_per_bank"] = o.pbanks_per_bank;
  j["cus_per_bank"] = o.cus_per_bank;
  j["internal_clock_hz"] = o.internal_clock_hz;
  j["cu_clock_hz"] = o.cu_clock_hz;
  j["burst_bytes_per_pbank"] = o.burst_bytes_per_pbank;
  j["input_buffer_bytes"] = o.input_buffer_bytes;
  j["output_buffer_bytes"] = o.output_buffer_bytes;
  j["cu_area_um2"] = o.cu_area_um2;
  j["cu_power_mw"] = o.cu_power_mw;
  j["die_area_um2"] = o.die_area_um2;
  j["tile_setup_cycles"] = o.tile_setup_cycles;
  return j;
}

}  // namespace cdpim
