// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "cdpim/perf_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace cdpim {

// Cross-product sweep description. The first entry of `modes` is the speedup
// baseline for every cell.
struct ExperimentSpec {
  std::vector<DeviceConfig> devices;
  std::vector<ModelConfig> models;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> lins;
  std::vector<std::uint64_t> louts;
  std::vector<std::uint32_t> batches;
  PimOrg org;
  CalibrationConfig calib;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentSpec& spec);

struct ResultRow {
  std::string device;
  std::string model;
  std::string mode;
  std::uint64_t lin = 0;
  std::uint64_t lout = 0;
  std::uint32_t batch = 1;
  double ttft_s = 0.0;
  double decode_s = 0.0;  // mean per-request decode time
  double end_to_end_s = 0.0;
  double speedup_vs_baseline = 1.0;
  double internal_bw_used = 0.0;
  double pim_utilization = 0.0;
};

// Runs the sweep; rows come back sorted by
// (device, model, lin, lout, batch, mode) for reproducible output.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::string results_csv_header();
void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& os);

// Grouped-bar SVG emitters. Missing cells leave a gap in the chart and an
// XML comment; the return value counts them.
//
// fig6: end-to-end speedup over the baseline mode, grouped by (lin, lout).
int emit_fig6_svg(const std::vector<ResultRow>& rows, std::ostream& os);
// fig7: LBIM speedup over HBCEM as lout sweeps (largest lin/batch in rows).
int emit_fig7_svg(const std::vector<ResultRow>& rows, std::ostream& os);
// fig8: TTFT share of end-to-end per device (largest lin, smallest lout).
int emit_fig8_svg(const std::vector<ResultRow>& rows, std::ostream& os);

// Output directory after applying the CDPIM_OUT_DIR environment override.
std::string resolve_out_dir(const std::string& configured);

}  // namespace cdpim
