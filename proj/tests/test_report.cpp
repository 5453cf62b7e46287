// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

using namespace cdpim;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.devices = {device_preset("jetson-agx-orin")};
  spec.models = {model_preset("llama-1b")};
  spec.modes = {"gpu-only", "hbcem", "lbim"};
  spec.lins = {16};
  spec.louts = {4};
  spec.batches = {1, 2};
  return spec;
}

}  // namespace

TEST_CASE("experiment json fills defaults and validates") {
  const nlohmann::json j{{"schema_version", 1},
                         {"models", nlohmann::json::array({{{"preset", "llama-1b"}}})},
                         {"lin", 16},
                         {"lout", 4}};
  const ExperimentSpec spec = experiment_from_json(j);
  REQUIRE(spec.devices.size() == 1);
  CHECK(spec.devices[0].name == "jetson-agx-orin");
  REQUIRE(spec.models.size() == 1);
  CHECK(spec.models[0].param_count == 1'073'741'824ULL);
  CHECK(spec.modes == std::vector<std::string>{"gpu-only", "hbcem", "lbim"});
  CHECK(spec.lins == std::vector<std::uint64_t>{16});
  CHECK(spec.louts == std::vector<std::uint64_t>{4});
  CHECK(spec.batches == std::vector<std::uint32_t>{1});
  CHECK(spec.out_dir == "out");

  CHECK_THROWS_AS(experiment_from_json(nlohmann::json{{"schema_version", 1}}),
                  std::invalid_argument);  // no model
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json{
                      {"schema_version", 2},
                      {"models", nlohmann::json::array({{{"preset", "llama-1b"}}})}}),
                  std::invalid_argument);
  nlohmann::json bad = j;
  bad["modes"] = {"warp"};
  CHECK_THROWS_AS(experiment_from_json(bad), std::invalid_argument);
}

TEST_CASE("experiment json round trips") {
  ExperimentSpec spec = small_spec();
  spec.calib.pim_layer_sync_s = 5e-6;
  spec.out_dir = "results";
  spec.seed = 7;
  const ExperimentSpec back = experiment_from_json(experiment_to_json(spec));
  CHECK(back.devices[0].name == spec.devices[0].name);
  CHECK(back.models[0].param_count == spec.models[0].param_count);
  CHECK(back.modes == spec.modes);
  CHECK(back.lins == spec.lins);
  CHECK(back.louts == spec.louts);
  CHECK(back.batches == spec.batches);
  CHECK(back.calib.pim_layer_sync_s == 5e-6);
  CHECK(back.out_dir == "results");
  CHECK(back.seed == 7);
}

TEST_CASE("run_experiment covers the cross product in sorted order") {
  const ExperimentSpec spec = small_spec();
  const auto rows = run_experiment(spec);
  REQUIRE(rows.size() == 3 * 2);  // modes x batches

  const bool sorted = std::is_sorted(
      rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.device, a.model, a.lin, a.lout, a.batch, a.mode) <
               std::tie(b.device, b.model, b.lin, b.lout, b.batch, b.mode);
      });
  CHECK(sorted);
  for (const auto& r : rows) {
    CHECK(r.end_to_end_s > 0.0);
    CHECK(r.ttft_s > 0.0);
    CHECK(r.decode_s > 0.0);
    if (r.mode == "gpu-only") {
      CHECK(r.speedup_vs_baseline == 1.0);  // first mode is its own baseline
      CHECK(r.pim_utilization == 0.0);
    } else {
      CHECK(r.speedup_vs_baseline > 0.0);
      CHECK(r.internal_bw_used > 0.0);
    }
  }
}

TEST_CASE("csv output is stable and complete") {
  const auto rows = run_experiment(small_spec());
  std::ostringstream a, b;
  write_results_csv(rows, a);
  write_results_csv(rows, b);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == results_csv_header());
  CHECK(line ==
        "device,model,mode,lin,lout,batch,ttft_s,decode_s,end_to_end_s,"
        "speedup_vs_baseline,internal_bw_used,pim_utilization");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 11);
    CHECK(line.rfind("jetson-agx-orin,llama-1b,", 0) == 0);
  }
  CHECK(n == rows.size());
}

TEST_CASE("figure emitters render every populated cell") {
  const auto rows = run_experiment(small_spec());
  std::ostringstream f6, f7, f8;
  CHECK(emit_fig6_svg(rows, f6) == 0);
  CHECK(emit_fig7_svg(rows, f7) == 0);
  CHECK(emit_fig8_svg(rows, f8) == 0);
  for (const auto* s : {&f6, &f7, &f8}) {
    CHECK(s->str().rfind("<svg", 0) == 0);
    CHECK(s->str().find("</svg>") != std::string::npos);
    CHECK(s->str().find("missing cell") == std::string::npos);
  }
  CHECK(f6.str().find("speedup") != std::string::npos);
  CHECK(f8.str().find("TTFT fraction") != std::string::npos);
}

TEST_CASE("figure emitters flag missing cells instead of failing") {
  auto rows = run_experiment(small_spec());
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const ResultRow& r) { return r.mode == "lbim"; }),
             rows.end());
  std::ostringstream os;
  const int missing = emit_fig7_svg(rows, os);
  CHECK(missing > 0);
  CHECK(os.str().find("missing cell") != std::string::npos);
  CHECK(os.str().find("</svg>") != std::string::npos);

  std::ostringstream empty;
  CHECK(emit_fig6_svg({}, empty) == 1);
}

TEST_CASE("out dir resolution honors the environment override") {
  unsetenv("CDPIM_OUT_DIR");
  CHECK(resolve_out_dir("out") == "out");
  setenv("CDPIM_OUT_DIR", "/tmp/cdpim-test-out", 1);
  CHECK(resolve_out_dir("out") == "/tmp/cdpim-test-out");
  setenv("CDPIM_OUT_DIR", "", 1);
  CHECK(resolve_out_dir("out") == "out");  // empty override is ignored
  unsetenv("CDPIM_OUT_DIR");
}
