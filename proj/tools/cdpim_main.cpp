// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/kv_mapping.hpp"
#include "cdpim/perf_sim.hpp"
#include "cdpim/report.hpp"
#include "cdpim/verify.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

struct SweepOpts {
  std::string spec_path;
  std::vector<std::string> devices;
  std::vector<std::string> models;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> lins;
  std::vector<std::uint64_t> louts;
  std::vector<std::uint32_t> batches;
  std::string calib_path;
  std::string out_dir;
  std::uint64_t seed = 42;
};

void add_sweep_options(CLI::App* sub, SweepOpts& o) {
  sub->add_option("--spec", o.spec_path, "experiment spec JSON file")
      ->check(CLI::ExistingFile);
  sub->add_option("--device", o.devices, "device preset name (repeatable)")->delimiter(',');
  sub->add_option("--model", o.models, "model preset name (repeatable)")->delimiter(',');
  sub->add_option("--modes", o.modes, "execution modes, first is the baseline")
      ->delimiter(',');
  sub->add_option("--lin", o.lins, "prompt lengths")->delimiter(',');
  sub->add_option("--lout", o.louts, "generation lengths")->delimiter(',');
  sub->add_option("--batch", o.batches, "batch sizes")->delimiter(',');
  sub->add_option("--calibration", o.calib_path, "calibration JSON file")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", o.out_dir, "output directory (CDPIM_OUT_DIR overrides)");
  sub->add_option("--seed", o.seed, "seed recorded in the spec");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

cdpim::ExperimentSpec build_spec(const SweepOpts& o) {
  cdpim::ExperimentSpec spec;
  if (!o.spec_path.empty()) {
    spec = cdpim::experiment_from_json(load_json(o.spec_path));
  } else {
    spec.devices = {cdpim::device_preset("jetson-agx-orin")};
    spec.models = {cdpim::model_preset("llama-7b")};
    spec.modes = {"gpu-only", "hbcem", "lbim"};
    spec.lins = {128, 2048};
    spec.louts = {128, 2048};
    spec.batches = {1};
  }
  if (!o.devices.empty()) {
    spec.devices.clear();
    for (const auto& d : o.devices) spec.devices.push_back(cdpim::device_preset(d));
  }
  if (!o.models.empty()) {
    spec.models.clear();
    for (const auto& m : o.models) spec.models.push_back(cdpim::model_preset(m));
  }
  if (!o.modes.empty()) spec.modes = o.modes;
  if (!o.lins.empty()) spec.lins = o.lins;
  if (!o.louts.empty()) spec.louts = o.louts;
  if (!o.batches.empty()) spec.batches = o.batches;
  if (!o.calib_path.empty()) {
    spec.calib = cdpim::calibration_from_json(load_json(o.calib_path));
  }
  if (!o.out_dir.empty()) spec.out_dir = o.out_dir;
  spec.seed = o.seed;
  return spec;
}

std::filesystem::path prepare_out_dir(const cdpim::ExperimentSpec& spec) {
  const std::filesystem::path dir = cdpim::resolve_out_dir(spec.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_run(const SweepOpts& o, bool emit_figures) {
  const cdpim::ExperimentSpec spec = build_spec(o);
  const auto rows = cdpim::run_experiment(spec);
  const auto dir = prepare_out_dir(spec);

  const auto csv_path = dir / "results.csv";
  {
    std::ofstream out(csv_path);
    cdpim::write_results_csv(rows, out);
  }
  std::cout << "wrote " << rows.size() << " rows to " << csv_path.string() << "\n";

  if (emit_figures) {
    const struct {
      const char* file;
      int (*emit)(const std::vector<cdpim::ResultRow>&, std::ostream&);
    } figs[] = {{"fig6.svg", cdpim::emit_fig6_svg},
                {"fig7.svg", cdpim::emit_fig7_svg},
                {"fig8.svg", cdpim::emit_fig8_svg}};
    for (const auto& f : figs) {
      const auto path = dir / f.file;
      std::ofstream out(path);
      const int missing = f.emit(rows, out);
      std::cout << "wrote " << path.string();
      if (missing > 0) std::cout << " (" << missing << " missing cells)";
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_dump_layout(const std::string& flow, std::uint64_t rows, std::uint64_t cols,
                    std::uint32_t dies, const std::string& out_path, bool trace,
                    const std::string& mode) {
  const cdpim::PimOrg org;
  const cdpim::LayoutPlan plan = flow == "k" ? cdpim::map_k(rows, cols, org, dies)
                                             : cdpim::map_v(rows, cols, org, dies);
  if (out_path.empty()) {
    cdpim::dump_layout_csv(plan, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    cdpim::dump_layout_csv(plan, out);
    std::cout << "wrote layout for (" << rows << "x" << cols << ") to " << out_path << "\n";
  }
  if (trace) {
    const cdpim::PimMode pm = mode == "half" ? cdpim::PimMode::kHalf : cdpim::PimMode::kFull;
    std::uint64_t cycle = 0;
    for (std::uint64_t t = 0; t < plan.passes; ++t) {
      const auto instr = cdpim::instruction_for_mode(pm, t);
      for (std::uint32_t b = 0; b < plan.occupied_banks_in_pass(t); ++b) {
        std::cout << cdpim::format_trace_record(cycle, instr, b) << "\n";
      }
      const std::uint64_t cyc = plan.pass_cycles(t);
      cycle += pm == cdpim::PimMode::kHalf ? 2 * cyc : cyc;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CD-PIM: bank-level LPDDR5 processing-in-memory simulator"};
  app.require_subcommand(1);

  SweepOpts run_opts;
  auto* run = app.add_subcommand("run", "run a sweep and write results.csv");
  add_sweep_options(run, run_opts);

  SweepOpts emit_opts;
  auto* emit = app.add_subcommand("emit", "run a sweep and emit results.csv + SVG charts");
  add_sweep_options(emit, emit_opts);

  std::uint64_t verify_seed = 42;
  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  verify->add_option("--seed", verify_seed, "randomized-check seed");

  std::string dl_flow = "k";
  std::uint64_t dl_rows = 64, dl_cols = 128;
  std::uint32_t dl_dies = 1;
  std::string dl_out, dl_mode = "full";
  bool dl_trace = false;
  auto* dump = app.add_subcommand("dump-layout", "dump a KV-cache chunk layout as CSV");
  dump->add_option("--flow", dl_flow, "k or v")->check(CLI::IsMember({"k", "v"}));
  dump->add_option("--rows", dl_rows, "matrix rows")->required();
  dump->add_option("--cols", dl_cols, "matrix cols")->required();
  dump->add_option("--dies", dl_dies, "die count");
  dump->add_option("--out", dl_out, "CSV output file (stdout when omitted)");
  dump->add_flag("--trace", dl_trace, "print an instruction trace per pass");
  dump->add_option("--mode", dl_mode, "trace mode")->check(CLI::IsMember({"full", "half"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, false);
    if (emit->parsed()) return cmd_run(emit_opts, true);
    if (verify->parsed()) {
      const auto results = cdpim::run_acceptance_checks(verify_seed);
      const int failures = cdpim::print_check_results(results, std::cout);
      return failures == 0 ? 0 : 1;
    }
    if (dump->parsed()) {
      return cmd_dump_layout(dl_flow, dl_rows, dl_cols, dl_dies, dl_out, dl_trace, dl_mode);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
