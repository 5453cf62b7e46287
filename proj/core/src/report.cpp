// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cdpim {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::vector<std::uint64_t> u64_list(const nlohmann::json& j, const char* plural,
                                    const char* singular,
                                    std::vector<std::uint64_t> fallback) {
  const nlohmann::json* v = nullptr;
  if (j.contains(plural)) v = &j.at(plural);
  else if (j.contains(singular)) v = &j.at(singular);
  if (v == nullptr) return fallback;
  std::vector<std::uint64_t> out;
  if (v->is_array()) {
    for (const auto& e : *v) out.push_back(e.get<std::uint64_t>());
  } else {
    out.push_back(v->get<std::uint64_t>());
  }
  if (out.empty()) throw std::invalid_argument(std::string(plural) + " must be non-empty");
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bar {
  std::string label;
  double value = 0.0;
  bool present = false;
};

struct Group {
  std::string label;
  std::vector<Bar> bars;
};

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                          "#59a14f", "#edc948", "#b07aa1", "#9c755f"};

int render_bar_chart(std::ostream& os, const std::string& title, const std::string& y_label,
                     const std::vector<Group>& groups, double reference_line) {
  const int bar_w = 26;
  const int bar_gap = 4;
  const int group_gap = 36;
  const int margin_l = 70, margin_r = 160, margin_t = 50, margin_b = 60;
  const int plot_h = 300;

  std::size_t bars_per_group = 0;
  for (const auto& g : groups) bars_per_group = std::max(bars_per_group, g.bars.size());
  const int group_w =
      static_cast<int>(bars_per_group) * (bar_w + bar_gap) - bar_gap + group_gap;
  const int plot_w = std::max<int>(200, static_cast<int>(groups.size()) * group_w);
  const int width = margin_l + plot_w + margin_r;
  const int height = margin_t + plot_h + margin_b;

  double max_v = reference_line;
  for (const auto& g : groups) {
    for (const auto& b : g.bars) {
      if (b.present) max_v = std::max(max_v, b.value);
    }
  }
  if (max_v <= 0.0) max_v = 1.0;
  const double scale = plot_h / (max_v * 1.15);
  const int base_y = margin_t + plot_h;

  std::vector<std::string> legend;
  for (const auto& g : groups) {
    for (const auto& b : g.bars) {
      if (std::find(legend.begin(), legend.end(), b.label) == legend.end()) {
        legend.push_back(b.label);
      }
    }
  }

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\">\n";
  os << "<text x=\"" << margin_l << "\" y=\"24\" font-size=\"16\">" << xml_escape(title)
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << margin_t + plot_h / 2
     << "\" font-size=\"12\" transform=\"rotate(-90 14 " << margin_t + plot_h / 2 << ")\">"
     << xml_escape(y_label) << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double v = max_v * 1.15 * i / 4.0;
    const int y = base_y - static_cast<int>(v * scale);
    os << "<line x1=\"" << margin_l << "\" y1=\"" << y << "\" x2=\"" << margin_l + plot_w
       << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << margin_l - 6 << "\" y=\"" << y + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt("%.2f", v) << "</text>\n";
  }
  if (reference_line > 0.0) {
    const int y = base_y - static_cast<int>(reference_line * scale);
    os << "<line x1=\"" << margin_l << "\" y1=\"" << y << "\" x2=\"" << margin_l + plot_w
       << "\" y2=\"" << y << "\" stroke=\"#888888\" stroke-dasharray=\"5,3\"/>\n";
  }

  int missing = 0;
  int gx = margin_l + group_gap / 2;
  for (const auto& g : groups) {
    int bx = gx;
    for (const auto& b : g.bars) {
      if (!b.present) {
        os << "<!-- warning: missing cell group=" << xml_escape(g.label) << " bar="
           << xml_escape(b.label) << " -->\n";
        ++missing;
      } else {
        const int h = std::max(1, static_cast<int>(b.value * scale));
        const std::size_t ci =
            std::find(legend.begin(), legend.end(), b.label) - legend.begin();
        os << "<rect x=\"" << bx << "\" y=\"" << base_y - h << "\" width=\"" << bar_w
           << "\" height=\"" << h << "\" fill=\""
           << kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))] << "\"/>\n";
        os << "<text x=\"" << bx + bar_w / 2 << "\" y=\"" << base_y - h - 4
           << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt("%.2f", b.value)
           << "</text>\n";
      }
      bx += bar_w + bar_gap;
    }
    const int gcenter =
        gx + (static_cast<int>(g.bars.size()) * (bar_w + bar_gap) - bar_gap) / 2;
    os << "<text x=\"" << gcenter << "\" y=\"" << base_y + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << xml_escape(g.label)
       << "</text>\n";
    gx += group_w;
  }

  os << "<line x1=\"" << margin_l << "\" y1=\"" << base_y << "\" x2=\"" << margin_l + plot_w
     << "\" y2=\"" << base_y << "\" stroke=\"#333333\"/>\n";

  int ly = margin_t;
  for (std::size_t i = 0; i < legend.size(); ++i) {
    os << "<rect x=\"" << margin_l + plot_w + 16 << "\" y=\"" << ly << "\" width=\"12\""
       << " height=\"12\" fill=\"" << kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))]
       << "\"/>\n";
    os << "<text x=\"" << margin_l + plot_w + 32 << "\" y=\"" << ly + 10
       << "\" font-size=\"11\">" << xml_escape(legend[i]) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return missing;
}

struct RowKey {
  std::string device, model, mode;
  std::uint64_t lin, lout;
  std::uint32_t batch;
};

const ResultRow* find_row(const std::vector<ResultRow>& rows, const RowKey& k) {
  for (const auto& r : rows) {
    if (r.device == k.device && r.model == k.model && r.mode == k.mode && r.lin == k.lin &&
        r.lout == k.lout && r.batch == k.batch) {
      return &r;
    }
  }
  return nullptr;
}

template <typename T, typename F>
std::vector<T> distinct_sorted(const std::vector<ResultRow>& rows, F get) {
  std::set<T> s;
  for (const auto& r : rows) s.insert(get(r));
  return std::vector<T>(s.begin(), s.end());
}

}  // namespace

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != 1) {
    throw std::invalid_argument("experiment json requires schema_version 1");
  }
  ExperimentSpec spec;
  if (j.contains("devices")) {
    for (const auto& d : j.at("devices")) spec.devices.push_back(device_from_json(d));
  } else if (j.contains("device")) {
    spec.devices.push_back(device_from_json(j.at("device")));
  } else {
    spec.devices.push_back(device_preset("jetson-agx-orin"));
  }
  if (j.contains("models")) {
    for (const auto& m : j.at("models")) spec.models.push_back(model_from_json(m));
  } else if (j.contains("model")) {
    spec.models.push_back(model_from_json(j.at("model")));
  } else {
    throw std::invalid_argument("experiment json requires model(s)");
  }
  if (j.contains("modes")) {
    spec.modes = j.at("modes").get<std::vector<std::string>>();
  } else {
    spec.modes = {"gpu-only", "hbcem", "lbim"};
  }
  if (spec.modes.empty()) throw std::invalid_argument("modes must be non-empty");
  for (const auto& m : spec.modes) exec_mode_from_string(m);  // validate names

  spec.lins = u64_list(j, "lins", "lin", {128, 2048});
  spec.louts = u64_list(j, "louts", "lout", {128, 2048});
  const auto batches64 = u64_list(j, "batches", "batch", {1});
  for (auto b : batches64) spec.batches.push_back(static_cast<std::uint32_t>(b));
  if (j.contains("org")) spec.org = org_from_json(j.at("org"));
  if (j.contains("calibration")) spec.calib = calibration_from_json(j.at("calibration"));
  spec.out_dir = j.value("out_dir", std::string("out"));
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

nlohmann::json experiment_to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["devices"] = nlohmann::json::array();
  for (const auto& d : spec.devices) j["devices"].push_back(device_to_json(d));
  j["models"] = nlohmann::json::array();
  for (const auto& m : spec.models) j["models"].push_back(model_to_json(m));
  j["modes"] = spec.modes;
  j["lins"] = spec.lins;
  j["louts"] = spec.louts;
  j["batches"] = spec.batches;
  j["org"] = org_to_json(spec.org);
  j["calibration"] = calibration_to_json(spec.calib);
  j["out_dir"] = spec.out_dir;
  j["seed"] = spec.seed;
  return j;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.modes.empty()) throw std::invalid_argument("modes must be non-empty");
  std::vector<ResultRow> rows;
  for (const auto& device : spec.devices) {
    for (const auto& model : spec.models) {
      for (auto lin : spec.lins) {
        for (auto lout : spec.louts) {
          for (auto batch : spec.batches) {
            RunParams p;
            p.device = device;
            p.org = spec.org;
            p.model = model;
            p.lin = lin;
            p.lout = lout;
            p.batch = batch;
            p.calib = spec.calib;
            LatencyReport baseline;
            for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
              const LatencyReport rep = simulate(exec_mode_from_string(spec.modes[mi]), p);
              if (mi == 0) baseline = rep;
              ResultRow row;
              row.device = device.name;
              row.model = model.name;
              row.mode = spec.modes[mi];
              row.lin = lin;
              row.lout = lout;
              row.batch = batch;
              row.ttft_s = rep.ttft_s;
              double dsum = 0.0;
              for (const auto& rq : rep.requests) dsum += rq.decode_s;
              row.decode_s = dsum / static_cast<double>(batch);
              row.end_to_end_s = rep.end_to_end_s;
              row.speedup_vs_baseline = speedup(rep, baseline);
              row.internal_bw_used = rep.pim_internal_bw_used;
              row.pim_utilization = rep.pim_utilization;
              rows.push_back(row);
            }
          }
        }
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.device, a.model, a.lin, a.lout, a.batch, a.mode) <
           std::tie(b.device, b.model, b.lin, b.lout, b.batch, b.mode);
  });
  return rows;
}

std::string results_csv_header() {
  return "device,model,mode,lin,lout,batch,ttft_s,decode_s,end_to_end_s,"
         "speedup_vs_baseline,internal_bw_used,pim_utilization";
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << results_csv_header() << '\n';
  for (const auto& r : rows) {
    os << r.device << ',' << r.model << ',' << r.mode << ',' << r.lin << ',' << r.lout << ','
       << r.batch << ',' << fmt("%.9g", r.ttft_s) << ',' << fmt("%.9g", r.decode_s) << ','
       << fmt("%.9g", r.end_to_end_s) << ',' << fmt("%.6f", r.speedup_vs_baseline) << ','
       << fmt("%.6g", r.internal_bw_used) << ',' << fmt("%.6f", r.pim_utilization) << '\n';
  }
}

int emit_fig6_svg(const std::vector<ResultRow>& rows, std::ostream& os) {
  const auto devices = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.device;
  });
  const auto models = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.model;
  });
  const auto lins = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lin;
  });
  const auto louts = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lout;
  });
  const auto batches = distinct_sorted<std::uint32_t>(rows, [](const ResultRow& r) {
    return r.batch;
  });
  if (rows.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\"><!-- warning: no rows --></svg>\n";
    return 1;
  }
  const std::uint32_t batch = batches.front();
  std::vector<std::string> pim_modes;
  for (const char* m : {"hbcem", "lbim"}) {
    for (const auto& r : rows) {
      if (r.mode == m) {
        pim_modes.push_back(m);
        break;
      }
    }
  }
  std::vector<Group> groups;
  for (auto lin : lins) {
    for (auto lout : louts) {
      Group g;
      g.label = "lin=" + std::to_string(lin) + " lout=" + std::to_string(lout);
      for (const auto& dev : devices) {
        for (const auto& model : models) {
          for (const auto& mode : pim_modes) {
            Bar b;
            b.label = (devices.size() > 1 ? dev + " " : std::string()) + model + " " + mode;
            const ResultRow* r = find_row(rows, {dev, model, mode, lin, lout, batch});
            if (r != nullptr) {
              b.present = true;
              b.value = r->speedup_vs_baseline;
            }
            g.bars.push_back(b);
          }
        }
      }
      groups.push_back(g);
    }
  }
  return render_bar_chart(os, "End-to-end speedup over baseline", "speedup (x)", groups, 1.0);
}

int emit_fig7_svg(const std::vector<ResultRow>& rows, std::ostream& os) {
  if (rows.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\"><!-- warning: no rows --></svg>\n";
    return 1;
  }
  const auto devices = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.device;
  });
  const auto models = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.model;
  });
  const auto lins = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lin;
  });
  const auto louts = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lout;
  });
  const auto batches = distinct_sorted<std::uint32_t>(rows, [](const ResultRow& r) {
    return r.batch;
  });
  const std::uint64_t lin = lins.back();
  const std::uint32_t batch = batches.back();
  std::vector<Group> groups;
  for (auto lout : louts) {
    Group g;
    g.label = "lout=" + std::to_string(lout);
    for (const auto& dev : devices) {
      for (const auto& model : models) {
        Bar b;
        b.label = (devices.size() > 1 ? dev + " " : std::string()) + model;
        const ResultRow* hb = find_row(rows, {dev, model, "hbcem", lin, lout, batch});
        const ResultRow* lb = find_row(rows, {dev, model, "lbim", lin, lout, batch});
        if (hb != nullptr && lb != nullptr && lb->end_to_end_s > 0.0) {
          b.present = true;
          b.value = hb->end_to_end_s / lb->end_to_end_s;
        }
        g.bars.push_back(b);
      }
    }
    groups.push_back(g);
  }
  return render_bar_chart(os, "LBIM speedup over HBCEM (lin=" + std::to_string(lin) +
                                  ", batch=" + std::to_string(batch) + ")",
                          "speedup (x)", groups, 1.0);
}

int emit_fig8_svg(const std::vector<ResultRow>& rows, std::ostream& os) {
  if (rows.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\"><!-- warning: no rows --></svg>\n";
    return 1;
  }
  const auto devices = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.device;
  });
  const auto models = distinct_sorted<std::string>(rows, [](const ResultRow& r) {
    return r.model;
  });
  const auto lins = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lin;
  });
  const auto louts = distinct_sorted<std::uint64_t>(rows, [](const ResultRow& r) {
    return r.lout;
  });
  const auto batches = distinct_sorted<std::uint32_t>(rows, [](const ResultRow& r) {
    return r.batch;
  });
  const std::uint64_t lin = lins.back();
  const std::uint64_t lout = louts.front();
  const std::uint32_t batch = batches.front();
  std::vector<Group> groups;
  for (const auto& dev : devices) {
    Group g;
    g.label = dev;
    for (const auto& model : models) {
      Bar b;
      b.label = model;
      const ResultRow* r = find_row(rows, {dev, model, "hbcem", lin, lout, batch});
      if (r != nullptr && r->end_to_end_s > 0.0) {
        b.present = true;
        b.value = r->ttft_s / r->end_to_end_s;
      }
      g.bars.push_back(b);
    }
    groups.push_back(g);
  }
  return render_bar_chart(os, "TTFT fraction of end-to-end (hbcem, lin=" +
                                  std::to_string(lin) + ", lout=" + std::to_string(lout) + ")",
                          "fraction", groups, 0.0);
}

std::string resolve_out_dir(const std::string& configured) {
  const char* env = std::getenv("CDPIM_OUT_DIR");
  if (env != nullptr && env[0] != '\0') return env;
  return configured;
}

}  // namespace cdpim
