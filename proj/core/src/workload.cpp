// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/workload.hpp"

#include <cmath>
#include <stdexcept>

namespace cdpim {

namespace {

OpDescriptor gemv(std::string name, std::uint64_t k, std::uint64_t n,
                  std::optional<GemvFlow> flow = std::nullopt) {
  OpDescriptor op;
  op.kind = OpKind::kGemv;
  op.name = std::move(name);
  op.m = 1;
  op.k = k;
  op.n = n;
  op.flops = 2 * k * n;
  op.weight_bytes = k * n;
  op.activation_bytes = k;
  op.placement = Placement::kPim;
  op.flow = flow;
  return op;
}

OpDescriptor gemm(std::string name, std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  OpDescriptor op;
  op.kind = OpKind::kGemm;
  op.name = std::move(name);
  op.m = m;
  op.k = k;
  op.n = n;
  op.flops = 2 * m * k * n;
  op.weight_bytes = k * n;
  op.activation_bytes = m * k;
  op.placement = Placement::kHost;
  return op;
}

OpDescriptor host_act(std::string name, std::uint64_t bytes) {
  OpDescriptor op;
  op.kind = OpKind::kHostActivation;
  op.name = std::move(name);
  op.m = 1;
  op.k = 0;
  op.n = 0;
  op.flops = 2 * bytes;
  op.weight_bytes = 0;
  op.activation_bytes = bytes;
  op.placement = Placement::kHost;
  return op;
}

void require_dims(const ModelConfig& model) {
  const auto errs = validate(model);
  if (!errs.empty()) {
    throw std::invalid_argument("invalid model config: " + errs.front().field + ": " +
                                errs.front().message);
  }
}

}  // namespace

std::vector<OpDescriptor> decode_step_ops(const ModelConfig& model, std::uint64_t l_ctx) {
  require_dims(model);
  if (l_ctx == 0) {
    throw std::invalid_argument("decode step requires at least one cached token");
  }
  const std::uint64_t h = model.hidden_dim;
  const std::uint64_t f = model.ffn_dim;
  std::vector<OpDescriptor> ops;
  ops.reserve(std::size_t{model.layers} * 8);
  for (std::uint32_t l = 0; l < model.layers; ++l) {
    ops.push_back(gemv("qkv_proj", h, 3 * h));
    ops.push_back(gemv("attn_score", h, l_ctx, GemvFlow::kK));
    // Softmax plus the residual/norm glue between the attention halves.
    ops.push_back(host_act("softmax", 2 * l_ctx + 4 * h));
    ops.push_back(gemv("attn_out", l_ctx, h, GemvFlow::kV));
    ops.push_back(gemv("out_proj", h, h));
    ops.push_back(gemv("ffn_gate", h, f));
    ops.push_back(gemv("ffn_up", h, f));
    ops.push_back(gemv("ffn_down", f, h));
  }
  return ops;
}

std::vector<OpDescriptor> prefill_ops(const ModelConfig& model, std::uint64_t l_in) {
  require_dims(model);
  if (l_in == 0) throw std::invalid_argument("prefill requires at least one prompt token");
  const std::uint64_t h = model.hidden_dim;
  const std::uint64_t f = model.ffn_dim;
  std::vector<OpDescriptor> ops;
  ops.reserve(std::size_t{model.layers} * 8);
  for (std::uint32_t l = 0; l < model.layers; ++l) {
    ops.push_back(gemm("qkv_proj", l_in, h, 3 * h));
    ops.push_back(gemm("attn_score", l_in, h, l_in));
    ops.push_back(host_act("softmax", l_in * (2 * l_in + 4 * h)));
    ops.push_back(gemm("attn_out", l_in, l_in, h));
    ops.push_back(gemm("out_proj", l_in, h, h));
    ops.push_back(gemm("ffn_gate", l_in, h, f));
    ops.push_back(gemm("ffn_up", l_in, h, f));
    ops.push_back(gemm("ffn_down", l_in, f, h));
  }
  return ops;
}

std::uint64_t kv_cache_bytes(const ModelConfig& model, std::uint64_t l_ctx,
                             std::uint32_t batch) {
  return 2ULL * model.layers * model.hidden_dim * l_ctx * batch;
}

std::uint64_t derived_param_count(const ModelConfig& model) {
  const std::uint64_t h = model.hidden_dim;
  return std::uint64_t{model.layers} * (4 * h * h + 3 * h * model.ffn_dim);
}

std::vector<ValidationError> validate(const ModelConfig& model) {
  std::vector<ValidationError> errs;
  if (model.name.empty()) errs.push_back({"name", "must be non-empty"});
  if (model.layers == 0) errs.push_back({"layers", "must be > 0"});
  if (model.hidden_dim == 0) errs.push_back({"hidden_dim", "must be > 0"});
  if (model.ffn_dim == 0) errs.push_back({"ffn_dim", "must be > 0"});
  if (model.param_count == 0) {
    errs.push_back({"param_count", "must be > 0"});
  } else if (model.layers > 0 && model.hidden_dim > 0 && model.ffn_dim > 0) {
    const double derived = static_cast<double>(derived_param_count(model));
    const double stated = static_cast<double>(model.param_count);
    if (std::abs(derived - stated) / stated > 0.05) {
      errs.push_back({"param_count", "more than 5% away from dims-derived weight count"});
    }
  }
  return errs;
}

ModelConfig model_preset(const std::string& name) {
  ModelConfig m;
  m.name = name;
  if (name == "llama-1b") {
    m.layers = 16;
    m.hidden_dim = 2048;
    m.ffn_dim = 8192;
  } else if (name == "llama-7b") {
    m.layers = 32;
    m.hidden_dim = 4096;
    m.ffn_dim = 11008;
  } else if (name == "llama-13b") {
    m.layers = 40;
    m.hidden_dim = 5120;
    m.ffn_dim = 13824;
  } else {
    throw std::invalid_argument("unknown model preset: " + name);
  }
  m.param_count = derived_param_count(m);
  return m;
}

std::vector<std::string> model_preset_names() { return {"llama-1b", "llama-7b", "llama-13b"}; }

ModelConfig model_from_json(const nlohmann::json& j) {
  if (j.contains("preset")) return model_preset(j.at("preset").get<std::string>());
  if (j.value("schema_version", 0) != 1) {
    throw std::invalid_argument("model json requires schema_version 1");
  }
  ModelConfig m;
  m.name = j.at("name").get<std::string>();
  m.layers = j.at("layers").get<std::uint32_t>();
  m.hidden_dim = j.at("hidden_dim").get<std::uint64_t>();
  m.ffn_dim = j.at("ffn_dim").get<std::uint64_t>();
  m.param_count = j.value("param_count", std::uint64_t{0});
  if (m.param_count == 0) m.param_count = derived_param_count(m);
  return m;
}

nlohmann::json model_to_json(const ModelConfig& model) {
  return nlohmann::json{{"schema_version", 1},
                        {"name", model.name},
                        {"layers", model.layers},
                        {"hidden_dim", model.hidden_dim},
                        {"ffn_dim", model.ffn_dim},
                        {"param_count", model.param_count}};
}

}  // namespace cdpim
