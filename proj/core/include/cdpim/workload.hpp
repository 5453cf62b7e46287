// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "cdpim/arch_config.hpp"
#include "cdpim/pim_isa.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cdpim {

// Decoder-only transformer shape. `param_count` is the exact weight count of
// the stacked decoder layers (4*H^2 attention + 3*H*ffn MLP per layer);
// embeddings and the LM head stay on the host and are not modeled.
struct ModelConfig {
  std::string name;
  std::uint32_t layers = 0;
  std::uint64_t hidden_dim = 0;
  std::uint64_t ffn_dim = 0;
  std::uint64_t param_count = 0;
};

enum class OpKind { kGemv, kGemm, kHostActivation };
enum class Placement { kHost, kPim };

// One operator instance. GEMV/GEMM compute (m x k) * (k x n); weight_bytes
// counts streamed int8 weights (0 for activation-only ops), activation_bytes
// the input vector/tensor bytes entering the op.
struct OpDescriptor {
  OpKind kind = OpKind::kGemv;
  std::string name;
  std::uint64_t m = 1;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t flops = 0;
  std::uint64_t weight_bytes = 0;
  std::uint64_t activation_bytes = 0;
  Placement placement = Placement::kHost;
  std::optional<GemvFlow> flow;  // set for KV-cache ops only
};

// Ops for one decode step of one request with `l_ctx` cached tokens
// (l_ctx >= 1; the step consumes the cache and appends one token).
std::vector<OpDescriptor> decode_step_ops(const ModelConfig& model, std::uint64_t l_ctx);

// Ops for prefilling one request of `l_in` prompt tokens (host GEMMs).
std::vector<OpDescriptor> prefill_ops(const ModelConfig& model, std::uint64_t l_in);

// Total int8 KV-cache footprint for `batch` requests at context length l_ctx.
std::uint64_t kv_cache_bytes(const ModelConfig& model, std::uint64_t l_ctx,
                             std::uint32_t batch = 1);

// Exact decoder-layer weight count implied by the dims.
std::uint64_t derived_param_count(const ModelConfig& model);

// Empty when consistent; entries describe bad fields or a param_count more
// than 5% away from the dims-derived value.
std::vector<ValidationError> validate(const ModelConfig& model);

ModelConfig model_preset(const std::string& name);
std::vector<std::string> model_preset_names();

ModelConfig model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelConfig& model);

}  // namespace cdpim
