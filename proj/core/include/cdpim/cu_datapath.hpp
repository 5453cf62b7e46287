// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cdpim {

// INT8 operand matrix, row major.
struct Int8Matrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::int8_t> data;

  static Int8Matrix zeros(std::uint32_t r, std::uint32_t c) {
    return Int8Matrix{r, c, std::vector<std::int8_t>(std::size_t{r} * c, 0)};
  }
  std::int8_t at(std::uint32_t r, std::uint32_t c) const {
    return data[std::size_t{r} * cols + c];
  }
  std::int8_t& at(std::uint32_t r, std::uint32_t c) {
    return data[std::size_t{r} * cols + c];
  }
};

inline constexpr std::uint32_t kCuInputBytes = 64;
inline constexpr std::uint32_t kCuAccumulators = 128;
inline constexpr std::uint32_t kChunkBytes = 32;

// Architectural state of one compute unit: a 64-byte input buffer, INT32
// accumulator registers, and throughput counters. Accumulation never wraps:
// INT32 overflow throws std::overflow_error.
struct CuState {
  std::array<std::int8_t, kCuInputBytes> input_buffer{};
  std::uint32_t input_len = 0;
  std::array<std::int32_t, kCuAccumulators> acc{};
  std::array<bool, kCuAccumulators> live{};
  std::uint32_t live_count = 0;
  std::uint64_t compute_cycles = 0;  // CU clock, two per internal cycle
  std::uint64_t weight_bytes = 0;    // includes zero padding (padded MACs execute)

  void load_input(std::span<const std::int8_t> v);
  void clear_acc();
};

// One 32-byte weight burst from a pseudo-bank.
struct WeightChunk {
  std::array<std::int8_t, kChunkBytes> bytes{};
  bool row_oriented = true;  // true: (1x32) row segment, false: (32x1) column segment
};

// Outer-product step: acc[acc_base + j] += in_scalar * chunk[j] for the
// 32-wide chunk window. One CU compute cycle.
void outer_step(CuState& cu, std::int8_t in_scalar, const WeightChunk& chunk,
                std::uint32_t acc_base);

// Inner-product step: acc[acc_slot] += dot(in_vec, chunk). One CU compute cycle.
void inner_step(CuState& cu, std::span<const std::int8_t> in_vec, const WeightChunk& chunk,
                std::uint32_t acc_slot);

// Drains accumulators. Without a scale the raw INT32 values are returned;
// with a scale each value is requantized (round to nearest, saturating) to
// INT8 staging bytes. Accumulators are cleared either way.
std::vector<std::int32_t> drain_output(CuState& cu);
std::vector<std::int8_t> drain_output(CuState& cu, double requantize_scale);

std::int8_t requantize_value(std::int32_t acc, double scale);

struct BankFlowResult {
  std::array<std::int32_t, kCuAccumulators> out{};  // one value per tile column
  std::uint64_t internal_cycles = 0;
  std::uint64_t weight_bytes = 0;  // both CUs, padding included
  CuState top;
  CuState bottom;
};

// Column-wise (K) flow over one bank tile: each internal cycle broadcasts one
// input scalar against a 128-byte row group; the top CU owns columns 0-63
// (TL/TR chunks), the bottom CU columns 64-127 (BL/BR chunks). Requires
// inputs.size() == tile.rows <= 64, tile.cols <= 128. Cycle count == rows.
BankFlowResult run_k_flow(std::span<const std::int8_t> inputs, const Int8Matrix& tile);

// Row-wise (V) flow: each internal cycle reduces two adjacent columns, the
// top CU taking the even column (TL/TR row halves) and the bottom CU the odd
// one (BL/BR). Requires inputs.size() == tile.rows <= 64, tile.cols <= 128.
// Cycle count == ceil(cols / 2).
BankFlowResult run_v_flow(std::span<const std::int8_t> inputs, const Int8Matrix& tile);

}  // namespace cdpim
