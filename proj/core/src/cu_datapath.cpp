// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/cu_datapath.hpp"

#include <cmath>
#include <stdexcept>

namespace cdpim {

namespace {

void accumulate(CuState& cu, std::uint32_t slot, std::int64_t delta) {
  const std::int64_t sum = static_cast<std::int64_t>(cu.acc[slot]) + delta;
  if (sum < INT32_MIN || sum > INT32_MAX) {
    throw std::overflow_error("INT32 accumulator overflow in CU datapath");
  }
  if (!cu.live[slot]) {
    cu.live[slot] = true;
    if (++cu.live_count > kCuAccumulators) {
      throw std::overflow_error("live accumulator count exceeds CU capacity");
    }
  }
  cu.acc[slot] = static_cast<std::int32_t>(sum);
}

WeightChunk make_chunk(const Int8Matrix& m, std::uint32_t row, std::uint32_t col,
                       bool row_oriented) {
  // Reads a 32-element segment starting at (row, col), zero padded past the
  // matrix edge.
  WeightChunk c;
  c.row_oriented = row_oriented;
  for (std::uint32_t i = 0; i < kChunkBytes; ++i) {
    const std::uint32_t r = row_oriented ? row : row + i;
    const std::uint32_t cc = row_oriented ? col + i : col;
    c.bytes[i] = (r < m.rows && cc < m.cols) ? m.at(r, cc) : std::int8_t{0};
  }
  return c;
}

void check_flow_args(std::span<const std::int8_t> inputs, const Int8Matrix& tile) {
  if (tile.rows > kCuInputBytes || tile.cols > kCuAccumulators) {
    throw std::invalid_argument("bank tile exceeds 64x128 pbank window");
  }
  if (inputs.size() != tile.rows) {
    throw std::invalid_argument("input vector length must match tile rows");
  }
  if (tile.data.size() != std::size_t{tile.rows} * tile.cols) {
    throw std::invalid_argument("tile data size does not match dims");
  }
}

}  // namespace

void CuState::load_input(std::span<const std::int8_t> v) {
  if (v.size() > kCuInputBytes) {
    throw std::invalid_argument("input exceeds 64-byte CU input buffer");
  }
  input_buffer.fill(0);
  for (std::size_t i = 0; i < v.size(); ++i) input_buffer[i] = v[i];
  input_len = static_cast<std::uint32_t>(v.size());
}

void CuState::clear_acc() {
  acc.fill(0);
  live.fill(false);
  live_count = 0;
}

void outer_step(CuState& cu, std::int8_t in_scalar, const WeightChunk& chunk,
                std::uint32_t acc_base) {
  if (acc_base + kChunkBytes > kCuAccumulators) {
    throw std::invalid_argument("outer_step: accumulator window out of range");
  }
  for (std::uint32_t j = 0; j < kChunkBytes; ++j) {
    accumulate(cu, acc_base + j,
               static_cast<std::int64_t>(in_scalar) * chunk.bytes[j]);
  }
  cu.compute_cycles += 1;
  cu.weight_bytes += kChunkBytes;
}

void inner_step(CuState& cu, std::span<const std::int8_t> in_vec, const WeightChunk& chunk,
                std::uint32_t acc_slot) {
  if (in_vec.size() > kChunkBytes) {
    throw std::invalid_argument("inner_step: input segment wider than 32");
  }
  if (acc_slot >= kCuAccumulators) {
    throw std::invalid_argument("inner_step: accumulator slot out of range");
  }
  std::int64_t dot = 0;
  for (std::size_t j = 0; j < in_vec.size(); ++j) {
    dot += static_cast<std::int64_t>(in_vec[j]) * chunk.bytes[j];
  }
  accumulate(cu, acc_slot, dot);
  cu.compute_cycles += 1;
  cu.weight_bytes += kChunkBytes;
}

std::vector<std::int32_t> drain_output(CuState& cu) {
  std::vector<std::int32_t> out(cu.acc.begin(), cu.acc.end());
  cu.clear_acc();
  return out;
}

std::vector<std::int8_t> drain_output(CuState& cu, double requantize_scale) {
  std::vector<std::int8_t> out(cu.acc.size());
  for (std::size_t i = 0; i < cu.acc.size(); ++i) {
    out[i] = requantize_value(cu.acc[i], requantize_scale);
  }
  cu.clear_acc();
  return out;
}

std::int8_t requantize_value(std::int32_t acc, double scale) {
  const double scaled = static_cast<double>(acc) * scale;
  double r = std::round(scaled);  // round half away from zero
  if (r < -128.0) r = -128.0;
  if (r > 127.0) r = 127.0;
  return static_cast<std::int8_t>(r);
}

BankFlowResult run_k_flow(std::span<const std::int8_t> inputs, const Int8Matrix& tile) {
  check_flow_args(inputs, tile);
  BankFlowResult res;
  res.top.load_input(inputs);
  res.bottom.load_input(inputs);

  for (std::uint32_t r = 0; r < tile.rows; ++r) {
    const std::int8_t in = inputs[r];
    // TL, TR feed the top CU (columns 0-63); BL, BR the bottom (64-127).
    outer_step(res.top, in, make_chunk(tile, r, 0, true), 0);
    outer_step(res.top, in, make_chunk(tile, r, 32, true), 32);
    outer_step(res.bottom, in, make_chunk(tile, r, 64, true), 0);
    outer_step(res.bottom, in, make_chunk(tile, r, 96, true), 32);
    res.internal_cycles += 1;
    const std::uint64_t bank_bytes = res.top.weight_bytes + res.bottom.weight_bytes;
    if (bank_bytes != res.internal_cycles * 128) {
      throw std::logic_error("k-flow: bank must consume exactly 128 weight bytes per cycle");
    }
  }
  res.weight_bytes = res.top.weight_bytes + res.bottom.weight_bytes;
  for (std::uint32_t c = 0; c < 64; ++c) res.out[c] = res.top.acc[c];
  for (std::uint32_t c = 0; c < 64; ++c) res.out[64 + c] = res.bottom.acc[c];
  return res;
}

BankFlowResult run_v_flow(std::span<const std::int8_t> inputs, const Int8Matrix& tile) {
  check_flow_args(inputs, tile);
  BankFlowResult res;
  res.top.load_input(inputs);
  res.bottom.load_input(inputs);

  std::array<std::int8_t, kCuInputBytes> in_pad{};
  for (std::size_t i = 0; i < inputs.size(); ++i) in_pad[i] = inputs[i];
  const std::span<const std::int8_t> lo(in_pad.data(), kChunkBytes);
  const std::span<const std::int8_t> hi(in_pad.data() + kChunkBytes, kChunkBytes);

  const std::uint32_t cycles = (tile.cols + 1) / 2;
  for (std::uint32_t t = 0; t < cycles; ++t) {
    const std::uint32_t even_col = 2 * t;
    const std::uint32_t odd_col = 2 * t + 1;  // zero padded when past the edge
    inner_step(res.top, lo, make_chunk(tile, 0, even_col, false), t);
    inner_step(res.top, hi, make_chunk(tile, 32, even_col, false), t);
    inner_step(res.bottom, lo, make_chunk(tile, 0, odd_col, false), t);
    inner_step(res.bottom, hi, make_chunk(tile, 32, odd_col, false), t);
    res.internal_cycles += 1;
    const std::uint64_t bank_bytes = res.top.weight_bytes + res.bottom.weight_bytes;
    if (bank_bytes != res.internal_cycles * 128) {
      throw std::logic_error("v-flow: bank must consume exactly 128 weight bytes per cycle");
    }
  }
  res.weight_bytes = res.top.weight_bytes + res.bottom.weight_bytes;
  for (std::uint32_t c = 0; c < tile.cols; ++c) {
    res.out[c] = (c % 2 == 0) ? res.top.acc[c / 2] : res.bottom.acc[c / 2];
  }
  return res;
}

}  // namespace cdpim
