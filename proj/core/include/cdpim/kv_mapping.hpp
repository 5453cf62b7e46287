// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "cdpim/arch_config.hpp"
#include "cdpim/pim_isa.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace cdpim {

enum class Orientation { kRowChunk, kColChunk };  // (1x32) vs (32x1)

// Physical placement of one 32-byte weight chunk. `segment` is the per-die
// tile-pass index after round-robin distribution; `cycle_slot` the internal
// cycle within the pass that streams this chunk.
struct ChunkAddr {
  std::uint32_t die = 0;
  std::uint32_t bank = 0;
  PbankId pbank = PbankId::kTL;
  std::uint64_t segment = 0;
  std::uint32_t cycle_slot = 0;
  Orientation orientation = Orientation::kRowChunk;
};

struct ElementCoord {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  bool padding = false;  // true when the slot lies past the real matrix edge
};

// One occupied (pass, bank) pair with its real (unpadded) element ranges.
struct BankTile {
  std::uint64_t pass = 0;  // global pass index
  std::uint32_t die = 0;
  std::uint64_t segment = 0;  // per-die pass index
  std::uint32_t bank = 0;
  std::uint64_t row_lo = 0, row_hi = 0;  // [row_lo, row_hi)
  std::uint64_t col_lo = 0, col_hi = 0;  // [col_lo, col_hi)
};

struct LayoutStats {
  std::uint64_t passes = 0;
  std::uint64_t chunk_count = 0;
  std::uint64_t padding_chunks = 0;  // chunks with no real element
  std::uint64_t occupied_banks = 0;  // distinct (die, bank) pairs with work
  std::uint64_t total_banks = 0;
  double bank_utilization = 0.0;
  std::uint64_t internal_cycles_total = 0;   // summed over passes
  std::uint64_t internal_cycles_critical = 0;  // max per-die serialized cycles
};

// Deterministic closed-form layout of one KV-cache (or streamed weight)
// matrix over dies/banks/pbanks. K flow stores (1x32) row chunks column-wise
// (die pass = banks_per_die*64 rows x 128 cols); V flow stores (32x1) column
// chunks row-wise (die pass = 64 rows x banks_per_die*128 cols). Passes are
// distributed round-robin over dies by pass index.
class LayoutPlan {
 public:
  LayoutPlan() = default;

  GemvFlow flow = GemvFlow::kK;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint32_t die_count = 1;
  std::uint32_t banks_per_die = 16;

  std::uint64_t row_segments = 0;
  std::uint64_t col_passes = 0;
  std::uint64_t passes = 0;

  bool empty() const { return passes == 0; }

  std::uint32_t die_of_pass(std::uint64_t pass) const;
  std::uint64_t segment_of_pass(std::uint64_t pass) const;
  std::uint64_t pass_of(std::uint32_t die, std::uint64_t segment) const;

  std::uint32_t occupied_banks_in_pass(std::uint64_t pass) const;
  std::uint64_t pass_cycles(std::uint64_t pass) const;

  std::uint64_t chunk_count() const;
  struct ChunkInfo {
    ChunkAddr addr;
    bool padding = false;
  };
  ChunkInfo chunk_at(std::uint64_t index) const;

  // Inverse maps. chunk_for_element returns nullopt for out-of-range coords.
  std::optional<ChunkAddr> chunk_for_element(std::uint64_t r, std::uint64_t c) const;
  std::array<ElementCoord, 32> elements_at(const ChunkAddr& addr) const;

  std::vector<BankTile> bank_tiles() const;
  LayoutStats stats() const;

 private:
  friend LayoutPlan map_k(std::uint64_t, std::uint64_t, const PimOrg&, std::uint32_t,
                          std::uint64_t);
  friend LayoutPlan map_v(std::uint64_t, std::uint64_t, const PimOrg&, std::uint32_t,
                          std::uint64_t);

  std::uint64_t rows_per_die_pass() const;
  std::uint64_t cols_per_die_pass() const;
  void pass_ranges(std::uint64_t pass, std::uint64_t& row_lo, std::uint64_t& row_hi,
                   std::uint64_t& col_lo, std::uint64_t& col_hi) const;
};

// K-cache: matrix (h_dim x L), column-wise (1x32) chunking.
LayoutPlan map_k(std::uint64_t h_dim, std::uint64_t l_dim, const PimOrg& org,
                 std::uint32_t die_count = 1,
                 std::uint64_t die_capacity_bytes = 4ULL * 1024 * 1024 * 1024);

// V-cache: matrix (L x h_dim), row-wise (32x1) chunking.
LayoutPlan map_v(std::uint64_t l_dim, std::uint64_t h_dim, const PimOrg& org,
                 std::uint32_t die_count = 1,
                 std::uint64_t die_capacity_bytes = 4ULL * 1024 * 1024 * 1024);

// Input broadcast plans. The Q vector is cut into (1 x banks_per_die*64)
// segments; each segment splits into per-bank (1x64) slices delivered to both
// CUs of the bank. The attention vector is cut into (1x64) sub-vectors, each
// delivered to every CU of every bank.
struct QBroadcastSlice {
  std::uint64_t segment = 0;
  std::uint32_t bank = 0;
  std::uint64_t elem_lo = 0, elem_hi = 0;  // [lo, hi) real elements, hi-lo <= 64
  bool padded = false;                     // slice shorter than 64 (or empty)
};

struct AttnBroadcastSubvec {
  std::uint64_t index = 0;
  std::uint64_t elem_lo = 0, elem_hi = 0;
  bool padded = false;
  bool to_all_cus = true;
};

std::vector<QBroadcastSlice> plan_q_broadcast(std::uint64_t q_len, const PimOrg& org);
std::vector<AttnBroadcastSubvec> plan_attn_broadcast(std::uint64_t l_dim, const PimOrg& org);

// Dies holding passes of the given row segment (resolves a broadcast segment
// against a concrete layout).
std::vector<std::uint32_t> dies_for_row_segment(const LayoutPlan& plan, std::uint64_t segment);

// CSV dump: element_row,element_col,die,bank,pbank,segment,cycle_slot,is_padding
// one row per chunk slot element, sorted by (element_row, element_col).
void dump_layout_csv(const LayoutPlan& plan, std::ostream& os);

}  // namespace cdpim
