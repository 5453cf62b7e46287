// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/kv_mapping.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace cdpim {

namespace {

constexpr std::uint64_t kRowsPerBank = 64;   // K flow rows per bank slice
constexpr std::uint64_t kColsPerBank = 128;  // per-bank column window
constexpr std::uint64_t kChunkLen = 32;
constexpr std::uint64_t kSlotsPerPass = 64;
constexpr std::uint64_t kChunksPerBankPass = kSlotsPerPass * 4;

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

void check_org_for_mapping(const PimOrg& org) {
  if (org.pbanks_per_bank != 4 || org.burst_bytes_per_pbank != 32 ||
      org.input_buffer_bytes != 64 || org.output_buffer_bytes != 128 ||
      org.banks_per_die == 0) {
    throw std::invalid_argument(
        "kv mapping requires the 4x32B pbank / 64B input / 128B output organization");
  }
}

LayoutPlan make_plan(GemvFlow flow, std::uint64_t rows, std::uint64_t cols, const PimOrg& org,
                     std::uint32_t die_count, std::uint64_t die_capacity_bytes) {
  check_org_for_mapping(org);
  if (die_count == 0) throw std::invalid_argument("die_count must be > 0");
  LayoutPlan p;
  p.flow = flow;
  p.rows = rows;
  p.cols = cols;
  p.die_count = die_count;
  p.banks_per_die = org.banks_per_die;
  if (rows == 0 || cols == 0) return p;

  const std::uint64_t bytes = rows * cols;
  if (bytes > std::uint64_t{die_count} * die_capacity_bytes) {
    throw std::invalid_argument("matrix exceeds aggregate die capacity");
  }
  if (flow == GemvFlow::kK) {
    p.row_segments = ceil_div(rows, kRowsPerBank * org.banks_per_die);
    p.col_passes = ceil_div(cols, kColsPerBank);
  } else {
    p.row_segments = ceil_div(rows, kRowsPerBank);
    p.col_passes = ceil_div(cols, kColsPerBank * org.banks_per_die);
  }
  p.passes = p.row_segments * p.col_passes;
  return p;
}

}  // namespace

std::uint64_t LayoutPlan::rows_per_die_pass() const {
  return flow == GemvFlow::kK ? kRowsPerBank * banks_per_die : kRowsPerBank;
}

std::uint64_t LayoutPlan::cols_per_die_pass() const {
  return flow == GemvFlow::kK ? kColsPerBank : kColsPerBank * banks_per_die;
}

std::uint32_t LayoutPlan::die_of_pass(std::uint64_t pass) const {
  return static_cast<std::uint32_t>(pass % die_count);
}

std::uint64_t LayoutPlan::segment_of_pass(std::uint64_t pass) const {
  return pass / die_count;
}

std::uint64_t LayoutPlan::pass_of(std::uint32_t die, std::uint64_t segment) const {
  const std::uint64_t pass = segment * die_count + die;
  if (die >= die_count || pass >= passes) {
    throw std::out_of_range("no such (die, segment) pass in plan");
  }
  return pass;
}

void LayoutPlan::pass_ranges(std::uint64_t pass, std::uint64_t& row_lo, std::uint64_t& row_hi,
                             std::uint64_t& col_lo, std::uint64_t& col_hi) const {
  const std::uint64_t s = pass / col_passes;
  const std::uint64_t p = pass % col_passes;
  row_lo = s * rows_per_die_pass();
  row_hi = std::min(rows, row_lo + rows_per_die_pass());
  col_lo = p * cols_per_die_pass();
  col_hi = std::min(cols, col_lo + cols_per_die_pass());
}

std::uint32_t LayoutPlan::occupied_banks_in_pass(std::uint64_t pass) const {
  if (pass >= passes) throw std::out_of_range("pass index out of range");
  std::uint64_t row_lo, row_hi, col_lo, col_hi;
  pass_ranges(pass, row_lo, row_hi, col_lo, col_hi);
  if (flow == GemvFlow::kK) {
    return static_cast<std::uint32_t>(ceil_div(row_hi - row_lo, kRowsPerBank));
  }
  return static_cast<std::uint32_t>(ceil_div(col_hi - col_lo, kColsPerBank));
}

std::uint64_t LayoutPlan::pass_cycles(std::uint64_t pass) const {
  std::uint64_t row_lo, row_hi, col_lo, col_hi;
  pass_ranges(pass, row_lo, row_hi, col_lo, col_hi);
  if (flow == GemvFlow::kK) {
    // Banks run in parallel; bank 0 holds the largest row slice.
    return std::min<std::uint64_t>(kRowsPerBank, row_hi - row_lo);
  }
  return ceil_div(std::min<std::uint64_t>(kColsPerBank, col_hi - col_lo), 2);
}

std::uint64_t LayoutPlan::chunk_count() const {
  std::uint64_t n = 0;
  for (std::uint64_t t = 0; t < passes; ++t) {
    n += std::uint64_t{occupied_banks_in_pass(t)} * kChunksPerBankPass;
  }
  return n;
}

LayoutPlan::ChunkInfo LayoutPlan::chunk_at(std::uint64_t index) const {
  // Enumeration order: (pass, bank, cycle_slot, pbank).
  for (std::uint64_t t = 0; t < passes; ++t) {
    const std::uint64_t in_pass =
        std::uint64_t{occupied_banks_in_pass(t)} * kChunksPerBankPass;
    if (index >= in_pass) {
      index -= in_pass;
      continue;
    }
    ChunkAddr a;
    a.die = die_of_pass(t);
    a.segment = segment_of_pass(t);
    a.bank = static_cast<std::uint32_t>(index / kChunksPerBankPass);
    const std::uint64_t rem = index % kChunksPerBankPass;
    a.cycle_slot = static_cast<std::uint32_t>(rem / 4);
    a.pbank = static_cast<PbankId>(rem % 4);
    a.orientation = flow == GemvFlow::kK ? Orientation::kRowChunk : Orientation::kColChunk;
    const auto elems = elements_at(a);
    const bool padding =
        std::all_of(elems.begin(), elems.end(), [](const ElementCoord& e) { return e.padding; });
    return ChunkInfo{a, padding};
  }
  throw std::out_of_range("chunk index out of range");
}

std::optional<ChunkAddr> LayoutPlan::chunk_for_element(std::uint64_t r, std::uint64_t c) const {
  if (r >= rows || c >= cols) return std::nullopt;
  ChunkAddr a;
  a.orientation = flow == GemvFlow::kK ? Orientation::kRowChunk : Orientation::kColChunk;
  const std::uint64_t s = r / rows_per_die_pass();
  const std::uint64_t p = c / cols_per_die_pass();
  const std::uint64_t t = s * col_passes + p;
  a.die = die_of_pass(t);
  a.segment = segment_of_pass(t);
  if (flow == GemvFlow::kK) {
    const std::uint64_t row_in_pass = r % rows_per_die_pass();
    const std::uint64_t col_in_pass = c % cols_per_die_pass();
    a.bank = static_cast<std::uint32_t>(row_in_pass / kRowsPerBank);
    a.cycle_slot = static_cast<std::uint32_t>(row_in_pass % kRowsPerBank);
    a.pbank = static_cast<PbankId>(col_in_pass / kChunkLen);
  } else {
    const std::uint64_t row_in_pass = r % kRowsPerBank;
    const std::uint64_t col_in_pass = c % cols_per_die_pass();
    a.bank = static_cast<std::uint32_t>(col_in_pass / kColsPerBank);
    const std::uint64_t col_in_bank = col_in_pass % kColsPerBank;
    a.cycle_slot = static_cast<std::uint32_t>(col_in_bank / 2);
    const bool odd_col = (col_in_bank % 2) == 1;
    const bool hi_half = row_in_pass >= kChunkLen;
    a.pbank = odd_col ? (hi_half ? PbankId::kBR : PbankId::kBL)
                      : (hi_half ? PbankId::kTR : PbankId::kTL);
  }
  return a;
}

std::array<ElementCoord, 32> LayoutPlan::elements_at(const ChunkAddr& addr) const {
  if (addr.die >= die_count || addr.bank >= banks_per_die ||
      addr.cycle_slot >= kSlotsPerPass) {
    throw std::out_of_range("chunk address outside organization");
  }
  const std::uint64_t t = addr.segment * die_count + addr.die;
  if (t >= passes) throw std::out_of_range("chunk segment outside plan");
  if (addr.bank >= occupied_banks_in_pass(t)) {
    throw std::out_of_range("bank not occupied in this pass");
  }
  const std::uint64_t s = t / col_passes;
  const std::uint64_t p = t % col_passes;
  const auto q = static_cast<std::uint32_t>(addr.pbank);

  std::array<ElementCoord, 32> out{};
  if (flow == GemvFlow::kK) {
    const std::uint64_t row = s * rows_per_die_pass() + addr.bank * kRowsPerBank +
                              addr.cycle_slot;
    const std::uint64_t col0 = p * cols_per_die_pass() + q * kChunkLen;
    for (std::uint32_t i = 0; i < kChunkLen; ++i) {
      out[i] = {row, col0 + i, row >= rows || col0 + i >= cols};
    }
  } else {
    const bool odd_col = addr.pbank == PbankId::kBL || addr.pbank == PbankId::kBR;
    const bool hi_half = addr.pbank == PbankId::kTR || addr.pbank == PbankId::kBR;
    const std::uint64_t col = p * cols_per_die_pass() + addr.bank * kColsPerBank +
                              2 * addr.cycle_slot + (odd_col ? 1 : 0);
    const std::uint64_t row0 = s * kRowsPerBank + (hi_half ? kChunkLen : 0);
    for (std::uint32_t i = 0; i < kChunkLen; ++i) {
      out[i] = {row0 + i, col, row0 + i >= rows || col >= cols};
    }
  }
  return out;
}

std::vector<BankTile> LayoutPlan::bank_tiles() const {
  std::vector<BankTile> tiles;
  for (std::uint64_t t = 0; t < passes; ++t) {
    std::uint64_t row_lo, row_hi, col_lo, col_hi;
    pass_ranges(t, row_lo, row_hi, col_lo, col_hi);
    const std::uint32_t banks = occupied_banks_in_pass(t);
    for (std::uint32_t b = 0; b < banks; ++b) {
      BankTile bt;
      bt.pass = t;
      bt.die = die_of_pass(t);
      bt.segment = segment_of_pass(t);
      bt.bank = b;
      if (flow == GemvFlow::kK) {
        bt.row_lo = row_lo + std::uint64_t{b} * kRowsPerBank;
        bt.row_hi = std::min(row_hi, bt.row_lo + kRowsPerBank);
        bt.col_lo = col_lo;
        bt.col_hi = col_hi;
      } else {
        bt.row_lo = row_lo;
        bt.row_hi = row_hi;
        bt.col_lo = col_lo + std::uint64_t{b} * kColsPerBank;
        bt.col_hi = std::min(col_hi, bt.col_lo + kColsPerBank);
      }
      tiles.push_back(bt);
    }
  }
  return tiles;
}

LayoutStats LayoutPlan::stats() const {
  LayoutStats st;
  st.passes = passes;
  st.total_banks = std::uint64_t{die_count} * banks_per_die;
  std::vector<std::vector<bool>> seen(die_count, std::vector<bool>(banks_per_die, false));
  std::vector<std::uint64_t> die_cycles(die_count, 0);
  for (std::uint64_t t = 0; t < passes; ++t) {
    const std::uint32_t banks = occupied_banks_in_pass(t);
    const std::uint32_t die = die_of_pass(t);
    st.chunk_count += std::uint64_t{banks} * kChunksPerBankPass;
    const std::uint64_t cyc = pass_cycles(t);
    st.internal_cycles_total += cyc;
    die_cycles[die] += cyc;
    for (std::uint32_t b = 0; b < banks; ++b) seen[die][b] = true;
  }
  for (std::uint32_t d = 0; d < die_count; ++d) {
    st.internal_cycles_critical = std::max(st.internal_cycles_critical, die_cycles[d]);
    for (std::uint32_t b = 0; b < banks_per_die; ++b) {
      if (seen[d][b]) ++st.occupied_banks;
    }
  }
  st.bank_utilization = st.total_banks != 0
                            ? static_cast<double>(st.occupied_banks) /
                                  static_cast<double>(st.total_banks)
                            : 0.0;
  // Padding chunks: count via per-pass edges rather than walking every chunk.
  for (std::uint64_t t = 0; t < passes; ++t) {
    std::uint64_t row_lo, row_hi, col_lo, col_hi;
    pass_ranges(t, row_lo, row_hi, col_lo, col_hi);
    const std::uint32_t banks = occupied_banks_in_pass(t);
    for (std::uint32_t b = 0; b < banks; ++b) {
      if (flow == GemvFlow::kK) {
        const std::uint64_t bank_rows =
            std::min<std::uint64_t>(kRowsPerBank, row_hi - row_lo - b * kRowsPerBank);
        const std::uint64_t real_col_chunks = ceil_div(col_hi - col_lo, kChunkLen);
        // Real slots x padded col chunks, plus fully padded row slots.
        st.padding_chunks += bank_rows * (4 - real_col_chunks);
        st.padding_chunks += (kSlotsPerPass - bank_rows) * 4;
      } else {
        const std::uint64_t bank_cols =
            std::min<std::uint64_t>(kColsPerBank, col_hi - col_lo - b * kColsPerBank);
        const std::uint64_t seg_rows = row_hi - row_lo;
        const std::uint64_t halves = seg_rows > kChunkLen ? 2 : 1;
        st.padding_chunks += bank_cols * (2 - halves);
        st.padding_chunks += (kColsPerBank - bank_cols) * 2;
      }
    }
  }
  return st;
}

LayoutPlan map_k(std::uint64_t h_dim, std::uint64_t l_dim, const PimOrg& org,
                 std::uint32_t die_count, std::uint64_t die_capacity_bytes) {
  return make_plan(GemvFlow::kK, h_dim, l_dim, org, die_count, die_capacity_bytes);
}

LayoutPlan map_v(std::uint64_t l_dim, std::uint64_t h_dim, const PimOrg& org,
                 std::uint32_t die_count, std::uint64_t die_capacity_bytes) {
  return make_plan(GemvFlow::kV, l_dim, h_dim, org, die_count, die_capacity_bytes);
}

std::vector<QBroadcastSlice> plan_q_broadcast(std::uint64_t q_len, const PimOrg& org) {
  check_org_for_mapping(org);
  std::vector<QBroadcastSlice> slices;
  const std::uint64_t seg_len = kRowsPerBank * org.banks_per_die;
  const std::uint64_t segments = q_len == 0 ? 0 : (q_len + seg_len - 1) / seg_len;
  for (std::uint64_t s = 0; s < segments; ++s) {
    for (std::uint32_t b = 0; b < org.banks_per_die; ++b) {
      QBroadcastSlice sl;
      sl.segment = s;
      sl.bank = b;
      sl.elem_lo = s * seg_len + std::uint64_t{b} * kRowsPerBank;
      sl.elem_hi = std::min(q_len, sl.elem_lo + kRowsPerBank);
      if (sl.elem_hi < sl.elem_lo) sl.elem_hi = sl.elem_lo;
      sl.padded = (sl.elem_hi - sl.elem_lo) < kRowsPerBank;
      slices.push_back(sl);
    }
  }
  return slices;
}

std::vector<AttnBroadcastSubvec> plan_attn_broadcast(std::uint64_t l_dim, const PimOrg& org) {
  check_org_for_mapping(org);
  std::vector<AttnBroadcastSubvec> subs;
  const std::uint64_t n = l_dim == 0 ? 0 : (l_dim + kRowsPerBank - 1) / kRowsPerBank;
  for (std::uint64_t i = 0; i < n; ++i) {
    AttnBroadcastSubvec sv;
    sv.index = i;
    sv.elem_lo = i * kRowsPerBank;
    sv.elem_hi = std::min(l_dim, sv.elem_lo + kRowsPerBank);
    sv.padded = (sv.elem_hi - sv.elem_lo) < kRowsPerBank;
    subs.push_back(sv);
  }
  return subs;
}

std::vector<std::uint32_t> dies_for_row_segment(const LayoutPlan& plan, std::uint64_t segment) {
  std::vector<std::uint32_t> dies;
  if (segment >= plan.row_segments) return dies;
  std::vector<bool> seen(plan.die_count, false);
  for (std::uint64_t p = 0; p < plan.col_passes; ++p) {
    const std::uint64_t t = segment * plan.col_passes + p;
    const std::uint32_t d = plan.die_of_pass(t);
    if (!seen[d]) {
      seen[d] = true;
      dies.push_back(d);
    }
  }
  std::sort(dies.begin(), dies.end());
  return dies;
}

void dump_layout_csv(const LayoutPlan& plan, std::ostream& os) {
  struct Row {
    std::uint64_t r, c;
    std::uint32_t die, bank, pbank;
    std::uint64_t segment;
    std::uint32_t slot;
    bool padding;
  };
  std::vector<Row> rows;
  const std::uint64_t n = plan.chunk_count();
  rows.reserve(n * 32);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto info = plan.chunk_at(i);
    const auto elems = plan.elements_at(info.addr);
    for (const auto& e : elems) {
      rows.push_back({e.row, e.col, info.addr.die, info.addr.bank,
                      static_cast<std::uint32_t>(info.addr.pbank), info.addr.segment,
                      info.addr.cycle_slot, e.padding});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.r != b.r) return a.r < b.r;
    if (a.c != b.c) return a.c < b.c;
    if (a.die != b.die) return a.die < b.die;
    return a.bank < b.bank;
  });
  os << "element_row,element_col,die,bank,pbank,segment,cycle_slot,is_padding\n";
  for (const auto& w : rows) {
    os << w.r << ',' << w.c << ',' << w.die << ',' << w.bank << ','
       << pbank_name(static_cast<PbankId>(w.pbank)) << ',' << w.segment << ',' << w.slot << ','
       << (w.padding ? 1 : 0) << '\n';
  }
}

}  // namespace cdpim
