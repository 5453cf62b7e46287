// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/pim_isa.hpp"

#include <sstream>
#include <stdexcept>

namespace cdpim {

SelBits encode(PimInstruction instr) {
  switch (instr) {
    case PimInstruction::kPimMacFm: return {1, 1};
    case PimInstruction::kMactLdb: return {0, 1};
    case PimInstruction::kMacbLdt: return {1, 0};
  }
  throw std::invalid_argument("encode: unknown instruction");
}

PimInstruction decode(int sel0, int sel1) {
  if ((sel0 != 0 && sel0 != 1) || (sel1 != 0 && sel1 != 1)) {
    throw std::invalid_argument("decode: SEL bits must be 0 or 1");
  }
  if (sel0 == 1 && sel1 == 1) return PimInstruction::kPimMacFm;
  if (sel0 == 0 && sel1 == 1) return PimInstruction::kMactLdb;
  if (sel0 == 1 && sel1 == 0) return PimInstruction::kMacbLdt;
  throw std::invalid_argument("decode: (0,0) is an unmapped instruction encoding");
}

const char* mnemonic(PimInstruction instr) {
  switch (instr) {
    case PimInstruction::kPimMacFm: return "PIM_MAC_FM";
    case PimInstruction::kMactLdb: return "MACT_LDB";
    case PimInstruction::kMacbLdt: return "MACB_LDT";
  }
  return "?";
}

const char* pbank_name(PbankId id) {
  switch (id) {
    case PbankId::kTL: return "TL";
    case PbankId::kTR: return "TR";
    case PbankId::kBL: return "BL";
    case PbankId::kBR: return "BR";
  }
  return "?";
}

const char* role_name(PbankRole role) {
  switch (role) {
    case PbankRole::kPimCompute: return "pim_compute";
    case PbankRole::kHostAccess: return "host_access";
    case PbankRole::kIdle: return "idle";
  }
  return "?";
}

std::array<PbankRole, 4> active_roles(PimInstruction instr) {
  using R = PbankRole;
  switch (instr) {
    case PimInstruction::kPimMacFm:
      return {R::kPimCompute, R::kPimCompute, R::kPimCompute, R::kPimCompute};
    case PimInstruction::kMactLdb:  // top computes, bottom hosts
      return {R::kPimCompute, R::kPimCompute, R::kHostAccess, R::kHostAccess};
    case PimInstruction::kMacbLdt:  // bottom computes, top hosts
      return {R::kHostAccess, R::kHostAccess, R::kPimCompute, R::kPimCompute};
  }
  throw std::invalid_argument("active_roles: unknown instruction");
}

std::optional<std::string> conflict_check(PimInstruction instr, PbankId host_target) {
  const auto roles = active_roles(instr);
  const auto role = roles[static_cast<std::size_t>(host_target)];
  if (role == PbankRole::kHostAccess) return std::nullopt;
  std::ostringstream os;
  os << "host access to " << pbank_name(host_target) << " conflicts with " << mnemonic(instr)
     << " (pbank role: " << role_name(role) << ")";
  return os.str();
}

std::uint64_t gemv_tile_cycles(std::uint64_t tile_rows, std::uint64_t tile_cols,
                               GemvFlow flow, PimMode mode, const PimOrg& org) {
  const std::uint64_t max_rows = org.input_buffer_bytes;                     // 64
  const std::uint64_t max_cols = org.output_buffer_bytes;                    // 128
  const std::uint64_t full_macs_per_cycle =
      std::uint64_t{org.pbanks_per_bank} * org.burst_bytes_per_pbank;        // 128
  if (tile_rows > max_rows || tile_cols > max_cols) {
    throw std::invalid_argument("gemv_tile_cycles: tile exceeds per-bank buffer capacity");
  }
  if (tile_rows == 0 || tile_cols == 0) return 0;

  std::uint64_t rows = tile_rows;
  std::uint64_t cols = tile_cols;
  if (flow == GemvFlow::kK) {
    cols = max_cols;  // one full 128-byte row group per cycle, padded
  } else {
    rows = max_rows;  // one full 64-row column pair per cycle, padded
  }
  const std::uint64_t macs = rows * cols;
  std::uint64_t full = (macs + full_macs_per_cycle - 1) / full_macs_per_cycle;
  full += org.tile_setup_cycles;
  return mode == PimMode::kFull ? full : 2 * full;
}

PimInstruction instruction_for_mode(PimMode mode, std::uint64_t parity) {
  if (mode == PimMode::kFull) return PimInstruction::kPimMacFm;
  return parity % 2 == 0 ? PimInstruction::kMactLdb : PimInstruction::kMacbLdt;
}

std::string format_trace_record(std::uint64_t cycle, PimInstruction instr, std::uint32_t bank) {
  const SelBits sel = encode(instr);
  const auto roles = active_roles(instr);
  std::ostringstream os;
  os << cycle << ',' << mnemonic(instr) << ',' << sel.sel0 << ',' << sel.sel1 << ',' << bank
     << ',';
  for (int i = 0; i < 4; ++i) {
    if (i) os << '|';
    os << pbank_name(static_cast<PbankId>(i)) << '=' << role_name(roles[i]);
  }
  return os.str();
}

}  // namespace cdpim
