// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "cdpim/arch_config.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace cdpim {

// Dual-mode PIM command set. SEL0 gates the bottom pseudo-bank pair for
// compute, SEL1 the top pair; (0,0) is deliberately unmapped and decodes to
// an error.
enum class PimInstruction {
  kPimMacFm,  // SEL0=1 SEL1=1: all four pbanks feed the CUs (HBCEM)
  kMactLdb,   // SEL0=0 SEL1=1: top CUs compute, bottom pbanks serve the host
  kMacbLdt,   // SEL0=1 SEL1=0: bottom CUs compute, top pbanks serve the host
};

enum class PbankId { kTL = 0, kTR = 1, kBL = 2, kBR = 3 };

enum class PbankRole { kPimCompute, kHostAccess, kIdle };

enum class GemvFlow { kK, kV };

enum class PimMode { kFull, kHalf };

struct SelBits {
  int sel0 = 0;
  int sel1 = 0;
};

SelBits encode(PimInstruction instr);

// Throws std::invalid_argument for the unmapped (0,0) encoding or bits
// outside {0,1}.
PimInstruction decode(int sel0, int sel1);

const char* mnemonic(PimInstruction instr);
const char* pbank_name(PbankId id);
const char* role_name(PbankRole role);

// Role of each pseudo-bank (indexed by PbankId) while the instruction runs.
std::array<PbankRole, 4> active_roles(PimInstruction instr);

// Checks a concurrent host access against the instruction's role table.
// Returns std::nullopt when the access is legal, otherwise a description of
// the conflict.
std::optional<std::string> conflict_check(PimInstruction instr, PbankId host_target);

// Internal-clock cycles for one bank tile. Ragged tiles are padded to the
// flow granule (K: columns to the 128-byte row group; V: rows to the 64-row
// column group) and padded MACs cost cycles. Half mode serializes each
// full-mode cycle into two, so it is exactly 2x full for every valid tile.
// org.tile_setup_cycles, when nonzero, is added once per tile (doubled in
// half mode with the rest of the tile).
// Throws std::invalid_argument when the tile exceeds the per-bank buffer
// capacity (rows > 64 or cols > 128 with default org).
std::uint64_t gemv_tile_cycles(std::uint64_t tile_rows, std::uint64_t tile_cols,
                               GemvFlow flow, PimMode mode, const PimOrg& org = PimOrg{});

// Instruction used for a decode step in the given mode; half-mode steps
// alternate the compute half via `parity` so the host-visible pbanks swap.
PimInstruction instruction_for_mode(PimMode mode, std::uint64_t parity = 0);

// One line of the newline-delimited instruction trace:
// cycle,kind,sel0,sel1,bank,pbank_roles
std::string format_trace_record(std::uint64_t cycle, PimInstruction instr, std::uint32_t bank);

}  // namespace cdpim
