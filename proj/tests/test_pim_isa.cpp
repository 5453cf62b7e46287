// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/pim_isa.hpp"

#include <doctest.h>

#include <random>

using namespace cdpim;

TEST_CASE("instruction encodings round trip") {
  CHECK(decode(1, 1) == PimInstruction::kPimMacFm);
  CHECK(decode(0, 1) == PimInstruction::kMactLdb);
  CHECK(decode(1, 0) == PimInstruction::kMacbLdt);
  for (auto instr : {PimInstruction::kPimMacFm, PimInstruction::kMactLdb,
                     PimInstruction::kMacbLdt}) {
    const SelBits sel = encode(instr);
    CHECK(decode(sel.sel0, sel.sel1) == instr);
  }
}

TEST_CASE("the (0,0) pattern and junk bits decode to errors") {
  CHECK_THROWS_AS(decode(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(decode(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(decode(0, -1), std::invalid_argument);
}

TEST_CASE("mnemonics") {
  CHECK(std::string(mnemonic(PimInstruction::kPimMacFm)) == "PIM_MAC_FM");
  CHECK(std::string(mnemonic(PimInstruction::kMactLdb)) == "MACT_LDB");
  CHECK(std::string(mnemonic(PimInstruction::kMacbLdt)) == "MACB_LDT");
}

TEST_CASE("role tables gate the right pseudo-bank halves") {
  const auto fm = active_roles(PimInstruction::kPimMacFm);
  for (auto r : fm) CHECK(r == PbankRole::kPimCompute);

  const auto mt = active_roles(PimInstruction::kMactLdb);
  CHECK(mt[0] == PbankRole::kPimCompute);  // TL
  CHECK(mt[1] == PbankRole::kPimCompute);  // TR
  CHECK(mt[2] == PbankRole::kHostAccess);  // BL
  CHECK(mt[3] == PbankRole::kHostAccess);  // BR

  const auto mb = active_roles(PimInstruction::kMacbLdt);
  CHECK(mb[0] == PbankRole::kHostAccess);
  CHECK(mb[1] == PbankRole::kHostAccess);
  CHECK(mb[2] == PbankRole::kPimCompute);
  CHECK(mb[3] == PbankRole::kPimCompute);
}

TEST_CASE("conflict check allows only the host-access half") {
  CHECK_FALSE(conflict_check(PimInstruction::kMactLdb, PbankId::kBL).has_value());
  CHECK_FALSE(conflict_check(PimInstruction::kMactLdb, PbankId::kBR).has_value());
  CHECK(conflict_check(PimInstruction::kMactLdb, PbankId::kTL).has_value());
  CHECK(conflict_check(PimInstruction::kMacbLdt, PbankId::kBR).has_value());
  for (auto pb : {PbankId::kTL, PbankId::kTR, PbankId::kBL, PbankId::kBR}) {
    CHECK(conflict_check(PimInstruction::kPimMacFm, pb).has_value());
  }
}

TEST_CASE("die-pass tile takes exactly 64 internal cycles") {
  CHECK(gemv_tile_cycles(64, 128, GemvFlow::kK, PimMode::kFull) == 64);
  CHECK(gemv_tile_cycles(64, 128, GemvFlow::kV, PimMode::kFull) == 64);
  CHECK(gemv_tile_cycles(64, 128, GemvFlow::kK, PimMode::kHalf) == 128);
  CHECK(gemv_tile_cycles(64, 128, GemvFlow::kV, PimMode::kHalf) == 128);
}

TEST_CASE("ragged tiles pad to the flow granule") {
  // K streams one full 128-byte row group per cycle regardless of cols.
  CHECK(gemv_tile_cycles(3, 1, GemvFlow::kK, PimMode::kFull) == 3);
  CHECK(gemv_tile_cycles(3, 128, GemvFlow::kK, PimMode::kFull) == 3);
  // V reduces two columns per cycle over the padded 64-row group.
  CHECK(gemv_tile_cycles(1, 7, GemvFlow::kV, PimMode::kFull) == 4);
  CHECK(gemv_tile_cycles(64, 1, GemvFlow::kV, PimMode::kFull) == 1);
}

TEST_CASE("half mode is exactly twice full mode for any tile") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint64_t> rd(1, 64), cd(1, 128);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t r = rd(rng), c = cd(rng);
    for (auto flow : {GemvFlow::kK, GemvFlow::kV}) {
      const auto full = gemv_tile_cycles(r, c, flow, PimMode::kFull);
      CHECK(gemv_tile_cycles(r, c, flow, PimMode::kHalf) == 2 * full);
    }
  }
}

TEST_CASE("tile bounds and degenerate tiles") {
  CHECK(gemv_tile_cycles(0, 50, GemvFlow::kK, PimMode::kFull) == 0);
  CHECK(gemv_tile_cycles(10, 0, GemvFlow::kV, PimMode::kHalf) == 0);
  CHECK_THROWS_AS(gemv_tile_cycles(65, 1, GemvFlow::kK, PimMode::kFull),
                  std::invalid_argument);
  CHECK_THROWS_AS(gemv_tile_cycles(1, 129, GemvFlow::kV, PimMode::kFull),
                  std::invalid_argument);
}

TEST_CASE("tile setup cycles preserve the 2x half-mode law") {
  PimOrg org;
  org.tile_setup_cycles = 3;
  const auto full = gemv_tile_cycles(64, 128, GemvFlow::kK, PimMode::kFull, org);
  CHECK(full == 67);
  CHECK(gemv_tile_cycles(64, 128, GemvFlow::kK, PimMode::kHalf, org) == 2 * full);
}

TEST_CASE("mode to instruction selection alternates the compute half") {
  CHECK(instruction_for_mode(PimMode::kFull, 0) == PimInstruction::kPimMacFm);
  CHECK(instruction_for_mode(PimMode::kFull, 1) == PimInstruction::kPimMacFm);
  CHECK(instruction_for_mode(PimMode::kHalf, 0) == PimInstruction::kMactLdb);
  CHECK(instruction_for_mode(PimMode::kHalf, 1) == PimInstruction::kMacbLdt);
  CHECK(instruction_for_mode(PimMode::kHalf, 2) == PimInstruction::kMactLdb);
}

TEST_CASE("trace record format") {
  CHECK(format_trace_record(5, PimInstruction::kMactLdb, 3) ==
        "5,MACT_LDB,0,1,3,TL=pim_compute|TR=pim_compute|BL=host_access|BR=host_access");
  CHECK(format_trace_record(0, PimInstruction::kPimMacFm, 15) ==
        "0,PIM_MAC_FM,1,1,15,TL=pim_compute|TR=pim_compute|BL=pim_compute|BR=pim_compute");
}
