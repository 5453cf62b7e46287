// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/kv_mapping.hpp"

#include <doctest.h>

#include <random>
#include <sstream>
#include <vector>

using namespace cdpim;

TEST_CASE("map_k(64,128) fills one bank and leaves the rest idle") {
  const LayoutPlan p = map_k(64, 128, PimOrg{});
  CHECK(p.passes == 1);
  CHECK(p.row_segments == 1);
  CHECK(p.col_passes == 1);
  CHECK(p.occupied_banks_in_pass(0) == 1);
  CHECK(p.chunk_count() == 256);  // 64 slots x 4 pbanks
  const LayoutStats st = p.stats();
  CHECK(st.occupied_banks == 1);
  CHECK(st.total_banks == 16);
  CHECK(st.bank_utilization == doctest::Approx(1.0 / 16.0));
  CHECK(st.padding_chunks == 0);
  CHECK(st.internal_cycles_total == 64);
}

TEST_CASE("k-flow element addressing matches the hand-derived layout") {
  const LayoutPlan p = map_k(64, 128, PimOrg{});
  const auto a = p.chunk_for_element(5, 40);
  REQUIRE(a.has_value());
  CHECK(a->die == 0);
  CHECK(a->bank == 0);
  CHECK(a->segment == 0);
  CHECK(a->cycle_slot == 5);
  CHECK(a->pbank == PbankId::kTR);  // columns 32-63
  CHECK(a->orientation == Orientation::kRowChunk);

  const auto elems = p.elements_at(*a);
  CHECK(elems[0].row == 5);
  CHECK(elems[0].col == 32);
  CHECK(elems[8].col == 40);
  for (const auto& e : elems) CHECK_FALSE(e.padding);
}

TEST_CASE("k-flow multi-die round robin") {
  // rows 2048 -> 2 row segments, cols 256 -> 2 col passes, 4 passes over 2 dies.
  const LayoutPlan p = map_k(2048, 256, PimOrg{}, 2);
  CHECK(p.passes == 4);
  CHECK(p.die_of_pass(0) == 0);
  CHECK(p.die_of_pass(1) == 1);
  CHECK(p.die_of_pass(3) == 1);
  CHECK(p.segment_of_pass(3) == 1);
  CHECK(p.pass_of(1, 1) == 3);
  CHECK_THROWS_AS(p.pass_of(2, 0), std::out_of_range);

  const auto a = p.chunk_for_element(1030, 130);
  REQUIRE(a.has_value());
  CHECK(a->die == 1);      // pass t = 1*2+1 = 3
  CHECK(a->segment == 1);  // per-die index 3/2
  CHECK(a->bank == 0);     // (1030 % 1024) / 64
  CHECK(a->cycle_slot == 6);
  CHECK(a->pbank == PbankId::kTL);  // (130 % 128) / 32 == 0
}

TEST_CASE("v-flow element addressing") {
  const LayoutPlan p = map_v(70, 300, PimOrg{});
  CHECK(p.row_segments == 2);  // ceil(70/64)
  CHECK(p.col_passes == 1);    // 300 <= 2048
  const auto a = p.chunk_for_element(65, 129);
  REQUIRE(a.has_value());
  CHECK(a->die == 0);
  CHECK(a->segment == 1);
  CHECK(a->bank == 1);        // col 129 -> second 128-col window
  CHECK(a->cycle_slot == 0);  // col_in_bank 1 -> pair 0
  CHECK(a->pbank == PbankId::kBL);  // odd column, rows 64..95 are the low half
  CHECK(a->orientation == Orientation::kColChunk);

  const auto elems = p.elements_at(*a);
  CHECK(elems[0].row == 64);
  CHECK(elems[0].col == 129);
  CHECK_FALSE(elems[5].padding);  // row 69 is real
  CHECK(elems[6].padding);        // row 70 is past the edge
}

TEST_CASE("every element is covered exactly once, both flows") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::uint64_t> dim(1, 300);
  const std::uint32_t dies[] = {1, 2, 4};
  for (int i = 0; i < 12; ++i) {
    const std::uint64_t rows = dim(rng), cols = dim(rng);
    const GemvFlow flow = i % 2 == 0 ? GemvFlow::kK : GemvFlow::kV;
    const LayoutPlan p = flow == GemvFlow::kK ? map_k(rows, cols, PimOrg{}, dies[i % 3])
                                              : map_v(rows, cols, PimOrg{}, dies[i % 3]);
    std::vector<int> hits(rows * cols, 0);
    const std::uint64_t n = p.chunk_count();
    std::uint64_t pad_chunks = 0;
    for (std::uint64_t ci = 0; ci < n; ++ci) {
      const auto info = p.chunk_at(ci);
      if (info.padding) ++pad_chunks;
      for (const auto& e : p.elements_at(info.addr)) {
        if (e.padding) continue;
        REQUIRE(e.row < rows);
        REQUIRE(e.col < cols);
        ++hits[e.row * cols + e.col];
      }
    }
    for (const int h : hits) CHECK(h == 1);
    CHECK(p.stats().padding_chunks == pad_chunks);
  }
}

TEST_CASE("chunk_for_element inverts chunk_at") {
  const LayoutPlan p = map_v(200, 500, PimOrg{}, 2);
  const std::uint64_t n = p.chunk_count();
  for (std::uint64_t ci = 0; ci < n; ci += 7) {
    const auto info = p.chunk_at(ci);
    for (const auto& e : p.elements_at(info.addr)) {
      if (e.padding) continue;
      const auto back = p.chunk_for_element(e.row, e.col);
      REQUIRE(back.has_value());
      CHECK(back->die == info.addr.die);
      CHECK(back->bank == info.addr.bank);
      CHECK(back->segment == info.addr.segment);
      CHECK(back->cycle_slot == info.addr.cycle_slot);
      CHECK(back->pbank == info.addr.pbank);
    }
  }
  CHECK_FALSE(p.chunk_for_element(200, 0).has_value());
  CHECK_FALSE(p.chunk_for_element(0, 500).has_value());
}

TEST_CASE("bank tiles partition the matrix") {
  for (auto flow : {GemvFlow::kK, GemvFlow::kV}) {
    const std::uint64_t rows = 150, cols = 200;
    const LayoutPlan p = flow == GemvFlow::kK ? map_k(rows, cols, PimOrg{}, 2)
                                              : map_v(rows, cols, PimOrg{}, 2);
    std::vector<int> hits(rows * cols, 0);
    for (const auto& t : p.bank_tiles()) {
      CHECK(t.row_hi - t.row_lo <= 64);
      CHECK(t.col_hi - t.col_lo <= 128);
      for (std::uint64_t r = t.row_lo; r < t.row_hi; ++r) {
        for (std::uint64_t c = t.col_lo; c < t.col_hi; ++c) ++hits[r * cols + c];
      }
    }
    for (const int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("pass cycle counts follow the tile law") {
  // K: bank 0 holds min(64, seg_rows) rows streamed one per cycle.
  const LayoutPlan k = map_k(70, 128, PimOrg{});
  CHECK(k.pass_cycles(0) == 64);
  const LayoutPlan k2 = map_k(3, 128, PimOrg{});
  CHECK(k2.pass_cycles(0) == 3);
  // V: two columns per cycle over the widest bank window.
  const LayoutPlan v = map_v(10, 7, PimOrg{});
  CHECK(v.pass_cycles(0) == 4);
  const LayoutPlan v2 = map_v(10, 2048 + 5, PimOrg{});
  CHECK(v2.pass_cycles(0) == 64);  // first pass full windows
  CHECK(v2.pass_cycles(1) == 3);   // trailing 5 columns
}

TEST_CASE("critical path cycles take the busiest die") {
  // 2 segments x 1 col pass over 2 dies: one pass per die.
  const LayoutPlan p = map_k(2048, 100, PimOrg{}, 2);
  const LayoutStats st = p.stats();
  CHECK(st.passes == 2);
  CHECK(st.internal_cycles_total == 128);
  CHECK(st.internal_cycles_critical == 64);
  // Same matrix on one die serializes both passes.
  const LayoutStats st1 = map_k(2048, 100, PimOrg{}, 1).stats();
  CHECK(st1.internal_cycles_critical == 128);
}

TEST_CASE("capacity and argument guards") {
  CHECK_THROWS_AS(map_k(1u << 20, 1u << 13, PimOrg{}, 1), std::invalid_argument);
  CHECK_NOTHROW(map_k(1u << 20, 1u << 13, PimOrg{}, 4));
  PimOrg odd;
  odd.burst_bytes_per_pbank = 16;
  CHECK_THROWS_AS(map_k(64, 128, odd), std::invalid_argument);
  CHECK_THROWS_AS(map_k(64, 128, PimOrg{}, 0), std::invalid_argument);
}

TEST_CASE("zero-sized matrices give an empty plan") {
  const LayoutPlan p = map_k(0, 128, PimOrg{});
  CHECK(p.empty());
  CHECK(p.chunk_count() == 0);
  CHECK(p.bank_tiles().empty());
  CHECK(p.stats().occupied_banks == 0);
}

TEST_CASE("q broadcast slices cover the vector in 64-element bank slices") {
  const auto one = plan_q_broadcast(64, PimOrg{});
  REQUIRE(one.size() == 16);
  CHECK(one[0].elem_lo == 0);
  CHECK(one[0].elem_hi == 64);
  CHECK_FALSE(one[0].padded);
  for (std::size_t i = 1; i < one.size(); ++i) {
    CHECK(one[i].padded);
    CHECK(one[i].elem_hi == one[i].elem_lo);
  }

  const auto big = plan_q_broadcast(1500, PimOrg{});
  REQUIRE(big.size() == 32);  // 2 segments x 16 banks
  CHECK(big[16].segment == 1);
  CHECK(big[16].elem_lo == 1024);
  std::uint64_t covered = 0;
  for (const auto& s : big) covered += s.elem_hi - s.elem_lo;
  CHECK(covered == 1500);
  CHECK(plan_q_broadcast(0, PimOrg{}).empty());
}

TEST_CASE("attention broadcast subvectors reach every CU") {
  const auto subs = plan_attn_broadcast(130, PimOrg{});
  REQUIRE(subs.size() == 3);
  CHECK(subs[0].elem_hi == 64);
  CHECK_FALSE(subs[0].padded);
  CHECK(subs[2].elem_lo == 128);
  CHECK(subs[2].elem_hi == 130);
  CHECK(subs[2].padded);
  for (const auto& s : subs) CHECK(s.to_all_cus);
}

TEST_CASE("dies_for_row_segment resolves round-robin placement") {
  // 8 col passes per segment spread over 4 dies: every die serves segment 0.
  const LayoutPlan p = map_k(1024, 1024, PimOrg{}, 4);
  const auto dies = dies_for_row_segment(p, 0);
  REQUIRE(dies.size() == 4);
  CHECK(dies[0] == 0);
  CHECK(dies[3] == 3);
  CHECK(dies_for_row_segment(p, 99).empty());

  // One col pass per segment: segment s lands on die s % 2.
  const LayoutPlan tall = map_k(4096, 128, PimOrg{}, 2);
  CHECK(dies_for_row_segment(tall, 0) == std::vector<std::uint32_t>{0});
  CHECK(dies_for_row_segment(tall, 1) == std::vector<std::uint32_t>{1});
}

TEST_CASE("layout csv dump is sorted and complete") {
  const LayoutPlan p = map_k(2, 40, PimOrg{});
  std::ostringstream os;
  dump_layout_csv(p, os);
  std::istringstream in(os.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "element_row,element_col,die,bank,pbank,segment,cycle_slot,is_padding");
  std::size_t rows = 0;
  bool saw_origin = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.rfind("0,0,", 0) == 0) {
      saw_origin = true;
      CHECK(line == "0,0,0,0,TL,0,0,0");
    }
  }
  CHECK(rows == p.chunk_count() * 32);
  CHECK(saw_origin);
}
