// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cdpim {

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Full self-check suite: functional equivalence against reference GEMV,
// layout bijection, bandwidth/ISA/cycle facts, scheduler invariants,
// end-to-end performance trends, overhead numbers, and report determinism.
// Deterministic for a fixed seed.
std::vector<CheckResult> run_acceptance_checks(std::uint64_t seed = 42);

// Prints one "PASS|FAIL <id> <name> (<detail>)" line per check; returns the
// number of failures.
int print_check_results(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace cdpim
