// Copyright (C) 2026 The cdpim Authors
// SPDX-License-Identifier: Apache-2.0
//
#include "cdpim/verify.hpp"

#include <iostream>

int main() {
  const auto results = cdpim::run_acceptance_checks(42);
  const int failures = cdpim::print_check_results(results, std::cout);
  return failures == 0 ? 0 : 1;
}
