#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcmb {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 2024;
  std::uint64_t realness_channels = 10'000;
  std::uint64_t oracle_trials = 1'000;
  std::uint64_t complexity_trials = 2'000;
  std::uint64_t lattice_instances = 2'000;
};

/// Invariant suite behind the `validate` command: encoder equivalence,
/// decoupling, R realness, decoder/oracle agreement and node budgets.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace gcmb
