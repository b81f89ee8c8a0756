#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rl4im {

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double worst = 0.0;  // largest violation margin seen; <= 0 when passing
  std::string detail;
};

struct AuditOptions {
  std::size_t random_graphs = 40;  // small graphs for the reward sweep
  std::size_t max_nodes = 5;
  std::size_t max_budget = 4;
  std::uint64_t seed = 1;
};

/// Self-check of the reward-shaping layer against exact enumeration:
/// realization normalization, the arithmetic-sequence identity, surrogate
/// vs exact reward (gap bound, bracketing, b <= 2 exactness) on small random
/// graphs, and influence-evaluation counts.
std::vector<AuditCheck> run_reward_audit(const AuditOptions& options = {});

/// Fixed-width pass/fail table.
std::string format_audit_table(const std::vector<AuditCheck>& checks);

}  // namespace rl4im
