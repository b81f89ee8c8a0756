#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rl4im/agent.hpp"
#include "rl4im/env.hpp"

namespace rl4im {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphSetConfig {
  std::size_t n = 200;
  std::size_t m = 2;
  double triangle_prob = 0.05;
  std::size_t num_train = 200;
  std::size_t num_val = 5;
  std::size_t num_test = 10;
  std::uint64_t seed = 1;
};

struct EnvironmentConfig {
  std::size_t rounds = 2;  // env.T
  std::size_t budget = 4;  // env.B
  double q = 0.6;
  double p = 0.1;
  std::size_t num_sims = 100;
  bool exact_oracle = false;
};

struct EvaluationConfig {
  std::size_t runs_per_graph = 20;
  std::size_t benchmark_repeats = 1;
  std::uint64_t seed = 3;
};

/// Every knob of an experiment. Text form is one `section.key = value` per
/// line; `#` starts a comment. Defaults reproduce the reference protocol:
/// |V| = 200, T = 2, B = 4, q = 0.6, p = 0.1, 200 training graphs.
struct ExperimentConfig {
  GraphSetConfig graphs;
  EnvironmentConfig env;
  TrainConfig train;
  EvaluationConfig eval;
  std::filesystem::path output_dir = "out";

  EnvConfig env_config() const;
  /// Sets every seed field to `seed`.
  void override_seeds(std::uint64_t seed);
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

std::string_view reward_mode_name(RewardMode mode);
RewardMode parse_reward_mode(std::string_view name);

}  // namespace rl4im
