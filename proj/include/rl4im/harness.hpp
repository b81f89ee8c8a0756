#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rl4im/agent.hpp"
#include "rl4im/config.hpp"
#include "rl4im/csv.hpp"
#include "rl4im/graph.hpp"

namespace rl4im {

/// Missing inputs or failed work while running a command.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation methods in canonical output order.
inline constexpr std::array<std::string_view, 5> kMethods = {
    "rl4im", "greedy", "random", "ablation-optimistic", "ablation-pessimistic"};

/// Parses a comma list into canonical order without duplicates. Throws
/// ConfigError on unknown names or an empty list.
std::vector<std::string> parse_methods(std::string_view comma_list);

enum class Split { train, val, test };
std::string_view split_name(Split split);

struct GraphFile {
  Split split = Split::train;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::filesystem::path path;  // relative to the output directory
};

std::filesystem::path manifest_path(const ExperimentConfig& cfg);
std::filesystem::path checkpoint_path(const ExperimentConfig& cfg, RewardMode mode);
std::filesystem::path train_log_path(const ExperimentConfig& cfg, RewardMode mode);
std::filesystem::path results_path(const ExperimentConfig& cfg);
std::filesystem::path timing_path(const ExperimentConfig& cfg);

/// Writes graphs/<split>_NNNN.txt for every split plus manifest.txt under
/// the output directory. Graph i of a split is generated from
/// derive_seed(graph.seed, {split, i}).
std::vector<GraphFile> cmd_generate(const ExperimentConfig& cfg);

/// Graphs of one split as listed in the manifest, with env.p as edge
/// probability. Throws HarnessError if the manifest or a file is missing or
/// the graphs do not match graph.n.
std::vector<Graph> load_split(const ExperimentConfig& cfg, Split split);

/// Trains with train.reward and writes its checkpoint (best validation
/// network) and training log.
TrainResult cmd_train(const ExperimentConfig& cfg);

/// One record per (method, test graph, run) in canonical order; every
/// method sees the same episode seeds for a given (graph, run). Writes
/// results.csv.
std::vector<ResultRecord> cmd_evaluate(const ExperimentConfig& cfg,
                                       const std::vector<std::string>& methods);

/// Mean selection wall time per (method, test graph) over
/// eval.benchmark_repeats episodes. Writes timing.csv.
std::vector<TimingRecord> cmd_benchmark(const ExperimentConfig& cfg,
                                        const std::vector<std::string>& methods);

}  // namespace rl4im
