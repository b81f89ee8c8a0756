#include "rl4im/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "rl4im/checkpoint.hpp"
#include "rl4im/rollout.hpp"

namespace rl4im {

namespace {

constexpr std::string_view kManifestVersion = "# rl4im manifest v1";

std::string_view mode_suffix(RewardMode mode) {
  switch (mode) {
    case RewardMode::surrogate:
      return "";
    case RewardMode::optimistic:
      return "-optimistic";
    case RewardMode::pessimistic:
      return "-pessimistic";
  }
  return "";
}

std::size_t split_count(const ExperimentConfig& cfg, Split split) {
  switch (split) {
    case Split::train:
      return cfg.graphs.num_train;
    case Split::val:
      return cfg.graphs.num_val;
    case Split::test:
      return cfg.graphs.num_test;
  }
  return 0;
}

std::optional<Split> parse_split(std::string_view name) {
  for (Split s : {Split::train, Split::val, Split::test}) {
    if (split_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<GraphFile> read_manifest(const ExperimentConfig& cfg) {
  const auto path = manifest_path(cfg);
  std::ifstream in(path);
  if (!in) throw HarnessError("missing " + path.string() + "; run `generate` first");
  std::vector<GraphFile> files;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string split;
    GraphFile f;
    std::string rel;
    if (!(fields >> split >> f.index >> f.seed >> rel) || !parse_split(split)) {
      throw HarnessError(path.string() + ":" + std::to_string(line_no) + ": malformed entry");
    }
    f.split = *parse_split(split);
    f.path = rel;
    files.push_back(std::move(f));
  }
  return files;
}

EstimatorSpec scoring_spec(const ExperimentConfig& cfg) {
  return {cfg.env.exact_oracle, cfg.env.num_sims};
}

std::optional<RewardMode> checkpoint_mode(std::string_view method) {
  if (method == "rl4im") return RewardMode::surrogate;
  if (method == "ablation-optimistic") return RewardMode::optimistic;
  if (method == "ablation-pessimistic") return RewardMode::pessimistic;
  return std::nullopt;
}

QNetworkParams load_agent(const ExperimentConfig& cfg, RewardMode mode) {
  const auto path = checkpoint_path(cfg, mode);
  if (!std::filesystem::exists(path)) {
    throw HarnessError("missing checkpoint " + path.string() + "; run `train` with train.reward = " +
                       std::string(reward_mode_name(mode)) + " first");
  }
  try {
    return load_checkpoint(path, cfg.train.network);
  } catch (const CheckpointError& e) {
    throw HarnessError(e.what());
  }
}

// Policies for the requested methods. Q-network parameters are owned by
// `agents` and must outlive the returned policies.
std::vector<Policy> build_policies(const ExperimentConfig& cfg,
                                   const std::vector<std::string>& methods,
                                   std::vector<QNetworkParams>& agents) {
  agents.clear();
  agents.reserve(methods.size());
  std::vector<Policy> policies;
  for (const auto& method : methods) {
    if (const auto mode = checkpoint_mode(method)) {
      agents.push_back(load_agent(cfg, *mode));
      policies.push_back(make_q_policy(agents.back()));
    } else if (method == "greedy") {
      policies.push_back(make_greedy_policy(scoring_spec(cfg)));
    } else if (method == "random") {
      policies.push_back(make_random_policy());
    } else {
      throw ConfigError("unknown method '" + method + "'");
    }
  }
  return policies;
}

void ensure_output_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw HarnessError("cannot create " + cfg.output_dir.string() + ": " + ec.message());
}

}  // namespace

std::vector<std::string> parse_methods(std::string_view comma_list) {
  std::vector<bool> wanted(kMethods.size(), false);
  std::size_t start = 0;
  bool any = false;
  while (start <= comma_list.size()) {
    auto end = comma_list.find(',', start);
    if (end == std::string_view::npos) end = comma_list.size();
    std::string_view name = comma_list.substr(start, end - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    start = end + 1;
    if (name.empty()) continue;
    const auto it = std::find(kMethods.begin(), kMethods.end(), name);
    if (it == kMethods.end()) throw ConfigError("unknown method '" + std::string(name) + "'");
    wanted[static_cast<std::size_t>(it - kMethods.begin())] = true;
    any = true;
  }
  if (!any) throw ConfigError("no methods given");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kMethods.size(); ++i) {
    if (wanted[i]) out.emplace_back(kMethods[i]);
  }
  return out;
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::val:
      return "val";
    case Split::test:
      return "test";
  }
  return "train";
}

std::filesystem::path manifest_path(const ExperimentConfig& cfg) {
  return cfg.output_dir / "manifest.txt";
}

std::filesystem::path checkpoint_path(const ExperimentConfig& cfg, RewardMode mode) {
  return cfg.output_dir / ("checkpoint" + std::string(mode_suffix(mode)) + ".bin");
}

std::filesystem::path train_log_path(const ExperimentConfig& cfg, RewardMode mode) {
  return cfg.output_dir / ("train_log" + std::string(mode_suffix(mode)) + ".csv");
}

std::filesystem::path results_path(const ExperimentConfig& cfg) {
  return cfg.output_dir / "results.csv";
}

std::filesystem::path timing_path(const ExperimentConfig& cfg) {
  return cfg.output_dir / "timing.csv";
}

std::vector<GraphFile> cmd_generate(const ExperimentConfig& cfg) {
  if (cfg.graphs.num_train == 0) throw ConfigError("graph.num_train = 0 leaves nothing to train on");
  ensure_output_dir(cfg);
  std::filesystem::create_directories(cfg.output_dir / "graphs");

  std::vector<GraphFile> files;
  for (Split split : {Split::train, Split::val, Split::test}) {
    for (std::size_t i = 0; i < split_count(cfg, split); ++i) {
      GraphFile f;
      f.split = split;
      f.index = i;
      f.seed = derive_seed(cfg.graphs.seed, {static_cast<std::uint64_t>(split), i});
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04zu.txt", std::string(split_name(split)).c_str(), i);
      f.path = std::filesystem::path("graphs") / name;

      GraphGenConfig gen{cfg.graphs.n, cfg.graphs.m, cfg.graphs.triangle_prob, f.seed};
      try {
        save_edge_list(generate_powerlaw_cluster(gen, cfg.env.p), cfg.output_dir / f.path);
      } catch (const std::exception& e) {
        throw HarnessError(e.what());
      }
      files.push_back(std::move(f));
    }
  }

  std::ofstream out(manifest_path(cfg), std::ios::trunc);
  out << kManifestVersion << '\n';
  out << "# generation config\n";
  std::istringstream text(to_text(cfg));
  for (std::string line; std::getline(text, line);) {
    if (line.starts_with("graph.") || line.starts_with("env.p ")) out << "# " << line << '\n';
  }
  out << "# split index seed path\n";
  for (const auto& f : files) {
    out << split_name(f.split) << ' ' << f.index << ' ' << f.seed << ' ' << f.path.generic_string()
        << '\n';
  }
  if (!out.flush()) throw HarnessError("write failed: " + manifest_path(cfg).string());
  return files;
}

std::vector<Graph> load_split(const ExperimentConfig& cfg, Split split) {
  std::vector<Graph> graphs;
  for (const auto& f : read_manifest(cfg)) {
    if (f.split != split) continue;
    if (f.index != graphs.size()) {
      throw HarnessError(manifest_path(cfg).string() + ": " + std::string(split_name(split)) +
                         " graphs are not listed in index order");
    }
    try {
      graphs.push_back(load_edge_list(cfg.output_dir / f.path, cfg.env.p));
    } catch (const std::exception& e) {
      throw HarnessError(e.what());
    }
    if (graphs.back().node_count() != cfg.graphs.n) {
      throw HarnessError((cfg.output_dir / f.path).string() + " has " +
                         std::to_string(graphs.back().node_count()) + " nodes but graph.n = " +
                         std::to_string(cfg.graphs.n) + "; rerun `generate`");
    }
  }
  if (graphs.empty()) {
    throw HarnessError("no " + std::string(split_name(split)) + " graphs in " +
                       manifest_path(cfg).string());
  }
  return graphs;
}

TrainResult cmd_train(const ExperimentConfig& cfg) {
  const auto train_graphs = load_split(cfg, Split::train);
  const auto val_graphs = load_split(cfg, Split::val);
  TrainConfig tc = cfg.train;
  tc.num_sims = cfg.env.num_sims;
  TrainResult result = train(train_graphs, val_graphs, cfg.env_config(), tc);
  ensure_output_dir(cfg);
  save_checkpoint(result.best, checkpoint_path(cfg, tc.reward));
  write_train_log(train_log_path(cfg, tc.reward), result.log);
  return result;
}

std::vector<ResultRecord> cmd_evaluate(const ExperimentConfig& cfg,
                                       const std::vector<std::string>& methods) {
  if (methods.empty()) throw ConfigError("no methods given");
  const auto graphs = load_split(cfg, Split::test);
  std::vector<QNetworkParams> agents;
  const auto policies = build_policies(cfg, methods, agents);
  const EnvConfig env_cfg = cfg.env_config();
  const EstimatorSpec scoring = scoring_spec(cfg);

  std::vector<ResultRecord> records;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      const double n = static_cast<double>(graphs[g].node_count());
      for (std::size_t run = 0; run < cfg.eval.runs_per_graph; ++run) {
        const auto outcome = run_episode(graphs[g], env_cfg, policies[m],
                                         episode_seeds(cfg.eval.seed, g, run), scoring);
        records.push_back({methods[m], g, run, outcome.influence, outcome.influence / n,
                           outcome.selection_seconds});
      }
    }
  }
  ensure_output_dir(cfg);
  write_results(results_path(cfg), records);
  return records;
}

std::vector<TimingRecord> cmd_benchmark(const ExperimentConfig& cfg,
                                        const std::vector<std::string>& methods) {
  if (methods.empty()) throw ConfigError("no methods given");
  const auto graphs = load_split(cfg, Split::test);
  std::vector<QNetworkParams> agents;
  const auto policies = build_policies(cfg, methods, agents);
  const EnvConfig env_cfg = cfg.env_config();
  const EstimatorSpec scoring = scoring_spec(cfg);

  std::vector<TimingRecord> records;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      double total = 0.0;
      for (std::size_t rep = 0; rep < cfg.eval.benchmark_repeats; ++rep) {
        total += run_episode(graphs[g], env_cfg, policies[m], episode_seeds(cfg.eval.seed, g, rep),
                             scoring)
                     .selection_seconds;
      }
      records.push_back({methods[m], g, total / static_cast<double>(cfg.eval.benchmark_repeats)});
    }
  }
  ensure_output_dir(cfg);
  write_timing(timing_path(cfg), records);
  return records;
}

}  // namespace rl4im
