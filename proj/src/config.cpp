#include "rl4im/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace rl4im {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Accessor>
Field size_field(Accessor access) {
  return {[access](ExperimentConfig& c, std::string_view k, std::string_view v) {
            access(c) = parse_number<std::size_t>(k, v);
          },
          [access](const ExperimentConfig& c) {
            return std::to_string(access(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Accessor>
Field seed_field(Accessor access) {
  return {[access](ExperimentConfig& c, std::string_view k, std::string_view v) {
            access(c) = parse_number<std::uint64_t>(k, v);
          },
          [access](const ExperimentConfig& c) {
            return std::to_string(access(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Accessor>
Field real_field(Accessor access) {
  return {[access](ExperimentConfig& c, std::string_view k, std::string_view v) {
            access(c) = parse_number<double>(k, v);
          },
          [access](const ExperimentConfig& c) {
            return format_double(access(const_cast<ExperimentConfig&>(c)));
          }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"graph.n", size_field([](C& c) -> std::size_t& { return c.graphs.n; })},
      {"graph.m", size_field([](C& c) -> std::size_t& { return c.graphs.m; })},
      {"graph.triangle_prob", real_field([](C& c) -> double& { return c.graphs.triangle_prob; })},
      {"graph.num_train", size_field([](C& c) -> std::size_t& { return c.graphs.num_train; })},
      {"graph.num_val", size_field([](C& c) -> std::size_t& { return c.graphs.num_val; })},
      {"graph.num_test", size_field([](C& c) -> std::size_t& { return c.graphs.num_test; })},
      {"graph.seed", seed_field([](C& c) -> std::uint64_t& { return c.graphs.seed; })},
      {"env.T", size_field([](C& c) -> std::size_t& { return c.env.rounds; })},
      {"env.B", size_field([](C& c) -> std::size_t& { return c.env.budget; })},
      {"env.q", real_field([](C& c) -> double& { return c.env.q; })},
      {"env.p", real_field([](C& c) -> double& { return c.env.p; })},
      {"env.num_sims", size_field([](C& c) -> std::size_t& { return c.env.num_sims; })},
      {"env.exact_oracle",
       {[](C& c, std::string_view k, std::string_view v) { c.env.exact_oracle = parse_bool(k, v); },
        [](const C& c) { return std::string(c.env.exact_oracle ? "true" : "false"); }}},
      {"train.gamma", real_field([](C& c) -> double& { return c.train.gamma; })},
      {"train.batch_size", size_field([](C& c) -> std::size_t& { return c.train.batch_size; })},
      {"train.max_train_steps",
       size_field([](C& c) -> std::size_t& { return c.train.max_train_steps; })},
      {"train.epsilon_start", real_field([](C& c) -> double& { return c.train.epsilon_start; })},
      {"train.epsilon_end", real_field([](C& c) -> double& { return c.train.epsilon_end; })},
      {"train.epsilon_decay_steps",
       size_field([](C& c) -> std::size_t& { return c.train.epsilon_decay_steps; })},
      {"train.learning_rate", real_field([](C& c) -> double& { return c.train.learning_rate; })},
      {"train.adam_beta1", real_field([](C& c) -> double& { return c.train.adam_beta1; })},
      {"train.adam_beta2", real_field([](C& c) -> double& { return c.train.adam_beta2; })},
      {"train.adam_epsilon", real_field([](C& c) -> double& { return c.train.adam_epsilon; })},
      {"train.target_update_interval",
       size_field([](C& c) -> std::size_t& { return c.train.target_update_interval; })},
      {"train.validation_interval",
       size_field([](C& c) -> std::size_t& { return c.train.validation_interval; })},
      {"train.episodes_per_validation_graph",
       size_field([](C& c) -> std::size_t& { return c.train.episodes_per_validation_graph; })},
      {"train.replay_capacity",
       size_field([](C& c) -> std::size_t& { return c.train.replay_capacity; })},
      {"train.embed_dim", size_field([](C& c) -> std::size_t& { return c.train.network.embed_dim; })},
      {"train.embed_iters",
       size_field([](C& c) -> std::size_t& { return c.train.network.embed_iters; })},
      {"train.hidden", size_field([](C& c) -> std::size_t& { return c.train.network.hidden; })},
      {"train.reward",
       {[](C& c, std::string_view, std::string_view v) { c.train.reward = parse_reward_mode(v); },
        [](const C& c) { return std::string(reward_mode_name(c.train.reward)); }}},
      {"train.seed", seed_field([](C& c) -> std::uint64_t& { return c.train.rng_seed; })},
      {"eval.runs_per_graph", size_field([](C& c) -> std::size_t& { return c.eval.runs_per_graph; })},
      {"eval.benchmark_repeats",
       size_field([](C& c) -> std::size_t& { return c.eval.benchmark_repeats; })},
      {"eval.seed", seed_field([](C& c) -> std::uint64_t& { return c.eval.seed; })},
      {"output.dir",
       {[](C& c, std::string_view, std::string_view v) { c.output_dir = std::string(v); },
        [](const C& c) { return c.output_dir.string(); }}},
  };
  return table;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.graphs.m >= 1 && c.graphs.m < c.graphs.n, "graph.m must satisfy 1 <= m < n");
  require(c.graphs.triangle_prob >= 0.0 && c.graphs.triangle_prob <= 1.0,
          "graph.triangle_prob must lie in [0, 1]");
  require(c.env.rounds >= 1 && c.env.budget >= 1, "env.T and env.B must be positive");
  require(c.env.rounds * c.env.budget <= c.graphs.n, "env.T * env.B must not exceed graph.n");
  require(c.env.q >= 0.0 && c.env.q <= 1.0, "env.q must lie in [0, 1]");
  require(c.env.p >= 0.0 && c.env.p <= 1.0, "env.p must lie in [0, 1]");
  require(c.env.num_sims >= 1, "env.num_sims must be positive");
  require(c.train.gamma >= 0.0 && c.train.gamma <= 1.0, "train.gamma must lie in [0, 1]");
  require(c.train.epsilon_start >= 0.0 && c.train.epsilon_start <= 1.0 &&
              c.train.epsilon_end >= 0.0 && c.train.epsilon_end <= 1.0,
          "train.epsilon_* must lie in [0, 1]");
  require(c.train.batch_size >= 1, "train.batch_size must be positive");
  require(c.train.validation_interval >= 1, "train.validation_interval must be positive");
  require(c.train.target_update_interval >= 1, "train.target_update_interval must be positive");
  require(c.train.replay_capacity >= 1, "train.replay_capacity must be positive");
  require(c.train.network.embed_dim >= 1 && c.train.network.embed_iters >= 1 &&
              c.train.network.hidden >= 1,
          "network dimensions must be positive");
  require(c.eval.runs_per_graph >= 1, "eval.runs_per_graph must be positive");
  require(c.eval.benchmark_repeats >= 1, "eval.benchmark_repeats must be positive");
}

}  // namespace

EnvConfig ExperimentConfig::env_config() const {
  EnvConfig e;
  e.rounds = env.rounds;
  e.budget = env.budget;
  e.q = env.q;
  return e;
}

void ExperimentConfig::override_seeds(std::uint64_t seed) {
  graphs.seed = seed;
  train.rng_seed = seed;
  eval.seed = seed;
}

std::string_view reward_mode_name(RewardMode mode) {
  switch (mode) {
    case RewardMode::surrogate:
      return "surrogate";
    case RewardMode::optimistic:
      return "optimistic";
    case RewardMode::pessimistic:
      return "pessimistic";
  }
  return "surrogate";
}

RewardMode parse_reward_mode(std::string_view name) {
  for (RewardMode m : {RewardMode::surrogate, RewardMode::optimistic, RewardMode::pessimistic}) {
    if (name == reward_mode_name(m)) return m;
  }
  throw ConfigError("unknown reward mode '" + std::string(name) +
                    "' (expected surrogate, optimistic or pessimistic)");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  cfg.train.num_sims = cfg.env.num_sims;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
    it->second.set(cfg, key, value);
  }
  cfg.train.num_sims = cfg.env.num_sims;
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace rl4im
