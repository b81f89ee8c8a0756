// Command-line driver: generate graph sets, train, evaluate, benchmark and
// audit the reward shaping.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rl4im/audit.hpp"
#include "rl4im/config.hpp"
#include "rl4im/harness.hpp"
#include "rl4im/kernels.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeFailure = 2;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string methods;
};

rl4im::ExperimentConfig resolve_config(const Options& opt) {
  rl4im::ExperimentConfig cfg =
      opt.config_path.empty() ? rl4im::ExperimentConfig{} : rl4im::load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.seed) cfg.override_seeds(*opt.seed);
  return cfg;
}

void print_summary(const std::vector<rl4im::ResultRecord>& records) {
  std::printf("%-22s %10s %10s %6s\n", "method", "mean", "std", "runs");
  for (const auto& s : rl4im::summarize_results(records)) {
    std::printf("%-22s %10.4f %10.4f %6zu\n", s.method.c_str(), s.mean, s.stddev, s.count);
  }
}

int run(const std::string& command, const Options& opt) {
  if (command == "reward-audit") {
    rl4im::AuditOptions audit;
    if (opt.seed) audit.seed = *opt.seed;
    const auto checks = rl4im::run_reward_audit(audit);
    std::fputs(rl4im::format_audit_table(checks).c_str(), stdout);
    for (const auto& c : checks) {
      if (!c.passed) return kRuntimeFailure;
    }
    return 0;
  }

  const rl4im::ExperimentConfig cfg = resolve_config(opt);
  if (command == "generate") {
    const auto files = rl4im::cmd_generate(cfg);
    std::printf("wrote %zu graphs and %s\n", files.size(),
                rl4im::manifest_path(cfg).string().c_str());
  } else if (command == "train") {
    std::printf("kernels: %s\n",
                std::string(rl4im::kernels::level_name(rl4im::kernels::active_level())).c_str());
    const auto result = rl4im::cmd_train(cfg);
    if (result.best_row < result.log.size()) {
      const auto& row = result.log[result.best_row];
      std::printf("best validation mean %.4f (std %.4f) at step %zu\n", row.val_mean, row.val_std,
                  row.step);
    } else {
      std::printf("no validation ran; saved the initial network\n");
    }
    std::printf("wrote %s and %s\n",
                rl4im::checkpoint_path(cfg, cfg.train.reward).string().c_str(),
                rl4im::train_log_path(cfg, cfg.train.reward).string().c_str());
  } else if (command == "evaluate") {
    const auto methods =
        rl4im::parse_methods(opt.methods.empty() ? "rl4im,greedy,random" : opt.methods);
    const auto records = rl4im::cmd_evaluate(cfg, methods);
    print_summary(records);
    std::printf("wrote %s\n", rl4im::results_path(cfg).string().c_str());
  } else if (command == "benchmark") {
    const auto methods =
        rl4im::parse_methods(opt.methods.empty() ? "rl4im,greedy,random" : opt.methods);
    const auto records = rl4im::cmd_benchmark(cfg, methods);
    for (const auto& r : records) {
      std::printf("%-22s graph %3zu  %.6f s\n", r.method.c_str(), r.graph_id, r.seconds);
    }
    std::printf("wrote %s\n", rl4im::timing_path(cfg).string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contingency-aware influence maximization experiments"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file (section.key = value lines)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Overrides every seed field");
  };

  auto* generate = app.add_subcommand("generate", "Write train/val/test graph sets and a manifest");
  auto* train = app.add_subcommand("train", "Train the Q-network and save the best checkpoint");
  auto* evaluate = app.add_subcommand("evaluate", "Run methods on the test graphs");
  auto* benchmark = app.add_subcommand("benchmark", "Time per-episode selection on test graphs");
  auto* audit = app.add_subcommand("reward-audit", "Check reward shaping against enumeration");
  for (auto* sub : {generate, train, evaluate, benchmark}) add_common(sub);
  audit->add_option("--seed", seed, "Seed for the random graph sweep");
  for (auto* sub : {evaluate, benchmark}) {
    sub->add_option("--methods", opt.methods,
                    "Comma list of rl4im, greedy, random, ablation-optimistic, "
                    "ablation-pessimistic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) opt.seed = seed;

  try {
    return run(chosen->get_name(), opt);
  } catch (const rl4im::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeFailure;
  }
}
