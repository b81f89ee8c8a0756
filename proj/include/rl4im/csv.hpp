#pragma once

// Result files. Each starts with a version line `# rl4im <kind> v1`
// followed by the column header; other lines starting with '#' are
// comments except `# summary,...` lines in results files. Reals are written
// with 17 significant digits so a read-back reproduces them exactly.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rl4im/agent.hpp"

namespace rl4im {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCsvVersion = 1;

struct ResultRecord {
  std::string method;
  std::size_t graph_id = 0;
  std::size_t run_id = 0;
  double influence = 0.0;
  double normalized_influence = 0.0;  // influence / |V|
  double inference_seconds = 0.0;
};

/// Per-method mean and sample std of normalized influence.
struct ResultSummary {
  std::string method;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct TimingRecord {
  std::string method;
  std::size_t graph_id = 0;
  double seconds = 0.0;
};

struct ResultsFile {
  std::vector<ResultRecord> records;
  std::vector<ResultSummary> summaries;
};

/// One summary per method, in order of first appearance.
std::vector<ResultSummary> summarize_results(const std::vector<ResultRecord>& records);

void write_train_log(const std::filesystem::path& path, const std::vector<TrainLogRow>& rows);
std::vector<TrainLogRow> read_train_log(const std::filesystem::path& path);

/// Writes the rows followed by the summary block for them.
void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records);
ResultsFile read_results(const std::filesystem::path& path);

void write_timing(const std::filesystem::path& path, const std::vector<TimingRecord>& records);
std::vector<TimingRecord> read_timing(const std::filesystem::path& path);

}  // namespace rl4im
