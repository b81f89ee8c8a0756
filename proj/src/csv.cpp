#include "rl4im/csv.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <string_view>

#include "rl4im/rollout.hpp"

namespace rl4im {

namespace {

constexpr std::string_view kTrainLogHeader = "step,loss,val_mean,val_std";
constexpr std::string_view kResultsHeader =
    "method,graph_id,run_id,influence,normalized_influence,inference_seconds";
constexpr std::string_view kTimingHeader = "method,graph_id,seconds";
constexpr std::string_view kSummaryPrefix = "# summary,";

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string version_line(std::string_view kind) {
  return "# rl4im " + std::string(kind) + " v" + std::to_string(kCsvVersion);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CsvError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw CsvError("write failed: " + path.string());
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads a file of the given kind: checks the version line and column
// header, then hands every data row and every comment to the callbacks.
class Reader {
 public:
  Reader(const std::filesystem::path& path, std::string_view kind, std::string_view header)
      : path_(path), in_(path) {
    if (!in_) throw CsvError("cannot open " + path.string());
    std::string line;
    if (!next(line) || line != version_line(kind)) {
      fail("expected version line '" + version_line(kind) + "'");
    }
    if (!next(line) || line != header) fail("expected header '" + std::string(header) + "'");
  }

  template <typename OnRow, typename OnComment>
  void read(OnRow on_row, OnComment on_comment) {
    std::string line;
    while (next(line)) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        on_comment(std::string_view(line));
        continue;
      }
      on_row(split(line));
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw CsvError(path_.string() + ":" + std::to_string(line_no_) + ": " + what);
  }

  template <typename T>
  T number(std::string_view field) const {
    T out{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      fail("malformed number '" + std::string(field) + "'");
    }
    return out;
  }

  void expect_fields(const std::vector<std::string_view>& fields, std::size_t n) const {
    if (fields.size() != n) {
      fail("expected " + std::to_string(n) + " fields, found " + std::to_string(fields.size()));
    }
  }

 private:
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

void ignore_comment(std::string_view) {}

}  // namespace

std::vector<ResultSummary> summarize_results(const std::vector<ResultRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : records) {
    auto [it, inserted] = values.try_emplace(r.method);
    if (inserted) order.push_back(r.method);
    it->second.push_back(r.normalized_influence);
  }
  std::vector<ResultSummary> out;
  for (const auto& method : order) {
    const PolicyStats s = summarize(values[method]);
    out.push_back({method, s.mean, s.stddev, s.count});
  }
  return out;
}

void write_train_log(const std::filesystem::path& path, const std::vector<TrainLogRow>& rows) {
  auto out = open_out(path);
  out << version_line("train-log") << '\n' << kTrainLogHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << real(r.loss) << ',' << real(r.val_mean) << ',' << real(r.val_std)
        << '\n';
  }
  finish(out, path);
}

std::vector<TrainLogRow> read_train_log(const std::filesystem::path& path) {
  Reader reader(path, "train-log", kTrainLogHeader);
  std::vector<TrainLogRow> rows;
  reader.read(
      [&](const std::vector<std::string_view>& f) {
        reader.expect_fields(f, 4);
        rows.push_back({reader.number<std::size_t>(f[0]), reader.number<double>(f[1]),
                        reader.number<double>(f[2]), reader.number<double>(f[3])});
      },
      ignore_comment);
  return rows;
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records) {
  auto out = open_out(path);
  out << version_line("results") << '\n' << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.method << ',' << r.graph_id << ',' << r.run_id << ',' << real(r.influence) << ','
        << real(r.normalized_influence) << ',' << real(r.inference_seconds) << '\n';
  }
  out << "# summary,method,mean_normalized_influence,std_normalized_influence,count\n";
  for (const auto& s : summarize_results(records)) {
    out << kSummaryPrefix << s.method << ',' << real(s.mean) << ',' << real(s.stddev) << ','
        << s.count << '\n';
  }
  finish(out, path);
}

ResultsFile read_results(const std::filesystem::path& path) {
  Reader reader(path, "results", kResultsHeader);
  ResultsFile file;
  reader.read(
      [&](const std::vector<std::string_view>& f) {
        reader.expect_fields(f, 6);
        ResultRecord r;
        r.method = std::string(f[0]);
        r.graph_id = reader.number<std::size_t>(f[1]);
        r.run_id = reader.number<std::size_t>(f[2]);
        r.influence = reader.number<double>(f[3]);
        r.normalized_influence = reader.number<double>(f[4]);
        r.inference_seconds = reader.number<double>(f[5]);
        file.records.push_back(std::move(r));
      },
      [&](std::string_view comment) {
        if (!comment.starts_with(kSummaryPrefix)) return;
        const auto f = split(comment.substr(kSummaryPrefix.size()));
        reader.expect_fields(f, 4);
        if (f[0] == "method") return;  // column names of the summary block
        file.summaries.push_back({std::string(f[0]), reader.number<double>(f[1]),
                                  reader.number<double>(f[2]), reader.number<std::size_t>(f[3])});
      });
  return file;
}

void write_timing(const std::filesystem::path& path, const std::vector<TimingRecord>& records) {
  auto out = open_out(path);
  out << version_line("timing") << '\n' << kTimingHeader << '\n';
  for (const auto& r : records) out << r.method << ',' << r.graph_id << ',' << real(r.seconds) << '\n';
  finish(out, path);
}

std::vector<TimingRecord> read_timing(const std::filesystem::path& path) {
  Reader reader(path, "timing", kTimingHeader);
  std::vector<TimingRecord> rows;
  reader.read(
      [&](const std::vector<std::string_view>& f) {
        reader.expect_fields(f, 3);
        rows.push_back({std::string(f[0]), reader.number<std::size_t>(f[1]),
                        reader.number<double>(f[2])});
      },
      ignore_comment);
  return rows;
}

}  // namespace rl4im
