#pragma once

// Batch runs with PAR-2 scoring: solved runtimes plus twice the time limit
// for every unsolved run.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace gridsat {

struct BenchRun {
  std::string instance;
  std::string encoding;
  bool solved = false;  // optimal within the limit
  double seconds = 0;
  std::optional<std::string> error;
};

/// A limit of 0 means unlimited.
inline bool counts_as_solved(const BenchRun& r, double limit) {
  return r.solved && !r.error && (limit <= 0 || r.seconds <= limit);
}

inline double par2(const std::vector<BenchRun>& runs, double limit) {
  double score = 0;
  for (const BenchRun& r : runs) score += counts_as_solved(r, limit) ? r.seconds : 2 * limit;
  return score;
}

struct EncodingScore {
  std::string encoding;
  double par2 = 0;
  int solved = 0;
  int timeouts = 0;
  int errors = 0;
};

/// Scores per encoding, sorted by encoding name.
inline std::vector<EncodingScore> aggregate(const std::vector<BenchRun>& runs, double limit) {
  std::map<std::string, std::vector<BenchRun>> by;
  for (const BenchRun& r : runs) by[r.encoding].push_back(r);
  std::vector<EncodingScore> out;
  for (auto& [enc, list] : by) {
    EncodingScore s{enc, par2(list, limit), 0, 0, 0};
    for (const BenchRun& r : list) {
      if (r.error) ++s.errors;
      else if (counts_as_solved(r, limit)) ++s.solved;
      else ++s.timeouts;
    }
    out.push_back(std::move(s));
  }
  return out;
}

using BenchRunner = std::function<BenchRun(const std::filesystem::path& instance, const std::string& encoding)>;

/// Runs every (instance, encoding) pair on a bounded worker pool. Results
/// come back in input order; a throwing runner is recorded as an error.
inline std::vector<BenchRun> run_bench(const std::vector<std::filesystem::path>& instances,
                                       const std::vector<std::string>& encodings, const BenchRunner& runner,
                                       unsigned workers = 1) {
  struct Job {
    std::filesystem::path instance;
    std::string encoding;
  };
  std::vector<Job> jobs;
  for (const auto& p : instances) {
    for (const auto& e : encodings) jobs.push_back({p, e});
  }
  std::vector<BenchRun> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = runner(jobs[i].instance, jobs[i].encoding);
      } catch (const std::exception& e) {
        results[i] = BenchRun{jobs[i].instance.filename().string(), jobs[i].encoding, false, 0, e.what()};
      }
      results[i].instance = jobs[i].instance.filename().string();
      results[i].encoding = jobs[i].encoding;
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return results;
}

/// Level files in `dir`, sorted by name.
inline std::vector<std::filesystem::path> level_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".lvl" || ext == ".xsb" || ext == ".sok" || ext == ".txt") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gridsat
