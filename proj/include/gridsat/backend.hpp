#pragma once

// Solver backends. A backend turns a finished Formula into a SolveOutcome;
// every SAT model is re-checked against the clause list before it is
// returned. Timeouts are results (UNKNOWN), process failures are errors.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gridsat/cdcl.hpp"
#include "gridsat/cnf.hpp"

namespace gridsat {

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolveStatus { Sat, Unsat, Unknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    default: return "unknown";
  }
}

struct SolveOutcome {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<bool> model;  // 1-based; present iff status == Sat
  double elapsed = 0.0;     // seconds

  bool sat() const { return status == SolveStatus::Sat; }
  bool value(Lit l) const { return value_of(model, l); }
  bool value(Var v) const { return model.at(v.index); }
};

class Backend {
 public:
  virtual ~Backend() = default;

  SolveOutcome solve(const Formula& f, double budget_seconds) {
    auto start = std::chrono::steady_clock::now();
    SolveOutcome out = run(f, budget_seconds);
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.status == SolveStatus::Sat) {
      if (static_cast<int>(out.model.size()) < f.num_vars() + 1) {
        out.model.resize(f.num_vars() + 1, false);
      }
      if (!satisfies(f, out.model)) {
        throw BackendError(id() + ": reported model does not satisfy the formula");
      }
    } else {
      out.model.clear();
    }
    return out;
  }

  virtual std::string id() const = 0;

 protected:
  virtual SolveOutcome run(const Formula& f, double budget_seconds) = 0;
};

class EmbeddedBackend final : public Backend {
 public:
  explicit EmbeddedBackend(std::uint64_t seed = 0) : seed_(seed) {}

  std::string id() const override { return "embedded-cdcl"; }

 protected:
  SolveOutcome run(const Formula& f, double budget_seconds) override {
    CdclSolver solver(seed_);
    solver.reserve_vars(f.num_vars());
    std::vector<int> buf;
    SolveOutcome out;
    for (const Clause& c : f.clauses()) {
      buf.clear();
      for (Lit l : c) buf.push_back(l.dimacs());
      if (!solver.add_clause(buf)) {
        out.status = SolveStatus::Unsat;
        return out;
      }
    }
    std::optional<CdclSolver::Clock::time_point> deadline;
    if (budget_seconds > 0) {
      deadline = CdclSolver::Clock::now() +
                 std::chrono::duration_cast<CdclSolver::Clock::duration>(
                     std::chrono::duration<double>(budget_seconds));
    }
    switch (solver.solve(deadline)) {
      case CdclSolver::Result::Sat:
        out.status = SolveStatus::Sat;
        out.model.assign(f.num_vars() + 1, false);
        for (int v = 1; v <= f.num_vars(); ++v) out.model[v] = solver.model_value(v);
        break;
      case CdclSolver::Result::Unsat: out.status = SolveStatus::Unsat; break;
      default: out.status = SolveStatus::Unknown; break;
    }
    return out;
  }

 private:
  std::uint64_t seed_;
};

/// Parses competition-style solver output ("s ..." status line, "v ..."
/// value lines). Also accepts MiniSat result files ("SAT" then literals).
inline SolveOutcome parse_solver_output(const std::string& text, int num_vars) {
  SolveOutcome out;
  std::istringstream in(text);
  std::string line;
  bool have_status = false;
  bool minisat_sat = false;
  std::vector<bool> model(num_vars + 1, false);
  auto read_values = [&](std::istringstream& ls) {
    long code = 0;
    while (ls >> code) {
      if (code == 0) break;
      long v = code < 0 ? -code : code;
      if (v <= num_vars) model[v] = code > 0;
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      have_status = true;
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        out.status = SolveStatus::Unsat;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        out.status = SolveStatus::Sat;
      } else {
        out.status = SolveStatus::Unknown;
      }
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream ls(line.substr(1));
      read_values(ls);
    } else if (line == "SAT") {
      have_status = true;
      minisat_sat = true;
      out.status = SolveStatus::Sat;
    } else if (line == "UNSAT") {
      have_status = true;
      out.status = SolveStatus::Unsat;
    } else if (line == "INDET") {
      have_status = true;
      out.status = SolveStatus::Unknown;
    } else if (minisat_sat) {
      std::istringstream ls(line);
      read_values(ls);
    }
  }
  if (!have_status) throw BackendError("solver output has no status line");
  if (out.status == SolveStatus::Sat) out.model = std::move(model);
  return out;
}

/// Runs an external solver given a command template. Placeholders:
/// {input} (DIMACS file), {output} (result file, MiniSat style), {seed}.
/// When {output} is absent, stdout is parsed.
class ExternalBackend final : public Backend {
 public:
  explicit ExternalBackend(std::string command_template, std::uint64_t seed = 0)
      : template_(std::move(command_template)), seed_(seed) {
    if (template_.find("{input}") == std::string::npos) {
      throw ContractError("solver command template lacks {input}");
    }
  }

  std::string id() const override { return "external:" + template_; }

 protected:
  SolveOutcome run(const Formula& f, double budget_seconds) override {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path();
    std::string stem = "gridsat-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter_++) + "-" +
                       std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffffff);
    fs::path input = dir / (stem + ".cnf");
    fs::path output = dir / (stem + ".out");
    fs::path captured = dir / (stem + ".stdout");
    struct Cleanup {
      std::vector<fs::path> paths;
      ~Cleanup() {
        std::error_code ec;
        for (auto& p : paths) fs::remove(p, ec);
      }
    } cleanup{{input, output, captured}};
    {
      std::ofstream os(input);
      os << to_dimacs(f);
      if (!os) throw BackendError("cannot write DIMACS file " + input.string());
    }
    std::string cmd = template_;
    bool uses_output = replace_all(cmd, "{output}", output.string());
    replace_all(cmd, "{input}", input.string());
    replace_all(cmd, "{seed}", std::to_string(seed_));

    pid_t pid = ::fork();
    if (pid < 0) throw BackendError("fork failed");
    if (pid == 0) {
      ::setpgid(0, 0);
      int fd = ::open(captured.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
      if (fd >= 0) {
        ::dup2(fd, STDOUT_FILENO);
        ::close(fd);
      }
      int devnull = ::open("/dev/null", O_WRONLY);
      if (devnull >= 0) {
        ::dup2(devnull, STDERR_FILENO);
        ::close(devnull);
      }
      ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);

    auto start = std::chrono::steady_clock::now();
    int status = 0;
    bool timed_out = false;
    while (true) {
      pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (r < 0 && errno != EINTR) throw BackendError("waitpid failed");
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (budget_seconds > 0 && elapsed >= budget_seconds) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        timed_out = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (timed_out) return SolveOutcome{};

    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
      throw BackendError("solver command not runnable: " + cmd);
    }
    if (WIFSIGNALED(status)) {
      throw BackendError("solver terminated by signal " + std::to_string(WTERMSIG(status)));
    }
    std::string text = slurp(uses_output ? output : captured);
    try {
      return parse_solver_output(text, f.num_vars());
    } catch (const BackendError& e) {
      throw BackendError(std::string(e.what()) + " (exit code " +
                         std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")");
    }
  }

 private:
  static bool replace_all(std::string& s, const std::string& from, const std::string& to) {
    bool any = false;
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
      s.replace(pos, from.size(), to);
      any = true;
    }
    return any;
  }

  static std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string template_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

inline std::unique_ptr<Backend> make_backend(const std::string& command_template, std::uint64_t seed) {
  if (command_template.empty()) return std::make_unique<EmbeddedBackend>(seed);
  return std::make_unique<ExternalBackend>(command_template, seed);
}

/// One-shot solve with the embedded backend.
inline SolveOutcome solve(const Formula& f, double budget_seconds = 0.0, std::uint64_t seed = 0) {
  EmbeddedBackend backend(seed);
  return backend.solve(f, budget_seconds);
}

}  // namespace gridsat
