#pragma once

// A compact CDCL solver: two watched literals, first-UIP learning with
// clause minimization, VSIDS, phase saving, Luby restarts and LBD-based
// learnt clause reduction. Used as the in-process backend.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace gridsat {

class CdclSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };
  using Clock = std::chrono::steady_clock;

  explicit CdclSolver(std::uint64_t seed = 0) : rng_(seed) {}

  /// Ensures variables 1..n exist.
  void reserve_vars(int n) {
    while (num_vars_ < n) new_var();
  }

  int new_var() {
    ++num_vars_;
    assigns_.push_back(kUndef);
    levels_.push_back(0);
    reasons_.push_back(kNoReason);
    polarity_.push_back(1);
    seen_.push_back(0);
    // a tiny seeded jitter decorrelates tie-breaking across seeds
    activity_.push_back(std::uniform_real_distribution<double>(0.0, 1e-5)(rng_));
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(num_vars_ - 1);
    return num_vars_;
  }

  int num_vars() const { return num_vars_; }

  /// Adds a clause in DIMACS literal coding. Returns false once the clause set
  /// is known to be unsatisfiable.
  bool add_clause(std::span<const int> dimacs_lits) {
    if (!ok_) return false;
    std::vector<std::uint32_t> lits;
    lits.reserve(dimacs_lits.size());
    for (int d : dimacs_lits) {
      int v = d < 0 ? -d : d;
      reserve_vars(v);
      lits.push_back(encode(d));
    }
    std::sort(lits.begin(), lits.end());
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      std::uint32_t l = lits[i];
      if (i > 0 && lits[i - 1] == l) continue;
      if (i + 1 < lits.size() && lits[i + 1] == (l ^ 1u)) return true;  // tautology
      std::int8_t val = value(l);
      if (val == kTrue) return true;
      if (val == kFalse) continue;  // only root-level assignments exist here
      kept.push_back(l);
    }
    if (kept.empty()) {
      ok_ = false;
      return false;
    }
    if (kept.size() == 1) {
      assign(kept[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    attach(store(std::move(kept), false, 0));
    return true;
  }

  /// Solves under an optional wall-clock deadline.
  Result solve(std::optional<Clock::time_point> deadline = std::nullopt) {
    model_.clear();
    if (!ok_) return Result::Unsat;
    std::uint64_t restart_index = 0;
    while (true) {
      double budget = 100.0 * luby(2.0, restart_index++);
      Result r = search(static_cast<std::int64_t>(budget), deadline);
      if (r != Result::Unknown) return r;
      if (deadline && Clock::now() >= *deadline) {
        cancel_until(0);
        return Result::Unknown;
      }
    }
  }

  /// Model value of a 1-based variable after Sat.
  bool model_value(int var) const { return model_.at(var - 1); }
  const std::vector<bool>& model() const { return model_; }

  std::uint64_t conflicts() const { return conflicts_; }

 private:
  static constexpr std::int8_t kTrue = 1;
  static constexpr std::int8_t kFalse = -1;
  static constexpr std::int8_t kUndef = 0;
  static constexpr std::uint32_t kNoReason = std::numeric_limits<std::uint32_t>::max();

  struct ClauseData {
    std::vector<std::uint32_t> lits;
    bool learnt = false;
    bool removed = false;
    std::uint32_t lbd = 0;
    double activity = 0.0;
  };

  struct Watcher {
    std::uint32_t cref;
    std::uint32_t blocker;
  };

  static std::uint32_t encode(int d) {
    int v = (d < 0 ? -d : d) - 1;
    return (static_cast<std::uint32_t>(v) << 1) | (d < 0 ? 1u : 0u);
  }
  static int var_of(std::uint32_t l) { return static_cast<int>(l >> 1); }

  std::int8_t value(std::uint32_t l) const {
    std::int8_t a = assigns_[var_of(l)];
    return (l & 1u) ? static_cast<std::int8_t>(-a) : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  std::uint32_t store(std::vector<std::uint32_t> lits, bool learnt, std::uint32_t lbd) {
    ClauseData c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    c.lbd = lbd;
    clauses_.push_back(std::move(c));
    return static_cast<std::uint32_t>(clauses_.size() - 1);
  }

  void attach(std::uint32_t cref) {
    const auto& lits = clauses_[cref].lits;
    watches_[lits[0] ^ 1u].push_back({cref, lits[1]});
    watches_[lits[1] ^ 1u].push_back({cref, lits[0]});
  }

  void assign(std::uint32_t l, std::uint32_t reason) {
    int v = var_of(l);
    assigns_[v] = (l & 1u) ? kFalse : kTrue;
    levels_[v] = decision_level();
    reasons_[v] = reason;
    trail_.push_back(l);
  }

  // Returns the conflicting clause or kNoReason.
  std::uint32_t propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      std::uint32_t p = trail_[qhead_++];  // p became true; visit clauses watching ~p
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      const std::uint32_t false_lit = p ^ 1u;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = clauses_[w.cref];
        if (c.removed) {
          ++i;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        std::uint32_t first = lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1] ^ 1u].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          assign(first, w.cref);
        }
      }
      ws.resize(j);
      ++propagations_;
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  void bump_clause(ClauseData& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (auto& d : clauses_) {
        if (d.learnt) d.activity *= 1e-20;
      }
      cla_inc_ *= 1e-20;
    }
  }

  // First-UIP analysis; returns the learnt clause (asserting literal first)
  // and the backjump level.
  std::pair<std::vector<std::uint32_t>, int> analyze(std::uint32_t conflict) {
    std::vector<std::uint32_t> learnt{0};
    int path_count = 0;
    std::uint32_t p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();
    std::uint32_t reason = conflict;
    std::vector<int> touched;

    do {
      auto& c = clauses_[reason];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        std::uint32_t q = c.lits[k];
        int v = var_of(q);
        if (!seen_[v] && levels_[v] > 0) {
          seen_[v] = 1;
          touched.push_back(v);
          bump_var(v);
          if (levels_[v] >= decision_level()) {
            ++path_count;
          } else {
            learnt.push_back(q);
          }
        }
      }
      while (!seen_[var_of(trail_[--index])]) {}
      p = trail_[index];
      reason = reasons_[var_of(p)];
      seen_[var_of(p)] = 0;
      have_p = true;
      --path_count;
      // reason clauses keep their implied literal in position 0
    } while (path_count > 0);
    learnt[0] = p ^ 1u;

    // local minimization: drop literals implied by other learnt literals
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      int v = var_of(learnt[k]);
      std::uint32_t r = reasons_[v];
      bool redundant = r != kNoReason;
      if (redundant) {
        for (std::size_t m = 1; m < clauses_[r].lits.size(); ++m) {
          int u = var_of(clauses_[r].lits[m]);
          if (!seen_[u] && levels_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[keep++] = learnt[k];
    }
    learnt.resize(keep);
    for (int v : touched) seen_[v] = 0;

    int bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (levels_[var_of(learnt[k])] > levels_[var_of(learnt[max_i])]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      bt_level = levels_[var_of(learnt[1])];
    }
    return {std::move(learnt), bt_level};
  }

  std::uint32_t compute_lbd(const std::vector<std::uint32_t>& lits) {
    ++lbd_stamp_;
    // levels never exceed the variable count
    if (lbd_marks_.size() < levels_.size() + 1) lbd_marks_.resize(levels_.size() + 1, 0);
    std::uint32_t n = 0;
    for (std::uint32_t l : lits) {
      int lvl = levels_[var_of(l)];
      if (lbd_marks_[lvl] != lbd_stamp_) {
        lbd_marks_[lvl] = lbd_stamp_;
        ++n;
      }
    }
    return n;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t c = trail_.size(); c > trail_lim_[level]; --c) {
      int v = var_of(trail_[c - 1]);
      assigns_[v] = kUndef;
      reasons_[v] = kNoReason;
      polarity_[v] = (trail_[c - 1] & 1u) ? 1 : 0;
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool locked(std::uint32_t cref) const {
    const auto& c = clauses_[cref];
    int v = var_of(c.lits[0]);
    return reasons_[v] == cref && value(c.lits[0]) == kTrue;
  }

  void reduce_db() {
    std::vector<std::uint32_t> learnts;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (c.learnt && !c.removed && c.lits.size() > 2 && c.lbd > 2 && !locked(i)) {
        learnts.push_back(i);
      }
    }
    std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
      return clauses_[a].activity < clauses_[b].activity;
    });
    for (std::size_t k = 0; k < learnts.size() / 2; ++k) {
      clauses_[learnts[k]].removed = true;
      clauses_[learnts[k]].lits.shrink_to_fit();
    }
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return clauses_[w.cref].removed; }),
               ws.end());
    }
    for (auto& c : clauses_) {
      if (c.removed) c.lits.clear();
    }
  }

  Result search(std::int64_t conflict_budget, std::optional<Clock::time_point> deadline) {
    std::int64_t local_conflicts = 0;
    while (true) {
      std::uint32_t conflict = propagate();
      if (conflict != kNoReason) {
        ++conflicts_;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        auto [learnt, bt_level] = analyze(conflict);
        cancel_until(bt_level);
        if (learnt.size() == 1) {
          assign(learnt[0], kNoReason);
        } else {
          std::uint32_t lbd = compute_lbd(learnt);
          std::uint32_t lit0 = learnt[0];
          std::uint32_t cref = store(std::move(learnt), true, lbd);
          attach(cref);
          bump_clause(clauses_[cref]);
          ++num_learnts_;
          assign(lit0, cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((conflicts_ & 255u) == 0 && deadline && Clock::now() >= *deadline) {
          return Result::Unknown;
        }
        continue;
      }
      if (local_conflicts >= conflict_budget) {
        cancel_until(0);
        return Result::Unknown;
      }
      if (num_learnts_ >= max_learnts_) {
        reduce_db();
        num_learnts_ /= 2;
        max_learnts_ += max_learnts_ / 10 + 500;
      }
      if ((++decisions_ & 1023u) == 0 && deadline && Clock::now() >= *deadline) {
        return Result::Unknown;
      }
      int next = pick_branch();
      if (next < 0) {
        model_.assign(num_vars_, false);
        for (int v = 0; v < num_vars_; ++v) model_[v] = assigns_[v] == kTrue;
        cancel_until(0);
        return Result::Sat;
      }
      trail_lim_.push_back(trail_.size());
      assign((static_cast<std::uint32_t>(next) << 1) | (polarity_[next] ? 1u : 0u), kNoReason);
    }
  }

  int pick_branch() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[v] == kUndef) return v;
    }
    return -1;
  }

  static double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1.0;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
  }

  // binary max-heap on activity
  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

  void heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }

  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) >> 1;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  void heap_down(int i) {
    int v = heap_[i];
    int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int child = 2 * i + 1;
      if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  int heap_pop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  std::mt19937_64 rng_;
  bool ok_ = true;
  int num_vars_ = 0;
  std::vector<std::int8_t> assigns_;
  std::vector<int> levels_;
  std::vector<std::uint32_t> reasons_;
  std::vector<std::uint8_t> polarity_;  // 1 = negative
  std::vector<std::uint8_t> seen_;
  std::vector<double> activity_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal code
  std::vector<ClauseData> clauses_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
  std::uint64_t propagations_ = 0;
  std::uint64_t num_learnts_ = 0;
  std::uint64_t max_learnts_ = 4000;
  std::vector<std::uint32_t> lbd_marks_;
  std::uint32_t lbd_stamp_ = 0;
  std::vector<bool> model_;
};

}  // namespace gridsat
