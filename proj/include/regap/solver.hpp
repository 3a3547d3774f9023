#pragma once

#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regap/cnf.hpp"

namespace regap {

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveBudget {
  long long max_conflicts = -1;  // negative: unlimited
  long long max_millis = -1;
};

struct SolveStats {
  long long conflicts = 0, decisions = 0, propagations = 0, restarts = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<bool> model;  // 1-based by var when status == Sat
  std::string unknown_reason;
  SolveStats stats;
};

// CDCL: two-watched-literal propagation, first-UIP learning, Luby restarts,
// phase saving, additive VSIDS with decay.  The seed fixes initial phases;
// everything else is deterministic, ties break toward the lowest var index.
class Solver {
 public:
  explicit Solver(const CnfFormula& f, std::uint64_t seed = 0) : original_(f), nvars_(f.num_vars) {
    watches_.assign(2 * nvars_ + 2, {});
    assign_.assign(nvars_ + 1, 0);
    level_.assign(nvars_ + 1, 0);
    reason_.assign(nvars_ + 1, -1);
    activity_.assign(nvars_ + 1, 0.0);
    saved_phase_.assign(nvars_ + 1, 0);
    seen_.assign(nvars_ + 1, 0);
    std::uint64_t x = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    for (int v = 1; v <= nvars_; ++v) {
      x ^= x << 13;
      x ^= x >> 7;
      x ^= x << 17;
      saved_phase_[v] = static_cast<char>(x & 1);
    }
    for (const auto& c : f.clauses)
      if (!attach_original(c)) {
        root_conflict_ = true;
        break;
      }
  }

  SolveResult solve(const SolveBudget& budget = {}) {
    SolveResult res;
    auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      if (budget.max_millis < 0) return false;
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      return ms > budget.max_millis;
    };

    if (root_conflict_) {
      res.status = SolveStatus::Unsat;
      res.stats = stats_;
      return res;
    }
    long long restart_at = 100 * luby(++luby_index_);
    long long conflicts_at_restart = 0;

    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        ++stats_.conflicts;
        if (current_level() == 0) {
          res.status = SolveStatus::Unsat;
          res.stats = stats_;
          return res;
        }
        std::vector<int> learnt;
        int bj = analyze(confl, learnt);
        backtrack(bj);
        attach_learnt(learnt);
        var_inc_ /= var_decay_;
        if (var_inc_ > 1e100) rescale_activity();
        if (budget.max_conflicts >= 0 && stats_.conflicts >= budget.max_conflicts) {
          res.status = SolveStatus::Unknown;
          res.unknown_reason = "conflict budget exhausted";
          res.stats = stats_;
          return res;
        }
        if (out_of_time()) {
          res.status = SolveStatus::Unknown;
          res.unknown_reason = "time budget exhausted";
          res.stats = stats_;
          return res;
        }
        if (stats_.conflicts - conflicts_at_restart >= restart_at) {
          ++stats_.restarts;
          backtrack(0);
          conflicts_at_restart = stats_.conflicts;
          restart_at = 100 * luby(++luby_index_);
        }
      } else {
        int v = pick_branch_var();
        if (v == 0) {
          res.status = SolveStatus::Sat;
          res.model.assign(nvars_ + 1, false);
          for (int u = 1; u <= nvars_; ++u) res.model[u] = assign_[u] > 0;
          certify(res.model);
          res.stats = stats_;
          return res;
        }
        if (out_of_time()) {
          res.status = SolveStatus::Unknown;
          res.unknown_reason = "time budget exhausted";
          res.stats = stats_;
          return res;
        }
        ++stats_.decisions;
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(saved_phase_[v] ? v : -v, -1);
      }
    }
  }

 private:
  const CnfFormula& original_;
  int nvars_;
  bool root_conflict_ = false;
  std::vector<std::vector<int>> cls_;
  std::vector<std::vector<int>> watches_;  // indexed by encoded literal
  std::vector<signed char> assign_;
  std::vector<int> level_, reason_, trail_, trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  static constexpr double var_decay_ = 0.95;
  std::vector<char> saved_phase_, seen_;
  SolveStats stats_;
  long long luby_index_ = 0;

  static int enc(int lit) { return lit > 0 ? 2 * lit : -2 * lit + 1; }
  int value(int lit) const { return lit > 0 ? assign_[lit] : -assign_[-lit]; }
  int current_level() const { return static_cast<int>(trail_lim_.size()); }

  // 1-based Luby sequence: 1 1 2 1 1 2 4 ...
  static long long luby(long long i) {
    long long x = i - 1;
    long long size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    return 1LL << seq;
  }

  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) rescale_activity();
  }

  void rescale_activity() {
    for (int v = 1; v <= nvars_; ++v) activity_[v] *= 1e-100;
    var_inc_ *= 1e-100;
  }

  bool attach_original(const std::vector<int>& raw) {
    std::vector<int> c;
    for (int l : raw) {
      bool dup = false, taut = false;
      for (int m : c) {
        if (m == l) dup = true;
        if (m == -l) taut = true;
      }
      if (taut) return true;  // clause always satisfied, drop it
      if (!dup) c.push_back(l);
    }
    if (c.empty()) return false;
    if (c.size() == 1) {
      if (value(c[0]) < 0) return false;
      if (value(c[0]) == 0) enqueue(c[0], -1);
      return true;
    }
    int id = static_cast<int>(cls_.size());
    cls_.push_back(c);
    watches_[enc(-c[0])].push_back(id);
    watches_[enc(-c[1])].push_back(id);
    return true;
  }

  void attach_learnt(std::vector<int>& c) {
    if (c.size() == 1) {
      enqueue(c[0], -1);
      return;
    }
    // position 1 holds the highest-level literal so the watch stays sound
    int best = 1;
    for (int i = 2; i < static_cast<int>(c.size()); ++i)
      if (level_[std::abs(c[i])] > level_[std::abs(c[best])]) best = i;
    std::swap(c[1], c[best]);
    int id = static_cast<int>(cls_.size());
    cls_.push_back(c);
    watches_[enc(-c[0])].push_back(id);
    watches_[enc(-c[1])].push_back(id);
    enqueue(c[0], id);
  }

  void enqueue(int lit, int why) {
    int v = std::abs(lit);
    assign_[v] = lit > 0 ? 1 : -1;
    level_[v] = current_level();
    reason_[v] = why;
    trail_.push_back(lit);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      ++stats_.propagations;
      std::vector<int>& wl = watches_[enc(p)];  // clauses where -p is watched
      std::size_t i = 0, j = 0;
      while (i < wl.size()) {
        int id = wl[i++];
        std::vector<int>& c = cls_[id];
        if (c[0] == -p) std::swap(c[0], c[1]);
        // now c[1] == -p
        if (value(c[0]) > 0) {
          wl[j++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[enc(-c[1])].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        wl[j++] = id;
        if (value(c[0]) < 0) {
          while (i < wl.size()) wl[j++] = wl[i++];
          wl.resize(j);
          return id;
        }
        enqueue(c[0], id);
      }
      wl.resize(j);
    }
    return -1;
  }

  int analyze(int confl, std::vector<int>& learnt) {
    learnt.clear();
    learnt.push_back(0);  // slot for the asserting literal
    int counter = 0, p = 0;
    int idx = static_cast<int>(trail_.size()) - 1;
    int cid = confl;
    do {
      const std::vector<int>& c = cls_[cid];
      for (std::size_t k = (p == 0 ? 0 : 1); k < c.size(); ++k) {
        int q = c[k];
        int v = std::abs(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump(v);
          if (level_[v] == current_level())
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[std::abs(trail_[idx])]) --idx;
      p = trail_[idx];
      seen_[std::abs(p)] = 0;
      --idx;
      --counter;
      if (counter > 0) cid = reason_[std::abs(p)];
    } while (counter > 0);
    learnt[0] = -p;

    int bj = 0;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      bj = std::max(bj, level_[std::abs(learnt[k])]);
      seen_[std::abs(learnt[k])] = 0;
    }
    return bj;
  }

  void backtrack(int to_level) {
    if (current_level() <= to_level) return;
    int limit = trail_lim_[to_level];
    for (int i = static_cast<int>(trail_.size()) - 1; i >= limit; --i) {
      int v = std::abs(trail_[i]);
      saved_phase_[v] = assign_[v] > 0 ? 1 : 0;
      assign_[v] = 0;
      reason_[v] = -1;
    }
    trail_.resize(limit);
    trail_lim_.resize(to_level);
    qhead_ = trail_.size();
  }

  int pick_branch_var() {
    int best = 0;
    double best_act = -1.0;
    for (int v = 1; v <= nvars_; ++v)
      if (assign_[v] == 0 && activity_[v] > best_act) {
        best = v;
        best_act = activity_[v];
      }
    return best;
  }

  void certify(const std::vector<bool>& model) const {
    for (const auto& c : original_.clauses) {
      bool ok = false;
      for (int l : c)
        if ((l > 0) == model[std::abs(l)]) {
          ok = true;
          break;
        }
      if (!ok) throw std::logic_error("model certification failed");
    }
  }
};

inline SolveResult solve(const CnfFormula& f, const SolveBudget& budget = {},
                         std::uint64_t seed = 0) {
  Solver s(f, seed);
  return s.solve(budget);
}

// File-based escape hatch.  The command is run as `cmd <cnf> <result>` where
// the result file starts with "SAT" (then space-separated literals) or
// "UNSAT".  Nonzero exit alone is not failure; several solvers signal the
// answer through the exit code.
inline SolveResult solve_external(const std::string& command, const CnfFormula& f) {
  char in_path[] = "/tmp/regap-cnf-XXXXXX";
  char out_path[] = "/tmp/regap-res-XXXXXX";
  int in_fd = mkstemp(in_path);
  int out_fd = mkstemp(out_path);
  if (in_fd < 0 || out_fd < 0) throw std::runtime_error("cannot create temp files");
  close(in_fd);
  close(out_fd);
  struct Cleanup {
    const char *a, *b;
    ~Cleanup() {
      unlink(a);
      unlink(b);
    }
  } cleanup{in_path, out_path};

  {
    std::ofstream out(in_path);
    out << to_dimacs(f);
  }
  std::string cmd = command + " " + in_path + " " + out_path + " > /dev/null 2>&1";
  // exit code intentionally unused: solvers encode SAT/UNSAT as 10/20
  int rc = std::system(cmd.c_str());
  (void)rc;

  SolveResult res;
  std::ifstream rf(out_path);
  std::string verdict;
  if (!(rf >> verdict)) {
    res.unknown_reason = "external solver produced no readable result";
    return res;
  }
  if (verdict == "UNSAT") {
    res.status = SolveStatus::Unsat;
    return res;
  }
  if (verdict != "SAT") {
    res.unknown_reason = "external solver result not recognized: " + verdict;
    return res;
  }
  res.model.assign(f.num_vars + 1, false);
  int lit;
  while (rf >> lit) {
    if (lit == 0) continue;
    int v = std::abs(lit);
    if (v > f.num_vars) {
      res.unknown_reason = "external model references unknown variable";
      res.model.clear();
      return res;
    }
    res.model[v] = lit > 0;
  }
  for (const auto& c : f.clauses) {
    bool ok = false;
    for (int l : c)
      if ((l > 0) == res.model[std::abs(l)]) {
        ok = true;
        break;
      }
    if (!ok) {
      res.unknown_reason = "external model fails certification";
      res.model.clear();
      return res;
    }
  }
  res.status = SolveStatus::Sat;
  return res;
}

}  // namespace regap
