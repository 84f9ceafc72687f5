// fenceinfer-sat: a small CDCL solver reading DIMACS CNF.
// Output follows the SAT competition format (s/v lines, exit 10/20).
//
// Two watched literals, first-UIP learning with clause minimization,
// VSIDS with a binary heap, phase saving and Luby restarts.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Lit = int;  // 2*v + sign, v from 0

inline Lit mk_lit(int v, bool neg) { return 2 * v + (neg ? 1 : 0); }
inline int var_of(Lit l) { return l >> 1; }
inline Lit neg(Lit l) { return l ^ 1; }

enum : int8_t
{
  kFalse = -1,
  kUndef = 0,
  kTrue = 1
};

class Solver
{
 public:
  explicit Solver(int nvars)
      : nvars_(nvars),
        assign_(nvars, kUndef),
        level_(nvars, 0),
        reason_(nvars, -1),
        activity_(nvars, 0.0),
        phase_(nvars, 0),
        seen_(nvars, 0),
        heap_pos_(nvars, -1),
        watches_(2 * static_cast<std::size_t>(nvars))
  {
    for (int v = 0; v < nvars_; ++v) heap_insert(v);
  }

  // False when the clause set became trivially unsatisfiable.
  bool add_clause(std::vector<Lit> c)
  {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      if (c[i + 1] == neg(c[i])) return true;  // tautology
    }
    if (c.empty()) return false;
    if (c.size() == 1) {
      if (value(c[0]) == kFalse) return false;
      if (value(c[0]) == kUndef) units_.push_back(c[0]);
      return true;
    }
    attach(std::move(c), false);
    return true;
  }

  bool solve()
  {
    for (Lit u : units_) {
      if (value(u) == kFalse) return false;
      if (value(u) == kUndef) enqueue(u, -1);
    }
    if (propagate() >= 0) return false;
    std::uint64_t restart_no = 0;
    for (;;) {
      const std::uint64_t budget = 100 * luby(++restart_no);
      const int r = search(budget);
      if (r != 0) return r > 0;
    }
  }

  bool model_value(int v) const { return assign_[v] == kTrue; }

 private:
  struct Clause
  {
    std::vector<Lit> lits;
    bool learnt;
  };

  int8_t value(Lit l) const
  {
    const int8_t a = assign_[var_of(l)];
    return (l & 1) ? static_cast<int8_t>(-a) : a;
  }

  void attach(std::vector<Lit> c, bool learnt)
  {
    const int idx = static_cast<int>(clauses_.size());
    watches_[neg(c[0])].push_back(idx);
    watches_[neg(c[1])].push_back(idx);
    clauses_.push_back({std::move(c), learnt});
  }

  void enqueue(Lit l, int reason)
  {
    const int v = var_of(l);
    assign_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  // Returns a conflicting clause index or -1.
  int propagate()
  {
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];  // p became true; watchers of p see !p false
      auto & ws = watches_[p];
      std::size_t i = 0, j = 0;
      int conflict = -1;
      while (i < ws.size()) {
        const int ci = ws[i++];
        auto & c = clauses_[ci].lits;
        const Lit false_lit = neg(p);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value(c[0]) == kTrue) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[neg(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == kFalse) {
          conflict = ci;
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(c[0], ci);
        }
      }
      ws.resize(j);
      if (conflict >= 0) return conflict;
    }
    return -1;
  }

  void bump(int v)
  {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto & a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  void analyze(int conflict, std::vector<Lit> & learnt, int & back_level)
  {
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = -1;
    std::size_t idx = trail_.size();
    do {
      const auto & c = clauses_[conflict].lits;
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
        const Lit q = c[k];
        const int v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump(v);
          if (level_[v] >= decision_level()) {
            ++pending;
          } else {
            learnt.push_back(q);
          }
        }
      }
      while (!seen_[var_of(trail_[--idx])]) {
      }
      p = trail_[idx];
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
      if (pending > 0 && conflict >= 0) {
        // Put the implied literal first so the loop above skips it.
        auto & rc = clauses_[conflict].lits;
        if (rc[0] != p) {
          for (std::size_t k = 1; k < rc.size(); ++k) {
            if (rc[k] == p) {
              std::swap(rc[0], rc[k]);
              break;
            }
          }
        }
      }
    } while (pending > 0);
    learnt[0] = neg(p);

    // Drop literals implied by the rest of the clause (local minimization).
    std::vector<Lit> kept{learnt[0]};
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const int v = var_of(learnt[k]);
      const int r = reason_[v];
      bool redundant = r >= 0;
      if (redundant) {
        for (Lit q : clauses_[r].lits) {
          const int u = var_of(q);
          if (u != v && !seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) kept.push_back(learnt[k]);
    }
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[var_of(learnt[k])] = 0;
    learnt.swap(kept);

    back_level = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[var_of(learnt[k])] > level_[var_of(learnt[best])]) best = k;
      }
      std::swap(learnt[1], learnt[best]);
      back_level = level_[var_of(learnt[1])];
    }
  }

  void backtrack(int lvl)
  {
    if (decision_level() <= lvl) return;
    for (std::size_t k = trail_.size(); k-- > static_cast<std::size_t>(trail_lim_[lvl]);) {
      const int v = var_of(trail_[k]);
      phase_[v] = static_cast<int8_t>(trail_[k] & 1);
      assign_[v] = kUndef;
      reason_[v] = -1;
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  // 1 sat, -1 unsat, 0 restart
  int search(std::uint64_t conflicts_budget)
  {
    std::uint64_t conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
      const int conflict = propagate();
      if (conflict >= 0) {
        ++conflicts;
        if (decision_level() == 0) return -1;
        int back = 0;
        analyze(conflict, learnt, back);
        backtrack(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          const int idx = static_cast<int>(clauses_.size());
          attach(learnt, true);
          enqueue(learnt[0], idx);
        }
        var_inc_ /= 0.95;
        continue;
      }
      if (conflicts >= conflicts_budget) {
        backtrack(0);
        return 0;
      }
      int next = -1;
      while (!heap_.empty()) {
        const int v = heap_pop();
        if (assign_[v] == kUndef) {
          next = v;
          break;
        }
      }
      if (next < 0) return 1;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(mk_lit(next, phase_[next] != 0), -1);
    }
  }

  static std::uint64_t luby(std::uint64_t i)
  {
    // i-th element (1-based) of 1 1 2 1 1 2 4 ...
    std::uint64_t k = 1;
    while (((std::uint64_t{1} << k) - 1) < i) ++k;
    while (i != (std::uint64_t{1} << k) - 1) {
      i -= (std::uint64_t{1} << (k - 1)) - 1;
      k = 1;
      while (((std::uint64_t{1} << k) - 1) < i) ++k;
    }
    return std::uint64_t{1} << (k - 1);
  }

  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

  void heap_insert(int v)
  {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }

  void heap_up(int i)
  {
    const int v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  int heap_pop()
  {
    const int top = heap_[0];
    heap_pos_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      int i = 0;
      const int size = static_cast<int>(heap_.size());
      for (;;) {
        int child = 2 * i + 1;
        if (child >= size) break;
        if (child + 1 < size && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], last)) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = i;
        i = child;
      }
      heap_[i] = last;
      heap_pos_[last] = i;
    }
    return top;
  }

  int nvars_;
  std::vector<int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<int8_t> phase_;  // 1 = last assigned false
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::vector<int>> watches_;  // indexed by the literal whose truth falsifies the watch
  std::vector<Clause> clauses_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<Lit> units_;
  double var_inc_ = 1.0;
};

int usage()
{
  std::cerr << "usage: fenceinfer-sat [file.cnf]   (reads stdin without a file)\n";
  return 1;
}

}  // namespace

int main(int argc, char ** argv)
{
  if (argc > 2) return usage();
  std::ifstream file;
  std::istream * in = &std::cin;
  if (argc == 2) {
    const std::string arg = argv[1];
    if (arg == "-h" || arg == "--help") return usage();
    file.open(arg);
    if (!file) {
      std::cerr << "fenceinfer-sat: cannot open " << arg << "\n";
      return 1;
    }
    in = &file;
  }

  int nvars = -1;
  std::vector<std::vector<Lit>> clauses;
  std::vector<Lit> current;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, cnf;
      long nc = 0;
      if (!(hs >> p >> cnf >> nvars >> nc) || cnf != "cnf" || nvars < 0) {
        std::cerr << "fenceinfer-sat: bad header\n";
        return 1;
      }
      continue;
    }
    if (nvars < 0) {
      std::cerr << "fenceinfer-sat: clause before header\n";
      return 1;
    }
    std::istringstream ls(line);
    long l = 0;
    while (ls >> l) {
      if (l == 0) {
        clauses.push_back(current);
        current.clear();
        continue;
      }
      const long v = l < 0 ? -l : l;
      if (v > nvars) {
        std::cerr << "fenceinfer-sat: literal out of range\n";
        return 1;
      }
      current.push_back(mk_lit(static_cast<int>(v - 1), l < 0));
    }
  }
  if (!current.empty()) clauses.push_back(current);
  if (nvars < 0) nvars = 0;

  Solver s(nvars);
  bool ok = true;
  for (auto & c : clauses) {
    if (!s.add_clause(c)) {
      ok = false;
      break;
    }
  }
  if (ok) ok = s.solve();
  if (!ok) {
    std::printf("s UNSATISFIABLE\n");
    return 20;
  }
  std::printf("s SATISFIABLE\nv");
  for (int v = 0; v < nvars; ++v) std::printf(" %d", s.model_value(v) ? v + 1 : -(v + 1));
  std::printf(" 0\n");
  return 10;
}
