#pragma once

// Shared engine plumbing: restart policy, outcomes, event log and the
// driver that walks the bound schedule (sequentially or all bounds at once).

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fenceinfer/logic.h"
#include "fenceinfer/oracle.h"

namespace fenceinfer {

enum class Schedule
{
  Increment,
  Double,
  Fixed
};

enum class BoundsMode
{
  Sequential,
  ParallelBounds
};

struct RestartPolicy
{
  Bound initial_k = 1;
  Schedule schedule = Schedule::Increment;
  Bound max_k = 16;
  BoundsMode mode = BoundsMode::Sequential;

  // Throws UsageError. The two-phase engine needs initial_k >= 1.
  void validate(Bound min_k) const;
  // The bound after k, or nullopt once max_k is exhausted.
  std::optional<Bound> next(Bound k) const;
  std::vector<Bound> bounds() const;

  static RestartPolicy fixed(Bound k) { return {k, Schedule::Fixed, k, BoundsMode::Sequential}; }
};

Schedule parse_schedule(const std::string & text);

using EventSink = std::function<void(const nlohmann::json &)>;

struct EngineConfig
{
  RestartPolicy policy;
  // Shuffled literal order for generalization; ascending index when unset.
  std::optional<std::uint64_t> seed;
  // Outer iterations per bound; 0 means 4 * 2^n (capped).
  std::uint64_t iteration_budget = 0;
  EventSink events;
};

std::uint64_t default_iteration_budget(unsigned n);

enum class Outcome
{
  Invariant,
  Unsafe,
  Failure,
  BudgetExceeded
};

std::string to_string(Outcome o);

struct InferenceOutcome
{
  Outcome kind = Outcome::BudgetExceeded;
  Formula invariant;                // Invariant only
  std::optional<DnfFormula> dnf;    // when the invariant is a plain DNF
  std::optional<CnfFormula> cnf;    // when it is a plain CNF
  Trace trace;                      // Unsafe only
  OracleStats stats;                // the oracle's counters on return
  std::uint64_t iterations = 0;     // outer iterations, all bounds
  std::uint64_t term_additions = 0;
  unsigned restarts = 0;
  Bound k = 0;                      // bound of the final attempt
  std::uint64_t equivalence_queries = 0;
  std::uint64_t membership_queries = 0;
  std::string message;
};

nlohmann::json to_json(const InferenceOutcome & o, const Vocabulary & v);

// The outcome on ts of an engine run on dualize(ts): the invariant is
// negated and an unsafe trace reversed.
InferenceOutcome undualize(InferenceOutcome dual);

// One run of an engine at a fixed bound.
struct Attempt
{
  enum class Kind
  {
    Invariant,
    Restart,
    Budget,
    Cancelled
  };

  Kind kind = Kind::Budget;
  Formula invariant;
  std::optional<DnfFormula> dnf;
  std::uint64_t iterations = 0;
  std::uint64_t term_additions = 0;
  std::string message;
};

using AttemptFn =
    std::function<Attempt(SatOracle & oracle, Bound k, const EventSink & events,
                          const std::atomic<bool> * stop)>;

// Runs attempts along the restart schedule. A restart triggers one
// bmc_backward(Init, k) check, which turns Unsafe into a verdict. In
// parallel mode every bound runs on its own oracle clone and the first
// verdict wins; the clones' counters are folded into `oracle`.
InferenceOutcome run_schedule(SatOracle & oracle, const EngineConfig & cfg, const std::string & engine,
                              const AttemptFn & attempt);

// Throws RestartSignal (inside an attempt) to request a larger bound.
class RestartSignal : public Error
{
 public:
  RestartSignal() : Error("restart with a larger bound") {}
};

}  // namespace fenceinfer
