#pragma once

// Explicit-state ground truth: reachability, gfp, co-diameter, boundaries
// and the fence condition, all by enumeration.

#include <climits>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fenceinfer/error.h"
#include "fenceinfer/stateset.h"
#include "fenceinfer/tsys.h"

namespace fenceinfer {

// Step bound; `unbounded` runs to the fixpoint.
using Bound = unsigned;
constexpr Bound unbounded = UINT_MAX;

std::string bound_to_string(Bound k);
Bound parse_bound(const std::string & text);  // integer or "inf"

class UnsafeSystem : public Error
{
 public:
  explicit UnsafeSystem(Trace trace)
      : Error("system is unsafe: Bad is reachable from Init"), trace_(std::move(trace))
  {
  }
  const Trace & trace() const { return trace_; }

 private:
  Trace trace_;
};

// The transition relation materialized as one successor bitset per state,
// with BFS distances from Init and to Bad.
class ExplicitSystem
{
 public:
  static constexpr std::uint32_t no_path = UINT32_MAX;

  explicit ExplicitSystem(const TransitionSystem & ts, EnumerationLimits limits = {});

  const TransitionSystem & system() const { return ts_; }
  unsigned n() const { return n_; }
  const StateSet & init() const { return init_; }
  const StateSet & bad() const { return bad_; }

  // Successors of one state as table words.
  const Bits * row(Bits code) const { return rows_.data() + code * words_; }
  bool has_edge(Bits from, Bits to) const { return (row(from)[to >> 6] >> (to & 63)) & 1U; }
  bool row_meets(Bits code, const StateSet & s) const;

  StateSet post(const StateSet & s) const;
  StateSet pre(const StateSet & s) const;

  // Shortest distance from Init / to Bad, no_path if none.
  std::uint32_t forward_distance(Bits code) const { return fwd_[code]; }
  std::uint32_t backward_distance(Bits code) const { return bwd_[code]; }

  StateSet forward_reach(Bound k) const;
  StateSet backward_reach(Bound k) const;

  // Shortest execution from Init ending in s (s must be reachable).
  Trace trace_from_init(const State & s) const;
  // Shortest execution from s ending in Bad (s must reach Bad).
  Trace trace_to_bad(const State & s) const;

  // Smallest-code successor in `s` of state `from`, if any.
  std::optional<State> successor_in(Bits from, const StateSet & s) const;

 private:
  TransitionSystem ts_;
  unsigned n_;
  std::size_t words_;
  StateSet init_;
  StateSet bad_;
  std::vector<Bits> rows_;
  std::vector<std::uint32_t> fwd_;
  std::vector<std::uint32_t> bwd_;
};

using ExplicitSystemPtr = std::shared_ptr<const ExplicitSystem>;

StateSet forward_reach(const TransitionSystem & ts, Bound k, EnumerationLimits limits = {});
StateSet backward_reach(const TransitionSystem & ts, Bound k, EnumerationLimits limits = {});

// Complement of the backward-reachable states. Throws UnsafeSystem.
StateSet gfp(const ExplicitSystem & es);
// Least k with backward_reach(k) = backward_reach(inf). Throws UnsafeSystem.
unsigned co_diameter(const ExplicitSystem & es);

enum class Side
{
  Inner,  // states of S with a neighbor outside S
  Outer   // states outside S with a neighbor in S
};

StateSet boundary(const StateSet & s, Side side);

enum class Direction
{
  Backwards,
  Forwards
};

std::string to_string(Direction d);
Direction parse_direction(const std::string & text);

struct FenceReport
{
  Direction direction = Direction::Backwards;
  Bound k = 0;
  bool holds = false;
  std::size_t boundary_size = 0;
  std::vector<State> violations;
  bool inductive = false;  // I is an inductive invariant (reported separately)
};

// Backwards: outer boundary of I within backward_reach(k).
// Forwards: inner boundary of I within forward_reach(k).
FenceReport check_fence(const ExplicitSystem & es, const StateSet & inv, Bound k, Direction d);
FenceReport check_fence(const TransitionSystem & ts, const Formula & inv, Bound k, Direction d,
                        EnumerationLimits limits = {});

// Init => I, I & trans => I', I => !Bad, by enumeration.
bool verify_invariant(const ExplicitSystem & es, const StateSet & inv);
bool verify_invariant(const TransitionSystem & ts, const Formula & inv,
                      EnumerationLimits limits = {});

nlohmann::json to_json(const FenceReport & r);
nlohmann::json trace_to_json(const Trace & t);

}  // namespace fenceinfer
