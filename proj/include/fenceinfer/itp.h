#pragma once

// Interpolation-based inference: term minimization, its clause
// minimization dual, and the two-phase variant that computes a full
// interpolant of the post-image before weakening the candidate.

#include "fenceinfer/engine.h"

namespace fenceinfer {

// The candidate starts as Init (a cube or a DNF of cubes seeds the terms;
// any other Init is kept as an opaque first disjunct). Each CTI post-state
// s' is checked with bmc_backward(s', k), then its cube is generalized by
// dropping literals while bmc_backward(d, k) stays unreachable.
//
// Events: "cti" {iteration, pre, post}, "drop" {literal, dropped},
// "term" {pos, neg, text}.
InferenceOutcome itp_infer_termmin(SatOracle & oracle, const EngineConfig & cfg);

// not(itp_infer_termmin) on the dual system: the result is a CNF.
InferenceOutcome dual_itp_infer_clausemin(SatOracle & oracle, const EngineConfig & cfg);

// Outer loop: inductiveness check, then restart if bmc_backward(phi, k)
// is reachable, else sample post-states of phi outside chi and add their
// generalizations (bound k-1) to chi until post(phi) => chi;
// phi := phi | chi. Needs k >= 1.
//
// Events: "chi" {iteration, terms}.
InferenceOutcome itp_infer_two_phase(SatOracle & oracle, const EngineConfig & cfg);

}  // namespace fenceinfer
