#pragma once

// Inference with a known monotone basis: one a_i-monotone DNF H_i per
// basis translation, candidate H = AND_i H_i.

#include <functional>
#include <string>
#include <vector>

#include "fenceinfer/engine.h"

namespace fenceinfer {

struct Basis
{
  std::vector<Translation> translations;
  std::string label;

  std::size_t size() const { return translations.size(); }
  // Throws Error on duplicates or mixed widths.
  void validate(unsigned n) const;
};

constexpr std::size_t default_basis_cap = 10000;

// All translations with at most r true bits, by weight then code.
Basis basis_almost_monotone(unsigned n, unsigned r, std::size_t cap = default_basis_cap);
Basis basis_monotone(unsigned n);
// One translation bitstring per line ('#' comments).
Basis load_basis(const std::string & path, unsigned n);
// "monotone", "almost-monotone:r=<r>" or "file:<path>".
Basis parse_basis_spec(const std::string & spec, unsigned n, std::size_t cap = default_basis_cap);

// AND_i H_i; shared by the engine and the learner so that their queries
// are textually identical.
Formula hypothesis_formula(const std::vector<DnfFormula> & parts);

// Walk v from s toward a, flipping disagreeing bits in ascending order
// whenever accept(flipped) holds, in full sweeps until none applies.
State monotone_walk(const State & s, const Translation & a,
                    const std::function<bool(const State &)> & accept);

// Throws RestartSignal if s reaches Bad within k steps; otherwise the
// a-monotone cube of the walked state, flips guarded by bmc_backward.
Term mon_gen_bmc(SatOracle & oracle, const State & s, const Translation & a, Bound k);

// Events: "cex" {iteration, state}, "term" {component, pos, neg, text}.
// The outcome keeps the components H_i in `components` order of the basis.
struct LambdaOutcome : InferenceOutcome
{
  std::vector<DnfFormula> components;
};

LambdaOutcome lambda_infer(SatOracle & oracle, const Basis & basis, const EngineConfig & cfg);

// not(lambda_infer) on the dual system: OR_i not(H_i), a disjunction of CNFs.
LambdaOutcome dual_lambda_infer(SatOracle & oracle, const Basis & basis, const EngineConfig & cfg);

}  // namespace fenceinfer
