#pragma once

// Brute-force semantic checks used as ground truth at desk scale.

#include <vector>

#include "fenceinfer/formula.h"
#include "fenceinfer/logic.h"
#include "fenceinfer/stateset.h"

namespace fenceinfer {

constexpr unsigned default_state_cap = 20;

bool implies(const Formula & f, const Formula & g, unsigned n, unsigned cap = default_state_cap);
bool equivalent(const Formula & f, const Formula & g, unsigned n,
                unsigned cap = default_state_cap);

// M_a(S) = {x | exists v in S with v <=_a x}
StateSet monotonization(const StateSet & s, const Translation & a);

bool is_a_monotone(const StateSet & s, const Translation & a);
bool is_a_monotone(const Formula & f, const Translation & a, unsigned n,
                   unsigned cap = default_state_cap);

bool is_prime_implicant(const Term & t, const Formula & f, unsigned n,
                        unsigned cap = default_state_cap);

// The clause excluding y that is monotone w.r.t. a and weakest among such.
Clause weakest_monotone_clause(const State & y, const Translation & a);

// {a1..at} is a monotone basis for f: some CNF of f has every clause
// monotone w.r.t. some ai. Equivalently, each negative state is excluded by
// an ai-monotone implied clause.
bool is_basis_for(const std::vector<Translation> & basis, const Formula & f, unsigned n,
                  unsigned cap = default_state_cap);

}  // namespace fenceinfer
