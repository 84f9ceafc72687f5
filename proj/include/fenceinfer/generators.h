#pragma once

#include <random>
#include <vector>

#include "fenceinfer/decision_tree.h"
#include "fenceinfer/formula.h"
#include "fenceinfer/tsys.h"

namespace fenceinfer {

// Hot-potato / turn-two-on / havoc-others system. J holds 1-based variable
// indices and must contain 1. Adds def "inv" = AND of x_i, i in J.
TransitionSystem gen_parity(unsigned n, const std::vector<unsigned> & J);

// x += y' with y' = y + (nondeterministic even), modulo 2^bits. Variables
// x0.., y0.. with index 0 the least significant bit. With freeze, an extra
// frozen flag z gates every step. Defs: "inv" = x0 & !y0, and with freeze
// "inv_z" = x0 & (!y0 | !z).
TransitionSystem gen_even_increment(unsigned bits, bool freeze = false);

// A system over x1..xn in which `target` is an inductive invariant that is
// backwards and forwards 1-fenced:
//   trans = (I & I') | (dI & Bad') | (!I & !dI & frame)
// where dI is the outer boundary of I, Init is a cube of a state in I and
// Bad a cube of a state outside I (both drawn from rng; Bad avoids dI when
// possible so that boundary states take a real step). Adds def "target".
// Throws Error if target or its complement is empty. Requires n <= 20.
TransitionSystem gen_target_system(const Formula & target, unsigned n, std::mt19937_64 & rng);

// Outer boundary of f as a formula: !f & OR_i f[x_i flipped].
Formula outer_boundary_formula(const Formula & f, unsigned n);

DnfFormula random_monotone_dnf(unsigned n, unsigned terms, unsigned max_literals,
                               std::mt19937_64 & rng);
// Every variable has one fixed polarity across all terms.
DnfFormula random_unate_dnf(unsigned n, unsigned terms, unsigned max_literals,
                            std::mt19937_64 & rng, State * polarity = nullptr);
// At most r terms contain a negative literal.
DnfFormula random_almost_monotone_dnf(unsigned n, unsigned terms, unsigned max_literals,
                                      unsigned r, std::mt19937_64 & rng);

}  // namespace fenceinfer
