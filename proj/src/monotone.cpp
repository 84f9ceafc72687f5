#include "fenceinfer/monotone.h"

#include "fenceinfer/error.h"

namespace fenceinfer {

namespace {

StateSet literal_set(unsigned i, bool value, unsigned n)
{
  Formula v = Formula::var(i);
  return StateSet::of(value ? v : f_not(v), n);
}

}  // namespace

bool implies(const Formula & f, const Formula & g, unsigned n, unsigned cap)
{
  require_enumerable(n, cap, "implies");
  return StateSet::of(f, n).subset_of(StateSet::of(g, n));
}

bool equivalent(const Formula & f, const Formula & g, unsigned n, unsigned cap)
{
  require_enumerable(n, cap, "equivalent");
  return StateSet::of(f, n) == StateSet::of(g, n);
}

StateSet monotonization(const StateSet & s, const Translation & a)
{
  const unsigned n = s.vars();
  StateSet out = s;
  for (unsigned i = 0; i < n; ++i) {
    // Moving away from a along bit i stays inside the closure.
    out |= out.flip_var(i) & literal_set(i, !a.a[i], n);
  }
  return out;
}

bool is_a_monotone(const StateSet & s, const Translation & a) { return monotonization(s, a) == s; }

bool is_a_monotone(const Formula & f, const Translation & a, unsigned n, unsigned cap)
{
  require_enumerable(n, cap, "is_a_monotone");
  return is_a_monotone(StateSet::of(f, n), a);
}

bool is_prime_implicant(const Term & t, const Formula & f, unsigned n, unsigned cap)
{
  require_enumerable(n, cap, "is_prime_implicant");
  const StateSet target = StateSet::of(f, n);
  if (!StateSet::of(to_formula(t), n).subset_of(target)) return false;
  for (const auto & l : t.literals()) {
    if (StateSet::of(to_formula(t.without(l)), n).subset_of(target)) return false;
  }
  return true;
}

Clause weakest_monotone_clause(const State & y, const Translation & a)
{
  const Bits agree = ~(y.bits() ^ a.a.bits()) & low_mask(y.size());
  // Literals false at y: positive where y is 0, negative where y is 1.
  return Clause(agree & ~y.bits(), agree & y.bits());
}

bool is_basis_for(const std::vector<Translation> & basis, const Formula & f, unsigned n,
                  unsigned cap)
{
  require_enumerable(n, cap, "is_basis_for");
  const StateSet models = StateSet::of(f, n);
  const std::vector<State> positives = models.states();
  for (const State & y : models.complement().states()) {
    bool excluded = false;
    for (const auto & a : basis) {
      const Clause c = weakest_monotone_clause(y, a);
      bool implied = true;
      for (const State & x : positives) {
        if (!c.eval(x)) {
          implied = false;
          break;
        }
      }
      if (implied) {
        excluded = true;
        break;
      }
    }
    if (!excluded) return false;
  }
  return true;
}

}  // namespace fenceinfer
