#include "fenceinfer/generators.h"

#include <algorithm>
#include <set>

#include "fenceinfer/error.h"
#include "fenceinfer/stateset.h"

namespace fenceinfer {

namespace {

Formula frame_except(unsigned n, Bits changing)
{
  std::vector<Formula> parts;
  for (unsigned i = 0; i < n; ++i) {
    if ((changing >> i) & 1U) continue;
    parts.push_back(f_iff(Formula::var(i, true), Formula::var(i)));
  }
  return f_and(parts);
}

Formula lit(unsigned i, bool positive, bool primed = false)
{
  Formula v = Formula::var(i, primed);
  return positive ? v : f_not(v);
}

}  // namespace

TransitionSystem gen_parity(unsigned n, const std::vector<unsigned> & J)
{
  if (J.size() < 2) throw Error("gen_parity: |J| must be at least 2");
  if (n < J.size()) throw Error("gen_parity: n must be at least |J|");
  std::set<unsigned> js(J.begin(), J.end());
  if (js.size() != J.size()) throw Error("gen_parity: J has repeated indices");
  if (!js.count(1)) throw Error("gen_parity: J must contain 1");
  if (*js.rbegin() > n || *js.begin() < 1) throw Error("gen_parity: J index out of range");
  std::vector<unsigned> j0;
  for (unsigned j : js) j0.push_back(j - 1);
  Bits jmask = 0;
  for (unsigned j : j0) jmask |= Bits{1} << j;

  std::vector<Formula> actions;
  for (unsigned i : j0) {
    for (unsigned j : j0) {
      if (i == j) continue;
      const Bits pair = (Bits{1} << i) | (Bits{1} << j);
      actions.push_back(f_and({lit(i, false), lit(j, true), lit(i, true, true), lit(j, false, true),
                               frame_except(n, pair)}));
    }
  }
  for (std::size_t a = 0; a < j0.size(); ++a) {
    for (std::size_t b = a + 1; b < j0.size(); ++b) {
      const unsigned i = j0[a], j = j0[b];
      const Bits pair = (Bits{1} << i) | (Bits{1} << j);
      actions.push_back(f_and({lit(i, false), lit(j, false), lit(i, true, true), lit(j, true, true),
                               frame_except(n, pair)}));
    }
  }
  actions.push_back(frame_except(n, low_mask(n) & ~jmask));

  std::vector<Formula> init, bad, inv;
  for (unsigned i = 0; i < n; ++i) init.push_back(lit(i, true));
  bad.push_back(lit(0, false));
  for (unsigned i = 1; i < n; ++i) bad.push_back(lit(i, true));
  for (unsigned j : j0) inv.push_back(lit(j, true));

  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::numbered(n));
  return TransitionSystem(vocab, f_and(init), f_or(actions), f_and(bad),
                          {{"inv", f_and(inv)}});
}

TransitionSystem gen_even_increment(unsigned bits, bool freeze)
{
  if (bits < 2) throw Error("gen_even_increment: bits must be at least 2");
  if (2 * bits + (freeze ? 1 : 0) > max_vars) throw Error("gen_even_increment: too many bits");
  std::vector<std::string> names;
  for (unsigned i = 0; i < bits; ++i) names.push_back("x" + std::to_string(i));
  for (unsigned i = 0; i < bits; ++i) names.push_back("y" + std::to_string(i));
  if (freeze) names.push_back("z");
  auto vocab = std::make_shared<const Vocabulary>(names);
  auto x = [&](unsigned i, bool primed = false) { return Formula::var(i, primed); };
  auto y = [&](unsigned i, bool primed = false) { return Formula::var(bits + i, primed); };

  std::vector<Formula> step;
  step.push_back(f_iff(y(0, true), y(0)));
  // Ripple-carry x' = x + y'. Carries are shared subformulas.
  Formula carry = f_false();
  for (unsigned i = 0; i < bits; ++i) {
    const Formula a = x(i), b = y(i, true);
    const Formula sum = f_xor(f_xor(a, b), carry);
    step.push_back(f_iff(x(i, true), sum));
    if (i + 1 < bits) carry = f_or(f_and(a, b), f_and(carry, f_or(a, b)));
  }
  Formula trans = f_and(step);
  std::vector<NamedFormula> defs{{"inv", f_and(x(0), f_not(y(0)))}};
  if (freeze) {
    const unsigned z = 2 * bits;
    trans = f_and({Formula::var(z), Formula::var(z, true), trans});
    defs.push_back(
        {"inv_z", f_and(x(0), f_or(f_not(y(0)), f_not(Formula::var(z))))});
  }
  return TransitionSystem(vocab, f_and(x(0), f_not(y(0))), trans, f_not(x(0)), std::move(defs));
}

Formula outer_boundary_formula(const Formula & f, unsigned n)
{
  std::vector<Formula> flips;
  for (unsigned i = 0; i < n; ++i) {
    flips.push_back(map_vars(f, [i](unsigned j, bool primed) {
      Formula v = Formula::var(j, primed);
      return j == i ? f_not(v) : v;
    }));
  }
  return f_and(f_not(f), f_or(flips));
}

TransitionSystem gen_target_system(const Formula & target, unsigned n, std::mt19937_64 & rng)
{
  require_enumerable(n, 20, "gen_target_system");
  if (target.has_primed()) throw Error("target invariant must be unprimed");
  const StateSet inside = StateSet::of(target, n);
  const Formula boundary = outer_boundary_formula(target, n);
  const StateSet outer = StateSet::of(boundary, n);
  const auto ins = inside.states();
  auto outs = (inside.complement() - outer).states();
  if (ins.empty()) throw Error("target invariant is unsatisfiable");
  if (outs.empty()) outs = inside.complement().states();
  if (outs.empty()) throw Error("target invariant is valid");
  auto pick = [&](const std::vector<State> & v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  const State init_state = pick(ins);
  const State bad_state = pick(outs);
  const Formula bad = state_formula(bad_state);
  const Formula trans =
      f_or({f_and(target, prime(target)), f_and(boundary, prime(bad)),
            f_and({f_not(target), f_not(boundary), frame_except(n, 0)})});
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::numbered(n));
  return TransitionSystem(vocab, state_formula(init_state), trans, bad, {{"target", target}});
}

namespace {

Term random_term_with(unsigned n, unsigned max_literals, std::mt19937_64 & rng,
                      const std::function<bool(unsigned)> & polarity)
{
  std::vector<unsigned> vars(n);
  for (unsigned i = 0; i < n; ++i) vars[i] = i;
  std::shuffle(vars.begin(), vars.end(), rng);
  const unsigned k = std::uniform_int_distribution<unsigned>(1, std::max(1U, std::min(n, max_literals)))(rng);
  std::vector<Literal> lits;
  for (unsigned i = 0; i < k; ++i) lits.push_back({vars[i], polarity(vars[i])});
  return Term::of(lits);
}

}  // namespace

DnfFormula random_monotone_dnf(unsigned n, unsigned terms, unsigned max_literals,
                               std::mt19937_64 & rng)
{
  DnfFormula f;
  for (unsigned t = 0; t < terms; ++t) {
    f.terms.push_back(random_term_with(n, max_literals, rng, [](unsigned) { return true; }));
  }
  return f;
}

DnfFormula random_unate_dnf(unsigned n, unsigned terms, unsigned max_literals,
                            std::mt19937_64 & rng, State * polarity)
{
  const State pol(n, rng());
  if (polarity) *polarity = pol;
  DnfFormula f;
  for (unsigned t = 0; t < terms; ++t) {
    f.terms.push_back(random_term_with(n, max_literals, rng, [&](unsigned i) { return pol[i]; }));
  }
  return f;
}

DnfFormula random_almost_monotone_dnf(unsigned n, unsigned terms, unsigned max_literals,
                                      unsigned r, std::mt19937_64 & rng)
{
  DnfFormula f;
  for (unsigned t = 0; t < terms; ++t) {
    if (t < r) {
      // Mixed polarity, at least one negative literal.
      Term term = random_term_with(n, max_literals, rng,
                                   [&](unsigned) { return std::bernoulli_distribution(0.5)(rng); });
      if (term.negative_mask() == 0) {
        const auto lits = term.literals();
        term = term.without(lits.front()).with(lits.front().negated());
      }
      f.terms.push_back(term);
    } else {
      f.terms.push_back(random_term_with(n, max_literals, rng, [](unsigned) { return true; }));
    }
  }
  std::shuffle(f.terms.begin(), f.terms.end(), rng);
  return f;
}

}  // namespace fenceinfer
