#include "test_support.h"

#include <algorithm>

namespace fenceinfer::testing {

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

std::vector<State> all_states(unsigned n)
{
  std::vector<State> out;
  for (Bits c = 0; c < (Bits{1} << n); ++c) out.emplace_back(n, c);
  return out;
}

Formula random_formula(unsigned n, unsigned depth, std::mt19937_64 & rng, bool with_primes)
{
  std::uniform_int_distribution<unsigned> pick(0, 9);
  const unsigned r = pick(rng);
  if (depth == 0 || r < 3) {
    if (r == 0 && depth > 0) return Formula::constant(std::bernoulli_distribution(0.5)(rng));
    const unsigned v = std::uniform_int_distribution<unsigned>(0, n - 1)(rng);
    const bool primed = with_primes && std::bernoulli_distribution(0.5)(rng);
    return Formula::var(v, primed);
  }
  if (r < 5) return f_not(random_formula(n, depth - 1, rng, with_primes));
  const unsigned arity = std::uniform_int_distribution<unsigned>(1, 3)(rng);
  std::vector<Formula> kids;
  for (unsigned i = 0; i < arity; ++i) kids.push_back(random_formula(n, depth - 1, rng, with_primes));
  return r < 8 ? Formula::conjunction(kids) : Formula::disjunction(kids);
}

Term random_term(unsigned n, unsigned max_literals, std::mt19937_64 & rng)
{
  std::vector<unsigned> vars(n);
  for (unsigned i = 0; i < n; ++i) vars[i] = i;
  std::shuffle(vars.begin(), vars.end(), rng);
  const unsigned k = std::uniform_int_distribution<unsigned>(1, std::min(n, max_literals))(rng);
  std::vector<Literal> lits;
  for (unsigned i = 0; i < k; ++i) lits.push_back({vars[i], std::bernoulli_distribution(0.5)(rng)});
  return Term::of(lits);
}

DnfFormula random_dnf(unsigned n, unsigned terms, unsigned max_literals, std::mt19937_64 & rng)
{
  DnfFormula f;
  for (unsigned i = 0; i < terms; ++i) f.terms.push_back(random_term(n, max_literals, rng));
  return f;
}

State random_state(unsigned n, std::mt19937_64 & rng)
{
  return State(n, rng() & low_mask(n));
}

std::vector<Bits> models_of(unsigned n, const std::function<bool(const State &)> & pred)
{
  std::vector<Bits> out;
  for (const State & s : all_states(n)) {
    if (pred(s)) out.push_back(s.bits());
  }
  return out;
}

bool same_truth(const Formula & f, const Formula & g, unsigned n)
{
  for (const State & s : all_states(n)) {
    if (f.eval(s) != g.eval(s)) return false;
  }
  return true;
}

}  // namespace fenceinfer::testing

namespace fenceinfer::testing {

BruteGraph::BruteGraph(const TransitionSystem & ts) : n(ts.n())
{
  const auto states = all_states(n);
  edge.assign(states.size(), std::vector<bool>(states.size(), false));
  for (const State & a : states) {
    init.push_back(ts.init().eval(a));
    bad.push_back(ts.bad().eval(a));
    for (const State & b : states) edge[a.bits()][b.bits()] = ts.trans().eval(a, b);
  }
}

namespace {

std::vector<int> bfs(const std::vector<bool> & start, const std::function<bool(Bits, Bits)> & step,
                     std::size_t size)
{
  std::vector<int> dist(size, -1);
  std::vector<Bits> frontier;
  for (Bits s = 0; s < size; ++s) {
    if (start[s]) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  for (int d = 1; !frontier.empty(); ++d) {
    std::vector<Bits> next;
    for (Bits u : frontier) {
      for (Bits v = 0; v < size; ++v) {
        if (dist[v] < 0 && step(u, v)) {
          dist[v] = d;
          next.push_back(v);
        }
      }
    }
    frontier = next;
  }
  return dist;
}

}  // namespace

std::vector<int> BruteGraph::forward_dist() const
{
  return bfs(init, [&](Bits u, Bits v) { return edge[u][v]; }, init.size());
}

std::vector<int> BruteGraph::backward_dist() const
{
  return bfs(bad, [&](Bits u, Bits v) { return edge[v][u]; }, bad.size());
}

bool BruteGraph::forward_within(Bits s, int k) const
{
  const int d = forward_dist()[s];
  return d >= 0 && (k < 0 || d <= k);
}

bool BruteGraph::backward_within(Bits s, int k) const
{
  const int d = backward_dist()[s];
  return d >= 0 && (k < 0 || d <= k);
}

bool BruteGraph::is_inductive(const std::function<bool(const State &)> & inv) const
{
  for (const State & a : all_states(n)) {
    if (init[a.bits()] && !inv(a)) return false;
    if (!inv(a)) continue;
    if (bad[a.bits()]) return false;
    for (const State & b : all_states(n)) {
      if (edge[a.bits()][b.bits()] && !inv(b)) return false;
    }
  }
  return true;
}

namespace {

Formula random_literal_formula(unsigned v, std::mt19937_64 & rng)
{
  Formula x = Formula::var(v);
  return std::bernoulli_distribution(0.5)(rng) ? x : f_not(x);
}

Formula random_action(unsigned n, std::mt19937_64 & rng)
{
  std::vector<Formula> parts;
  // Guard: a random term over up to two variables.
  const Term guard = random_term(n, 2, rng);
  parts.push_back(to_formula(guard));
  std::uniform_int_distribution<unsigned> kind(0, 5);
  for (unsigned i = 0; i < n; ++i) {
    Formula post = Formula::var(i, true);
    switch (kind(rng)) {
      case 0:
      case 1:
      case 2:
        parts.push_back(f_iff(post, Formula::var(i)));  // frozen
        break;
      case 3:
        parts.push_back(f_iff(post, Formula::constant(std::bernoulli_distribution(0.5)(rng))));
        break;
      case 4: {
        const unsigned src = std::uniform_int_distribution<unsigned>(0, n - 1)(rng);
        parts.push_back(f_iff(post, random_literal_formula(src, rng)));
        break;
      }
      default:
        break;  // havoc
    }
  }
  return f_and(parts);
}

}  // namespace

TransitionSystem random_system(const RandomSystemOptions & opt, std::mt19937_64 & rng)
{
  const unsigned n = opt.n;
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::numbered(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const State si = random_state(n, rng);
    State sb = random_state(n, rng);
    if (sb == si) continue;
    Formula init = opt.cube_init ? state_formula(si) : random_formula(n, 3, rng);
    Formula bad = opt.cube_bad ? state_formula(sb) : random_formula(n, 3, rng);
    std::vector<Formula> acts;
    for (unsigned a = 0; a < opt.actions; ++a) acts.push_back(random_action(n, rng));
    TransitionSystem ts(vocab, init, f_or(acts), bad);
    bool ok = false;
    try {
      ok = validate_assumptions(ts);
    } catch (const std::exception &) {
      ok = false;
    }
    if (ok) return ts;
  }
  throw std::runtime_error("random_system: no valid system found");
}

}  // namespace fenceinfer::testing
