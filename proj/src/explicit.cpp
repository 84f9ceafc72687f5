#include "fenceinfer/explicit.h"

#include <algorithm>

namespace fenceinfer {

std::string bound_to_string(Bound k) { return k == unbounded ? "inf" : std::to_string(k); }

Bound parse_bound(const std::string & text)
{
  if (text == "inf" || text == "infinity") return unbounded;
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception &) {
    throw UsageError("invalid bound '" + text + "'");
  }
  if (pos != text.size() || v >= unbounded) throw UsageError("invalid bound '" + text + "'");
  return static_cast<Bound>(v);
}

ExplicitSystem::ExplicitSystem(const TransitionSystem & ts, EnumerationLimits limits)
    : ts_(ts), n_(ts.n()), words_(table_words(ts.n()))
{
  require_enumerable(n_, std::min(limits.relation_cap, limits.state_cap), "explicit system");
  init_ = StateSet::of(ts.init(), n_);
  bad_ = StateSet::of(ts.bad(), n_);
  const std::size_t states = std::size_t{1} << n_;
  rows_.resize(states * words_);
  PostImageEvaluator ev(ts.trans(), n_);
  for (std::size_t c = 0; c < states; ++c) {
    const auto t = ev.successors(State(n_, c));
    std::copy(t.begin(), t.end(), rows_.begin() + static_cast<std::ptrdiff_t>(c * words_));
  }

  fwd_.assign(states, no_path);
  StateSet frontier = init_;
  StateSet seen = init_;
  for (std::uint32_t d = 0; !frontier.empty(); ++d) {
    for (const State & s : frontier.states()) fwd_[s.bits()] = d;
    frontier = post(frontier) - seen;
    seen |= frontier;
  }

  bwd_.assign(states, no_path);
  frontier = bad_;
  seen = bad_;
  for (std::uint32_t d = 0; !frontier.empty(); ++d) {
    for (const State & s : frontier.states()) bwd_[s.bits()] = d;
    StateSet next(n_);
    for (std::size_t c = 0; c < states; ++c) {
      if (!seen.contains(c) && row_meets(c, frontier)) next.insert(c);
    }
    frontier = next;
    seen |= frontier;
  }
}

bool ExplicitSystem::row_meets(Bits code, const StateSet & s) const
{
  const Bits * r = row(code);
  const auto & w = s.words();
  for (std::size_t i = 0; i < words_; ++i) {
    if (r[i] & w[i]) return true;
  }
  return false;
}

StateSet ExplicitSystem::post(const StateSet & s) const
{
  std::vector<Bits> acc(words_, 0);
  for (const State & x : s.states()) {
    const Bits * r = row(x.bits());
    for (std::size_t i = 0; i < words_; ++i) acc[i] |= r[i];
  }
  return StateSet::of_table(std::move(acc), n_);
}

StateSet ExplicitSystem::pre(const StateSet & s) const
{
  StateSet out(n_);
  const std::size_t states = std::size_t{1} << n_;
  for (std::size_t c = 0; c < states; ++c) {
    if (row_meets(c, s)) out.insert(c);
  }
  return out;
}

namespace {

StateSet within(const std::vector<std::uint32_t> & dist, unsigned n, Bound k)
{
  StateSet out(n);
  for (std::size_t c = 0; c < dist.size(); ++c) {
    if (dist[c] != ExplicitSystem::no_path && (k == unbounded || dist[c] <= k)) out.insert(c);
  }
  return out;
}

}  // namespace

StateSet ExplicitSystem::forward_reach(Bound k) const { return within(fwd_, n_, k); }
StateSet ExplicitSystem::backward_reach(Bound k) const { return within(bwd_, n_, k); }

Trace ExplicitSystem::trace_from_init(const State & s) const
{
  std::uint32_t d = fwd_.at(s.bits());
  if (d == no_path) throw Error("trace_from_init: state is unreachable");
  Trace t{s};
  Bits cur = s.bits();
  while (d > 0) {
    bool found = false;
    for (std::size_t p = 0; p < fwd_.size(); ++p) {
      if (fwd_[p] == d - 1 && has_edge(p, cur)) {
        cur = p;
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("broken forward distance labelling");
    t.emplace_back(n_, cur);
    --d;
  }
  std::reverse(t.begin(), t.end());
  return t;
}

Trace ExplicitSystem::trace_to_bad(const State & s) const
{
  std::uint32_t d = bwd_.at(s.bits());
  if (d == no_path) throw Error("trace_to_bad: state does not reach Bad");
  Trace t{s};
  Bits cur = s.bits();
  while (d > 0) {
    bool found = false;
    const std::size_t states = std::size_t{1} << n_;
    for (std::size_t q = 0; q < states; ++q) {
      if (bwd_[q] == d - 1 && has_edge(cur, q)) {
        cur = q;
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("broken backward distance labelling");
    t.emplace_back(n_, cur);
    --d;
  }
  return t;
}

std::optional<State> ExplicitSystem::successor_in(Bits from, const StateSet & s) const
{
  const Bits * r = row(from);
  const auto & w = s.words();
  for (std::size_t i = 0; i < words_; ++i) {
    const Bits m = r[i] & w[i];
    if (m) return State(n_, (Bits{i} << 6) | static_cast<Bits>(std::countr_zero(m)));
  }
  return std::nullopt;
}

StateSet forward_reach(const TransitionSystem & ts, Bound k, EnumerationLimits limits)
{
  return ExplicitSystem(ts, limits).forward_reach(k);
}

StateSet backward_reach(const TransitionSystem & ts, Bound k, EnumerationLimits limits)
{
  return ExplicitSystem(ts, limits).backward_reach(k);
}

namespace {

void require_safe(const ExplicitSystem & es)
{
  const StateSet bad_init = es.init() & es.backward_reach(unbounded);
  if (!bad_init.empty()) {
    // Shortest counterexample over all initial states.
    State best = *bad_init.first();
    for (const State & s : bad_init.states()) {
      if (es.backward_distance(s.bits()) < es.backward_distance(best.bits())) best = s;
    }
    throw UnsafeSystem(es.trace_to_bad(best));
  }
}

}  // namespace

StateSet gfp(const ExplicitSystem & es)
{
  require_safe(es);
  return es.backward_reach(unbounded).complement();
}

unsigned co_diameter(const ExplicitSystem & es)
{
  require_safe(es);
  unsigned k = 0;
  const std::size_t states = std::size_t{1} << es.n();
  for (std::size_t c = 0; c < states; ++c) {
    const auto d = es.backward_distance(c);
    if (d != ExplicitSystem::no_path) k = std::max<unsigned>(k, d);
  }
  return k;
}

StateSet boundary(const StateSet & s, Side side)
{
  const StateSet across = side == Side::Inner ? s.complement() : s;
  StateSet touched(s.vars());
  for (unsigned i = 0; i < s.vars(); ++i) touched |= across.flip_var(i);
  return side == Side::Inner ? (s & touched) : (touched - s);
}

std::string to_string(Direction d) { return d == Direction::Backwards ? "backwards" : "forwards"; }

Direction parse_direction(const std::string & text)
{
  if (text == "backwards" || text == "backward") return Direction::Backwards;
  if (text == "forwards" || text == "forward") return Direction::Forwards;
  throw UsageError("direction must be 'backwards' or 'forwards'");
}

FenceReport check_fence(const ExplicitSystem & es, const StateSet & inv, Bound k, Direction d)
{
  FenceReport r;
  r.direction = d;
  r.k = k;
  const StateSet b = boundary(inv, d == Direction::Backwards ? Side::Outer : Side::Inner);
  const StateSet reach = d == Direction::Backwards ? es.backward_reach(k) : es.forward_reach(k);
  r.boundary_size = b.count();
  r.violations = (b - reach).states();
  r.holds = r.violations.empty();
  r.inductive = verify_invariant(es, inv);
  return r;
}

FenceReport check_fence(const TransitionSystem & ts, const Formula & inv, Bound k, Direction d,
                        EnumerationLimits limits)
{
  ExplicitSystem es(ts, limits);
  return check_fence(es, StateSet::of(inv, ts.n()), k, d);
}

bool verify_invariant(const ExplicitSystem & es, const StateSet & inv)
{
  if (!es.init().subset_of(inv)) return false;
  if (!(inv & es.bad()).empty()) return false;
  return es.post(inv).subset_of(inv);
}

bool verify_invariant(const TransitionSystem & ts, const Formula & inv, EnumerationLimits limits)
{
  ExplicitSystem es(ts, limits);
  return verify_invariant(es, StateSet::of(inv, ts.n()));
}

nlohmann::json trace_to_json(const Trace & t)
{
  nlohmann::json out = nlohmann::json::array();
  for (const auto & s : t) out.push_back(s.to_string());
  return out;
}

nlohmann::json to_json(const FenceReport & r)
{
  nlohmann::json j;
  j["direction"] = to_string(r.direction);
  if (r.k == unbounded) {
    j["k"] = "inf";
  } else {
    j["k"] = r.k;
  }
  j["holds"] = r.holds;
  j["boundary_size"] = r.boundary_size;
  j["violations"] = trace_to_json(r.violations);
  j["inductive"] = r.inductive;
  return j;
}

}  // namespace fenceinfer
