#include "fenceinfer/itp.h"

#include <algorithm>
#include <random>

#include "fenceinfer/error.h"

namespace fenceinfer {

namespace {

void emit(const EventSink & sink, nlohmann::json j)
{
  if (sink) sink(j);
}

nlohmann::json term_json(const Term & t, const Vocabulary & v)
{
  return {{"pos", t.positive_mask()}, {"neg", t.negative_mask()}, {"text", t.to_string(v)}};
}

// phi = opaque | t1 | t2 | ... where opaque is Init when Init is not a DNF.
class Candidate
{
 public:
  explicit Candidate(const Formula & init)
  {
    if (auto d = as_dnf(init)) {
      terms_ = d->terms;
    } else {
      opaque_ = init;
    }
  }

  void add(const Term & t) { terms_.push_back(t); }
  const std::vector<Term> & terms() const { return terms_; }
  bool has_opaque() const { return opaque_.has_value(); }

  Formula formula() const
  {
    Formula d = to_formula(DnfFormula{terms_});
    return opaque_ ? f_or(*opaque_, d) : d;
  }

  std::optional<DnfFormula> dnf() const
  {
    if (opaque_) return std::nullopt;
    return DnfFormula{terms_};
  }

 private:
  std::optional<Formula> opaque_;
  std::vector<Term> terms_;
};

std::vector<Literal> literal_order(const Term & d, std::mt19937_64 * rng)
{
  auto lits = d.literals();
  if (rng) std::shuffle(lits.begin(), lits.end(), *rng);
  return lits;
}

// Drop literals of cube(s) while the smaller term cannot reach Bad in k steps.
Term generalize(SatOracle & oracle, const State & s, Bound k, std::mt19937_64 * rng,
                const EventSink & events)
{
  Term d = cube(s);
  const Vocabulary & v = oracle.system().vocab();
  for (const Literal & l : literal_order(d, rng)) {
    const Term smaller = d.without(l);
    const bool dropped = !oracle.bmc_backward(to_formula(smaller), k).reachable;
    if (dropped) d = smaller;
    emit(events, {{"event", "drop"},
                  {"literal", (l.positive ? "" : "!") + v.name(l.var)},
                  {"dropped", dropped}});
  }
  return d;
}

std::unique_ptr<std::mt19937_64> make_rng(const EngineConfig & cfg)
{
  if (!cfg.seed) return nullptr;
  return std::make_unique<std::mt19937_64>(*cfg.seed);
}

std::uint64_t budget_for(const EngineConfig & cfg, unsigned n)
{
  return cfg.iteration_budget ? cfg.iteration_budget : default_iteration_budget(n);
}

}  // namespace

InferenceOutcome itp_infer_termmin(SatOracle & oracle, const EngineConfig & cfg)
{
  cfg.policy.validate(0);
  // One literal-order stream across restarts and bounds.
  auto rng = make_rng(cfg);
  const std::uint64_t budget = budget_for(cfg, oracle.n());
  auto attempt = [&](SatOracle & o, Bound k, const EventSink & events,
                     const std::atomic<bool> * stop) {
    const TransitionSystem & ts = o.system();
    std::unique_ptr<std::mt19937_64> local;
    std::mt19937_64 * r = rng.get();
    if (stop && cfg.seed) {
      local = std::make_unique<std::mt19937_64>(*cfg.seed + k);
      r = local.get();
    }
    Candidate phi(ts.init());
    Attempt a;
    for (std::uint64_t it = 0;; ++it) {
      if (stop && stop->load()) {
        a.kind = Attempt::Kind::Cancelled;
        return a;
      }
      if (it >= budget) {
        a.kind = Attempt::Kind::Budget;
        return a;
      }
      const Formula f = phi.formula();
      const InductivenessResult res = o.check_inductive(f);
      a.iterations = it + 1;
      if (res.inductive()) {
        a.kind = Attempt::Kind::Invariant;
        a.invariant = f;
        a.dnf = phi.dnf();
        return a;
      }
      if (res.kind == InductivenessResult::Kind::InitViolation) {
        throw InternalError("candidate lost an initial state");
      }
      if (res.kind == InductivenessResult::Kind::BadIntersection) {
        a.kind = Attempt::Kind::Restart;
        return a;
      }
      emit(events, {{"event", "cti"},
                    {"iteration", it},
                    {"pre", res.state.to_string()},
                    {"post", res.post.to_string()}});
      if (o.bmc_backward(state_formula(res.post), k).reachable) {
        a.kind = Attempt::Kind::Restart;
        return a;
      }
      const Term d = generalize(o, res.post, k, r, events);
      phi.add(d);
      ++a.term_additions;
      auto tj = term_json(d, ts.vocab());
      tj["event"] = "term";
      tj["iteration"] = it;
      emit(events, tj);
    }
  };
  return run_schedule(oracle, cfg, "itp", attempt);
}

InferenceOutcome dual_itp_infer_clausemin(SatOracle & oracle, const EngineConfig & cfg)
{
  auto dual = oracle.clone_for(dualize(oracle.system()));
  InferenceOutcome out = itp_infer_termmin(*dual, cfg);
  oracle.absorb(dual->stats());
  out = undualize(std::move(out));
  out.stats = oracle.stats();
  return out;
}

InferenceOutcome itp_infer_two_phase(SatOracle & oracle, const EngineConfig & cfg)
{
  cfg.policy.validate(1);
  auto rng = make_rng(cfg);
  const std::uint64_t budget = budget_for(cfg, oracle.n());
  auto attempt = [&](SatOracle & o, Bound k, const EventSink & events,
                     const std::atomic<bool> * stop) {
    const TransitionSystem & ts = o.system();
    std::unique_ptr<std::mt19937_64> local;
    std::mt19937_64 * r = rng.get();
    if (stop && cfg.seed) {
      local = std::make_unique<std::mt19937_64>(*cfg.seed + k);
      r = local.get();
    }
    Candidate phi(ts.init());
    Attempt a;
    std::uint64_t samples = 0;
    for (std::uint64_t it = 0;; ++it) {
      if (stop && stop->load()) {
        a.kind = Attempt::Kind::Cancelled;
        return a;
      }
      if (it >= budget) {
        a.kind = Attempt::Kind::Budget;
        return a;
      }
      const Formula f = phi.formula();
      const InductivenessResult res = o.check_inductive(f);
      a.iterations = it + 1;
      if (res.inductive()) {
        a.kind = Attempt::Kind::Invariant;
        a.invariant = f;
        a.dnf = phi.dnf();
        return a;
      }
      if (res.kind == InductivenessResult::Kind::InitViolation) {
        throw InternalError("candidate lost an initial state");
      }
      if (o.bmc_backward(f, k).reachable) {
        a.kind = Attempt::Kind::Restart;
        return a;
      }
      // chi with post(phi) => chi and Reach_{k-1}(chi) & Bad empty.
      std::vector<Term> chi;
      for (;;) {
        if (++samples > budget) {
          a.kind = Attempt::Kind::Budget;
          return a;
        }
        auto t = o.find_transition(f, to_formula(DnfFormula{chi}));
        if (!t) break;
        chi.push_back(generalize(o, t->second, k - 1, r, events));
      }
      nlohmann::json cj{{"event", "chi"}, {"iteration", it}};
      cj["terms"] = nlohmann::json::array();
      for (const Term & d : chi) {
        cj["terms"].push_back(term_json(d, ts.vocab()));
        phi.add(d);
        ++a.term_additions;
      }
      emit(events, cj);
    }
  };
  return run_schedule(oracle, cfg, "itp2", attempt);
}

}  // namespace fenceinfer
