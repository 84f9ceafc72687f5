#include "fenceinfer/engine.h"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "fenceinfer/error.h"

namespace fenceinfer {

void RestartPolicy::validate(Bound min_k) const
{
  if (initial_k < min_k) {
    throw UsageError("initial bound must be at least " + std::to_string(min_k));
  }
  if (initial_k == unbounded || max_k == unbounded) throw UsageError("bounds must be finite");
  if (max_k < initial_k) throw UsageError("max_k must be at least the initial bound");
}

std::optional<Bound> RestartPolicy::next(Bound k) const
{
  Bound n = k;
  switch (schedule) {
    case Schedule::Increment: n = k + 1; break;
    case Schedule::Double: n = k == 0 ? 1 : 2 * k; break;
    case Schedule::Fixed: return std::nullopt;
  }
  if (n > max_k) return std::nullopt;
  return n;
}

std::vector<Bound> RestartPolicy::bounds() const
{
  std::vector<Bound> out{initial_k};
  for (auto k = next(initial_k); k; k = next(*k)) out.push_back(*k);
  return out;
}

Schedule parse_schedule(const std::string & text)
{
  if (text == "increment") return Schedule::Increment;
  if (text == "double") return Schedule::Double;
  if (text == "fixed") return Schedule::Fixed;
  throw UsageError("schedule must be increment, double or fixed");
}

std::uint64_t default_iteration_budget(unsigned n)
{
  return n >= 18 ? (std::uint64_t{1} << 20) : (std::uint64_t{4} << n);
}

std::string to_string(Outcome o)
{
  switch (o) {
    case Outcome::Invariant: return "invariant";
    case Outcome::Unsafe: return "unsafe";
    case Outcome::Failure: return "failure";
    case Outcome::BudgetExceeded: return "budget";
  }
  return "?";
}

nlohmann::json to_json(const InferenceOutcome & o, const Vocabulary & v)
{
  nlohmann::json j;
  j["outcome"] = to_string(o.kind);
  if (o.kind == Outcome::Invariant) {
    j["invariant"] = to_sexpr(o.invariant, v);
    if (o.dnf) j["dnf"] = o.dnf->to_string(v);
    if (o.cnf) j["cnf"] = o.cnf->to_string(v);
  }
  if (o.kind == Outcome::Unsafe) j["trace"] = trace_to_json(o.trace);
  j["stats"] = to_json(o.stats);
  j["iterations"] = o.iterations;
  j["term_additions"] = o.term_additions;
  j["restarts"] = o.restarts;
  j["k"] = bound_to_string(o.k);
  if (o.equivalence_queries || o.membership_queries) {
    j["equivalence_queries"] = o.equivalence_queries;
    j["membership_queries"] = o.membership_queries;
  }
  if (!o.message.empty()) j["message"] = o.message;
  return j;
}

InferenceOutcome undualize(InferenceOutcome dual)
{
  InferenceOutcome out = std::move(dual);
  if (out.kind == Outcome::Invariant) {
    if (out.dnf) {
      out.cnf = negate(*out.dnf);
      out.dnf.reset();
      out.invariant = to_formula(*out.cnf);
    } else if (out.cnf) {
      out.dnf = negate(*out.cnf);
      out.cnf.reset();
      out.invariant = to_formula(*out.dnf);
    } else {
      out.invariant = f_not(out.invariant);
    }
  }
  if (out.kind == Outcome::Unsafe) std::reverse(out.trace.begin(), out.trace.end());
  return out;
}

namespace {

void emit(const EventSink & sink, nlohmann::json j)
{
  if (sink) sink(j);
}

InferenceOutcome from_attempt(const Attempt & a, Bound k)
{
  InferenceOutcome out;
  out.kind = Outcome::Invariant;
  out.invariant = a.invariant;
  out.dnf = a.dnf;
  out.k = k;
  out.message = a.message;
  return out;
}

InferenceOutcome run_sequential(SatOracle & oracle, const EngineConfig & cfg,
                                const std::string & engine, const AttemptFn & attempt)
{
  InferenceOutcome out;
  Bound k = cfg.policy.initial_k;
  std::uint64_t iterations = 0, additions = 0;
  unsigned restarts = 0;
  for (;;) {
    emit(cfg.events, {{"event", "start"}, {"engine", engine}, {"k", k}});
    const Attempt a = attempt(oracle, k, cfg.events, nullptr);
    iterations += a.iterations;
    additions += a.term_additions;
    if (a.kind == Attempt::Kind::Invariant) {
      out = from_attempt(a, k);
      break;
    }
    if (a.kind != Attempt::Kind::Restart) {
      out.kind = Outcome::BudgetExceeded;
      out.k = k;
      out.message = a.message.empty() ? "iteration budget exhausted" : a.message;
      break;
    }
    ++restarts;
    emit(cfg.events, {{"event", "restart"}, {"k", k}});
    auto r = oracle.bmc_backward(oracle.system().init(), k);
    if (r.reachable) {
      out.kind = Outcome::Unsafe;
      out.trace = r.trace;
      out.k = k;
      break;
    }
    auto next = cfg.policy.next(k);
    if (!next) {
      out.kind = Outcome::BudgetExceeded;
      out.k = k;
      out.message = "bound schedule exhausted at k=" + std::to_string(k);
      break;
    }
    k = *next;
  }
  out.iterations = iterations;
  out.term_additions = additions;
  out.restarts = restarts;
  out.stats = oracle.stats();
  return out;
}

InferenceOutcome run_parallel(SatOracle & oracle, const EngineConfig & cfg,
                              const std::string & engine, const AttemptFn & attempt)
{
  const std::vector<Bound> ks = cfg.policy.bounds();
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<InferenceOutcome> winner;
  std::vector<std::unique_ptr<SatOracle>> clones;
  for (std::size_t i = 0; i < ks.size(); ++i) clones.push_back(oracle.clone_for(oracle.system()));
  std::vector<std::exception_ptr> errors(ks.size());
  std::vector<Attempt> attempts(ks.size());
  EventSink sink;
  if (cfg.events) {
    sink = [&](const nlohmann::json & j) {
      std::lock_guard<std::mutex> lock(mu);
      cfg.events(j);
    };
  }

  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    threads.emplace_back([&, i] {
      const Bound k = ks[i];
      SatOracle & o = *clones[i];
      try {
        EventSink tagged;
        if (sink) {
          tagged = [&sink, k](const nlohmann::json & j) {
            nlohmann::json t = j;
            t["k"] = k;
            sink(t);
          };
        }
        emit(tagged, {{"event", "start"}, {"engine", engine}});
        attempts[i] = attempt(o, k, tagged, &stop);
        std::optional<InferenceOutcome> verdict;
        if (attempts[i].kind == Attempt::Kind::Invariant) {
          verdict = from_attempt(attempts[i], k);
        } else if (attempts[i].kind == Attempt::Kind::Restart && !stop.load()) {
          emit(tagged, {{"event", "restart"}});
          auto r = o.bmc_backward(o.system().init(), k);
          if (r.reachable) {
            InferenceOutcome u;
            u.kind = Outcome::Unsafe;
            u.trace = r.trace;
            u.k = k;
            verdict = u;
          }
        }
        if (verdict) {
          std::lock_guard<std::mutex> lock(mu);
          if (!winner) {
            winner = std::move(verdict);
            stop.store(true);
          }
        }
      } catch (...) {
        errors[i] = std::current_exception();
        stop.store(true);
      }
    });
  }
  for (auto & t : threads) t.join();
  for (auto & e : errors) {
    if (e) std::rethrow_exception(e);
  }

  InferenceOutcome out;
  if (winner) {
    out = *winner;
  } else {
    out.kind = Outcome::BudgetExceeded;
    out.k = ks.back();
    out.message = "no bound produced a verdict";
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    oracle.absorb(clones[i]->stats());
    out.iterations += attempts[i].iterations;
    out.term_additions += attempts[i].kind == Attempt::Kind::Invariant && out.k == ks[i]
                              ? attempts[i].term_additions
                              : 0;
    if (attempts[i].kind == Attempt::Kind::Restart) ++out.restarts;
  }
  out.stats = oracle.stats();
  return out;
}

}  // namespace

InferenceOutcome run_schedule(SatOracle & oracle, const EngineConfig & cfg, const std::string & engine,
                              const AttemptFn & attempt)
{
  InferenceOutcome out = cfg.policy.mode == BoundsMode::ParallelBounds
                             ? run_parallel(oracle, cfg, engine, attempt)
                             : run_sequential(oracle, cfg, engine, attempt);
  nlohmann::json r{{"event", "result"}, {"outcome", to_string(out.kind)}, {"k", out.k}};
  if (out.kind == Outcome::Invariant) r["invariant"] = to_sexpr(out.invariant, oracle.system().vocab());
  emit(cfg.events, r);
  return out;
}

}  // namespace fenceinfer
