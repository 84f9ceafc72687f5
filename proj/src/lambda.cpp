#include "fenceinfer/lambda.h"

#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "fenceinfer/error.h"

namespace fenceinfer {

void Basis::validate(unsigned n) const
{
  std::set<Bits> seen;
  for (const auto & t : translations) {
    if (t.size() != n) throw Error("basis translation has the wrong width");
    if (!seen.insert(t.a.bits()).second) {
      throw Error("basis translations must be distinct: " + t.a.to_string() + " repeats");
    }
  }
  if (translations.empty()) throw Error("basis is empty");
}

Basis basis_almost_monotone(unsigned n, unsigned r, std::size_t cap)
{
  if (r > n) throw UsageError("almost-monotone basis needs r <= n");
  // Size is sum_{j<=r} C(n, j); check the cap before enumerating.
  std::size_t size = 0, binom = 1;
  for (unsigned j = 0; j <= r; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    size += binom;
    if (size > cap) {
      throw CapExceeded("almost-monotone basis with n=" + std::to_string(n) + ", r=" +
                        std::to_string(r) + " exceeds the cap of " + std::to_string(cap));
    }
  }
  Basis b;
  b.label = r == 0 ? "monotone" : "almost-monotone r=" + std::to_string(r);
  for (unsigned w = 0; w <= r; ++w) {
    if (w == 0) {
      b.translations.push_back({State::all_false(n)});
      continue;
    }
    // Codes of weight w in increasing order (Gosper's hack).
    Bits c = low_mask(w);
    while (n == 64 || c <= low_mask(n)) {
      b.translations.push_back({State(n, c)});
      const Bits lo = c & (~c + 1);
      const Bits hi = c + lo;
      if (hi == 0) break;
      c = (((hi ^ c) >> 2) / lo) | hi;
    }
  }
  return b;
}

Basis basis_monotone(unsigned n) { return basis_almost_monotone(n, 0); }

Basis load_basis(const std::string & path, unsigned n)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open basis file '" + path + "'");
  Basis b;
  b.label = "file:" + path;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    line = line.substr(start);
    if (line.empty()) continue;
    if (line.size() != n || line.find_first_not_of("01") != std::string::npos) {
      throw ParseError("expected a bitstring of length " + std::to_string(n), lineno, 1);
    }
    b.translations.push_back({State::parse(line)});
  }
  b.validate(n);
  return b;
}

Basis parse_basis_spec(const std::string & spec, unsigned n, std::size_t cap)
{
  if (spec == "monotone") return basis_monotone(n);
  const std::string am = "almost-monotone:r=";
  if (spec.rfind(am, 0) == 0) {
    const std::string num = spec.substr(am.size());
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("invalid basis '" + spec + "'");
    }
    return basis_almost_monotone(n, static_cast<unsigned>(std::stoul(num)), cap);
  }
  if (spec.rfind("file:", 0) == 0) return load_basis(spec.substr(5), n);
  throw UsageError("basis must be monotone, almost-monotone:r=<r> or file:<path>");
}

Formula hypothesis_formula(const std::vector<DnfFormula> & parts)
{
  std::vector<Formula> fs;
  for (const auto & h : parts) fs.push_back(to_formula(h));
  return f_and(std::move(fs));
}

State monotone_walk(const State & s, const Translation & a,
                    const std::function<bool(const State &)> & accept)
{
  State v = s;
  bool walked = true;
  while (walked) {
    walked = false;
    for (unsigned j = 0; j < v.size(); ++j) {
      if (v[j] == a.a[j]) continue;
      const State w = v.flipped(j);
      if (accept(w)) {
        v = w;
        walked = true;
      }
    }
  }
  return v;
}

Term mon_gen_bmc(SatOracle & oracle, const State & s, const Translation & a, Bound k)
{
  if (oracle.bmc_backward(state_formula(s), k).reachable) throw RestartSignal();
  const State v = monotone_walk(s, a, [&](const State & w) {
    return !oracle.bmc_backward(state_formula(w), k).reachable;
  });
  return monotone_cube(v, a);
}

LambdaOutcome lambda_infer(SatOracle & oracle, const Basis & basis, const EngineConfig & cfg)
{
  cfg.policy.validate(0);
  basis.validate(oracle.n());
  const std::uint64_t budget =
      cfg.iteration_budget ? cfg.iteration_budget : default_iteration_budget(oracle.n());
  std::mutex mu;
  std::map<Bound, std::vector<DnfFormula>> found;
  auto attempt = [&](SatOracle & o, Bound k, const EventSink & events,
                     const std::atomic<bool> * stop) {
    const Vocabulary & v = o.system().vocab();
    std::vector<DnfFormula> h(basis.size());
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
      const Formula f = hypothesis_formula(h);
      const InductivenessResult res = o.check_inductive(f);
      a.iterations = it + 1;
      if (res.inductive()) {
        a.kind = Attempt::Kind::Invariant;
        a.invariant = f;
        std::lock_guard<std::mutex> lock(mu);
        found[k] = h;
        return a;
      }
      if (res.kind == InductivenessResult::Kind::BadIntersection) {
        a.kind = Attempt::Kind::Restart;
        return a;
      }
      const State cex = res.kind == InductivenessResult::Kind::Cti ? res.post : res.state;
      if (events) events({{"event", "cex"}, {"iteration", it}, {"state", cex.to_string()}});
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (h[i].eval(cex)) continue;
        Term d;
        try {
          d = mon_gen_bmc(o, cex, basis.translations[i], k);
        } catch (const RestartSignal &) {
          a.kind = Attempt::Kind::Restart;
          return a;
        }
        h[i].terms.push_back(d);
        ++a.term_additions;
        if (events) {
          events({{"event", "term"},
                  {"component", i},
                  {"pos", d.positive_mask()},
                  {"neg", d.negative_mask()},
                  {"text", d.to_string(v)}});
        }
      }
    }
  };
  LambdaOutcome out;
  static_cast<InferenceOutcome &>(out) = run_schedule(oracle, cfg, "lambda", attempt);
  if (out.kind == Outcome::Invariant) out.components = found.at(out.k);
  return out;
}

LambdaOutcome dual_lambda_infer(SatOracle & oracle, const Basis & basis, const EngineConfig & cfg)
{
  auto dual = oracle.clone_for(dualize(oracle.system()));
  LambdaOutcome d = lambda_infer(*dual, basis, cfg);
  oracle.absorb(dual->stats());
  LambdaOutcome out;
  static_cast<InferenceOutcome &>(out) = undualize(d);
  out.components = d.components;
  if (out.kind == Outcome::Invariant) {
    std::vector<Formula> cnfs;
    for (const auto & h : d.components) cnfs.push_back(to_formula(negate(h)));
    out.invariant = f_or(std::move(cnfs));
    if (d.components.size() == 1) out.cnf = negate(d.components[0]);
  }
  out.stats = oracle.stats();
  return out;
}

}  // namespace fenceinfer
