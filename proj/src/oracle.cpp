#include "fenceinfer/oracle.h"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fenceinfer/error.h"

namespace fenceinfer {

std::string to_string(InductivenessResult::Kind k)
{
  switch (k) {
    case InductivenessResult::Kind::Inductive: return "inductive";
    case InductivenessResult::Kind::InitViolation: return "init_violation";
    case InductivenessResult::Kind::BadIntersection: return "bad_intersection";
    case InductivenessResult::Kind::Cti: return "cti";
  }
  return "?";
}

std::uint64_t OracleStats::backward_checks() const
{
  std::uint64_t t = 0;
  for (const auto & [k, c] : bmc_backward) t += c;
  return t;
}

std::uint64_t OracleStats::forward_checks() const
{
  std::uint64_t t = 0;
  for (const auto & [k, c] : bmc_forward) t += c;
  return t;
}

OracleStats & OracleStats::operator+=(const OracleStats & o)
{
  inductiveness_checks += o.inductiveness_checks;
  sat_calls += o.sat_calls;
  for (const auto & [k, c] : o.bmc_backward) bmc_backward[k] += c;
  for (const auto & [k, c] : o.bmc_forward) bmc_forward[k] += c;
  return *this;
}

nlohmann::json to_json(const OracleStats & s)
{
  nlohmann::json j;
  j["inductiveness_checks"] = s.inductiveness_checks;
  auto by_k = [](const std::map<Bound, std::uint64_t> & m) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto & [k, c] : m) o[bound_to_string(k)] = c;
    return o;
  };
  j["bmc_backward"] = by_k(s.bmc_backward);
  j["bmc_forward"] = by_k(s.bmc_forward);
  j["bmc_checks"] = s.bmc_checks();
  j["sat_calls"] = s.sat_calls;
  return j;
}

// ---------------------------------------------------------------------------
// SatOracle

SatOracle::SatOracle(TransitionSystem ts) : ts_(std::move(ts)) {}

InductivenessResult SatOracle::check_inductive(const Formula & phi)
{
  if (phi.has_primed()) throw Error("check_inductive: candidate must be unprimed");
  ++stats_.inductiveness_checks;
  InductivenessResult r = do_check_inductive(phi);
  validate(phi, r);
  if (log_) {
    nlohmann::json j{{"query", "inductive"},
                     {"input", to_sexpr(phi, ts_.vocab())},
                     {"answer", to_string(r.kind)}};
    if (!r.inductive()) j["state"] = r.state.to_string();
    if (r.kind == InductivenessResult::Kind::Cti) j["post"] = r.post.to_string();
    log_(j);
  }
  return r;
}

BmcResult SatOracle::bmc_backward(const Formula & psi, Bound k)
{
  if (psi.has_primed()) throw Error("bmc_backward: query must be unprimed");
  ++stats_.bmc_backward[k];
  BmcResult r = do_bmc(psi, k, true);
  validate(psi, k, true, r);
  if (log_) {
    log_({{"query", "bmc_backward"},
          {"k", bound_to_string(k)},
          {"input", to_sexpr(psi, ts_.vocab())},
          {"answer", r.reachable},
          {"trace", trace_to_json(r.trace)}});
  }
  return r;
}

BmcResult SatOracle::bmc_forward(const Formula & psi, Bound k)
{
  if (psi.has_primed()) throw Error("bmc_forward: query must be unprimed");
  ++stats_.bmc_forward[k];
  BmcResult r = do_bmc(psi, k, false);
  validate(psi, k, false, r);
  if (log_) {
    log_({{"query", "bmc_forward"},
          {"k", bound_to_string(k)},
          {"input", to_sexpr(psi, ts_.vocab())},
          {"answer", r.reachable},
          {"trace", trace_to_json(r.trace)}});
  }
  return r;
}

std::optional<std::pair<State, State>> SatOracle::find_transition(const Formula & pre,
                                                                  const Formula & post)
{
  ++stats_.sat_calls;
  auto r = do_find_transition(pre, post);
  if (r && !(pre.eval(r->first) && ts_.trans().eval(r->first, r->second) && !post.eval(r->second))) {
    throw InternalError("find_transition returned an invalid witness");
  }
  return r;
}

std::optional<State> SatOracle::find_model(const Formula & f)
{
  ++stats_.sat_calls;
  auto s = do_find_model(f);
  if (s && !f.eval(*s)) throw InternalError("find_model returned a non-model");
  return s;
}

void SatOracle::check_assumptions()
{
  if (!find_model(ts_.init())) throw AssumptionError("Init ≢ false violated: Init is unsatisfiable");
  if (!find_model(ts_.bad())) throw AssumptionError("Bad ≢ false violated: Bad is unsatisfiable");
  if (!find_model(f_not(ts_.bad()))) throw AssumptionError("Bad ≢ true violated: Bad is valid");
  if (auto s = find_model(f_and(ts_.init(), ts_.bad()))) {
    throw AssumptionError("Init ⇒ ¬Bad violated: state " + s->to_string() +
                          " is both initial and bad");
  }
}

void SatOracle::validate(const Formula & phi, const InductivenessResult & r) const
{
  bool ok = true;
  switch (r.kind) {
    case InductivenessResult::Kind::Inductive: break;
    case InductivenessResult::Kind::InitViolation:
      ok = ts_.init().eval(r.state) && !phi.eval(r.state);
      break;
    case InductivenessResult::Kind::BadIntersection:
      ok = phi.eval(r.state) && ts_.bad().eval(r.state);
      break;
    case InductivenessResult::Kind::Cti:
      ok = phi.eval(r.state) && ts_.trans().eval(r.state, r.post) && !phi.eval(r.post);
      break;
  }
  if (!ok) throw InternalError(backend() + " backend returned an invalid " + to_string(r.kind));
}

void SatOracle::validate(const Formula & psi, Bound k, bool backward, const BmcResult & r) const
{
  if (!r.reachable) return;
  const Trace & t = r.trace;
  bool ok = !t.empty() && is_execution(ts_, t);
  if (ok && k != unbounded) ok = t.size() <= std::size_t{k} + 1;
  if (ok) {
    ok = backward ? psi.eval(t.front()) && ts_.bad().eval(t.back())
                  : ts_.init().eval(t.front()) && psi.eval(t.back());
  }
  if (!ok) throw InternalError(backend() + " backend returned an invalid BMC trace");
}

// ---------------------------------------------------------------------------
// EnumOracle

EnumOracle::EnumOracle(const TransitionSystem & ts, EnumerationLimits limits)
    : SatOracle(ts), es_(std::make_shared<ExplicitSystem>(ts, limits)), limits_(limits)
{
}

EnumOracle::EnumOracle(ExplicitSystemPtr es) : SatOracle(es->system()), es_(std::move(es)) {}

std::unique_ptr<SatOracle> EnumOracle::clone_for(const TransitionSystem & ts) const
{
  if (ts == ts_) return std::make_unique<EnumOracle>(es_);
  return std::make_unique<EnumOracle>(ts, limits_);
}

InductivenessResult EnumOracle::do_check_inductive(const Formula & phi)
{
  const unsigned n = ts_.n();
  const StateSet s = StateSet::of(phi, n);
  InductivenessResult r;
  if (auto x = (es_->init() - s).first()) {
    r.kind = InductivenessResult::Kind::InitViolation;
    r.state = *x;
    return r;
  }
  const StateSet outside = s.complement();
  for (const State & x : s.states()) {
    if (auto y = es_->successor_in(x.bits(), outside)) {
      r.kind = InductivenessResult::Kind::Cti;
      r.state = x;
      r.post = *y;
      return r;
    }
  }
  if (auto x = (s & es_->bad()).first()) {
    r.kind = InductivenessResult::Kind::BadIntersection;
    r.state = *x;
  }
  return r;
}

BmcResult EnumOracle::do_bmc(const Formula & psi, Bound k, bool backward)
{
  const StateSet s = StateSet::of(psi, ts_.n());
  const StateSet hits = s & (backward ? es_->backward_reach(k) : es_->forward_reach(k));
  BmcResult r;
  if (auto x = hits.first()) {
    r.reachable = true;
    r.trace = backward ? es_->trace_to_bad(*x) : es_->trace_from_init(*x);
  }
  return r;
}

std::optional<std::pair<State, State>> EnumOracle::do_find_transition(const Formula & pre,
                                                                      const Formula & post)
{
  const StateSet from = StateSet::of(pre, ts_.n());
  const StateSet to = StateSet::of(post, ts_.n()).complement();
  for (const State & x : from.states()) {
    if (auto y = es_->successor_in(x.bits(), to)) return std::make_pair(x, *y);
  }
  return std::nullopt;
}

std::optional<State> EnumOracle::do_find_model(const Formula & f)
{
  return StateSet::of(f, ts_.n()).first();
}

// ---------------------------------------------------------------------------
// Tseitin encoding

namespace {

struct PairHash
{
  std::size_t operator()(const std::pair<const void *, unsigned> & p) const
  {
    return std::hash<const void *>()(p.first) ^ (std::hash<unsigned>()(p.second) * 0x9e3779b97f4a7c15ULL);
  }
};

// Frames of state variables plus memoized gate literals.
class Encoder
{
 public:
  Encoder(unsigned n, unsigned frames) : n_(n)
  {
    for (unsigned f = 0; f < frames; ++f) {
      for (unsigned i = 0; i < n; ++i) frame_vars_.push_back(++enc.num_vars);
    }
  }

  int state_var(unsigned frame, unsigned i) const { return frame_vars_.at(frame * n_ + i); }

  // Literal equivalent to f, unprimed variables read from `frame` and
  // primed ones from frame + 1.
  int lit(const Formula & f, unsigned frame)
  {
    switch (f.op()) {
      case Op::Const: return f.value() ? true_lit() : -true_lit();
      case Op::Var: return state_var(f.primed() ? frame + 1 : frame, f.index());
      case Op::Not: return -lit(f.children()[0], frame);
      default: break;
    }
    const auto key = std::make_pair(f.id(), frame);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<int> kids;
    for (const auto & c : f.children()) kids.push_back(lit(c, frame));
    const int g = ++enc.num_vars;
    if (f.op() == Op::And) {
      std::vector<int> big{g};
      for (int c : kids) {
        enc.clauses.push_back({-g, c});
        big.push_back(-c);
      }
      enc.clauses.push_back(big);
    } else {
      std::vector<int> big{-g};
      for (int c : kids) {
        enc.clauses.push_back({g, -c});
        big.push_back(c);
      }
      enc.clauses.push_back(big);
    }
    memo_.emplace(key, g);
    keep_.push_back(f);  // the key is a node address
    return g;
  }

  void assert_formula(const Formula & f, unsigned frame)
  {
    switch (f.op()) {
      case Op::Const:
        if (!f.value()) enc.clauses.push_back({});
        return;
      case Op::And:
        for (const auto & c : f.children()) assert_formula(c, frame);
        return;
      case Op::Or: {
        std::vector<int> cl;
        for (const auto & c : f.children()) cl.push_back(lit(c, frame));
        enc.clauses.push_back(cl);
        return;
      }
      default: enc.clauses.push_back({lit(f, frame)}); return;
    }
  }

  void assert_clause(std::vector<int> cl) { enc.clauses.push_back(std::move(cl)); }

  State read_state(const std::vector<bool> & model, unsigned frame) const
  {
    Bits b = 0;
    for (unsigned i = 0; i < n_; ++i) {
      const int v = state_var(frame, i);
      if (static_cast<std::size_t>(v) < model.size() && model[v]) b |= Bits{1} << i;
    }
    return State(n_, b);
  }

  TseitinEncoding enc;

 private:
  int true_lit()
  {
    if (!true_var_) {
      true_var_ = ++enc.num_vars;
      enc.clauses.push_back({true_var_});
    }
    return true_var_;
  }

  unsigned n_;
  std::vector<int> frame_vars_;
  int true_var_ = 0;
  std::unordered_map<std::pair<const void *, unsigned>, int, PairHash> memo_;
  std::vector<Formula> keep_;
};

}  // namespace

TseitinEncoding tseitin(const Formula & f, unsigned n)
{
  if (f.has_primed()) throw Error("tseitin: formula must be unprimed");
  if (f.support() & ~low_mask(n)) throw Error("tseitin: formula mentions variables beyond n");
  Encoder e(n, 1);
  e.assert_formula(f, 0);
  for (unsigned i = 0; i < n; ++i) e.enc.var_map.push_back(e.state_var(0, i));
  return e.enc;
}

std::string to_dimacs(const TseitinEncoding & enc)
{
  std::ostringstream out;
  out << "p cnf " << enc.num_vars << ' ' << enc.clauses.size() << '\n';
  for (const auto & c : enc.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string resolve_solver_command(const std::string & explicit_command)
{
  if (const char * env = std::getenv("FENCEINFER_SOLVER"); env && *env) return env;
  if (!explicit_command.empty()) return explicit_command;
#ifdef FENCEINFER_DEFAULT_SOLVER
  return FENCEINFER_DEFAULT_SOLVER;
#else
  return "fenceinfer-sat";
#endif
}

std::optional<std::vector<bool>> run_dimacs_solver(const std::string & command,
                                                   const TseitinEncoding & enc)
{
  const char * tmpdir = std::getenv("TMPDIR");
  std::string path = std::string(tmpdir && *tmpdir ? tmpdir : "/tmp") + "/fenceinfer-XXXXXX";
  std::vector<char> buf(path.begin(), path.end());
  buf.push_back('\0');
  const int fd = mkstemp(buf.data());
  if (fd < 0) throw BackendError("cannot create temporary DIMACS file");
  path = buf.data();
  {
    const std::string text = to_dimacs(enc);
    std::size_t off = 0;
    while (off < text.size()) {
      const ssize_t w = write(fd, text.data() + off, text.size() - off);
      if (w <= 0) {
        close(fd);
        unlink(path.c_str());
        throw BackendError("cannot write temporary DIMACS file");
      }
      off += static_cast<std::size_t>(w);
    }
    close(fd);
  }

  const std::string cmd = command + " '" + path + "' 2>/dev/null";
  FILE * pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    unlink(path.c_str());
    throw BackendError("cannot start solver '" + command + "'");
  }
  std::string output;
  char chunk[4096];
  while (std::size_t got = fread(chunk, 1, sizeof chunk, pipe)) output.append(chunk, got);
  pclose(pipe);
  unlink(path.c_str());

  std::istringstream in(output);
  std::string line;
  int status = 0;  // 1 sat, -1 unsat
  std::vector<bool> model(static_cast<std::size_t>(enc.num_vars) + 1, false);
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        status = -1;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        status = 1;
      }
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long l = 0;
      while (vs >> l) {
        if (l == 0) break;
        const long v = l < 0 ? -l : l;
        if (v <= enc.num_vars) model[static_cast<std::size_t>(v)] = l > 0;
      }
    }
  }
  if (status == 0) {
    throw BackendError("solver '" + command + "' gave no verdict" +
                       (output.empty() ? std::string() : ": " + output.substr(0, 200)));
  }
  if (status < 0) return std::nullopt;
  for (const auto & c : enc.clauses) {
    bool sat = false;
    for (int l : c) sat = sat || (model[static_cast<std::size_t>(l < 0 ? -l : l)] == (l > 0));
    if (!sat) throw BackendError("solver '" + command + "' returned a non-model");
  }
  return model;
}

// ---------------------------------------------------------------------------
// DimacsOracle

DimacsOracle::DimacsOracle(const TransitionSystem & ts, std::string command)
    : SatOracle(ts), command_(resolve_solver_command(command))
{
}

std::unique_ptr<SatOracle> DimacsOracle::clone_for(const TransitionSystem & ts) const
{
  return std::make_unique<DimacsOracle>(ts, command_);
}

std::optional<std::vector<bool>> DimacsOracle::solve(const TseitinEncoding & enc)
{
  return run_dimacs_solver(command_, enc);
}

InductivenessResult DimacsOracle::do_check_inductive(const Formula & phi)
{
  const unsigned n = ts_.n();
  InductivenessResult r;
  {
    Encoder u(n, 1);
    u.assert_formula(ts_.init(), 0);
    u.assert_formula(f_not(phi), 0);
    ++stats_.sat_calls;
    if (auto m = solve(u.enc)) {
      r.kind = InductivenessResult::Kind::InitViolation;
      r.state = u.read_state(*m, 0);
      return r;
    }
  }
  {
    Encoder u(n, 2);
    u.assert_formula(phi, 0);
    u.assert_formula(ts_.trans(), 0);
    u.assert_formula(f_not(phi), 1);
    ++stats_.sat_calls;
    if (auto m = solve(u.enc)) {
      r.kind = InductivenessResult::Kind::Cti;
      r.state = u.read_state(*m, 0);
      r.post = u.read_state(*m, 1);
      return r;
    }
  }
  {
    Encoder u(n, 1);
    u.assert_formula(phi, 0);
    u.assert_formula(ts_.bad(), 0);
    ++stats_.sat_calls;
    if (auto m = solve(u.enc)) {
      r.kind = InductivenessResult::Kind::BadIntersection;
      r.state = u.read_state(*m, 0);
    }
  }
  return r;
}

BmcResult DimacsOracle::do_bmc(const Formula & psi, Bound k, bool backward)
{
  if (k == unbounded) throw UsageError("the dimacs backend needs a finite BMC bound");
  const unsigned n = ts_.n();
  // psi(S0) & trans(S0,S1) & ... & (Bad(S0) | ... | Bad(Sk)), or the
  // forward mirror Init(S0) & ... & (psi(S0) | ... | psi(Sk)).
  const Formula & source = backward ? psi : ts_.init();
  const Formula & target = backward ? ts_.bad() : psi;
  // Step i is only required while the target has not been hit yet
  // (done_i), so paths into deadlocks still count.
  Encoder u(n, k + 1);
  u.assert_formula(source, 0);
  int done = u.lit(target, 0);
  for (unsigned i = 0; i < k; ++i) {
    u.assert_clause({done, u.lit(ts_.trans(), i)});
    const int next = ++u.enc.num_vars;
    const int hit = u.lit(target, i + 1);
    u.assert_clause({-next, done, hit});
    u.assert_clause({next, -done});
    u.assert_clause({next, -hit});
    done = next;
  }
  u.assert_clause({done});
  ++stats_.sat_calls;
  BmcResult r;
  auto m = solve(u.enc);
  if (!m) return r;
  r.reachable = true;
  for (unsigned i = 0; i <= k; ++i) {
    r.trace.push_back(u.read_state(*m, i));
    if (target.eval(r.trace.back())) break;
  }
  return r;
}

std::optional<std::pair<State, State>> DimacsOracle::do_find_transition(const Formula & pre,
                                                                        const Formula & post)
{
  Encoder u(ts_.n(), 2);
  u.assert_formula(pre, 0);
  u.assert_formula(ts_.trans(), 0);
  u.assert_formula(f_not(post), 1);
  auto m = solve(u.enc);
  if (!m) return std::nullopt;
  return std::make_pair(u.read_state(*m, 0), u.read_state(*m, 1));
}

std::optional<State> DimacsOracle::do_find_model(const Formula & f)
{
  Encoder u(ts_.n(), 1);
  u.assert_formula(f, 0);
  auto m = solve(u.enc);
  if (!m) return std::nullopt;
  return u.read_state(*m, 0);
}

Backend parse_backend(const std::string & text)
{
  if (text == "enum") return Backend::Enum;
  if (text == "dimacs") return Backend::Dimacs;
  throw UsageError("backend must be 'enum' or 'dimacs'");
}

OraclePtr make_oracle(const TransitionSystem & ts, Backend b, const std::string & solver_cmd)
{
  if (b == Backend::Enum) return std::make_unique<EnumOracle>(ts);
  return std::make_unique<DimacsOracle>(ts, solver_cmd);
}

}  // namespace fenceinfer
