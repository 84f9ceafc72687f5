// fenceinfer: invariant inference, fence checks, explicit-state queries,
// benchmark generation and system transformations over TSF files.
//
// JSON goes to stdout, a one-line summary to stderr.
// Exit codes: 0 invariant / property holds, 10 unsafe, 20 failure or
// budget, 2 usage or input errors.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fenceinfer/decision_tree.h"
#include "fenceinfer/explicit.h"
#include "fenceinfer/generators.h"
#include "fenceinfer/itp.h"
#include "fenceinfer/lambda.h"
#include "fenceinfer/learning.h"
#include "fenceinfer/monotone.h"

using namespace fenceinfer;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_unsafe = 10;
constexpr int exit_failure = 20;
constexpr int exit_usage = 2;

std::vector<unsigned> parse_list(const std::string & text)
{
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("expected a comma-separated list of integers, got '" + text + "'");
    }
    out.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return out;
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A named def of the system, or a formula read from a file.
Formula resolve_formula(const TransitionSystem & ts, const std::string & ref)
{
  if (auto f = ts.def(ref)) return *f;
  std::ifstream probe(ref);
  if (!probe) throw UsageError("'" + ref + "' is neither a def of the system nor a readable file");
  return parse_formula(read_file(ref), ts.vocab(), false);
}

// A def name, a file, or formula text.
Formula resolve_formula_text(const TransitionSystem & ts, const std::string & ref)
{
  if (auto f = ts.def(ref)) return *f;
  std::ifstream probe(ref);
  if (probe) return parse_formula(read_file(ref), ts.vocab(), false);
  return parse_formula(ref, ts.vocab(), false);
}

// Unreadable or malformed input is a usage error.
TransitionSystem load_input(const std::string & path)
{
  try {
    return load_tsf(path);
  } catch (const ParseError &) {
    throw;
  } catch (const AssumptionError &) {
    throw;
  } catch (const Error & e) {
    throw UsageError(e.what());
  }
}

nlohmann::json states_json(const StateSet & s)
{
  nlohmann::json list = nlohmann::json::array();
  for (const State & x : s.states()) list.push_back(x.to_string());
  return {{"count", s.count()}, {"states", list}};
}

void emit_tsf(const TransitionSystem & ts, const std::string & out)
{
  const std::string text = serialize_tsf(ts);
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write '" + out + "'");
  f << text;
}

// ---------------------------------------------------------------------------
// infer

struct InferOptions
{
  std::string file;
  std::string alg = "itp";
  Bound k = 1;
  Bound k1 = 1;
  Bound k2 = 1;
  Bound max_k = 16;
  std::string schedule = "increment";
  bool parallel = false;
  std::string basis = "monotone";
  std::string backend = "enum";
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 0;
  std::string solver_cmd;
  std::string events;
  std::string teacher;
};

int cmd_infer(const InferOptions & opt)
{
  const TransitionSystem ts = load_input(opt.file);
  OraclePtr oracle = make_oracle(ts, parse_backend(opt.backend), opt.solver_cmd);

  std::ofstream events_file;
  EventSink sink;
  if (!opt.events.empty()) {
    events_file.open(opt.events);
    if (!events_file) throw UsageError("cannot write '" + opt.events + "'");
    sink = [&](const nlohmann::json & j) { events_file << j.dump() << '\n'; };
  }

  EngineConfig cfg;
  cfg.policy.initial_k = opt.k;
  cfg.policy.schedule = parse_schedule(opt.schedule);
  cfg.policy.max_k = cfg.policy.schedule == Schedule::Fixed ? opt.k : std::max(opt.max_k, opt.k);
  cfg.policy.mode = opt.parallel ? BoundsMode::ParallelBounds : BoundsMode::Sequential;
  cfg.seed = opt.seed;
  cfg.iteration_budget = opt.budget;
  cfg.events = sink;

  const auto start = std::chrono::steady_clock::now();
  InferenceOutcome out;
  const std::string learner_prefix = "learner:";
  if (opt.alg == "itp") {
    out = itp_infer_termmin(*oracle, cfg);
  } else if (opt.alg == "itp2") {
    out = itp_infer_two_phase(*oracle, cfg);
  } else if (opt.alg == "dual-itp") {
    out = dual_itp_infer_clausemin(*oracle, cfg);
  } else if (opt.alg == "lambda" || opt.alg == "dual-lambda") {
    const Basis basis = parse_basis_spec(opt.basis, ts.n());
    out = opt.alg == "lambda" ? lambda_infer(*oracle, basis, cfg)
                              : dual_lambda_infer(*oracle, basis, cfg);
  } else if (opt.alg.rfind(learner_prefix, 0) == 0) {
    const LearnerKind lk = parse_learner(opt.alg.substr(learner_prefix.size()));
    TeacherKind tk = lk == LearnerKind::Cdnf ? TeacherKind::TwoSided : TeacherKind::OneSided;
    if (opt.teacher == "one-sided") {
      tk = TeacherKind::OneSided;
    } else if (opt.teacher == "two-sided") {
      tk = TeacherKind::TwoSided;
    } else if (!opt.teacher.empty()) {
      throw UsageError("teacher must be one-sided or two-sided");
    }
    std::optional<Basis> basis;
    if (lk == LearnerKind::Lambda) basis = parse_basis_spec(opt.basis, ts.n());
    LearnerConfig lc;
    lc.max_equivalence = opt.budget;
    lc.events = sink;
    out = infer_via_learner(*oracle, lk, tk, {opt.k, opt.k1, opt.k2}, basis ? &*basis : nullptr, lc);
  } else {
    throw UsageError("unknown algorithm '" + opt.alg + "'");
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json report = to_json(out, ts.vocab());
  report["stats"]["wall_time_ms"] = ms;
  report["config"] = {{"file", opt.file},
                      {"alg", opt.alg},
                      {"k", bound_to_string(opt.k)},
                      {"k1", bound_to_string(opt.k1)},
                      {"k2", bound_to_string(opt.k2)},
                      {"max_k", bound_to_string(cfg.policy.max_k)},
                      {"schedule", opt.schedule},
                      {"parallel_bounds", opt.parallel},
                      {"basis", opt.basis},
                      {"backend", opt.backend},
                      {"budget", opt.budget}};
  if (opt.seed) report["config"]["seed"] = *opt.seed;
  if (!opt.events.empty()) report["events"] = opt.events;
  std::cout << report.dump(2) << '\n';

  std::cerr << opt.alg << ": " << to_string(out.kind) << " (k=" << bound_to_string(out.k)
            << ", inductiveness checks " << out.stats.inductiveness_checks << ", bmc checks "
            << out.stats.bmc_checks() << ")\n";
  if (out.kind == Outcome::Invariant) std::cerr << "  " << to_sexpr(out.invariant, ts.vocab()) << '\n';
  switch (out.kind) {
    case Outcome::Invariant: return exit_ok;
    case Outcome::Unsafe: return exit_unsafe;
    default: return exit_failure;
  }
}

// ---------------------------------------------------------------------------
// check-fence, oracle

int cmd_check_fence(const std::string & file, const std::string & inv, const std::string & k,
                    const std::string & direction)
{
  const TransitionSystem ts = load_input(file);
  const Formula f = resolve_formula(ts, inv);
  const FenceReport r = check_fence(ts, f, parse_bound(k), parse_direction(direction));
  std::cout << to_json(r).dump(2) << '\n';
  std::cerr << to_string(r.direction) << " fence at k=" << bound_to_string(r.k) << ": "
            << (r.holds ? "holds" : "fails") << " (" << r.violations.size() << " violations of "
            << r.boundary_size << " boundary states)\n";
  return r.holds ? exit_ok : exit_failure;
}

int cmd_oracle(const std::string & file, const std::string & query, const std::string & k,
               const std::string & direction, const std::string & formula, const std::string & side)
{
  const TransitionSystem ts = load_input(file);
  nlohmann::json j{{"query", query}};
  if (query == "reach") {
    const Bound b = parse_bound(k);
    const Direction d = parse_direction(direction);
    const StateSet s = d == Direction::Forwards ? forward_reach(ts, b) : backward_reach(ts, b);
    j["direction"] = to_string(d);
    j["k"] = bound_to_string(b);
    j["reach"] = states_json(s);
  } else if (query == "gfp" || query == "codiameter") {
    const ExplicitSystem es(ts);
    try {
      if (query == "gfp") {
        j["gfp"] = states_json(gfp(es));
      } else {
        j["codiameter"] = co_diameter(es);
      }
    } catch (const UnsafeSystem & e) {
      j["unsafe"] = true;
      j["trace"] = trace_to_json(e.trace());
      std::cout << j.dump(2) << '\n';
      std::cerr << query << ": system is unsafe\n";
      return exit_unsafe;
    }
  } else if (query == "boundary") {
    if (formula.empty()) throw UsageError("boundary needs --formula");
    const Formula f = resolve_formula_text(ts, formula);
    Side s;
    if (side == "outer") {
      s = Side::Outer;
    } else if (side == "inner") {
      s = Side::Inner;
    } else {
      throw UsageError("side must be inner or outer");
    }
    j["side"] = side;
    j["boundary"] = states_json(boundary(StateSet::of(f, ts.n()), s));
  } else {
    throw UsageError("oracle query must be reach, gfp, codiameter or boundary");
  }
  std::cout << j.dump(2) << '\n';
  std::cerr << query << ": done\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions
{
  std::string kind;
  unsigned n = 8;
  std::string J = "1,2,3";
  unsigned bits = 3;
  bool freeze = false;
  unsigned terms = 2;
  unsigned literals = 3;
  unsigned r = 1;
  unsigned size = 4;
  std::uint64_t seed = 1;
  std::string out;
};

// Targets must be non-trivial; retry with fresh draws a bounded number of times.
template <class Draw>
Formula draw_target(unsigned n, std::mt19937_64 & rng, Draw draw)
{
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Formula f = draw(rng);
    const StateSet s = StateSet::of(f, n);
    if (!s.empty() && !s.is_full()) return f;
  }
  throw UsageError("could not draw a target that is neither empty nor valid with these parameters");
}

int cmd_gen(const GenOptions & opt)
{
  std::mt19937_64 rng(opt.seed);
  // Generator parameter errors are usage errors.
  auto checked = [](auto make) {
    try {
      return make();
    } catch (const UsageError &) {
      throw;
    } catch (const InternalError &) {
      throw;
    } catch (const Error & e) {
      throw UsageError(e.what());
    }
  };
  if (opt.kind == "parity") {
    emit_tsf(checked([&] { return gen_parity(opt.n, parse_list(opt.J)); }), opt.out);
  } else if (opt.kind == "even-increment") {
    emit_tsf(checked([&] { return gen_even_increment(opt.bits, opt.freeze); }), opt.out);
  } else if (opt.kind == "almost-monotone-target" || opt.kind == "unate-target" ||
             opt.kind == "dtree-target") {
    if (opt.n == 0 || opt.n > 20) throw UsageError("target generators need 1 <= n <= 20");
    bool two_sided = false;
    Formula target;
    if (opt.kind == "almost-monotone-target") {
      target = draw_target(opt.n, rng, [&](std::mt19937_64 & g) {
        return to_formula(random_almost_monotone_dnf(opt.n, opt.terms, opt.literals, opt.r, g));
      });
    } else if (opt.kind == "unate-target") {
      target = draw_target(opt.n, rng, [&](std::mt19937_64 & g) {
        return to_formula(random_unate_dnf(opt.n, opt.terms, opt.literals, g));
      });
    } else {
      if (opt.size < 2) throw UsageError("dtree-target needs --size >= 2");
      two_sided = true;
      target = draw_target(opt.n, rng, [&](std::mt19937_64 & g) {
        return to_formula(DecisionTree::random(opt.n, opt.size, g).to_dnf());
      });
    }
    const TransitionSystem ts = gen_target_system(target, opt.n, rng);
    // Confirm the construction before emitting it.
    const ExplicitSystem es(ts);
    const StateSet inv = StateSet::of(target, opt.n);
    bool ok = verify_invariant(es, inv) && check_fence(es, inv, 1, Direction::Backwards).holds;
    if (two_sided) ok = ok && check_fence(es, inv, 1, Direction::Forwards).holds;
    if (!ok) throw InternalError("generated system does not fence its target");
    emit_tsf(ts, opt.out);
  } else {
    throw UsageError("gen kind must be parity, even-increment, almost-monotone-target, "
                     "unate-target or dtree-target");
  }
  std::cerr << "gen " << opt.kind << ": written to " << (opt.out.empty() ? "stdout" : opt.out) << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions
{
  std::string file;
  std::string kind;
  std::string perm;
  std::string flip;
  std::string other;
  std::string psi;
  std::string name = "q";
  std::string update = "recompute";
  std::string var;
  std::string out;
};

int cmd_transform(const TransformOptions & opt)
{
  const TransitionSystem ts = load_input(opt.file);
  const unsigned n = ts.n();
  TransitionSystem result = ts;
  if (opt.kind == "isometry") {
    Isometry iso = Isometry::identity(n);
    if (!opt.perm.empty()) {
      iso.perm.clear();
      for (unsigned p : parse_list(opt.perm)) {
        if (p == 0) throw UsageError("permutation entries are 1-based");
        iso.perm.push_back(p - 1);
      }
      try {
        validate_permutation(iso.perm, n);
      } catch (const Error & e) {
        throw UsageError(e.what());
      }
    }
    if (!opt.flip.empty()) {
      if (opt.flip.size() != n || opt.flip.find_first_not_of("01") != std::string::npos) {
        throw UsageError("--flip must be a bitstring of length " + std::to_string(n));
      }
      iso.a = State::parse(opt.flip);
    }
    result = apply_isometry(ts, iso);
  } else if (opt.kind == "conjoin-bad" || opt.kind == "disjoin-init") {
    if (opt.other.empty()) throw UsageError(opt.kind + " needs --other <file>");
    const TransitionSystem other = load_input(opt.other);
    result = opt.kind == "conjoin-bad" ? conjoin_bad(ts, other) : disjoin_init(ts, other);
  } else if (opt.kind == "instrument") {
    if (opt.psi.empty()) throw UsageError("instrument needs --psi <formula|def|file>");
    DerivedUpdate u;
    if (opt.update == "recompute") {
      u = DerivedUpdate::Recompute;
    } else if (opt.update == "preserve") {
      u = DerivedUpdate::Preserve;
    } else {
      throw UsageError("update must be recompute or preserve");
    }
    result = instrument_derived(ts, resolve_formula_text(ts, opt.psi), opt.name, u);
  } else if (opt.kind == "monotonize") {
    auto p = ts.vocab().index_of(opt.var);
    if (!p) throw UsageError("monotonize needs --var <name of a state variable>");
    result = monotonize_instrument(ts, *p, opt.name);
  } else {
    throw UsageError("transform kind must be isometry, conjoin-bad, disjoin-init, instrument or "
                     "monotonize");
  }
  emit_tsf(result, opt.out);
  std::cerr << "transform " << opt.kind << ": " << result.n() << " variables\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Invariant inference under the fence condition"};
  app.require_subcommand(1);

  InferOptions io;
  std::string k_text = "1", k1_text = "1", k2_text = "1", max_k_text = "16";
  std::uint64_t seed_value = 0;
  auto * infer = app.add_subcommand("infer", "Infer an inductive invariant");
  infer->add_option("file", io.file, "TSF file")->required();
  infer->add_option("--alg", io.alg, "itp | itp2 | dual-itp | lambda | dual-lambda | learner:<name>");
  infer->add_option("--k", k_text, "Initial (or fixed) bound; one-sided teacher bound");
  infer->add_option("--k1", k1_text, "Two-sided teacher: forwards bound");
  infer->add_option("--k2", k2_text, "Two-sided teacher: backwards bound");
  infer->add_option("--max-k", max_k_text, "Largest bound of the restart schedule");
  infer->add_option("--schedule", io.schedule, "increment | double | fixed");
  infer->add_flag("--parallel-bounds", io.parallel, "Run every bound of the schedule at once");
  infer->add_option("--basis", io.basis, "monotone | almost-monotone:r=<r> | file:<path>");
  infer->add_option("--backend", io.backend, "enum | dimacs");
  auto * seed_opt = infer->add_option("--seed", seed_value, "Shuffle literal orders with this seed");
  infer->add_option("--budget", io.budget, "Iterations per bound (learners: equivalence queries)");
  infer->add_option("--solver-cmd", io.solver_cmd, "DIMACS solver command");
  infer->add_option("--events", io.events, "Write a JSON-lines event log here");
  infer->add_option("--teacher", io.teacher, "one-sided | two-sided (learners)");

  std::string cf_file, cf_inv = "inv", cf_k = "1", cf_dir = "backwards";
  auto * cf = app.add_subcommand("check-fence", "Check the fence condition by enumeration");
  cf->add_option("file", cf_file, "TSF file")->required();
  cf->add_option("--invariant", cf_inv, "Def name or formula file");
  cf->add_option("--k", cf_k, "Bound (integer or inf)");
  cf->add_option("--direction", cf_dir, "backwards | forwards");

  std::string or_file, or_query, or_k = "inf", or_dir = "backwards", or_formula, or_side = "outer";
  auto * orc = app.add_subcommand("oracle", "Explicit-state queries");
  orc->add_option("file", or_file, "TSF file")->required();
  orc->add_option("query", or_query, "reach | gfp | codiameter | boundary")->required();
  orc->add_option("--k", or_k, "Bound for reach (integer or inf)");
  orc->add_option("--direction", or_dir, "backwards | forwards (reach)");
  orc->add_option("--formula", or_formula, "Def name, formula file or formula text (boundary)");
  orc->add_option("--side", or_side, "inner | outer (boundary)");

  GenOptions go;
  auto * gen = app.add_subcommand("gen", "Generate a benchmark system in TSF");
  gen->add_option("kind", go.kind,
                  "parity | even-increment | almost-monotone-target | unate-target | dtree-target")
      ->required();
  gen->add_option("--n", go.n, "Number of variables");
  gen->add_option("--J", go.J, "Parity: 1-based indices, comma separated (must contain 1)");
  gen->add_option("--bits", go.bits, "Even-increment: counter width");
  gen->add_flag("--freeze", go.freeze, "Even-increment: add the frozen flag");
  gen->add_option("--terms", go.terms, "Targets: number of terms");
  gen->add_option("--literals", go.literals, "Targets: literals per term at most");
  gen->add_option("--r", go.r, "Almost-monotone target: non-monotone terms at most");
  gen->add_option("--size", go.size, "Decision tree target: number of leaves");
  gen->add_option("--seed", go.seed, "Random seed");
  gen->add_option("-o,--output", go.out, "Output file (default stdout)");

  TransformOptions to;
  auto * tr = app.add_subcommand("transform", "Transform a system");
  tr->add_option("file", to.file, "TSF file")->required();
  tr->add_option("kind", to.kind, "isometry | conjoin-bad | disjoin-init | instrument | monotonize")
      ->required();
  tr->add_option("--perm", to.perm, "Isometry: 1-based target positions, comma separated");
  tr->add_option("--flip", to.flip, "Isometry: bitstring to xor with");
  tr->add_option("--other", to.other, "Second TSF file (conjoin-bad, disjoin-init)");
  tr->add_option("--psi", to.psi, "Instrument: formula text, def name or file");
  tr->add_option("--name", to.name, "Name of the new variable");
  tr->add_option("--update", to.update, "Instrument: recompute | preserve");
  tr->add_option("--var", to.var, "Monotonize: the variable p");
  tr->add_option("-o,--output", to.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*infer) {
      io.k = parse_bound(k_text);
      io.k1 = parse_bound(k1_text);
      io.k2 = parse_bound(k2_text);
      io.max_k = parse_bound(max_k_text);
      if (*seed_opt) io.seed = seed_value;
      return cmd_infer(io);
    }
    if (*cf) return cmd_check_fence(cf_file, cf_inv, cf_k, cf_dir);
    if (*orc) return cmd_oracle(or_file, or_query, or_k, or_dir, or_formula, or_side);
    if (*gen) return cmd_gen(go);
    if (*tr) return cmd_transform(to);
  } catch (const UsageError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParseError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const AssumptionError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const CapExceeded & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
