// Acceptance checks, one pass/fail line per criterion.
//
//   acceptance --criterion N   (1..9; all when omitted)
//
// Every quantity is compared against brute-force enumeration computed
// here, not against the library's own explicit-state module.

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fenceinfer/decision_tree.h"
#include "fenceinfer/explicit.h"
#include "fenceinfer/generators.h"
#include "fenceinfer/itp.h"
#include "fenceinfer/lambda.h"
#include "fenceinfer/learning.h"
#include "fenceinfer/monotone.h"
#include "test_support.h"

using namespace fenceinfer;
using namespace fenceinfer::testing;

namespace {

// First failure wins; later ones are counted.
class Check
{
 public:
  void expect(bool cond, const std::string & what)
  {
    ++checks_;
    if (cond) return;
    if (failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const
  {
    std::ostringstream os;
    if (ok()) {
      os << checks_ << " checks";
    } else {
      os << failures_ << " of " << checks_ << " checks failed; first: " << first_;
    }
    return os.str();
  }
  void note(const std::string & s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  const std::string & notes() const { return notes_; }

 private:
  std::uint64_t checks_ = 0;
  std::uint64_t failures_ = 0;
  std::string first_;
  std::string notes_;
};

std::string str(const std::string & label, std::uint64_t v) { return label + "=" + std::to_string(v); }

Formula conj_of(const std::vector<unsigned> & J)
{
  std::vector<Formula> fs;
  for (unsigned j : J) fs.push_back(to_formula(Literal{j - 1, true}));
  return f_and(fs);
}

using Pred = std::function<bool(const State &)>;

bool same_set(unsigned n, const Pred & f, const Pred & g)
{
  for (const State & s : all_states(n)) {
    if (f(s) != g(s)) return false;
  }
  return true;
}

bool implies_brute(unsigned n, const Pred & f, const Pred & g)
{
  for (const State & s : all_states(n)) {
    if (f(s) && !g(s)) return false;
  }
  return true;
}

Pred pred(const Formula & f)
{
  return [f](const State & s) { return f.eval(s); };
}

// Brute-force fence check from the definition: every outer (backwards)
// or inner (forwards) boundary state is within k steps of Bad / Init.
bool fence_brute(const BruteGraph & g, const Pred & inv, int k, Direction d)
{
  const unsigned n = g.n;
  for (const State & s : all_states(n)) {
    bool on_boundary = false;
    for (unsigned i = 0; i < n; ++i) {
      const bool in = inv(s), nb = inv(s.flipped(i));
      if (d == Direction::Backwards ? (!in && nb) : (in && !nb)) on_boundary = true;
    }
    if (!on_boundary) continue;
    const bool reached = d == Direction::Backwards ? g.backward_within(s.bits(), k)
                                                   : g.forward_within(s.bits(), k);
    if (!reached) return false;
  }
  return true;
}

constexpr int inf_steps = 1 << 20;

bool trace_ok(const BruteGraph & g, const Trace & t)
{
  if (t.empty() || !g.init[t.front().bits()] || !g.bad[t.back().bits()]) return false;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!g.edge[t[i].bits()][t[i + 1].bits()]) return false;
  }
  return true;
}

// Sound: a verified invariant, a valid counterexample, or an honest give-up.
bool outcome_sound(const BruteGraph & g, const InferenceOutcome & o)
{
  switch (o.kind) {
    case Outcome::Invariant: return g.is_inductive(pred(o.invariant));
    case Outcome::Unsafe: return trace_ok(g, o.trace);
    case Outcome::Failure:
    case Outcome::BudgetExceeded: return true;
  }
  return false;
}

bool prime_implicant_brute(unsigned n, const Term & t, const Pred & f)
{
  if (!implies_brute(n, pred(to_formula(t)), f)) return false;
  for (const Literal & l : t.literals()) {
    if (implies_brute(n, pred(to_formula(t.without(l))), f)) return false;
  }
  return true;
}

// x in M_a(S) iff some v <=_a x is in S.
Pred monotonization_brute(unsigned n, const Pred & f, const State & a)
{
  std::vector<bool> in(std::size_t{1} << n, false);
  for (const State & v : all_states(n)) {
    if (!f(v)) continue;
    for (const State & x : all_states(n)) {
      if (leq_translation(v, x, Translation{a})) in[x.bits()] = true;
    }
  }
  return [in](const State & x) { return in[x.bits()]; };
}

bool a_monotone_brute(unsigned n, const Pred & f, const State & a)
{
  for (const State & v : all_states(n)) {
    if (!f(v)) continue;
    for (const State & x : all_states(n)) {
      if (leq_translation(v, x, Translation{a}) && !f(x)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

// 1. Parity reproduction.
Check criterion1()
{
  Check c;
  const unsigned n = 8;
  const std::vector<unsigned> J{1, 2, 3, 5};
  const TransitionSystem ts = gen_parity(n, J);
  const BruteGraph g(ts);
  const Formula inv = conj_of(J);
  c.expect(fence_brute(g, pred(inv), 2, Direction::Backwards), "backwards 2-fence (brute)");
  c.expect(fence_brute(g, pred(inv), 1, Direction::Forwards), "forwards 1-fence (brute)");
  c.expect(check_fence(ts, inv, 2, Direction::Backwards).holds, "check_fence backwards k=2");
  c.expect(check_fence(ts, inv, 1, Direction::Forwards).holds, "check_fence forwards k=1");
  c.expect(!check_fence(ts, inv, 1, Direction::Backwards).holds, "not backwards 1-fenced");
  std::uint64_t worst_ind = 0, worst_bmc = 0;
  for (Backend b : {Backend::Enum, Backend::Dimacs}) {
    for (int order = 0; order < 10; ++order) {
      auto o = make_oracle(ts, b);
      EngineConfig cfg;
      cfg.policy = RestartPolicy::fixed(2);
      cfg.seed = 1000 + static_cast<std::uint64_t>(order);
      const InferenceOutcome out = itp_infer_termmin(*o, cfg);
      const std::string tag = std::string(b == Backend::Enum ? "enum" : "dimacs") + " order " +
                              std::to_string(order);
      c.expect(out.kind == Outcome::Invariant, tag + ": invariant");
      if (out.kind != Outcome::Invariant) continue;
      c.expect(same_set(n, pred(out.invariant), pred(inv)), tag + ": equals AND_J x_i");
      const auto it = out.stats.bmc_backward.find(2);
      const std::uint64_t bmc2 = it == out.stats.bmc_backward.end() ? 0 : it->second;
      c.expect(out.stats.inductiveness_checks <= 2, tag + ": <= 2 inductiveness checks");
      c.expect(bmc2 <= n + 1, tag + ": <= n+1 backward 2-BMC checks");
      c.expect(out.stats.bmc_checks() == bmc2, tag + ": only 2-BMC checks");
      worst_ind = std::max(worst_ind, out.stats.inductiveness_checks);
      worst_bmc = std::max(worst_bmc, bmc2);
    }
  }
  c.note(str("max inductiveness", worst_ind));
  c.note(str("max bmc", worst_bmc));
  return c;
}

// 2. Candidates stay below I; generalized terms are prime implicants.
Check criterion2()
{
  Check c;
  auto rng = make_rng(2002);
  int systems = 0, monotone = 0;
  std::uint64_t terms_checked = 0;
  for (int attempt = 0; systems < 50 && attempt < 1000; ++attempt) {
    const unsigned n = 4 + attempt % 5;
    const bool is_monotone = attempt % 2 == 0;
    const unsigned m = 1 + attempt % 3;
    const DnfFormula target =
        is_monotone ? random_monotone_dnf(n, m, 3, rng) : random_unate_dnf(n, m, 3, rng);
    const Formula tf = to_formula(target);
    const Pred ip = pred(tf);
    std::size_t models = 0;
    for (const State & s : all_states(n)) models += ip(s);
    if (models == 0 || models == (std::size_t{1} << n)) continue;
    const TransitionSystem ts = gen_target_system(tf, n, rng);
    const BruteGraph g(ts);
    // Validated before use.
    if (!fence_brute(g, ip, 1, Direction::Backwards) || !g.is_inductive(ip)) {
      c.expect(false, "generated target is not a fenced invariant");
      continue;
    }
    ++systems;
    monotone += is_monotone;
    std::set<Bits> target_terms;
    for (const Term & t : target.terms) target_terms.insert(t.positive_mask());

    std::vector<Term> added;
    bool below = true;
    EngineConfig cfg;
    cfg.policy = RestartPolicy::fixed(1);
    cfg.events = [&](const nlohmann::json & e) {
      if (e.value("event", "") != "term") return;
      added.emplace_back(e["pos"].get<Bits>(), e["neg"].get<Bits>());
      // phi = Init | added terms; Init is inside I by construction.
      const Formula phi = f_or(ts.init(), to_formula(DnfFormula{added}));
      below = below && implies_brute(n, pred(phi), ip);
    };
    auto o = make_oracle(ts, Backend::Enum);
    const InferenceOutcome out = itp_infer_termmin(*o, cfg);
    const std::string tag = "system " + std::to_string(systems);
    c.expect(out.kind == Outcome::Invariant, tag + ": invariant");
    c.expect(out.restarts == 0, tag + ": zero restarts");
    c.expect(below, tag + ": every candidate implies I");
    c.expect(g.is_inductive(pred(out.invariant)), tag + ": result inductive");
    for (const Term & t : added) {
      ++terms_checked;
      c.expect(prime_implicant_brute(n, t, ip), tag + ": term is a prime implicant of I");
      if (is_monotone) {
        c.expect(t.negative_mask() == 0 && target_terms.count(t.positive_mask()),
                 tag + ": term is a term of monotone I");
      }
    }
  }
  c.expect(systems == 50, "50 systems generated");
  c.note(str("systems", systems));
  c.note(str("monotone", monotone));
  c.note(str("terms", terms_checked));
  return c;
}

// 3. gfp is inductive and co-diameter fenced; parity co-diameters.
Check criterion3()
{
  Check c;
  auto rng = make_rng(3003);
  int systems = 0;
  for (int attempt = 0; systems < 50 && attempt < 2000; ++attempt) {
    RandomSystemOptions opt;
    opt.n = 2 + attempt % 5;
    opt.actions = 2 + attempt % 3;
    opt.cube_init = attempt % 3 != 0;
    opt.cube_bad = attempt % 2 == 0;
    const TransitionSystem ts = random_system(opt, rng);
    const BruteGraph g(ts);
    const auto bd = g.backward_dist();
    bool safe = true;
    for (Bits s = 0; s < bd.size(); ++s) safe = safe && !(g.init[s] && bd[s] >= 0);
    if (!safe) continue;
    ++systems;
    int codiam = 0;
    for (int d : bd) codiam = std::max(codiam, d);
    const Pred gf = [&](const State & s) { return bd[s.bits()] < 0; };
    c.expect(g.is_inductive(gf), "gfp inductive");
    c.expect(fence_brute(g, gf, codiam, Direction::Backwards), "gfp co-diameter fenced");
    const ExplicitSystem es(ts);
    c.expect(co_diameter(es) == static_cast<unsigned>(codiam), "co_diameter matches BFS");
    const StateSet lib = gfp(es);
    c.expect(same_set(ts.n(), gf, [&](const State & s) { return lib.contains(s); }), "gfp matches BFS");
  }
  c.expect(systems == 50, "50 safe systems");
  for (const std::vector<unsigned> & J :
       std::vector<std::vector<unsigned>>{{1, 2}, {1, 2, 3, 4}, {1, 2, 3, 4, 5, 6}}) {
    const TransitionSystem ts = gen_parity(8, J);
    const BruteGraph g(ts);
    int codiam = 0;
    for (int d : g.backward_dist()) codiam = std::max(codiam, d);
    const int want = static_cast<int>((J.size() - 2) / 2 + 2);
    c.expect(codiam == want, "parity |J|=" + std::to_string(J.size()) + " co-diameter " +
                                 std::to_string(codiam) + " != " + std::to_string(want));
    c.expect(co_diameter(ExplicitSystem(ts)) == static_cast<unsigned>(want), "co_diameter parity");
    c.note("|J|=" + std::to_string(J.size()) + ":" + std::to_string(codiam));
  }
  c.note(str("systems", systems));
  return c;
}

// 4. Monotone theory, exhaustive at n <= 4.
Check criterion4()
{
  Check c;
  auto rng = make_rng(4004);
  int bases = 0;
  for (int i = 0; i < 200; ++i) {
    const unsigned n = 2 + i % 3;
    const DnfFormula phi = random_dnf(n, 1 + i % 4, n, rng);
    const Formula pf = to_formula(phi);
    const Pred pp = pred(pf);
    const State a = random_state(n, rng);
    const Pred mono = monotonization_brute(n, pp, a);
    const std::string tag = "instance " + std::to_string(i);

    // Lemma: M_a of a term keeps exactly the literals a falsifies.
    for (const Term & t : phi.terms) {
      const Term mt = monotonize_term(t, Translation{a});
      c.expect(same_set(n, pred(to_formula(mt)), monotonization_brute(n, pred(to_formula(t)), a)),
               tag + ": term monotonization");
      for (const Literal & l : t.literals()) {
        const bool kept = (mt.positive_mask() | mt.negative_mask()) >> l.var & 1U;
        c.expect(kept == !l.holds(a), tag + ": kept literals are those a falsifies");
      }
    }
    // Lemma: M_a distributes over disjunction; the DNF keeps m terms.
    const DnfFormula md = monotonize_dnf(phi, Translation{a});
    c.expect(md.terms.size() == phi.terms.size(), tag + ": m terms");
    c.expect(same_set(n, pred(to_formula(md)), mono), tag + ": DNF monotonization");
    if (phi.terms.size() >= 2) {
      DnfFormula left{{phi.terms.begin(), phi.terms.begin() + 1}};
      DnfFormula right{{phi.terms.begin() + 1, phi.terms.end()}};
      const Pred ml = monotonization_brute(n, pred(to_formula(left)), a);
      const Pred mr = monotonization_brute(n, pred(to_formula(right)), a);
      c.expect(same_set(n, mono, [&](const State & s) { return ml(s) || mr(s); }),
               tag + ": M_a(f | g) = M_a(f) | M_a(g)");
    }
    c.expect(a_monotone_brute(n, mono, a), tag + ": M_a is a-monotone");
    c.expect(implies_brute(n, pp, mono), tag + ": phi => M_a(phi)");
    // Lemma: v |= phi implies monotone_cube(v, a) => M_a(phi).
    for (const State & v : all_states(n)) {
      if (!pp(v)) continue;
      const Term cm = monotone_cube(v, Translation{a});
      c.expect(implies_brute(n, pred(to_formula(cm)), mono), tag + ": monotone cube below M_a");
      c.expect(same_set(n, pred(to_formula(cm)),
                        [&](const State & x) { return leq_translation(v, x, Translation{a}); }),
               tag + ": monotone cube is the upper set of v");
    }
    // Lemma: an a-minimal positive x has a term t with M_a(t) = cube_a(x).
    for (const State & x : all_states(n)) {
      if (!pp(x)) continue;
      bool minimal = true;
      for (unsigned j = 0; j < n; ++j) {
        if (x[j] != a[j] && pp(x.flipped(j))) minimal = false;
      }
      if (!minimal) continue;
      const Pred cube_x = pred(to_formula(monotone_cube(x, Translation{a})));
      bool found = false;
      for (const Term & t : phi.terms) {
        found = found || same_set(n, monotonization_brute(n, pred(to_formula(t)), a), cube_x);
      }
      c.expect(found, tag + ": a-minimal positive has a matching term");
    }
    // Lemma: for a basis, phi = AND_i M_ai(phi). Basis by definition: the
    // implied clauses monotone for some a_i conjoin to phi.
    std::vector<Translation> basis{{a}};
    for (unsigned j = 0; j < i % 3; ++j) basis.push_back({random_state(n, rng)});
    std::vector<Formula> kept;
    unsigned three_n = 1;
    for (unsigned v = 0; v < n; ++v) three_n *= 3;
    for (unsigned code = 1; code < three_n; ++code) {
      Bits pos = 0, neg = 0;
      unsigned rest = code;
      for (unsigned v = 0; v < n; ++v, rest /= 3) {
        if (rest % 3 == 1) pos |= Bits{1} << v;
        if (rest % 3 == 2) neg |= Bits{1} << v;
      }
      const Formula cl = to_formula(Clause(pos, neg));
      if (!implies_brute(n, pp, pred(cl))) continue;
      bool mono_some = false;
      for (const Translation & t : basis) mono_some = mono_some || a_monotone_brute(n, pred(cl), t.a);
      if (mono_some) kept.push_back(cl);
    }
    const Formula conj = f_and(kept);
    const bool is_basis = same_set(n, pred(conj), pp);
    c.expect(is_basis == is_basis_for(basis, pf, n), tag + ": is_basis_for agrees");
    if (is_basis) {
      ++bases;
      std::vector<Pred> ms;
      for (const Translation & t : basis) ms.push_back(monotonization_brute(n, pp, t.a));
      c.expect(same_set(n, pp,
                        [&](const State & s) {
                          for (const auto & m : ms) {
                            if (!m(s)) return false;
                          }
                          return true;
                        }),
               tag + ": basis conjunction identity");
    }
  }
  c.note("instances=200");
  c.note(str("bases", bases));
  return c;
}

// 5. Lambda with the r=1 basis on almost-monotone targets; dual on CNFs.
Check criterion5()
{
  Check c;
  auto rng = make_rng(5005);
  std::uint64_t worst_add_ratio = 0;
  for (int dual = 0; dual < 2; ++dual) {
    int systems = 0;
    for (int attempt = 0; systems < 20 && attempt < 500; ++attempt) {
      const unsigned n = 6 + attempt % 5;
      const unsigned m = 1 + attempt % 4;
      const DnfFormula target = random_almost_monotone_dnf(n, m, 3, 1, rng);
      const Formula tf = to_formula(target);
      const Pred ip = pred(tf);
      std::size_t models = 0;
      for (const State & s : all_states(n)) models += ip(s);
      if (models == 0 || models == (std::size_t{1} << n)) continue;
      const TransitionSystem base = gen_target_system(tf, n, rng);
      // The dual suite runs on dualize(base), whose invariant !target is a CNF.
      const TransitionSystem ts = dual ? dualize(base) : base;
      const BruteGraph g(ts);
      const Pred inv = dual ? Pred([&](const State & s) { return !ip(s); }) : ip;
      const Direction dir = dual ? Direction::Forwards : Direction::Backwards;
      if (!g.is_inductive(inv) || !fence_brute(g, inv, 1, dir)) {
        c.expect(false, "generated target is not fenced");
        continue;
      }
      ++systems;
      const Basis basis = basis_almost_monotone(n, 1);
      c.expect(is_basis_for(basis.translations, tf, n), "r=1 is a basis");
      auto o = make_oracle(ts, Backend::Enum);
      EngineConfig cfg;
      cfg.policy = RestartPolicy::fixed(1);
      const LambdaOutcome out = dual ? dual_lambda_infer(*o, basis, cfg) : lambda_infer(*o, basis, cfg);
      const std::string tag = std::string(dual ? "dual " : "") + "system " + std::to_string(systems);
      c.expect(out.kind == Outcome::Invariant, tag + ": invariant");
      if (out.kind != Outcome::Invariant) continue;
      c.expect(g.is_inductive(pred(out.invariant)), tag + ": inductive");
      c.expect(out.restarts == 0, tag + ": zero restarts");
      const std::uint64_t mt = target.terms.size() * basis.size();
      c.expect(out.term_additions <= mt, tag + ": <= m*t term additions");
      c.expect(out.stats.backward_checks() + out.stats.forward_checks() <= mt * n * n,
               tag + ": <= m*t*n^2 BMC checks");
      worst_add_ratio = std::max(worst_add_ratio, 100 * out.term_additions / mt);
      if (dual) {
        c.expect(out.components.size() == basis.size(), tag + ": one component per translation");
      }
    }
    c.expect(systems == 20, std::string(dual ? "dual: " : "") + "20 systems");
  }
  c.note("additions up to " + std::to_string(worst_add_ratio) + "% of m*t");
  return c;
}

// 6. lambda_infer and lambda_learn with the one-sided teacher issue the same queries.
Check criterion6()
{
  Check c;
  std::uint64_t entries = 0;
  for (const std::vector<unsigned> & J :
       std::vector<std::vector<unsigned>>{{1, 2}, {1, 2, 3, 5}, {1, 4, 6, 7, 8}}) {
    const unsigned n = 8;
    const TransitionSystem ts = gen_parity(n, J);
    for (Backend b : {Backend::Enum, Backend::Dimacs}) {
      std::vector<nlohmann::json> engine_log, learner_log;
      auto o1 = make_oracle(ts, b);
      o1->set_query_log([&](const nlohmann::json & j) { engine_log.push_back(j); });
      EngineConfig cfg;
      cfg.policy = RestartPolicy::fixed(2);
      const LambdaOutcome out = lambda_infer(*o1, basis_monotone(n), cfg);
      auto o2 = make_oracle(ts, b);
      o2->set_query_log([&](const nlohmann::json & j) { learner_log.push_back(j); });
      FenceTeacherOneSided teacher(*o2, 2);
      const Formula h = lambda_learn(teacher, basis_monotone(n));
      c.expect(out.kind == Outcome::Invariant, "engine invariant");
      c.expect(same_set(n, pred(h), pred(conj_of(J))), "learner result is AND_J x_i");
      c.expect(engine_log.size() > 3, "non-trivial transcript");
      c.expect(engine_log == learner_log, "identical transcripts");
      entries += engine_log.size();
    }
  }
  c.note(str("transcript entries", entries));
  return c;
}

// 7. Two-sided membership walk and CDNF inference.
Check criterion7()
{
  Check c;
  {
    const unsigned n = 6;
    const std::vector<unsigned> J{1, 2, 4};
    const TransitionSystem ts = gen_parity(n, J);
    const Pred inv = pred(conj_of(J));
    for (Backend b : {Backend::Enum, Backend::Dimacs}) {
      auto o = make_oracle(ts, b);
      for (const State & s : all_states(n)) {
        c.expect(membership_walk(*o, s, 1, 2, State::all_true(n)) == inv(s),
                 "membership walk at " + s.to_string());
      }
    }
  }
  auto envelope = [&](const TransitionSystem & ts, std::uint64_t m1, std::uint64_t m2, Bound k1,
                      Bound k2, const std::string & tag) {
    const BruteGraph g(ts);
    auto o = make_oracle(ts, Backend::Enum);
    const InferenceOutcome out =
        infer_via_learner(*o, LearnerKind::Cdnf, TeacherKind::TwoSided, {1, k1, k2});
    c.expect(out.kind == Outcome::Invariant, tag + ": invariant");
    c.expect(outcome_sound(g, out), tag + ": sound");
    const std::uint64_t n = ts.n();
    c.expect(out.stats.inductiveness_checks <= (m1 + 1) * (m2 + 1),
             tag + ": inductiveness checks " + std::to_string(out.stats.inductiveness_checks) +
                 " > (m1+1)(m2+1)");
    c.expect(out.stats.bmc_checks() <= n * n * n * m1 * m2, tag + ": BMC checks > n^3 m1 m2");
    return out;
  };
  {
    const std::vector<unsigned> J{1, 2, 3, 5};
    const InferenceOutcome out = envelope(gen_parity(8, J), 1, J.size(), 1, 2, "parity");
    c.note(str("parity inductiveness", out.stats.inductiveness_checks));
  }
  auto rng = make_rng(7007);
  int trees = 0;
  for (int attempt = 0; trees < 10 && attempt < 500; ++attempt) {
    const unsigned n = 6 + attempt % 3;
    const DecisionTree tree = DecisionTree::random(n, 2 + attempt % 5, rng);
    if (tree.size() > 6) continue;
    const Formula target = to_formula(tree.to_dnf());
    const Pred ip = pred(target);
    std::size_t models = 0;
    for (const State & s : all_states(n)) models += ip(s);
    if (models == 0 || models == (std::size_t{1} << n)) continue;
    const TransitionSystem ts = gen_target_system(target, n, rng);
    const BruteGraph g(ts);
    if (!fence_brute(g, ip, 1, Direction::Backwards) || !fence_brute(g, ip, 1, Direction::Forwards)) {
      c.expect(false, "dtree target is not two-sided fenced");
      continue;
    }
    ++trees;
    const InferenceOutcome out = envelope(ts, tree.true_leaves(), tree.false_leaves(), 1, 1,
                                          "dtree " + std::to_string(trees));
    if (out.kind == Outcome::Invariant) {
      c.expect(same_set(n, pred(out.invariant), ip), "dtree result equals the target");
    }
  }
  c.expect(trees == 10, "10 dtree systems");
  c.note(str("dtrees", trees));
  return c;
}

// Smallest bound at which the fence holds, if any.
std::optional<int> least_fence(const BruteGraph & g, const Pred & inv, Direction d)
{
  const int limit = 1 << g.n;
  if (!fence_brute(g, inv, limit, d)) return std::nullopt;
  for (int k = 0;; ++k) {
    if (fence_brute(g, inv, k, d)) return k;
  }
}

// Inductive invariants of a safe system: the reachable states, the
// gfp, and forward closures of Init plus a random sample of gfp states.
std::optional<std::vector<std::vector<bool>>> sample_invariants(const BruteGraph & g,
                                                                 std::mt19937_64 & rng)
{
  const auto bd = g.backward_dist();
  const std::size_t N = bd.size();
  auto close = [&](std::vector<bool> in) {
    std::vector<Bits> work;
    for (Bits s = 0; s < N; ++s) {
      if (in[s]) work.push_back(s);
    }
    while (!work.empty()) {
      const Bits s = work.back();
      work.pop_back();
      for (Bits t = 0; t < N; ++t) {
        if (g.edge[s][t] && !in[t]) {
          in[t] = true;
          work.push_back(t);
        }
      }
    }
    return in;
  };
  std::vector<bool> gfp_set(N);
  for (Bits s = 0; s < N; ++s) {
    if (g.init[s] && bd[s] >= 0) return std::nullopt;
    gfp_set[s] = bd[s] < 0;
  }
  std::vector<std::vector<bool>> out{close(g.init), gfp_set};
  std::bernoulli_distribution pick(0.25);
  for (int i = 0; i < 2; ++i) {
    std::vector<bool> seed = g.init;
    for (Bits s = 0; s < N; ++s) seed[s] = seed[s] || (gfp_set[s] && pick(rng));
    out.push_back(close(seed));
  }
  return out;
}

// 8. Robustness and non-robustness.
Check criterion8()
{
  Check c;
  auto rng = make_rng(8008);
  int instances = 0, conj_cases = 0, disj_cases = 0;
  for (int attempt = 0; instances < 30 && attempt < 3000; ++attempt) {
    const unsigned n = 3 + attempt % 3;
    RandomSystemOptions opt;
    opt.n = n;
    opt.cube_init = attempt % 2 == 0;
    const TransitionSystem ts1 = random_system(opt, rng);
    const TransitionSystem other = random_system(opt, rng);
    const TransitionSystem ts2(ts1.vocab_ptr(), ts1.init(), ts1.trans(), other.bad());
    const TransitionSystem ts3(ts1.vocab_ptr(), other.init(), ts1.trans(), ts1.bad());
    std::optional<TransitionSystem> cb, di;
    try {
      validate_assumptions(ts2);
      validate_assumptions(ts3);
      cb = conjoin_bad(ts1, ts2);
      di = disjoin_init(ts1, ts3);
      validate_assumptions(*cb);
      validate_assumptions(*di);
    } catch (const AssumptionError &) {
      continue;
    }
    const BruteGraph g1(ts1), g2(ts2), g3(ts3), gc(*cb), gd(*di);
    const auto C1 = sample_invariants(g1, rng);
    const auto C2 = sample_invariants(g2, rng);
    const auto C3 = sample_invariants(g3, rng);
    if (!C1 || !C2 || !C3) continue;
    ++instances;
    const std::string tag = "instance " + std::to_string(instances);
    auto as_pred = [](const std::vector<bool> & v) {
      return Pred([&v](const State & s) { return v[s.bits()]; });
    };
    for (const auto & [g, C] : {std::pair{&g1, &*C1}, std::pair{&g2, &*C2}, std::pair{&g3, &*C3}}) {
      for (const auto & v : *C) c.expect(g->is_inductive(as_pred(v)), tag + ": sampled invariant inductive");
    }
    for (Direction d : {Direction::Backwards, Direction::Forwards}) {
      const std::string dir = d == Direction::Backwards ? " backwards" : " forwards";
      for (const auto & v1 : *C1) {
        const Pred i1 = as_pred(v1);
        const auto k1 = least_fence(g1, i1, d);
        if (!k1) continue;
        // Bad1 | Bad2 with I1 & I2.
        for (const auto & v2 : *C2) {
          const Pred i2 = as_pred(v2);
          const auto k2 = least_fence(g2, i2, d);
          if (!k2) continue;
          ++conj_cases;
          const Pred i12 = [&](const State & s) { return i1(s) && i2(s); };
          c.expect(gc.is_inductive(i12), tag + ": I1 & I2 inductive for Bad1 | Bad2");
          c.expect(fence_brute(gc, i12, std::max(*k1, *k2), d), tag + ": I1 & I2" + dir + " fenced");
        }
        // Init1 | Init3 with I1 | I3.
        for (const auto & v3 : *C3) {
          const Pred i3 = as_pred(v3);
          const auto k3 = least_fence(g3, i3, d);
          if (!k3) continue;
          ++disj_cases;
          const Pred i13 = [&](const State & s) { return i1(s) || i3(s); };
          c.expect(gd.is_inductive(i13), tag + ": I1 | I3 inductive for Init1 | Init3");
          c.expect(fence_brute(gd, i13, std::max(*k1, *k3), d), tag + ": I1 | I3" + dir + " fenced");
        }
      }
    }
    // The isometry part uses the last sampled invariant of ts1.
    const Pred i1 = as_pred(C1->back());

    // Isometry: identical fence reports for the image.
    Isometry iso = Isometry::identity(n);
    std::shuffle(iso.perm.begin(), iso.perm.end(), rng);
    iso.a = random_state(n, rng);
    const TransitionSystem img = apply_isometry(ts1, iso);
    const ExplicitSystem e1(ts1), ei(img);
    const BruteGraph gi(img);
    StateSet s1(n), si(n);
    for (const State & s : all_states(n)) {
      if (i1(s)) {
        s1.insert(s);
        si.insert(iso.apply(s));
      }
    }
    const Pred in_image = [&](const State & s) { return si.contains(s); };
    c.expect(gi.is_inductive(in_image), tag + ": image of I1 inductive for the image system");
    for (Direction d : {Direction::Backwards, Direction::Forwards}) {
      for (Bound k : {0U, 1U, 2U, unbounded}) {
        const FenceReport a = check_fence(e1, s1, k, d), b = check_fence(ei, si, k, d);
        c.expect(a.holds == b.holds && a.boundary_size == b.boundary_size &&
                     a.violations.size() == b.violations.size() && a.inductive == b.inductive,
                 tag + ": isometry preserves the fence report");
        c.expect(b.holds == fence_brute(gi, in_image, k == unbounded ? inf_steps : static_cast<int>(k), d),
                 tag + ": image report matches brute force");
      }
    }
  }
  c.expect(instances == 30, "30 instances");
  c.expect(conj_cases > 0 && disj_cases > 0, "composition cases exercised");
  c.note(str("instances", instances));
  c.note(str("conjunction cases", conj_cases));
  c.note(str("disjunction cases", disj_cases));
  // Parity with a preserved parity bit: the backwards fence fails at every bound.
  {
    const std::vector<unsigned> J{1, 2, 3, 5};
    const TransitionSystem ts = gen_parity(8, J);
    Formula parity = to_formula(Literal{J[0] - 1, true});
    for (std::size_t i = 1; i < J.size(); ++i) parity = f_xor(parity, to_formula(Literal{J[i] - 1, true}));
    const TransitionSystem inst = instrument_derived(ts, parity, "q", DerivedUpdate::Preserve);
    const BruteGraph g(inst);
    const Pred inv = pred(conj_of(J));
    c.expect(g.is_inductive(inv), "instrumented: I still inductive");
    c.expect(!fence_brute(g, inv, inf_steps, Direction::Backwards), "instrumented: brute fence fails");
    const FenceReport r = check_fence(inst, conj_of(J), unbounded, Direction::Backwards);
    c.expect(!r.holds && !r.violations.empty(), "instrumented: check_fence at inf fails with violations");
    c.note(str("instrument violations", r.violations.size()));
  }
  // Monotonization of I = (!p1 | !p2) & (p1 | !p3).
  {
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::numbered(3, "p"));
    const Formula inv = parse_formula("(and (or (not p1) (not p2)) (or p1 (not p3)))", *vocab, false);
    auto r2 = make_rng(8009);
    const TransitionSystem ts = gen_target_system(inv, 3, r2);
    const BruteGraph g(ts);
    c.expect(g.is_inductive(pred(inv)), "monotonize: I inductive before");
    c.expect(fence_brute(g, pred(inv), 1, Direction::Forwards), "monotonize: forwards fenced before");
    c.expect(fence_brute(g, pred(inv), 1, Direction::Backwards), "monotonize: backwards fenced before");
    const TransitionSystem mts = monotonize_instrument(ts, 0, "q");
    const Formula hat = rewrite_monotonized(inv, 0, 3);
    const BruteGraph gm(mts);
    c.expect(gm.is_inductive(pred(hat)), "monotonize: I-hat inductive");
    c.expect(!fence_brute(gm, pred(hat), inf_steps, Direction::Forwards),
             "monotonize: I-hat not forwards fenced at inf (brute)");
    c.expect(!check_fence(mts, hat, unbounded, Direction::Forwards).holds,
             "monotonize: check_fence forwards at inf fails");
  }
  return c;
}

// 9. Fuzz: every engine is sound on every system.
Check criterion9()
{
  Check c;
  auto rng = make_rng(9009);
  std::map<std::string, std::map<Outcome, int>> tally;
  for (int i = 0; i < 500; ++i) {
    RandomSystemOptions opt;
    opt.n = 2 + i % 5;
    opt.actions = 1 + i % 4;
    opt.cube_init = i % 3 != 0;
    opt.cube_bad = i % 4 == 0;
    const TransitionSystem ts = random_system(opt, rng);
    const BruteGraph g(ts);
    const Backend backend = i % 25 == 0 ? Backend::Dimacs : Backend::Enum;
    EngineConfig cfg;
    cfg.policy.initial_k = i % 3;
    cfg.policy.max_k = cfg.policy.initial_k + i % 6;
    cfg.policy.schedule = i % 2 ? Schedule::Double : Schedule::Increment;
    cfg.policy.mode = i % 10 == 5 ? BoundsMode::ParallelBounds : BoundsMode::Sequential;
    if (i % 2) cfg.seed = static_cast<std::uint64_t>(i);
    EngineConfig cfg1 = cfg;
    cfg1.policy.initial_k = std::max<Bound>(1, cfg.policy.initial_k);
    cfg1.policy.max_k = std::max(cfg1.policy.max_k, cfg1.policy.initial_k);
    const Basis basis = basis_almost_monotone(opt.n, i % 2);
    const Bound k = 1 + i % 3;
    auto run = [&](const std::string & name, const std::function<InferenceOutcome(SatOracle &)> & f) {
      auto o = make_oracle(ts, backend);
      const InferenceOutcome out = f(*o);
      ++tally[name][out.kind];
      c.expect(outcome_sound(g, out), name + " unsound on system " + std::to_string(i));
    };
    run("itp", [&](SatOracle & o) { return itp_infer_termmin(o, cfg); });
    run("itp2", [&](SatOracle & o) { return itp_infer_two_phase(o, cfg1); });
    run("dual-itp", [&](SatOracle & o) { return dual_itp_infer_clausemin(o, cfg); });
    run("lambda", [&](SatOracle & o) { return lambda_infer(o, basis, cfg); });
    run("dual-lambda", [&](SatOracle & o) { return dual_lambda_infer(o, basis, cfg); });
    run("learner:monotone-dnf", [&](SatOracle & o) {
      return infer_via_learner(o, LearnerKind::MonotoneDnf, TeacherKind::OneSided, {k, 1, k});
    });
    run("learner:lambda", [&](SatOracle & o) {
      return infer_via_learner(o, LearnerKind::Lambda, TeacherKind::OneSided, {k, 1, k}, &basis);
    });
    run("learner:cdnf", [&](SatOracle & o) {
      return infer_via_learner(o, LearnerKind::Cdnf, TeacherKind::TwoSided, {k, static_cast<Bound>(1 + i % 2), k});
    });
  }
  int verdicts = 0;
  for (const auto & [name, t] : tally) {
    for (const auto & [kind, count] : t) {
      if (kind == Outcome::Invariant || kind == Outcome::Unsafe) verdicts += count;
    }
  }
  c.expect(verdicts > 0, "engines reach verdicts");
  c.note("systems=500");
  c.note(str("engines", tally.size()));
  c.note(str("verdicts", static_cast<std::uint64_t>(verdicts)));
  return c;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Criterion number (1-9); all when omitted")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char *, std::function<Check()>>> criteria{
      {"parity reproduction", criterion1},
      {"candidates below a fenced invariant", criterion2},
      {"gfp and co-diameter", criterion3},
      {"monotone theory", criterion4},
      {"lambda inference", criterion5},
      {"lambda transcripts", criterion6},
      {"two-sided teacher and CDNF", criterion7},
      {"robustness", criterion8},
      {"soundness fuzz", criterion9},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception & e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_ok = all_ok && c.ok();
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (c.ok() ? "PASS" : "FAIL")
              << " - " << c.summary();
    if (!c.notes().empty()) std::cout << "; " << c.notes();
    std::cout << " [" << std::fixed << std::setprecision(1) << s << "s]\n";
  }
  return all_ok ? 0 : 1;
}
