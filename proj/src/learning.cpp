#include "fenceinfer/learning.h"

#include "fenceinfer/error.h"

namespace fenceinfer {

std::string to_string(Sign s)
{
  switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    case Sign::Unsigned: return "unsigned";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Teachers

EquivalenceAnswer Teacher::equivalence(const Formula & hypothesis)
{
  ++eq_;
  EquivalenceAnswer a = do_equivalence(hypothesis);
  if (transcript_) {
    nlohmann::json j{{"query", "equivalence"}, {"input", render(hypothesis)}};
    if (a.correct) {
      j["answer"] = "correct";
    } else {
      j["answer"] = {{"state", a.counterexample.to_string()}, {"sign", to_string(a.sign)}};
    }
    transcript_(j);
  }
  return a;
}

bool Teacher::membership(const State & s)
{
  ++mem_;
  const bool r = do_membership(s);
  if (transcript_) transcript_({{"query", "membership"}, {"input", s.to_string()}, {"answer", r}});
  return r;
}

std::string Teacher::render(const Formula & f) const
{
  return to_sexpr(f, Vocabulary::numbered(n()));
}

PerfectTeacher::PerfectTeacher(Formula target, unsigned n) : target_(std::move(target)), n_(n)
{
  require_enumerable(n, 20, "perfect teacher");
  if (target_.has_primed() || (target_.support() & ~low_mask(n))) {
    throw Error("perfect teacher: target must be unprimed over n variables");
  }
}

EquivalenceAnswer PerfectTeacher::do_equivalence(const Formula & hypothesis)
{
  const StateSet t = StateSet::of(target_, n_);
  const StateSet h = StateSet::of(hypothesis, n_);
  const StateSet diff = (t - h) | (h - t);
  EquivalenceAnswer a;
  if (auto s = diff.first()) {
    a.counterexample = *s;
    a.sign = t.contains(*s) ? Sign::Positive : Sign::Negative;
  } else {
    a.correct = true;
  }
  return a;
}

bool PerfectTeacher::do_membership(const State & s) { return target_.eval(s); }

EquivalenceAnswer FenceTeacherOneSided::do_equivalence(const Formula & hypothesis)
{
  const InductivenessResult r = oracle_.check_inductive(hypothesis);
  EquivalenceAnswer a;
  switch (r.kind) {
    case InductivenessResult::Kind::Inductive: a.correct = true; break;
    case InductivenessResult::Kind::InitViolation:
      a.counterexample = r.state;
      a.sign = Sign::Positive;
      break;
    case InductivenessResult::Kind::Cti:
      a.counterexample = r.post;
      a.sign = Sign::Positive;
      break;
    case InductivenessResult::Kind::BadIntersection:
      a.counterexample = r.state;
      a.sign = Sign::Negative;
      break;
  }
  return a;
}

bool FenceTeacherOneSided::do_membership(const State & s)
{
  return !oracle_.bmc_backward(state_formula(s), k_).reachable;
}

std::string FenceTeacherOneSided::render(const Formula & f) const
{
  return to_sexpr(f, oracle_.system().vocab());
}

bool membership_walk(SatOracle & oracle, const State & s, Bound k1, Bound k2, const State & sigma0)
{
  State v = s;
  for (unsigned round = 0; round <= s.size(); ++round) {
    const Formula f = state_formula(v);
    if (oracle.bmc_forward(f, k1).reachable) return true;
    if (oracle.bmc_backward(f, k2).reachable) return false;
    const Bits diff = v.bits() ^ sigma0.bits();
    if (diff == 0) break;
    v = v.flipped(static_cast<unsigned>(std::countr_zero(diff)));
  }
  throw InternalError("membership walk reached sigma0 without a verdict (is sigma0 initial?)");
}

FenceTeacherTwoSided::FenceTeacherTwoSided(SatOracle & oracle, Bound k1, Bound k2,
                                           std::optional<State> sigma0)
    : oracle_(oracle), k1_(k1), k2_(k2)
{
  if (!sigma0) sigma0 = oracle.find_model(oracle.system().init());
  if (!sigma0) throw AssumptionError("Init ≢ false violated: Init is unsatisfiable");
  if (!oracle.system().init().eval(*sigma0)) throw Error("sigma0 must be an initial state");
  sigma0_ = *sigma0;
}

bool FenceTeacherTwoSided::member(const State & s)
{
  if (auto it = memo_.find(s.bits()); it != memo_.end()) return it->second;
  const bool r = membership_walk(oracle_, s, k1_, k2_, sigma0_);
  memo_.emplace(s.bits(), r);
  return r;
}

EquivalenceAnswer FenceTeacherTwoSided::do_equivalence(const Formula & hypothesis)
{
  const InductivenessResult r = oracle_.check_inductive(hypothesis);
  EquivalenceAnswer a;
  switch (r.kind) {
    case InductivenessResult::Kind::Inductive: a.correct = true; break;
    case InductivenessResult::Kind::InitViolation:
      a.counterexample = r.state;
      a.sign = Sign::Positive;
      break;
    case InductivenessResult::Kind::BadIntersection:
      a.counterexample = r.state;
      a.sign = Sign::Negative;
      break;
    case InductivenessResult::Kind::Cti:
      if (member(r.state)) {
        a.counterexample = r.post;
        a.sign = Sign::Positive;
      } else {
        a.counterexample = r.state;
        a.sign = Sign::Negative;
      }
      break;
  }
  return a;
}

bool FenceTeacherTwoSided::do_membership(const State & s) { return member(s); }

std::string FenceTeacherTwoSided::render(const Formula & f) const
{
  return to_sexpr(f, oracle_.system().vocab());
}

// ---------------------------------------------------------------------------
// Learners

namespace {

void emit(const EventSink & sink, nlohmann::json j)
{
  if (sink) sink(j);
}

class QueryBudget
{
 public:
  QueryBudget(const LearnerConfig & cfg, unsigned n)
      : left_(cfg.max_equivalence ? cfg.max_equivalence : default_iteration_budget(n))
  {
  }

  void spend()
  {
    if (left_ == 0) throw LearnerBudget("equivalence query budget exhausted");
    --left_;
  }

 private:
  std::uint64_t left_;
};

nlohmann::json term_event(const char * learner, const Term & d, std::size_t component)
{
  return {{"event", "term"},
          {"learner", learner},
          {"component", component},
          {"pos", d.positive_mask()},
          {"neg", d.negative_mask()}};
}

}  // namespace

DnfFormula learn_monotone_dnf(Teacher & teacher, const LearnerConfig & cfg)
{
  const unsigned n = teacher.n();
  QueryBudget budget(cfg, n);
  DnfFormula phi;
  for (;;) {
    budget.spend();
    const EquivalenceAnswer a = teacher.equivalence(to_formula(phi));
    if (a.correct) return phi;
    const State & s = a.counterexample;
    if (a.sign == Sign::Negative || phi.eval(s)) {
      throw NotMonotone("negative counterexample " + s.to_string());
    }
    if (!teacher.membership(s)) throw NotMonotone("counterexample " + s.to_string() + " is not a member");
    Term d(s.bits(), 0);
    for (const Literal & l : d.literals()) {
      const Term smaller = d.without(l);
      if (teacher.membership(State(n, smaller.positive_mask()))) d = smaller;
    }
    phi.terms.push_back(d);
    emit(cfg.events, term_event("monotone-dnf", d, 0));
  }
}

Formula lambda_learn(Teacher & teacher, const Basis & basis, const LearnerConfig & cfg)
{
  basis.validate(teacher.n());
  QueryBudget budget(cfg, teacher.n());
  std::vector<DnfFormula> h(basis.size());
  for (;;) {
    budget.spend();
    const Formula hyp = hypothesis_formula(h);
    const EquivalenceAnswer a = teacher.equivalence(hyp);
    if (a.correct) return hyp;
    const State & s = a.counterexample;
    if (a.sign == Sign::Negative || hyp.eval(s)) {
      throw NotABasis("negative counterexample " + s.to_string());
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (h[i].eval(s)) continue;
      if (!teacher.membership(s)) {
        throw NotABasis("counterexample " + s.to_string() + " is not a member");
      }
      const Translation & t = basis.translations[i];
      const State v = monotone_walk(s, t, [&](const State & w) { return teacher.membership(w); });
      const Term d = monotone_cube(v, t);
      h[i].terms.push_back(d);
      emit(cfg.events, term_event("lambda", d, i));
    }
  }
}

Formula cdnf_learn(Teacher & teacher, const LearnerConfig & cfg)
{
  QueryBudget budget(cfg, teacher.n());
  std::vector<DnfFormula> h;
  std::vector<Translation> a;
  for (;;) {
    budget.spend();
    const Formula hyp = hypothesis_formula(h);
    const EquivalenceAnswer ans = teacher.equivalence(hyp);
    if (ans.correct) return hyp;
    const State & s = ans.counterexample;
    if (hyp.eval(s)) {
      // Accepted but outside the target: a new pair seeded with s.
      h.emplace_back();
      a.push_back({s});
      emit(cfg.events, {{"event", "pair"}, {"learner", "cdnf"}, {"a", s.to_string()}});
      continue;
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].eval(s)) continue;
      const State v = monotone_walk(s, a[i], [&](const State & w) { return teacher.membership(w); });
      const Term d = monotone_cube(v, a[i]);
      h[i].terms.push_back(d);
      emit(cfg.events, term_event("cdnf", d, i));
    }
  }
}

LearnerKind parse_learner(const std::string & text)
{
  if (text == "monotone-dnf") return LearnerKind::MonotoneDnf;
  if (text == "lambda") return LearnerKind::Lambda;
  if (text == "cdnf") return LearnerKind::Cdnf;
  throw UsageError("learner must be monotone-dnf, lambda or cdnf");
}

std::string to_string(LearnerKind l)
{
  switch (l) {
    case LearnerKind::MonotoneDnf: return "monotone-dnf";
    case LearnerKind::Lambda: return "lambda";
    case LearnerKind::Cdnf: return "cdnf";
  }
  return "?";
}

bool learner_compatible(LearnerKind l, TeacherKind t)
{
  if (t == TeacherKind::TwoSided) return true;
  return l == LearnerKind::MonotoneDnf || l == LearnerKind::Lambda;
}

InferenceOutcome infer_via_learner(SatOracle & oracle, LearnerKind learner, TeacherKind teacher,
                                   const LearnerBounds & bounds, const Basis * basis,
                                   const LearnerConfig & cfg)
{
  if (!learner_compatible(learner, teacher)) {
    throw UsageError("learner " + to_string(learner) + " needs the two-sided teacher");
  }
  if (learner == LearnerKind::Lambda && !basis) throw UsageError("the lambda learner needs a basis");
  std::unique_ptr<Teacher> t;
  Bound back_k = bounds.k;
  if (teacher == TeacherKind::OneSided) {
    t = std::make_unique<FenceTeacherOneSided>(oracle, bounds.k);
  } else {
    t = std::make_unique<FenceTeacherTwoSided>(oracle, bounds.k1, bounds.k2);
    back_k = bounds.k2;
  }
  if (cfg.events) t->set_transcript(cfg.events);

  InferenceOutcome out;
  out.k = back_k;
  std::optional<DnfFormula> dnf;
  Formula result;
  std::string error;
  bool budget_hit = false;
  try {
    switch (learner) {
      case LearnerKind::MonotoneDnf:
        dnf = learn_monotone_dnf(*t, cfg);
        result = to_formula(*dnf);
        break;
      case LearnerKind::Lambda: result = lambda_learn(*t, *basis, cfg); break;
      case LearnerKind::Cdnf: result = cdnf_learn(*t, cfg); break;
    }
  } catch (const LearnerBudget & e) {
    error = e.what();
    budget_hit = true;
  } catch (const NotMonotone & e) {
    error = e.what();
  } catch (const NotABasis & e) {
    error = e.what();
  }

  if (error.empty()) {
    // Confirm before reporting.
    if (oracle.check_inductive(result).inductive()) {
      out.kind = Outcome::Invariant;
      out.invariant = result;
      out.dnf = dnf;
    } else {
      out.kind = Outcome::Failure;
      out.message = "final hypothesis is not inductive";
    }
  } else {
    auto r = oracle.bmc_backward(oracle.system().init(), back_k);
    if (r.reachable) {
      out.kind = Outcome::Unsafe;
      out.trace = r.trace;
    } else {
      out.kind = budget_hit ? Outcome::BudgetExceeded : Outcome::Failure;
      out.message = error;
    }
  }
  out.equivalence_queries = t->equivalence_queries();
  out.membership_queries = t->membership_queries();
  out.iterations = out.equivalence_queries;
  out.stats = oracle.stats();
  emit(cfg.events, {{"event", "result"}, {"outcome", to_string(out.kind)}});
  return out;
}

}  // namespace fenceinfer
