#pragma once

// Exact learning from equivalence and membership queries, the teachers
// that answer them through SAT queries under the fence condition, and
// the translation of a learner into an inference algorithm.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fenceinfer/engine.h"
#include "fenceinfer/lambda.h"

namespace fenceinfer {

enum class Sign
{
  Positive,  // in the target, rejected by the hypothesis
  Negative,  // outside the target, accepted by the hypothesis
  Unsigned
};

std::string to_string(Sign s);

struct EquivalenceAnswer
{
  bool correct = false;
  State counterexample;
  Sign sign = Sign::Unsigned;
};

// Teacher interface with query counters and an optional transcript
// (query kind, input, answer) as JSON objects.
class Teacher
{
 public:
  virtual ~Teacher() = default;

  virtual unsigned n() const = 0;
  EquivalenceAnswer equivalence(const Formula & hypothesis);
  bool membership(const State & s);

  std::uint64_t equivalence_queries() const { return eq_; }
  std::uint64_t membership_queries() const { return mem_; }
  void set_transcript(EventSink sink) { transcript_ = std::move(sink); }

 protected:
  virtual EquivalenceAnswer do_equivalence(const Formula & hypothesis) = 0;
  virtual bool do_membership(const State & s) = 0;
  virtual std::string render(const Formula & f) const;

 private:
  std::uint64_t eq_ = 0;
  std::uint64_t mem_ = 0;
  EventSink transcript_;
};

// Answers from a known target by enumeration: the smallest state where
// hypothesis and target differ.
class PerfectTeacher : public Teacher
{
 public:
  PerfectTeacher(Formula target, unsigned n);
  unsigned n() const override { return n_; }

 protected:
  EquivalenceAnswer do_equivalence(const Formula & hypothesis) override;
  bool do_membership(const State & s) override;

 private:
  Formula target_;
  unsigned n_;
};

// Positive equivalence queries from an inductiveness check (Init
// violation or CTI post-state, both positive) and membership as one
// bmc_backward(s, k) check. A Bad intersection is passed on as a
// negative counterexample.
class FenceTeacherOneSided : public Teacher
{
 public:
  FenceTeacherOneSided(SatOracle & oracle, Bound k) : oracle_(oracle), k_(k) {}
  unsigned n() const override { return oracle_.n(); }
  Bound k() const { return k_; }

 protected:
  EquivalenceAnswer do_equivalence(const Formula & hypothesis) override;
  bool do_membership(const State & s) override;
  std::string render(const Formula & f) const override;

 private:
  SatOracle & oracle_;
  Bound k_;
};

// Walk from s toward sigma0 one bit at a time (ascending index): a state
// reachable within k1 steps answers true, one reaching Bad within k2
// steps answers false.
bool membership_walk(SatOracle & oracle, const State & s, Bound k1, Bound k2, const State & sigma0);

// Membership by walking; equivalence by an inductiveness check plus, for
// a CTI (s, s'), one membership query on s (member: s' positive, else s
// negative). Membership answers are memoized per state.
class FenceTeacherTwoSided : public Teacher
{
 public:
  // sigma0 defaults to the first Init model the oracle finds.
  FenceTeacherTwoSided(SatOracle & oracle, Bound k1, Bound k2,
                       std::optional<State> sigma0 = std::nullopt);
  unsigned n() const override { return oracle_.n(); }
  const State & sigma0() const { return sigma0_; }

 protected:
  EquivalenceAnswer do_equivalence(const Formula & hypothesis) override;
  bool do_membership(const State & s) override;
  std::string render(const Formula & f) const override;

 private:
  bool member(const State & s);

  SatOracle & oracle_;
  Bound k1_, k2_;
  State sigma0_;
  std::map<Bits, bool> memo_;
};

class NotMonotone : public Error
{
 public:
  using Error::Error;
};

class NotABasis : public Error
{
 public:
  using Error::Error;
};

class LearnerBudget : public Error
{
 public:
  using Error::Error;
};

struct LearnerConfig
{
  // Equivalence queries allowed; 0 means 4 * 2^n (capped).
  std::uint64_t max_equivalence = 0;
  EventSink events;
};

// Angluin's algorithm: generalize each positive counterexample to its
// positive literals, dropping those whose removal stays a member.
DnfFormula learn_monotone_dnf(Teacher & teacher, const LearnerConfig & cfg = {});

// One a_i-monotone DNF per basis translation, generalized by membership
// walks toward a_i. Throws NotABasis on a non-member counterexample.
Formula lambda_learn(Teacher & teacher, const Basis & basis, const LearnerConfig & cfg = {});

// Bshouty's CDNF algorithm: pairs (H_i, a_i), a negative counterexample
// opening a new pair with a_i := the counterexample, H_i := false.
Formula cdnf_learn(Teacher & teacher, const LearnerConfig & cfg = {});

enum class LearnerKind
{
  MonotoneDnf,
  Lambda,
  Cdnf
};

enum class TeacherKind
{
  OneSided,
  TwoSided
};

LearnerKind parse_learner(const std::string & text);  // monotone-dnf | lambda | cdnf
std::string to_string(LearnerKind l);
// Allowlist: one-sided {monotone-dnf, lambda}; two-sided accepts all.
bool learner_compatible(LearnerKind l, TeacherKind t);

struct LearnerBounds
{
  Bound k = 1;   // one-sided
  Bound k1 = 1;  // two-sided, forwards
  Bound k2 = 1;  // two-sided, backwards
};

// Runs the learner against a fence teacher on the oracle's system. On
// Correct, one more inductiveness check confirms the result (Failure if
// it does not hold). A learner error (not monotone / not a basis /
// budget) leads to one bmc_backward(Init, k) check: Unsafe if reachable,
// else Failure or BudgetExceeded.
InferenceOutcome infer_via_learner(SatOracle & oracle, LearnerKind learner, TeacherKind teacher,
                                   const LearnerBounds & bounds, const Basis * basis = nullptr,
                                   const LearnerConfig & cfg = {});

}  // namespace fenceinfer
