#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fenceinfer/formula.h"
#include "fenceinfer/logic.h"

namespace fenceinfer {

struct NamedFormula
{
  std::string name;
  Formula formula;
};

// (Init, trans, Bad) over V and V'. Named formulas (candidate invariants,
// typically) travel with the system.
class TransitionSystem
{
 public:
  TransitionSystem(VocabularyPtr vocab, Formula init, Formula trans, Formula bad,
                   std::vector<NamedFormula> defs = {});

  const Vocabulary & vocab() const { return *vocab_; }
  const VocabularyPtr & vocab_ptr() const { return vocab_; }
  unsigned n() const { return vocab_->size(); }
  const Formula & init() const { return init_; }
  const Formula & trans() const { return trans_; }
  const Formula & bad() const { return bad_; }
  const std::vector<NamedFormula> & defs() const { return defs_; }
  std::optional<Formula> def(const std::string & name) const;
  void add_def(const std::string & name, const Formula & f);

  // Structural equality of all components.
  bool operator==(const TransitionSystem & o) const;

 private:
  VocabularyPtr vocab_;
  Formula init_;
  Formula trans_;
  Formula bad_;
  std::vector<NamedFormula> defs_;
};

// An execution: consecutive states satisfy trans.
using Trace = std::vector<State>;

bool is_execution(const TransitionSystem & ts, const Trace & t);

// Standing assumptions: Init satisfiable, Bad satisfiable and not valid,
// Init => !Bad. Checked by enumeration; throws AssumptionError naming the
// violated one. Skipped (returns false) when n exceeds cap.
bool validate_assumptions(const TransitionSystem & ts, unsigned cap = 24);

// TSF text format. parse validates the assumptions when validate is set.
TransitionSystem parse_tsf(const std::string & text, bool validate = true);
TransitionSystem load_tsf(const std::string & path, bool validate = true);
std::string serialize_tsf(const TransitionSystem & ts);

// (Bad, trans^-1, Init)
TransitionSystem dualize(const TransitionSystem & ts);

// The isometry x -> y with y[perm[i]] = x[i] xor a[i].
struct Isometry
{
  std::vector<unsigned> perm;
  State a;

  static Isometry identity(unsigned n);
  State apply(const State & x) const;
  State inverse(const State & y) const;
  // Formula denoting the image set of f.
  Formula image(const Formula & f) const;
};

void validate_permutation(const std::vector<unsigned> & perm, unsigned n);
TransitionSystem apply_isometry(const TransitionSystem & ts, const Isometry & iso);

// Bad := Bad1 | Bad2 (shared vocabulary, trans and Init).
TransitionSystem conjoin_bad(const TransitionSystem & ts1, const TransitionSystem & ts2);
// Init := Init1 | Init2 (shared vocabulary, trans and Bad).
TransitionSystem disjoin_init(const TransitionSystem & ts1, const TransitionSystem & ts2);

enum class DerivedUpdate
{
  Recompute,  // trans & (q' <-> psi')
  Preserve    // trans & (q' <-> q); sound when trans preserves psi
};

// New variable q tracking psi: Init & (q <-> psi), the updated trans, and
// Bad & (q <-> psi).
TransitionSystem instrument_derived(const TransitionSystem & ts, const Formula & psi,
                                    const std::string & qname,
                                    DerivedUpdate update = DerivedUpdate::Recompute);
// New variable q kept equal to !p: Init & (p <-> !q),
// (p <-> !q) & trans & (p' <-> !q'), Bad & (p <-> !q).
TransitionSystem monotonize_instrument(const TransitionSystem & ts, unsigned p,
                                       const std::string & qname);
// Replace positive occurrences of p (negation normal form polarity) by !q.
Formula rewrite_monotonized(const Formula & f, unsigned p, unsigned q);

}  // namespace fenceinfer
