#include "fenceinfer/tsys.h"

#include <fstream>
#include <sstream>

#include "fenceinfer/error.h"
#include "fenceinfer/sexpr.h"
#include "fenceinfer/stateset.h"

namespace fenceinfer {

namespace {

void check_support(const Formula & f, unsigned n, bool allow_primed, const char * what)
{
  const Bits outside = ~low_mask(n);
  if ((f.support() | f.primed_support()) & outside) {
    throw Error(std::string(what) + " mentions variables outside the vocabulary");
  }
  if (!allow_primed && f.has_primed()) {
    throw Error(std::string(what) + " must not contain primed variables");
  }
}

}  // namespace

TransitionSystem::TransitionSystem(VocabularyPtr vocab, Formula init, Formula trans, Formula bad,
                                   std::vector<NamedFormula> defs)
    : vocab_(std::move(vocab)),
      init_(std::move(init)),
      trans_(std::move(trans)),
      bad_(std::move(bad)),
      defs_(std::move(defs))
{
  if (!vocab_) throw Error("transition system without vocabulary");
  const unsigned n = vocab_->size();
  check_support(init_, n, false, "init");
  check_support(trans_, n, true, "trans");
  check_support(bad_, n, false, "bad");
  for (const auto & d : defs_) check_support(d.formula, n, false, "def");
}

std::optional<Formula> TransitionSystem::def(const std::string & name) const
{
  for (const auto & d : defs_) {
    if (d.name == name) return d.formula;
  }
  return std::nullopt;
}

void TransitionSystem::add_def(const std::string & name, const Formula & f)
{
  check_support(f, n(), false, "def");
  for (auto & d : defs_) {
    if (d.name == name) {
      d.formula = f;
      return;
    }
  }
  defs_.push_back({name, f});
}

bool TransitionSystem::operator==(const TransitionSystem & o) const
{
  if (!(*vocab_ == *o.vocab_)) return false;
  if (init_ != o.init_ || trans_ != o.trans_ || bad_ != o.bad_) return false;
  if (defs_.size() != o.defs_.size()) return false;
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    if (defs_[i].name != o.defs_[i].name || defs_[i].formula != o.defs_[i].formula) return false;
  }
  return true;
}

bool is_execution(const TransitionSystem & ts, const Trace & t)
{
  if (t.empty()) return false;
  for (const auto & s : t) {
    if (s.size() != ts.n()) return false;
  }
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!ts.trans().eval(t[i], t[i + 1])) return false;
  }
  return true;
}

bool validate_assumptions(const TransitionSystem & ts, unsigned cap)
{
  const unsigned n = ts.n();
  if (n > cap) return false;
  const StateSet init = StateSet::of(ts.init(), n);
  const StateSet bad = StateSet::of(ts.bad(), n);
  if (init.empty()) throw AssumptionError("Init ≢ false violated: Init is unsatisfiable");
  if (bad.empty()) throw AssumptionError("Bad ≢ false violated: Bad is unsatisfiable");
  if (bad.is_full()) throw AssumptionError("Bad ≢ true violated: Bad is valid");
  if (!(init & bad).empty()) {
    throw AssumptionError("Init ⇒ ¬Bad violated: state " + (init & bad).first()->to_string() +
                          " is both initial and bad");
  }
  return true;
}

TransitionSystem parse_tsf(const std::string & text, bool validate)
{
  const auto forms = read_sexprs(text);
  VocabularyPtr vocab;
  std::optional<Formula> init, trans, bad;
  std::vector<NamedFormula> defs;
  auto head = [](const SExpr & e) -> std::string {
    if (e.is_atom || e.items.empty() || !e.items[0].is_atom) return "";
    return e.items[0].atom;
  };
  auto one_formula = [&](const SExpr & e, bool primed, std::optional<Formula> & slot) {
    const std::string h = head(e);
    if (slot) throw ParseError("duplicate (" + h + ") block", e.line, e.column);
    if (e.items.size() != 2) throw ParseError("(" + h + ") takes one formula", e.line, e.column);
    slot = formula_from_sexpr(e.items[1], *vocab, primed);
  };
  for (const auto & e : forms) {
    const std::string h = head(e);
    if (h.empty()) throw ParseError("expected a (keyword ...) block", e.line, e.column);
    if (h == "vocab") {
      if (vocab) throw ParseError("duplicate (vocab) block", e.line, e.column);
      std::vector<std::string> names;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        const auto & it = e.items[i];
        if (!it.is_atom) throw ParseError("variable name expected", it.line, it.column);
        if (it.atom == "true" || it.atom == "false") {
          throw ParseError("reserved word used as variable name", it.line, it.column);
        }
        names.push_back(it.atom);
      }
      try {
        vocab = std::make_shared<const Vocabulary>(names);
      } catch (const ParseError &) {
        throw;
      } catch (const Error & err) {
        throw ParseError(err.what(), e.line, e.column);
      }
      continue;
    }
    if (!vocab) throw ParseError("(vocab) must come first", e.line, e.column);
    if (h == "init") {
      one_formula(e, false, init);
    } else if (h == "trans") {
      one_formula(e, true, trans);
    } else if (h == "bad") {
      one_formula(e, false, bad);
    } else if (h == "def") {
      if (e.items.size() != 3 || !e.items[1].is_atom) {
        throw ParseError("(def <name> <formula>) expected", e.line, e.column);
      }
      const std::string & name = e.items[1].atom;
      for (const auto & d : defs) {
        if (d.name == name) throw ParseError("duplicate def '" + name + "'", e.line, e.column);
      }
      defs.push_back({name, formula_from_sexpr(e.items[2], *vocab, false)});
    } else {
      throw ParseError("unknown block '" + h + "'", e.line, e.column);
    }
  }
  if (!vocab) throw ParseError("missing (vocab) block", 1, 1);
  if (!init) throw ParseError("missing (init) block", 1, 1);
  if (!trans) throw ParseError("missing (trans) block", 1, 1);
  if (!bad) throw ParseError("missing (bad) block", 1, 1);
  TransitionSystem ts(vocab, *init, *trans, *bad, std::move(defs));
  if (validate) validate_assumptions(ts);
  return ts;
}

TransitionSystem load_tsf(const std::string & path, bool validate)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tsf(buf.str(), validate);
}

std::string serialize_tsf(const TransitionSystem & ts)
{
  const Vocabulary & v = ts.vocab();
  std::string out = "(vocab";
  for (const auto & nm : v.names()) out += " " + nm;
  out += ")\n";
  out += "(init " + to_sexpr(ts.init(), v) + ")\n";
  out += "(trans " + to_sexpr(ts.trans(), v) + ")\n";
  out += "(bad " + to_sexpr(ts.bad(), v) + ")\n";
  for (const auto & d : ts.defs()) out += "(def " + d.name + " " + to_sexpr(d.formula, v) + ")\n";
  return out;
}

TransitionSystem dualize(const TransitionSystem & ts)
{
  return TransitionSystem(ts.vocab_ptr(), ts.bad(), swap_primes(ts.trans()), ts.init(), ts.defs());
}

Isometry Isometry::identity(unsigned n)
{
  Isometry iso;
  for (unsigned i = 0; i < n; ++i) iso.perm.push_back(i);
  iso.a = State::all_false(n);
  return iso;
}

State Isometry::apply(const State & x) const
{
  Bits y = 0;
  for (unsigned i = 0; i < perm.size(); ++i) {
    if (x[i] != a[i]) y |= Bits{1} << perm[i];
  }
  return State(x.size(), y);
}

State Isometry::inverse(const State & y) const
{
  Bits x = 0;
  for (unsigned i = 0; i < perm.size(); ++i) {
    if (y[perm[i]] != a[i]) x |= Bits{1} << i;
  }
  return State(y.size(), x);
}

Formula Isometry::image(const Formula & f) const
{
  return map_vars(f, [&](unsigned i, bool primed) {
    Formula v = Formula::var(perm.at(i), primed);
    return a[i] ? f_not(v) : v;
  });
}

void validate_permutation(const std::vector<unsigned> & perm, unsigned n)
{
  if (perm.size() != n) throw Error("permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (unsigned p : perm) {
    if (p >= n || seen[p]) throw Error("not a permutation of the variable indices");
    seen[p] = true;
  }
}

TransitionSystem apply_isometry(const TransitionSystem & ts, const Isometry & iso)
{
  validate_permutation(iso.perm, ts.n());
  if (iso.a.size() != ts.n()) throw Error("translation has wrong length");
  std::vector<NamedFormula> defs;
  for (const auto & d : ts.defs()) defs.push_back({d.name, iso.image(d.formula)});
  return TransitionSystem(ts.vocab_ptr(), iso.image(ts.init()), iso.image(ts.trans()),
                          iso.image(ts.bad()), std::move(defs));
}

namespace {

void require_same(const TransitionSystem & a, const TransitionSystem & b, bool init, bool bad)
{
  if (!(a.vocab() == b.vocab())) throw Error("systems have different vocabularies");
  if (a.trans() != b.trans()) throw Error("systems have different transition relations");
  if (init && a.init() != b.init()) throw Error("systems have different Init");
  if (bad && a.bad() != b.bad()) throw Error("systems have different Bad");
}

Formula iff_var(const Formula & q, const Formula & f) { return f_iff(q, f); }

std::shared_ptr<const Vocabulary> extend(const Vocabulary & v, const std::string & qname)
{
  if (v.contains(qname)) throw Error("variable name '" + qname + "' already in use");
  auto names = v.names();
  names.push_back(qname);
  return std::make_shared<const Vocabulary>(names);
}

}  // namespace

TransitionSystem conjoin_bad(const TransitionSystem & ts1, const TransitionSystem & ts2)
{
  require_same(ts1, ts2, true, false);
  return TransitionSystem(ts1.vocab_ptr(), ts1.init(), ts1.trans(), f_or(ts1.bad(), ts2.bad()),
                          ts1.defs());
}

TransitionSystem disjoin_init(const TransitionSystem & ts1, const TransitionSystem & ts2)
{
  require_same(ts1, ts2, false, true);
  return TransitionSystem(ts1.vocab_ptr(), f_or(ts1.init(), ts2.init()), ts1.trans(), ts1.bad(),
                          ts1.defs());
}

TransitionSystem instrument_derived(const TransitionSystem & ts, const Formula & psi,
                                    const std::string & qname, DerivedUpdate update)
{
  if (psi.has_primed()) throw Error("derived relation must be unprimed");
  if (psi.support() & ~low_mask(ts.n())) throw Error("derived relation outside vocabulary");
  auto vocab = extend(ts.vocab(), qname);
  const unsigned q = ts.n();
  Formula link = iff_var(Formula::var(q), psi);
  Formula link_post = iff_var(Formula::var(q, true), update == DerivedUpdate::Recompute
                                                         ? prime(psi)
                                                         : Formula::var(q));
  return TransitionSystem(vocab, f_and(ts.init(), link), f_and(ts.trans(), link_post),
                          f_and(ts.bad(), link), ts.defs());
}

TransitionSystem monotonize_instrument(const TransitionSystem & ts, unsigned p,
                                       const std::string & qname)
{
  if (p >= ts.n()) throw Error("monotonize_instrument: variable index out of range");
  auto vocab = extend(ts.vocab(), qname);
  const unsigned q = ts.n();
  Formula pre = f_iff(Formula::var(p), f_not(Formula::var(q)));
  Formula post = f_iff(Formula::var(p, true), f_not(Formula::var(q, true)));
  return TransitionSystem(vocab, f_and(ts.init(), pre),
                          Formula::conjunction({pre, ts.trans(), post}), f_and(ts.bad(), pre),
                          ts.defs());
}

namespace {

Formula rewrite_polarity(const Formula & f, unsigned p, unsigned q, bool positive)
{
  switch (f.op()) {
    case Op::Const:
      return f;
    case Op::Var:
      if (f.index() == p && !f.primed() && positive) return f_not(Formula::var(q));
      return f;
    case Op::Not:
      return f_not(rewrite_polarity(f.children()[0], p, q, !positive));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (const auto & c : f.children()) kids.push_back(rewrite_polarity(c, p, q, positive));
      return f.op() == Op::And ? Formula::conjunction(kids) : Formula::disjunction(kids);
    }
  }
  return f;
}

}  // namespace

Formula rewrite_monotonized(const Formula & f, unsigned p, unsigned q)
{
  return rewrite_polarity(f, p, q, true);
}

}  // namespace fenceinfer
