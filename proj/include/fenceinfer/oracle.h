#pragma once

// The SAT interface: inductiveness checks and bounded reachability
// (k-BMC) checks, with an enumeration backend and an external DIMACS
// solver backend behind one interface.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fenceinfer/explicit.h"
#include "fenceinfer/formula.h"
#include "fenceinfer/tsys.h"

namespace fenceinfer {

struct InductivenessResult
{
  enum class Kind
  {
    Inductive,
    InitViolation,    // state: Init & !phi
    BadIntersection,  // state: phi & Bad
    Cti               // state -> post: phi, trans, !phi'
  };

  Kind kind = Kind::Inductive;
  State state;
  State post;

  bool inductive() const { return kind == Kind::Inductive; }
};

std::string to_string(InductivenessResult::Kind k);

struct BmcResult
{
  bool reachable = false;
  // Reachable: an execution from the queried set to Bad (backward) or
  // from Init to the queried set (forward), at most k+1 states.
  Trace trace;
};

struct OracleStats
{
  std::uint64_t inductiveness_checks = 0;
  std::map<Bound, std::uint64_t> bmc_backward;  // by k
  std::map<Bound, std::uint64_t> bmc_forward;
  std::uint64_t sat_calls = 0;

  std::uint64_t backward_checks() const;
  std::uint64_t forward_checks() const;
  std::uint64_t bmc_checks() const { return backward_checks() + forward_checks(); }
  OracleStats & operator+=(const OracleStats & o);
};

nlohmann::json to_json(const OracleStats & s);

// Each query is reported as a JSON object; used for transcripts.
using QueryLog = std::function<void(const nlohmann::json &)>;

// An oracle is bound to one transition system and owns its counters.
// Witnesses are re-validated by evaluation before they are returned.
class SatOracle
{
 public:
  explicit SatOracle(TransitionSystem ts);
  virtual ~SatOracle() = default;
  SatOracle(const SatOracle &) = delete;
  SatOracle & operator=(const SatOracle &) = delete;

  const TransitionSystem & system() const { return ts_; }
  unsigned n() const { return ts_.n(); }
  virtual std::string backend() const = 0;

  // Init => phi, phi & trans => phi', phi => !Bad, checked in that order.
  InductivenessResult check_inductive(const Formula & phi);
  // Some psi-state reaches Bad within k steps.
  BmcResult bmc_backward(const Formula & psi, Bound k);
  // Some psi-state is reachable from Init within k steps.
  BmcResult bmc_forward(const Formula & psi, Bound k);
  // A transition (s, s') with pre(s), trans and !post(s'). Counted as a
  // SAT call only.
  std::optional<std::pair<State, State>> find_transition(const Formula & pre, const Formula & post);
  // A model of an unprimed formula. Counted as a SAT call only.
  std::optional<State> find_model(const Formula & f);

  // Standing assumptions through the oracle; throws AssumptionError.
  void check_assumptions();

  // A fresh oracle of the same backend for another system.
  virtual std::unique_ptr<SatOracle> clone_for(const TransitionSystem & ts) const = 0;

  const OracleStats & stats() const { return stats_; }
  void absorb(const OracleStats & other) { stats_ += other; }
  void set_query_log(QueryLog log) { log_ = std::move(log); }
  const QueryLog & query_log() const { return log_; }

 protected:
  virtual InductivenessResult do_check_inductive(const Formula & phi) = 0;
  virtual BmcResult do_bmc(const Formula & psi, Bound k, bool backward) = 0;
  virtual std::optional<std::pair<State, State>> do_find_transition(const Formula & pre,
                                                                    const Formula & post) = 0;
  virtual std::optional<State> do_find_model(const Formula & f) = 0;

  TransitionSystem ts_;
  OracleStats stats_;

 private:
  void validate(const Formula & phi, const InductivenessResult & r) const;
  void validate(const Formula & psi, Bound k, bool backward, const BmcResult & r) const;

  QueryLog log_;
};

using OraclePtr = std::unique_ptr<SatOracle>;

// Explicit-state backend. Deterministic: the smallest witness state (by
// code) and a shortest trace from it, first-smallest predecessor choices.
class EnumOracle : public SatOracle
{
 public:
  explicit EnumOracle(const TransitionSystem & ts, EnumerationLimits limits = {});
  EnumOracle(ExplicitSystemPtr es);

  std::string backend() const override { return "enum"; }
  std::unique_ptr<SatOracle> clone_for(const TransitionSystem & ts) const override;
  const ExplicitSystem & explicit_system() const { return *es_; }

 protected:
  InductivenessResult do_check_inductive(const Formula & phi) override;
  BmcResult do_bmc(const Formula & psi, Bound k, bool backward) override;
  std::optional<std::pair<State, State>> do_find_transition(const Formula & pre,
                                                            const Formula & post) override;
  std::optional<State> do_find_model(const Formula & f) override;

 private:
  ExplicitSystemPtr es_;
  EnumerationLimits limits_;
};

// CNF in DIMACS numbering (variables 1..num_vars).
struct TseitinEncoding
{
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<int> var_map;  // formula variable i -> DIMACS variable
};

// Equisatisfiable CNF of an unprimed formula. Conjunctions at the top are
// split and a top-level disjunction becomes one clause, so a clause maps
// to a single clause without auxiliary variables.
TseitinEncoding tseitin(const Formula & f, unsigned n);

std::string to_dimacs(const TseitinEncoding & enc);

// Runs a SAT-competition-style solver on a DIMACS file. Returns a model
// (indexed by DIMACS variable, entry 0 unused) or nullopt when UNSAT.
// Throws BackendError on anything else.
std::optional<std::vector<bool>> run_dimacs_solver(const std::string & command,
                                                   const TseitinEncoding & enc);

// Solver command: FENCEINFER_SOLVER if set, else the explicit command,
// else the bundled fenceinfer-sat.
std::string resolve_solver_command(const std::string & explicit_command = "");

class DimacsOracle : public SatOracle
{
 public:
  explicit DimacsOracle(const TransitionSystem & ts, std::string command = "");

  std::string backend() const override { return "dimacs"; }
  std::unique_ptr<SatOracle> clone_for(const TransitionSystem & ts) const override;
  const std::string & command() const { return command_; }

 protected:
  InductivenessResult do_check_inductive(const Formula & phi) override;
  BmcResult do_bmc(const Formula & psi, Bound k, bool backward) override;
  std::optional<std::pair<State, State>> do_find_transition(const Formula & pre,
                                                            const Formula & post) override;
  std::optional<State> do_find_model(const Formula & f) override;

 private:
  std::optional<std::vector<bool>> solve(const TseitinEncoding & enc);

  std::string command_;
};

enum class Backend
{
  Enum,
  Dimacs
};

Backend parse_backend(const std::string & text);
OraclePtr make_oracle(const TransitionSystem & ts, Backend b, const std::string & solver_cmd = "");

}  // namespace fenceinfer
