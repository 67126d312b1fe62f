#pragma once

#include <map>
#include <random>

#include "ttsec/erase.hpp"

namespace ttsec {

struct GenError : std::runtime_error {
  explicit GenError(const std::string& msg)
      : std::runtime_error("generator: " + msg) {}
};

struct GenSpec {
  std::uint64_t seed = 0;
  int max_depth = 4;
  const LabelAlgebra* algebra = &two_point_algebra();
  std::optional<Label> ambient;  // sampled per program when unset
  int secret_sites = 2;          // labeled holes to leave open, at most
};

// A designated secret hole: a free variable of type Labeled label ty.
struct SecretSlot {
  std::string name;
  Label label;
  TermPtr type;  // the payload type
};

// A generated well-typed program: `term` may contain slot variables; its
// type is DIO ambient tau; `store` seeds the segments the program touches.
struct GenProgram {
  TermPtr term;
  TermPtr type;
  Label ambient;
  std::vector<SecretSlot> slots;
  Store store;
  int retries = 0;  // re-generation rounds before elaboration accepted it
};

class Generator {
 public:
  explicit Generator(GenSpec spec);

  // Deterministic per seed; elaborates the candidate and retries on a
  // checker rejection (a retry indicates a generator bug and is counted).
  GenProgram next_program();

  // Slots filled with fresh closed values; ready to run.
  Configuration close(const GenProgram& p);

  // Two configurations identical below the attacker: slots and store cells
  // at invisible labels differ, everything else matches.
  std::pair<Configuration, Configuration> low_pair(const GenProgram& p,
                                                   const Label& attacker);

  std::mt19937_64& rng() { return rng_; }

 private:
  GenSpec spec_;
  std::mt19937_64 rng_;
};

// Fills the slots of `p` with the given closed labeled values (one per
// slot, in order) over the given store, producing a configuration.
Configuration fill_slots(const LabelAlgebra& alg, const GenProgram& p,
                         const std::vector<TermPtr>& fills, Store store);

// Arbitrary syntactic (not necessarily well-typed) terms for grammar
// round-trip properties.
TermPtr syntax_term(std::mt19937_64& rng, int depth);

// ---------------------------------------------------------------------------
// Property checks

struct CheckReport {
  std::string property;
  long cases = 0;
  long failures = 0;
  long excluded = 0;   // fuel-excluded runs (progress-insensitivity)
  long recheck_failures = 0;  // erased terms rejected by the checker
  std::vector<std::string> details;  // first few failure descriptions

  void fail(std::string why);
  std::string csv() const;    // property,cases,failures,excluded
  std::string table() const;  // human-readable row
};

// One step, then erase, against erase, then one step; structural equality.
// Vacuous (nullopt) when c has no step.
std::optional<std::string> check_simulation(const Label& attacker,
                                            const Configuration& c,
                                            long fuel);

enum class PiniOutcome { Pass, Excluded, Fail };
struct PiniResult {
  PiniOutcome outcome;
  std::string detail;
};
PiniResult check_pini(const Label& attacker, const Configuration& c1,
                      const Configuration& c2, long fuel);

std::optional<std::string> check_determinacy(const Configuration& c,
                                             long fuel);

// erase(t[v/x]) equals erase(t)[erase(v)/x]; t is typed under x, v closed.
std::optional<std::string> check_erase_subst(const Label& attacker,
                                             const Context& ctx,
                                             const TypedTermPtr& t,
                                             const TypedTermPtr& v,
                                             const std::string& x);

// ---------------------------------------------------------------------------
// Drivers: generate `count` cases and run one property over them.

struct HarnessOptions {
  const LabelAlgebra* algebra = &two_point_algebra();
  std::uint64_t seed = 0;
  long count = 100;
  long fuel = kDefaultEvalFuel;
  int max_depth = 4;
  std::optional<Label> attacker;  // default: every label in the sample
  int secret_sites = 2;
};

// Recognized properties: simulation, pini, determinacy, erase-subst,
// preservation, roundtrip. Throws std::invalid_argument otherwise.
CheckReport run_property(const std::string& property,
                         const HarnessOptions& opts);

// Fraction of generated traces in which each monadic rule fires at least
// once (rule name -> trace count), plus the trace total.
struct RuleCoverage {
  std::map<std::string, long> traces_with_rule;
  long traces = 0;
};
RuleCoverage run_coverage(const HarnessOptions& opts);

}  // namespace ttsec
