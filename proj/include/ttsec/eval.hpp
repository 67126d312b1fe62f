#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttsec/typecheck.hpp"

namespace ttsec {

enum class EvalErrorKind : std::uint8_t {
  Stuck,
  FuelExhausted,
  BadIndex,
  Preservation,
};

struct EvalError : std::runtime_error {
  EvalError(EvalErrorKind kind, const std::string& msg);
  EvalErrorKind kind;
};

// A store cell: the unwrapped value plus its recorded content type. The
// type is bookkeeping for type-driven erasure and never takes part in
// structural comparison.
struct Cell {
  TermPtr value;
  TermPtr type;
};

// One labeled segment: erased (•) or a growable sequence of cells.
struct Segment {
  bool erased = false;
  std::vector<Cell> cells;
};

// Label-compartmentalized store. A missing segment reads as empty.
class Store : public StoreTyping {
 public:
  Segment& segment(const Label& l) { return segments_[l]; }
  const Segment* find(const Label& l) const;
  const std::map<Label, Segment>& segments() const { return segments_; }

  TermPtr cell_type(const Label& l, std::uint64_t n) const override;

 private:
  std::map<Label, Segment> segments_;
};

// Structural equality: same erased flags, same lengths, cell values equal
// up to alpha. Missing segments count as empty.
bool store_equal(const Store& a, const Store& b);

// Compact digest for traces, e.g. "H=2 L=•".
std::string store_digest(const Store& s);

// A monadic configuration: elaborated term of type DIO l tau over a store.
struct Configuration {
  const LabelAlgebra* algebra = nullptr;
  Store store;
  TypedTermPtr term;

  const TermPtr& raw() const { return term->term; }
  const TermPtr& type() const { return term->type; }
};

// Elaborates `term` against `dio_type` (a DIO type) over `store` and wraps
// the result. Throws TypeError on ill-typed input.
Configuration make_config(const LabelAlgebra& alg, Store store, TermPtr term,
                          TermPtr dio_type, long check_fuel = kDefaultFuel);

bool config_equal(const Configuration& a, const Configuration& b);

inline constexpr long kDefaultEvalFuel = 1000000;

struct MonadicStep {
  Configuration next;
  std::string rule;
};

// One monadic step; nullopt when the term is a value. `fuel` counts monadic
// steps, shared with the nested runs that plug performs. The successor is
// re-elaborated against the configuration type; a failure there surfaces as
// EvalError{Preservation}.
std::optional<MonadicStep> monadic_step(const Configuration& c, long& fuel);

// Runs to a value (the term of the result satisfies is_value).
Configuration big_step(Configuration c, long& fuel,
                       std::vector<std::string>* trace = nullptr);

// All monadic rules applicable at c, successors included, for determinacy
// checks. Congruences contribute one entry per applicable inner rule.
struct RuleApplication {
  std::string rule;
  TermPtr term;
  Store store;
};
std::vector<RuleApplication> enumerate_monadic_rules(const Configuration& c,
                                                     long& fuel);

}  // namespace ttsec
