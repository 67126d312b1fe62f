#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttsec/step.hpp"
#include "ttsec/term.hpp"

namespace ttsec {

enum class TypeErrorKind : std::uint8_t {
  Mismatch,
  UnboundVariable,
  FlowViolation,
  NotAFunction,
  FuelExhausted,
  UnresolvedLabel,
};

std::string_view kind_name(TypeErrorKind k);

struct TypeError : std::runtime_error {
  TypeError(TypeErrorKind kind, std::string msg, TermPtr offending = nullptr,
            TermPtr expected = nullptr, TermPtr actual = nullptr);
  TypeErrorKind kind;
  TermPtr offending;
  TermPtr expected;
  TermPtr actual;
  SrcLoc loc{};
};

// Types for store cells, so references can be typed outside check mode.
class StoreTyping {
 public:
  virtual ~StoreTyping() = default;
  // nullptr when the cell is unknown (missing or erased segment).
  virtual TermPtr cell_type(const Label& l, std::uint64_t n) const = 0;
};

// Typing context: ordered bindings, the equational assumptions introduced
// by conditionals (oriented scrutinee -> true/false rewrites, consulted
// during conversion), the active label algebra, and the ambient computation
// label used when no expected type determines one.
class Context {
 public:
  explicit Context(const LabelAlgebra& alg) : alg_(&alg) {}

  const LabelAlgebra& algebra() const { return *alg_; }

  Context bind(std::string name, TermPtr type) const;
  Context assume(TermPtr from, TermPtr to) const;
  Context with_ambient(TermPtr label) const;
  Context without_ambient() const;
  Context with_store_typing(const StoreTyping* st) const;

  TermPtr lookup(const std::string& name) const;  // nullptr when unbound
  const TermPtr& ambient() const { return ambient_; }
  const StoreTyping* store_typing() const { return store_; }

  struct Rewrite {
    TermPtr from;
    TermPtr to;
  };
  const std::vector<Rewrite>& rewrites() const { return rewrites_; }

 private:
  const LabelAlgebra* alg_;
  std::vector<std::pair<std::string, TermPtr>> bindings_;
  std::vector<Rewrite> rewrites_;
  TermPtr ambient_;
  const StoreTyping* store_ = nullptr;
};

// Elaborated term: the raw node, its type in normal form, and typed views
// of the children (same arity and order as term->kids).
struct TypedTerm;
using TypedTermPtr = std::shared_ptr<const TypedTerm>;

struct TypedTerm {
  TermPtr term;
  TermPtr type;
  std::vector<TypedTermPtr> kids;
};

inline constexpr long kDefaultFuel = 100000;

// β/δ/ι normal form, reducing under binders; leftmost-outermost. • is kept
// as-is (its self-step never reaches a normal form). Throws FuelExhausted.
TermPtr normalize(const Context& ctx, const TermPtr& t, long fuel = kDefaultFuel);

// Conversion: normal forms equal up to alpha, with the context's
// assumptions applied as left-to-right rewrites.
bool convertible(const Context& ctx, const TermPtr& a, const TermPtr& b,
                 long fuel = kDefaultFuel);

// Cumulativity: conversion, or pointwise on dependent function types
// (domains convertible, codomains cumulatively related).
bool cumul(const Context& ctx, const TermPtr& a, const TermPtr& b,
           long fuel = kDefaultFuel);

// The flow judgment l1 ⊑ l2. Closed labels are decided by the algebra;
// open ones by a deliberately incomplete symbolic rule set (reflexivity,
// x ⊑ join x y, bottom ⊑ x, and join a b ⊑ c when both components flow).
// Undecided flows return false.
bool flow(const Context& ctx, const TermPtr& l1, const TermPtr& l2,
          long fuel = kDefaultFuel);

// Type inference; returns the type in normal form.
TermPtr infer(const Context& ctx, const TermPtr& t, long fuel = kDefaultFuel);

// Elaboration. The two-argument form infers; the expected form checks
// against the given type. Ascriptions are consumed here and do not appear
// in the result.
TypedTermPtr elaborate(const Context& ctx, const TermPtr& t,
                       long fuel = kDefaultFuel);
TypedTermPtr elaborate_against(const Context& ctx, const TermPtr& t,
                               const TermPtr& expected,
                               long fuel = kDefaultFuel);

// Splits a normalized DIO type into label and result type; nullopt if the
// type is not of that shape.
std::optional<std::pair<TermPtr, TermPtr>> split_dio(const TermPtr& type);

// The label literal of a normalized label term; nullopt when open.
std::optional<Label> closed_label(const TermPtr& label_term);

}  // namespace ttsec
