#pragma once

#include "ttsec/eval.hpp"

namespace ttsec {

// Raised when erasure meets a label it cannot resolve to a literal.
struct EraseError : std::runtime_error {
  explicit EraseError(const std::string& msg)
      : std::runtime_error("erase: " + msg) {}
};

// Attacker-indexed erasure on elaborated terms: data and computations whose
// label does not flow to the attacker collapse to •; everything else erases
// homomorphically. The result is a term of the extended calculus (it may
// contain • and plug•).
TermPtr erase_term(const LabelAlgebra& alg, const Label& attacker,
                   const TypedTermPtr& t);

// Pointwise store erasure: a segment whose label is invisible becomes
// erased; visible segments erase cell by cell.
Store erase_store(const LabelAlgebra& alg, const Label& attacker,
                  const Store& s);

// Configuration erasure without re-elaboration: the term collapses to •
// when the computation label is secret. Stores are total functions in the
// calculus, so every secret label the configuration mentions gets its
// segment materialized as erased; allocations through it then correctly
// see |•| = •.
struct ErasedConfig {
  Store store;
  TermPtr term;
  TermPtr type;
};
ErasedConfig erase_config_raw(const Label& attacker, const Configuration& c);

// Equality of two erased stores at an attacker level: a segment missing on
// one side counts as erased when its label is invisible, and as empty when
// it is visible.
bool erased_store_equal(const LabelAlgebra& alg, const Label& attacker,
                        const Store& a, const Store& b);

// Full configuration erasure; the erased term is re-elaborated against the
// erased type, so the result can be stepped. A TypeError here means the
// erased term does not type-check in the extended calculus.
Configuration erase_config(const Label& attacker, const Configuration& c,
                           long check_fuel = kDefaultFuel);

// Indistinguishability at the attacker level: erasures structurally equal
// (alpha on terms, segmentwise on stores).
bool low_equiv(const Label& attacker, const Configuration& c1,
               const Configuration& c2);

}  // namespace ttsec
