#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttsec/term.hpp"

namespace ttsec {

struct PureStep {
  TermPtr next;
  std::string rule;
};

// One pure reduction step, or nullopt when t is a value. Works on open
// terms: a free variable in head position simply blocks. The hole rule
// (• ⇝ •) is included, so • is not a value. δ-rules for add / concat /
// join fire on literal arguments; join needs the active algebra.
std::optional<PureStep> pure_step(const TermPtr& t, const LabelAlgebra& alg);

// t is a value iff no pure rule applies.
bool is_value(const TermPtr& t, const LabelAlgebra& alg);

// All pure rules applicable at t, for determinacy checks. Congruence rules
// contribute one entry per applicable inner rule.
std::vector<PureStep> enumerate_pure_steps(const TermPtr& t,
                                           const LabelAlgebra& alg);

}  // namespace ttsec
