#pragma once

#include <string>

#include "ttsec/term.hpp"

namespace ttsec {

// Concrete syntax for a term; parse(pretty(t)) is alpha-equivalent to t.
// Output is deterministic: binder display names come from their hints,
// primed as needed to avoid capture.
std::string pretty(const TermPtr& t);

}  // namespace ttsec
