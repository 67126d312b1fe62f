#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttsec/term.hpp"

namespace ttsec {

struct ParseError : std::runtime_error {
  ParseError(std::string file, int line, int col, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                           std::to_string(col) + ": syntax: " + msg),
        file(std::move(file)),
        line(line),
        col(col) {}
  std::string file;
  int line;
  int col;
};

// A #store initializer: segment contents per label, or erased (•).
struct StoreInit {
  Label label;
  bool erased = false;
  std::vector<TermPtr> cells;
};

struct SourceFile {
  TermPtr term;  // root may be an Ascribe node carrying the expected type
  const LabelAlgebra* algebra = nullptr;
  std::vector<StoreInit> store;
};

// Parses directives (#lattice, #store) followed by one term. The default
// lattice is two_point when no directive is present.
SourceFile parse_file(std::string_view text, std::string_view filename = "<input>");

// Parses a single term against a fixed algebra (no directives).
TermPtr parse_term(std::string_view text, const LabelAlgebra& alg,
                   std::string_view filename = "<input>");

// Label syntax as used on the command line: L, H, U(bot), A(1,2), PC(top,2).
Label parse_label(std::string_view text, const LabelAlgebra& alg);

// Store syntax as used by --store: `H=[5,7]; L=[1]`, `H=•`.
std::vector<StoreInit> parse_store_inits(std::string_view text,
                                         const LabelAlgebra& alg);

}  // namespace ttsec
