#pragma once

#include <optional>
#include <string>
#include <vector>

#include "setkr/ast.hpp"

namespace setkr {

struct ParseResult {
  std::optional<KnowledgeBase> kb;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return kb.has_value(); }
};

// Parses a whole .skr source. Statements resynchronize at ';', so several
// errors can be reported in one pass. A failed parse never yields a
// partial knowledge base.
ParseResult parse_kb(const std::string& source,
                     const std::string& filename = "<input>");

struct AssertionParse {
  std::optional<Assertion> assertion;
  bool schema = false;  // carries free concept copies
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return assertion.has_value(); }
};

// Parses a single assertion, with logic sugar (not/and/or/implies/equiv,
// quantifiers, !=, comma lists) lowered on the spot. A structure enables
// name checking, user infix operators, and truth-valued elaboration of
// bare applications; without one only built-ins get that treatment.
AssertionParse parse_assertion(const std::string& source,
                               const std::string& filename = "<input>",
                               const SyntacticStructure* structure = nullptr);

// Canonical text forms. parse(print(x)) == x holds for every AST the
// parser itself produces (literals beyond ∅, ⊤, ⊥ only arise from
// programmatic construction and print as their value text).
std::string print_term(const Term& t);
std::string print_assertion(const Assertion& a);
std::string print_concept_expr(const ConceptExpr& e);
std::string print_definition(const Definition& d);
std::string print_kb(const KnowledgeBase& kb);

}  // namespace setkr
