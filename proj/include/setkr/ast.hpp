#pragma once

// Syntax trees for knowledge bases: declarations, terms, assertions and the
// four definition forms. One Term type covers both ground terms and schema
// terms; a schema term is simply a term with free concept references.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "setkr/value.hpp"

namespace setkr {

struct SourceSpan {
  std::string file = "<input>";
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
};

// file:line:col: severity: message
std::string format(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& ds);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind {
  Atomic,      // a declared individual name, or a numeral
  Literal,     // an anonymous value (empty set, truth atoms, grounded sets)
  ConceptRef,  // a concept copy C^k inside a schema term
  SetLit,      // {t1, ..., tn}, never empty
  TupleLit,    // (t1, ..., tn), n >= 2
  Apply,       // O(t1, ..., tn)
  Compr,       // (C | filter), the members of C passing the filter
};

struct Assertion;

struct Term {
  TermKind kind = TermKind::Atomic;
  std::string name;  // Atomic / ConceptRef / Apply operator / Compr concept
  int copy = 1;      // ConceptRef copy index, 1-based
  std::optional<Value> literal;
  std::vector<Term> args;  // SetLit / TupleLit elements, Apply arguments
  std::shared_ptr<const Assertion> filter;  // Compr

  static Term atomic(std::string name);
  static Term lit(Value v);
  static Term concept_ref(std::string name, int copy = 1);
  static Term set_of(std::vector<Term> elems);  // empty becomes literal ∅
  static Term tuple_of(std::vector<Term> items);
  static Term apply(std::string op, std::vector<Term> args);
  static Term compr(std::string concept_name, Assertion filter);

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
};

struct Assertion {
  Term lhs;
  Term rhs;

  bool operator==(const Assertion& other) const;
  bool operator!=(const Assertion& other) const { return !(*this == other); }
};

// Atomic-like terms: names and literal values.
bool is_flat(const Term& t);
// Flat, or a single application/collection whose children are all flat.
bool is_primitive(const Term& t);
bool is_primitive(const Assertion& a);

// Free concept references, respecting comprehension scoping: a
// comprehension over C binds every copy of C within its filter.
void collect_free_concept_refs(const Term& t,
                               std::set<std::pair<std::string, int>>& out);
void collect_free_concept_refs(const Assertion& a,
                               std::set<std::pair<std::string, int>>& out);
bool is_schema(const Assertion& a);

// Every operator name applied anywhere in the term, and every atomic name.
void collect_applied_operators(const Term& t, std::set<std::string>& out);
void collect_atomic_names(const Term& t, std::set<std::string>& out);

bool is_numeral(const std::string& name);

// ---------------------------------------------------------------------------
// Built-in operators

namespace builtin {
inline constexpr const char* union_op = "∪";      // ∪
inline constexpr const char* intersect_op = "∩";  // ∩
inline constexpr const char* difference_op = "\\";
inline constexpr const char* product_op = "×";  // ×
inline constexpr const char* power_op = "pow";
inline constexpr const char* member_op = "∈";  // ∈
inline constexpr const char* subset_op = "⊆";  // ⊆
inline constexpr const char* card_op = "card";
inline constexpr const char* geq_op = "geq";
inline constexpr const char* eq_op = "=";
}  // namespace builtin

bool is_builtin_operator(const std::string& name);
std::size_t builtin_arity(const std::string& name);
// Built-ins whose results are the truth atoms; bare applications of these
// elaborate to "= ⊤" in assertion position.
bool is_boolean_builtin(const std::string& name);

// ---------------------------------------------------------------------------
// Declarations

struct OperatorSig {
  std::string name;
  std::vector<std::string> domain;  // concept names, one per argument
  std::optional<std::string> range;
  bool infix = false;

  std::size_t arity() const { return domain.size(); }
  bool operator==(const OperatorSig&) const = default;
};

struct SyntacticStructure {
  std::set<std::string> individuals;
  std::set<std::string> concepts;
  std::map<std::string, OperatorSig> operators;

  bool is_individual(const std::string& n) const {
    return individuals.count(n) > 0;
  }
  bool is_concept(const std::string& n) const { return concepts.count(n) > 0; }
  const OperatorSig* find_operator(const std::string& n) const {
    auto it = operators.find(n);
    return it == operators.end() ? nullptr : &it->second;
  }
  bool operator==(const SyntacticStructure&) const = default;
};

// ---------------------------------------------------------------------------
// Definitions

// Set-valued expressions in concept definitions. Replace applies an
// operator to every tuple drawn from its argument collections.
struct ConceptExpr {
  enum class Kind { Name, Members, Union, Intersect, Diff, Product, Power,
                    Replace };
  Kind kind = Kind::Name;
  std::string name;                // Name: concept; Replace: operator
  std::vector<Term> members;       // Members
  std::vector<ConceptExpr> args;   // operation operands / Replace sources

  static ConceptExpr concept_name(std::string n);
  static ConceptExpr members_of(std::vector<Term> ts);
  static ConceptExpr binary(Kind k, ConceptExpr a, ConceptExpr b);
  static ConceptExpr power(ConceptExpr a);
  static ConceptExpr replace(std::string op, std::vector<ConceptExpr> sources);

  bool operator==(const ConceptExpr& other) const;
  bool operator!=(const ConceptExpr& other) const { return !(*this == other); }
};

bool contains_replace(const ConceptExpr& e);

struct IndividualDef {
  std::string target;
  Term body;
  bool operator==(const IndividualDef&) const = default;
};

struct OperatorDef {
  std::string target;
  std::vector<std::pair<std::string, int>> params;  // (concept, copy)
  Term body;                                        // schema term
  bool operator==(const OperatorDef&) const = default;
};

struct ConceptDef {
  std::string target;
  ConceptExpr body;
  bool operator==(const ConceptDef&) const = default;
};

struct ComprehensionDef {
  std::string target;
  std::string source;  // concept the comprehension ranges over
  Assertion filter;
  bool operator==(const ComprehensionDef&) const = default;
};

enum class DefKind { Individual, Operator, Concept, Comprehension };

struct Definition {
  std::variant<IndividualDef, OperatorDef, ConceptDef, ComprehensionDef> node;
  SourceSpan span;

  DefKind kind() const { return static_cast<DefKind>(node.index()); }
  const std::string& target() const;

  // "individual", "operator", "enumeration", "operation", "replacement" or
  // "comprehension"; concept definitions split by their expression shape.
  std::string kind_label() const;

  bool operator==(const Definition& other) const {
    return node == other.node;  // spans are not identity
  }
};

// ---------------------------------------------------------------------------
// Knowledge bases

struct AssertionEntry {
  Assertion assertion;
  SourceSpan span;
  bool operator==(const AssertionEntry& other) const {
    return assertion == other.assertion;
  }
};

struct KnowledgeBase {
  SyntacticStructure structure;
  std::vector<Definition> definitions;
  std::vector<AssertionEntry> assertions;         // ground
  std::vector<AssertionEntry> schema_assertions;  // with free concept refs

  const Definition* find_definition(const std::string& target) const;

  bool operator==(const KnowledgeBase&) const = default;
};

// Structural well-formedness: declared names, arities, definition targets,
// uniqueness, comprehension filters, operator bodies. Returns diagnostics;
// an empty list means the knowledge base is valid.
std::vector<Diagnostic> validate_structure(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Schema grounding

using ConceptExtents = std::map<std::string, Value>;  // name -> set value

// How grounded elements are written back into terms: named atoms become
// individual name references, everything else becomes a literal value.
// LiteralsOnly always writes literals (used internally by model checking).
enum class GroundingStyle { NamedAtoms, LiteralsOnly };

// Calls fn once per grounding of the free concept references, in canonical
// order (pairs sorted, extent elements in value order). Throws MissingExtent
// when a referenced concept has no extent.
void ground_schema(const Assertion& schema, const ConceptExtents& extents,
                   const std::function<void(const Assertion&)>& fn,
                   GroundingStyle style = GroundingStyle::NamedAtoms);
std::vector<Assertion> ground_schema(
    const Assertion& schema, const ConceptExtents& extents,
    GroundingStyle style = GroundingStyle::NamedAtoms);

// Substitute specific concept copies by terms, respecting comprehension
// scoping. Pairs missing from the map are left in place.
Term substitute_concept_refs(
    const Term& t, const std::map<std::pair<std::string, int>, Term>& binding);
Assertion substitute_concept_refs(
    const Assertion& a,
    const std::map<std::pair<std::string, int>, Term>& binding);

}  // namespace setkr
