#pragma once

// Definition processing: the dependency graph with its acyclicity check,
// and round-based evaluation of definitions to a (possibly truncated)
// fixpoint.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "setkr/ast.hpp"
#include "setkr/semantics.hpp"

namespace setkr {

struct DependencyEdge {
  std::string from;  // definition target
  std::string to;    // name its body mentions
  // Edges through a replacement application are exempt from the acyclicity
  // requirement but kept for reporting.
  bool replacement = false;

  bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
  std::set<std::string> vertices;
  std::vector<DependencyEdge> edges;
};

// Vertices are every non-built-in name appearing in the definitions.
DependencyGraph build_dependency_graph(const std::vector<Definition>& defs);

// A cycle over non-replacement edges, as a closed walk of names, or nullopt
// when none exists.
std::optional<std::vector<std::string>> find_definition_cycle(
    const DependencyGraph& graph);

struct EvaluationResult {
  Interpretation interp;
  std::size_t rounds_executed = 0;
  bool fixpoint_reached = false;
};

// Evaluates the knowledge base's definitions on top of the seed bindings.
// A bootstrap pass computes non-replacement content (replacement
// applications contribute nothing yet); each subsequent round recomputes
// non-replacement definitions in dependency order and then applies every
// replacement once, unioning new images into the targets. Extents only
// grow. Stops after max_rounds rounds or when a round changes nothing;
// fixpoint_reached records which. Declared individuals without definitions
// denote atoms named after themselves.
// Throws DuplicateDefinition, RecursiveDefinition, PartialOperator,
// SizeLimitExceeded.
EvaluationResult evaluate(const KnowledgeBase& kb,
                          const EvaluationResult& seed = {},
                          std::size_t max_rounds = 32);

// The members of source_extent whose every grounding of the filter holds:
// copy 1 of the filter's concept is bound to the member, higher copies
// range over the full extent.
Value evaluate_comprehension(const Value& source_extent,
                             const Assertion& filter, const EvalContext& ctx);

// Seed bindings from database-style facts in the assertion list: membership
// facts grow concept extents (declared concepts without definitions start
// at ∅) and operator facts become table entries. Operators declared with
// range Bool are treated closed-world during evaluation (missing rows read
// as ⊥), which is how role tables produced by the description-logic bridge
// stay total.
EvaluationResult seed_from_facts(const KnowledgeBase& kb);

}  // namespace setkr
