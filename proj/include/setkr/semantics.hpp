#pragma once

// Finite interpretations and model checking: term denotation, assertion
// satisfaction, bounded entailment by interpretation enumeration, and the
// closed-world database fragment.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "setkr/ast.hpp"
#include "setkr/value.hpp"

namespace setkr {

struct OperatorTable {
  std::size_t arity = 1;
  std::map<std::vector<Value>, Value> entries;

  bool operator==(const OperatorTable&) const = default;
};

struct Interpretation {
  std::vector<Value> universe;  // domain atoms; empty for pure binding maps
  std::map<std::string, Value> individuals;
  std::map<std::string, Value> concepts;  // name -> set value
  std::map<std::string, OperatorTable> operators;

  bool operator==(const Interpretation&) const = default;
};

struct EvalContext {
  const Interpretation* interp = nullptr;
  // Optional knowledge base supplying declarations and operator definition
  // bodies for application resolution.
  const KnowledgeBase* kb = nullptr;
};

// Denotation of a ground term. Atomic names resolve to the individual
// binding, then to the concept extent read as a set-valued individual;
// numerals denote themselves. Operator applications resolve against the
// table, then a definition body, then the built-ins. A non-built-in
// operator applied to concept names denotes the image of their extents.
// Throws UnboundName / PartialOperator / NonSetOperand as appropriate.
Value eval_term(const EvalContext& ctx, const Term& t);

bool models(const EvalContext& ctx, const Assertion& a);
bool models(const Interpretation& interp, const Assertion& a);

namespace detail {
// Shared application resolver: table entry, then operator definition body,
// then built-in; operators declared with range Bool fall back to ⊥ for
// missing rows (closed-world tables). Throws PartialOperator otherwise.
Value apply_operator(const EvalContext& ctx, const std::string& op,
                     const std::vector<Value>& args);
}  // namespace detail

struct KbCheck {
  bool ok = true;
  std::optional<Assertion> first_failure;  // grounded form when schema
};

// Satisfaction of every assertion and every grounding of every schema
// assertion; stops at the first failure.
KbCheck check_kb(const Interpretation& interp, const KnowledgeBase& kb);
bool models_kb(const Interpretation& interp, const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Bounded entailment

struct SearchBound {
  std::size_t max_atoms = 3;  // universe sizes 1..max_atoms are searched
  std::size_t max_depth = 2;  // nesting depth of candidate denotations
  // Upper bound on atoms^arity, the number of rows an enumerated operator
  // table may need.
  std::size_t max_table_cells = 9;
  // Abort with BoundExhausted after this many interpretations.
  std::uint64_t max_interps = 2'000'000;
  // Rounds for evaluating definitions inside each candidate interpretation.
  std::size_t max_rounds = 32;
};

struct SearchStats {
  std::uint64_t interpretations_checked = 0;
  bool hit_interpretation_limit = false;
};

struct Verdict {
  enum class Kind { Holds, CounterModel, BoundExhausted };
  Kind kind = Kind::Holds;
  std::optional<Interpretation> counter_model;
  SearchStats stats;
};

// Does every bounded interpretation satisfying the knowledge base satisfy
// the query? Individuals without definitions range over the bounded value
// pool (maps need not be injective), concepts without definitions over the
// subsets of the universe atoms, and operators without definitions over
// total tables on atom tuples ({⊤, ⊥}-valued when declared with range
// Bool). Candidates that type-break a set operation or leave an operator
// row unresolved fall outside the searched family and are skipped.
// Candidates whose evaluation overruns the global value limits (for
// example, definitions that deepen past the nesting cap within max_rounds)
// cannot be checked at all: a countermodel found elsewhere still decides
// the query, but without one the verdict degrades to BoundExhausted rather
// than a vacuous Holds. Enumeration order is fixed, so the first
// countermodel is deterministic.
Verdict check_entails(const KnowledgeBase& kb, const Assertion& query,
                      const SearchBound& bound = {});

// The candidate denotation pool used by the search: the given atoms plus
// every set formable from them within `depth` nesting levels, in value
// order. Tuple-valued candidates are not enumerated (their lengths are
// unbounded). Exposed for tests.
std::vector<Value> denotation_pool(const std::vector<Value>& atoms,
                                   std::size_t depth);

// ---------------------------------------------------------------------------
// Database fragment

enum class FragmentClass { Database, General };

// Database knowledge bases contain only ground facts: a non-built-in
// operator applied to atomic individuals equated with an atomic individual,
// or a membership of an atomic individual in a concept. No definitions, no
// schema assertions.
FragmentClass classify_fragment(const KnowledgeBase& kb);

// Hash index over a database-fragment knowledge base; answers queries by
// closed-world lookup in time independent of the fact count.
class FactIndex {
 public:
  explicit FactIndex(const KnowledgeBase& kb);  // throws FragmentViolation

  // True when the queried fact is asserted. Operator queries with the same
  // arguments but a different result, and memberships never asserted, are
  // false. Throws FragmentViolation for queries outside the fragment.
  bool lookup(const Assertion& query) const;

  std::size_t fact_count() const { return count_; }

 private:
  std::unordered_map<std::string, std::string> op_facts_;
  std::unordered_set<std::string> memberships_;
  std::size_t count_ = 0;
};

bool query_database(const KnowledgeBase& kb, const Assertion& query);

}  // namespace setkr
