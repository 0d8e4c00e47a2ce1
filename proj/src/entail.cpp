#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "setkr/defs_engine.hpp"
#include "setkr/errors.hpp"
#include "setkr/semantics.hpp"

namespace setkr {

std::vector<Value> denotation_pool(const std::vector<Value>& atoms,
                                   std::size_t depth) {
  std::vector<Value> pool = atoms;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  for (std::size_t level = 0; level < depth; ++level) {
    if (pool.size() > 20) {
      throw SizeLimitExceeded("denotation pool of " +
                              std::to_string(pool.size()) +
                              " values is too wide to expand");
    }
    std::vector<Value> next = pool;
    const std::uint64_t subsets = std::uint64_t{1} << pool.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      std::vector<Value> elems;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) elems.push_back(pool[i]);
      }
      next.push_back(Value::set(std::move(elems)));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    pool = std::move(next);
  }
  return pool;
}

namespace {

void collect_assertion_names(const KnowledgeBase& kb, const Assertion& query,
                             std::set<std::string>& atomics,
                             std::set<std::string>& applied) {
  auto walk = [&](const Assertion& a) {
    collect_atomic_names(a.lhs, atomics);
    collect_atomic_names(a.rhs, atomics);
    collect_applied_operators(a.lhs, applied);
    collect_applied_operators(a.rhs, applied);
  };
  for (const AssertionEntry& e : kb.assertions) walk(e.assertion);
  for (const AssertionEntry& e : kb.schema_assertions) walk(e.assertion);
  walk(query);
}

struct TableShape {
  std::string name;
  std::size_t arity = 1;
  bool boolean_range = false;
  std::vector<std::vector<Value>> rows;  // argument tuples, in order
};

}  // namespace

Verdict check_entails(const KnowledgeBase& kb, const Assertion& query,
                      const SearchBound& bound) {
  std::set<std::string> atomics;
  std::set<std::string> applied;
  collect_assertion_names(kb, query, atomics, applied);
  for (const std::string& op : applied) {
    if (!is_builtin_operator(op) && !kb.structure.find_operator(op)) {
      throw UnboundName("operator '" + op + "' is not declared");
    }
  }

  // Free slots of the search: names the definitions do not determine.
  std::set<std::string> free_individuals;
  for (const std::string& n : kb.structure.individuals) {
    if (!kb.find_definition(n)) free_individuals.insert(n);
  }
  for (const std::string& n : atomics) {
    if (!kb.structure.is_concept(n) && !is_numeral(n) &&
        !kb.find_definition(n)) {
      free_individuals.insert(n);
    }
  }
  std::set<std::string> free_concepts;
  for (const std::string& n : kb.structure.concepts) {
    if (!kb.find_definition(n)) free_concepts.insert(n);
  }
  std::vector<std::pair<std::string, const OperatorSig*>> free_operators;
  for (const auto& [name, sig] : kb.structure.operators) {
    if (!is_builtin_operator(name) && !kb.find_definition(name)) {
      free_operators.emplace_back(name, &sig);
    }
  }

  SearchStats stats;
  auto exhausted = [&]() {
    Verdict v;
    v.kind = Verdict::Kind::BoundExhausted;
    v.stats = stats;
    return v;
  };
  // Set when some candidate could not be evaluated within the global value
  // limits. A countermodel found elsewhere still decides the query, but a
  // clean sweep no longer proves it holds.
  bool value_limit_hit = false;

  for (std::size_t size = 1; size <= bound.max_atoms; ++size) {
    std::vector<Value> atoms;
    for (std::size_t i = 1; i <= size; ++i) {
      atoms.push_back(Value::atom("$" + std::to_string(i)));
    }
    std::vector<Value> pool;
    try {
      pool = denotation_pool(atoms, bound.max_depth);
    } catch (const SizeLimitExceeded&) {
      return exhausted();
    }
    std::vector<Value> booleans{Value::top(), Value::bottom()};

    std::vector<TableShape> tables;
    for (const auto& [name, sig] : free_operators) {
      TableShape shape;
      shape.name = name;
      shape.arity = sig->arity();
      shape.boolean_range = sig->range == "Bool";
      std::size_t cells = 1;
      for (std::size_t i = 0; i < shape.arity; ++i) cells *= size;
      if (cells > bound.max_table_cells) return exhausted();
      std::vector<std::size_t> idx(shape.arity, 0);
      for (std::size_t row = 0; row < cells; ++row) {
        std::vector<Value> args;
        for (std::size_t i = 0; i < shape.arity; ++i) {
          args.push_back(atoms[idx[i]]);
        }
        shape.rows.push_back(std::move(args));
        for (std::size_t i = shape.arity; i-- > 0;) {
          if (++idx[i] < size) break;
          idx[i] = 0;
        }
      }
      tables.push_back(std::move(shape));
    }

    // One mixed-radix counter over every free slot; the last slot spins
    // fastest. Concepts use subset masks of the universe atoms.
    std::vector<std::size_t> radix;
    for (std::size_t i = 0; i < free_individuals.size(); ++i) {
      radix.push_back(pool.size());
    }
    for (std::size_t i = 0; i < free_concepts.size(); ++i) {
      radix.push_back(std::size_t{1} << size);
    }
    for (const TableShape& t : tables) {
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        radix.push_back(t.boolean_range ? booleans.size() : pool.size());
      }
    }

    std::vector<std::size_t> digit(radix.size(), 0);
    for (bool more = true; more;) {
      if (++stats.interpretations_checked > bound.max_interps) {
        stats.hit_interpretation_limit = true;
        return exhausted();
      }

      Interpretation base;
      base.universe = atoms;
      std::size_t slot = 0;
      for (const std::string& n : free_individuals) {
        base.individuals[n] = pool[digit[slot++]];
      }
      for (const std::string& n : free_concepts) {
        std::vector<Value> members;
        std::size_t mask = digit[slot++];
        for (std::size_t i = 0; i < size; ++i) {
          if (mask & (std::size_t{1} << i)) members.push_back(atoms[i]);
        }
        base.concepts[n] = Value::set(std::move(members));
      }
      for (const TableShape& t : tables) {
        OperatorTable table;
        table.arity = t.arity;
        for (const auto& row : t.rows) {
          const std::vector<Value>& codomain =
              t.boolean_range ? booleans : pool;
          table.entries[row] = codomain[digit[slot++]];
        }
        base.operators[t.name] = std::move(table);
      }

      try {
        Interpretation full;
        if (kb.definitions.empty()) {
          full = std::move(base);
        } else {
          EvaluationResult seed;
          seed.interp = std::move(base);
          full = evaluate(kb, seed, bound.max_rounds).interp;
        }
        EvalContext ctx{&full, &kb};
        if (models_kb(full, kb) && !models(ctx, query)) {
          Verdict v;
          v.kind = Verdict::Kind::CounterModel;
          v.counter_model = std::move(full);
          v.stats = stats;
          return v;
        }
      } catch (const PartialOperator&) {
        // Candidate leaves an application unresolved: outside the family.
      } catch (const NonSetOperand&) {
      } catch (const NonNumericOperand&) {
      } catch (const MissingExtent&) {
      } catch (const SizeLimitExceeded&) {
        value_limit_hit = true;
      }

      more = false;
      for (std::size_t i = digit.size(); i-- > 0;) {
        if (++digit[i] < radix[i]) {
          more = true;
          break;
        }
        digit[i] = 0;
      }
    }
  }

  if (value_limit_hit) return exhausted();
  Verdict v;
  v.stats = stats;
  return v;
}

// ---------------------------------------------------------------------------
// Database fragment

namespace {

bool fact_shaped_value(const Term& t) {
  return t.kind == TermKind::Atomic || t.kind == TermKind::Literal;
}

// Op(a1, ..., an) = b with atomic arguments, or ∈(a, C) = ⊤ with an atomic
// individual and a declared concept.
bool is_membership_fact(const KnowledgeBase& kb, const Assertion& a) {
  return a.lhs.kind == TermKind::Apply && a.lhs.name == builtin::member_op &&
         a.lhs.args.size() == 2 && a.lhs.args[0].kind == TermKind::Atomic &&
         a.lhs.args[1].kind == TermKind::Atomic &&
         kb.structure.is_concept(a.lhs.args[1].name) &&
         a.rhs.kind == TermKind::Literal && *a.rhs.literal == Value::top();
}

bool is_operator_fact(const Assertion& a) {
  if (a.lhs.kind != TermKind::Apply || is_builtin_operator(a.lhs.name)) {
    return false;
  }
  for (const Term& arg : a.lhs.args) {
    if (arg.kind != TermKind::Atomic) return false;
  }
  return fact_shaped_value(a.rhs);
}

// Fact keys compare by denotation, so `⊤` the literal and a name equal to
// it cannot drift apart.
Value flat_value(const Term& t) {
  if (t.kind == TermKind::Literal) return *t.literal;
  if (is_numeral(t.name)) return nat_value(std::stoull(t.name));
  return Value::atom(t.name);
}

std::string op_key(const std::string& op, const std::vector<Term>& args) {
  std::string key = op;
  for (const Term& arg : args) {
    key += '\x1f';
    key += flat_value(arg).text();
  }
  return key;
}

std::string membership_key(const Term& element, const std::string& concept_name) {
  return flat_value(element).text() + '\x1f' + concept_name;
}

}  // namespace

FragmentClass classify_fragment(const KnowledgeBase& kb) {
  if (!kb.definitions.empty() || !kb.schema_assertions.empty()) {
    return FragmentClass::General;
  }
  for (const AssertionEntry& e : kb.assertions) {
    if (!is_membership_fact(kb, e.assertion) &&
        !is_operator_fact(e.assertion)) {
      return FragmentClass::General;
    }
  }
  return FragmentClass::Database;
}

FactIndex::FactIndex(const KnowledgeBase& kb) {
  if (classify_fragment(kb) != FragmentClass::Database) {
    throw FragmentViolation(
        "knowledge base holds more than ground operator facts and "
        "memberships");
  }
  for (const AssertionEntry& e : kb.assertions) {
    const Assertion& a = e.assertion;
    if (is_membership_fact(kb, a)) {
      memberships_.insert(membership_key(a.lhs.args[0], a.lhs.args[1].name));
    } else {
      op_facts_[op_key(a.lhs.name, a.lhs.args)] = flat_value(a.rhs).text();
    }
    ++count_;
  }
}

bool FactIndex::lookup(const Assertion& query) const {
  if (query.lhs.kind == TermKind::Apply &&
      query.lhs.name == builtin::member_op) {
    if (query.lhs.args.size() == 2 &&
        query.lhs.args[0].kind == TermKind::Atomic &&
        query.lhs.args[1].kind == TermKind::Atomic &&
        query.rhs.kind == TermKind::Literal &&
        *query.rhs.literal == Value::top()) {
      return memberships_.count(
                 membership_key(query.lhs.args[0], query.lhs.args[1].name)) >
             0;
    }
    throw FragmentViolation("membership query must ask a ∈ C = ⊤");
  }
  if (is_operator_fact(query)) {
    auto it = op_facts_.find(op_key(query.lhs.name, query.lhs.args));
    return it != op_facts_.end() && it->second == flat_value(query.rhs).text();
  }
  throw FragmentViolation("query is not a ground fact shape");
}

bool query_database(const KnowledgeBase& kb, const Assertion& query) {
  return FactIndex(kb).lookup(query);
}

}  // namespace setkr
