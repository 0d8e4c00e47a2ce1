#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "setkr/defs_engine.hpp"
#include "setkr/errors.hpp"
#include "setkr/semantics.hpp"

namespace setkr {

namespace {

std::string render_application(const std::string& op,
                               const std::vector<Value>& args) {
  std::ostringstream os;
  os << op << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    os << args[i].text();
  }
  os << ")";
  return os.str();
}

Value truth(bool b) { return b ? Value::top() : Value::bottom(); }

Value apply_builtin(const std::string& op, const std::vector<Value>& args) {
  if (args.size() != builtin_arity(op)) {
    throw PartialOperator("'" + op + "' expects " +
                          std::to_string(builtin_arity(op)) +
                          " arguments, got " + std::to_string(args.size()));
  }
  if (op == builtin::union_op) return set_union(args[0], args[1]);
  if (op == builtin::intersect_op) return set_intersect(args[0], args[1]);
  if (op == builtin::difference_op) return set_difference(args[0], args[1]);
  if (op == builtin::product_op) return cartesian_product(args[0], args[1]);
  if (op == builtin::power_op) return power_set(args[0]);
  if (op == builtin::member_op) return truth(member(args[0], args[1]));
  if (op == builtin::subset_op) return truth(subset(args[0], args[1]));
  if (op == builtin::card_op) return nat_value(cardinality(args[0]));
  if (op == builtin::eq_op) return truth(args[0] == args[1]);
  if (op == builtin::geq_op) {
    auto a = nat_of(args[0]);
    auto b = nat_of(args[1]);
    if (!a || !b) {
      throw NonNumericOperand(std::string("'") + builtin::geq_op +
                              "' compares naturals, got " + args[0].text() +
                              " and " + args[1].text());
    }
    return truth(*a >= *b);
  }
  throw PartialOperator("unknown built-in '" + op + "'");
}

// Guards operator-definition expansion against definition sets whose call
// graph recurses (the dependency check only covers evaluate()'s entry).
struct ExpansionGuard {
  static thread_local std::size_t depth;
  ExpansionGuard(const std::string& op) {
    if (++depth > 256) {
      --depth;
      throw RecursiveDefinition("operator definitions recurse applying '" +
                                op + "'");
    }
  }
  ~ExpansionGuard() { --depth; }
};

thread_local std::size_t ExpansionGuard::depth = 0;

}  // namespace

namespace detail {

Value apply_operator(const EvalContext& ctx, const std::string& op,
                     const std::vector<Value>& args) {
  if (is_builtin_operator(op)) return apply_builtin(op, args);

  if (ctx.interp) {
    auto table = ctx.interp->operators.find(op);
    if (table != ctx.interp->operators.end()) {
      auto row = table->second.entries.find(args);
      if (row != table->second.entries.end()) return row->second;
    }
  }

  if (ctx.kb) {
    const Definition* def = ctx.kb->find_definition(op);
    if (def && def->kind() == DefKind::Operator) {
      const auto& d = std::get<OperatorDef>(def->node);
      if (d.params.size() != args.size()) {
        throw PartialOperator("'" + op + "' is defined with " +
                              std::to_string(d.params.size()) +
                              " parameters but applied to " +
                              std::to_string(args.size()) + " arguments");
      }
      std::map<std::pair<std::string, int>, Term> binding;
      for (std::size_t i = 0; i < args.size(); ++i) {
        binding.emplace(d.params[i], Term::lit(args[i]));
      }
      ExpansionGuard guard(op);
      return eval_term(ctx, substitute_concept_refs(d.body, binding));
    }
    const OperatorSig* sig = ctx.kb->structure.find_operator(op);
    if (sig && sig->range == "Bool") return Value::bottom();
  }

  throw PartialOperator("no value for " + render_application(op, args));
}

}  // namespace detail

Value eval_term(const EvalContext& ctx, const Term& t) {
  switch (t.kind) {
    case TermKind::Atomic: {
      if (ctx.interp) {
        auto ind = ctx.interp->individuals.find(t.name);
        if (ind != ctx.interp->individuals.end()) return ind->second;
        auto con = ctx.interp->concepts.find(t.name);
        if (con != ctx.interp->concepts.end()) return con->second;
      }
      if (is_numeral(t.name)) return nat_value(std::stoull(t.name));
      throw UnboundName("name '" + t.name + "' has no interpretation");
    }
    case TermKind::Literal:
      return *t.literal;
    case TermKind::ConceptRef:
      throw UnboundName("unsubstituted concept reference '" + t.name + "^" +
                        std::to_string(t.copy) + "'");
    case TermKind::SetLit: {
      std::vector<Value> elems;
      elems.reserve(t.args.size());
      for (const Term& arg : t.args) elems.push_back(eval_term(ctx, arg));
      return Value::set(std::move(elems));
    }
    case TermKind::TupleLit: {
      std::vector<Value> items;
      items.reserve(t.args.size());
      for (const Term& arg : t.args) items.push_back(eval_term(ctx, arg));
      return Value::tuple(std::move(items));
    }
    case TermKind::Compr: {
      if (!ctx.interp) throw UnboundName("no interpretation in scope");
      auto con = ctx.interp->concepts.find(t.name);
      if (con == ctx.interp->concepts.end()) {
        throw MissingExtent("no extent for concept '" + t.name + "'");
      }
      return evaluate_comprehension(con->second, *t.filter, ctx);
    }
    case TermKind::Apply: {
      // A non-built-in operator applied to concept names maps over their
      // extents; every other argument contributes its plain value.
      std::vector<std::optional<Value>> fixed(t.args.size());
      std::vector<std::size_t> ranging;
      std::vector<const std::vector<Value>*> pools;
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        const Term& arg = t.args[i];
        if (!is_builtin_operator(t.name) && arg.kind == TermKind::Atomic &&
            ctx.interp && !ctx.interp->individuals.count(arg.name)) {
          auto con = ctx.interp->concepts.find(arg.name);
          if (con != ctx.interp->concepts.end()) {
            if (!con->second.is_set()) {
              throw NonSetOperand("extent of '" + arg.name +
                                  "' is not a set");
            }
            ranging.push_back(i);
            pools.push_back(&con->second.elements());
            continue;
          }
        }
        fixed[i] = eval_term(ctx, arg);
      }

      if (ranging.empty()) {
        std::vector<Value> args;
        args.reserve(fixed.size());
        for (auto& v : fixed) args.push_back(std::move(*v));
        return detail::apply_operator(ctx, t.name, args);
      }

      for (const auto* pool : pools) {
        if (pool->empty()) return Value::empty_set();
      }
      std::vector<Value> image;
      std::vector<std::size_t> idx(ranging.size(), 0);
      for (;;) {
        std::vector<Value> args;
        args.reserve(t.args.size());
        for (std::size_t i = 0, r = 0; i < t.args.size(); ++i) {
          if (r < ranging.size() && ranging[r] == i) {
            args.push_back((*pools[r])[idx[r]]);
            ++r;
          } else {
            args.push_back(*fixed[i]);
          }
        }
        image.push_back(detail::apply_operator(ctx, t.name, args));
        std::size_t i = idx.size();
        for (;;) {
          if (i == 0) return Value::set(std::move(image));
          --i;
          if (++idx[i] < pools[i]->size()) break;
          idx[i] = 0;
        }
      }
    }
  }
  throw Error("unreachable term kind");
}

bool models(const EvalContext& ctx, const Assertion& a) {
  return eval_term(ctx, a.lhs) == eval_term(ctx, a.rhs);
}

bool models(const Interpretation& interp, const Assertion& a) {
  EvalContext ctx{&interp, nullptr};
  return models(ctx, a);
}

namespace {

struct FoundFailure {
  Assertion grounded;
};

}  // namespace

KbCheck check_kb(const Interpretation& interp, const KnowledgeBase& kb) {
  EvalContext ctx{&interp, &kb};
  for (const AssertionEntry& e : kb.assertions) {
    if (!models(ctx, e.assertion)) return {false, e.assertion};
  }
  try {
    for (const AssertionEntry& e : kb.schema_assertions) {
      ground_schema(
          e.assertion, interp.concepts,
          [&](const Assertion& grounded) {
            if (!models(ctx, grounded)) throw FoundFailure{grounded};
          },
          GroundingStyle::LiteralsOnly);
    }
  } catch (const FoundFailure& f) {
    return {false, f.grounded};
  }
  return {};
}

bool models_kb(const Interpretation& interp, const KnowledgeBase& kb) {
  return check_kb(interp, kb).ok;
}

}  // namespace setkr
