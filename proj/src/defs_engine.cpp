#include "setkr/defs_engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "setkr/errors.hpp"

namespace setkr {

namespace {

// A mention of a name on a definition's right side, with the flag saying
// whether it sits under a replacement application.
using Mention = std::pair<std::string, bool>;

void mention_term(const Term& t, const std::set<std::string>& skip_refs,
                  bool under_replace, std::set<Mention>& out) {
  switch (t.kind) {
    case TermKind::Atomic:
      out.emplace(t.name, under_replace);
      return;
    case TermKind::Literal:
      return;
    case TermKind::ConceptRef:
      if (!skip_refs.count(t.name)) out.emplace(t.name, under_replace);
      return;
    case TermKind::Compr:
      out.emplace(t.name, under_replace);
      mention_term(t.filter->lhs, skip_refs, under_replace, out);
      mention_term(t.filter->rhs, skip_refs, under_replace, out);
      return;
    case TermKind::Apply:
      if (!is_builtin_operator(t.name)) out.emplace(t.name, under_replace);
      [[fallthrough]];
    case TermKind::SetLit:
    case TermKind::TupleLit:
      for (const Term& arg : t.args) {
        mention_term(arg, skip_refs, under_replace, out);
      }
      return;
  }
}

void mention_cexpr(const ConceptExpr& e, bool under_replace,
                   std::set<Mention>& out) {
  switch (e.kind) {
    case ConceptExpr::Kind::Name:
      out.emplace(e.name, under_replace);
      return;
    case ConceptExpr::Kind::Members:
      for (const Term& t : e.members) mention_term(t, {}, under_replace, out);
      return;
    case ConceptExpr::Kind::Replace:
      out.emplace(e.name, true);
      for (const ConceptExpr& src : e.args) mention_cexpr(src, true, out);
      return;
    default:
      for (const ConceptExpr& arg : e.args) {
        mention_cexpr(arg, under_replace, out);
      }
      return;
  }
}

std::set<Mention> mentions_of(const Definition& def) {
  std::set<Mention> out;
  switch (def.kind()) {
    case DefKind::Individual:
      mention_term(std::get<IndividualDef>(def.node).body, {}, false, out);
      break;
    case DefKind::Operator: {
      const auto& d = std::get<OperatorDef>(def.node);
      std::set<std::string> params;
      for (const auto& [concept_name, copy] : d.params) {
        (void)copy;
        params.insert(concept_name);
      }
      mention_term(d.body, params, false, out);
      break;
    }
    case DefKind::Concept:
      mention_cexpr(std::get<ConceptDef>(def.node).body, false, out);
      break;
    case DefKind::Comprehension: {
      const auto& d = std::get<ComprehensionDef>(def.node);
      out.emplace(d.source, false);
      mention_term(d.filter.lhs, {}, false, out);
      mention_term(d.filter.rhs, {}, false, out);
      break;
    }
  }
  return out;
}

}  // namespace

DependencyGraph build_dependency_graph(const std::vector<Definition>& defs) {
  std::set<std::string> targets;
  for (const Definition& d : defs) {
    if (!targets.insert(d.target()).second) {
      throw DuplicateDefinition("duplicate definition of '" + d.target() +
                                "'");
    }
  }

  DependencyGraph g;
  g.vertices = targets;
  std::set<std::tuple<std::string, std::string, bool>> seen;
  for (const Definition& d : defs) {
    for (const auto& [name, under_replace] : mentions_of(d)) {
      g.vertices.insert(name);
      if (seen.emplace(d.target(), name, under_replace).second) {
        g.edges.push_back({d.target(), name, under_replace});
      }
    }
  }
  return g;
}

std::optional<std::vector<std::string>> find_definition_cycle(
    const DependencyGraph& graph) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const DependencyEdge& e : graph.edges) {
    if (!e.replacement) adj[e.from].push_back(e.to);
  }
  for (auto& [from, tos] : adj) std::sort(tos.begin(), tos.end());

  enum class Color { White, Gray, Black };
  std::map<std::string, Color> color;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;

  auto dfs = [&](auto&& self, const std::string& v) -> bool {
    color[v] = Color::Gray;
    stack.push_back(v);
    for (const std::string& w : adj[v]) {
      Color c = color.count(w) ? color[w] : Color::White;
      if (c == Color::Gray) {
        auto start = std::find(stack.begin(), stack.end(), w);
        std::vector<std::string> cycle(start, stack.end());
        cycle.push_back(w);
        found = std::move(cycle);
        return true;
      }
      if (c == Color::White && self(self, w)) return true;
    }
    stack.pop_back();
    color[v] = Color::Black;
    return false;
  };

  for (const std::string& v : graph.vertices) {
    Color c = color.count(v) ? color[v] : Color::White;
    if (c == Color::White && dfs(dfs, v)) return found;
  }
  return std::nullopt;
}

Value evaluate_comprehension(const Value& source_extent,
                             const Assertion& filter, const EvalContext& ctx) {
  if (!source_extent.is_set()) {
    throw NonSetOperand("comprehension source is not a set");
  }

  std::set<std::pair<std::string, int>> refs;
  collect_free_concept_refs(filter, refs);
  std::string source;
  std::vector<int> higher;
  for (const auto& [name, copy] : refs) {
    if (source.empty()) source = name;
    if (name != source) {
      throw BodyMentionsForeignConcept(
          "comprehension filter mentions both '" + source + "' and '" + name +
          "'");
    }
    if (copy >= 2) higher.push_back(copy);
  }

  const std::vector<Value>& pool = source_extent.elements();
  std::vector<Value> kept;
  for (const Value& element : pool) {
    std::map<std::pair<std::string, int>, Term> binding;
    if (refs.count({source, 1})) {
      binding.emplace(std::make_pair(source, 1), Term::lit(element));
    }
    bool passes = true;
    if (higher.empty()) {
      passes = models(ctx, substitute_concept_refs(filter, binding));
    } else {
      // Higher copies are grounded universally over the whole extent.
      std::vector<std::size_t> idx(higher.size(), 0);
      for (;;) {
        auto grounded = binding;
        for (std::size_t i = 0; i < higher.size(); ++i) {
          grounded.emplace(std::make_pair(source, higher[i]),
                           Term::lit(pool[idx[i]]));
        }
        if (!models(ctx, substitute_concept_refs(filter, grounded))) {
          passes = false;
          break;
        }
        std::size_t i = idx.size();
        for (;;) {
          if (i == 0) goto all_groundings_done;
          --i;
          if (++idx[i] < pool.size()) break;
          idx[i] = 0;
        }
      }
    all_groundings_done:;
    }
    if (passes) kept.push_back(element);
  }
  return Value::set(std::move(kept));
}

namespace {

// Evaluates a concept expression; Replace applications either contribute
// nothing (bootstrap) or map the operator over their sources' extents.
enum class ReplaceMode { Skip, Apply };

Value eval_cexpr(const ConceptExpr& e, ReplaceMode mode,
                 const EvalContext& ctx) {
  switch (e.kind) {
    case ConceptExpr::Kind::Name: {
      auto it = ctx.interp->concepts.find(e.name);
      if (it == ctx.interp->concepts.end()) {
        throw MissingExtent("no extent for concept '" + e.name + "'");
      }
      return it->second;
    }
    case ConceptExpr::Kind::Members: {
      std::vector<Value> elems;
      elems.reserve(e.members.size());
      for (const Term& t : e.members) elems.push_back(eval_term(ctx, t));
      return Value::set(std::move(elems));
    }
    case ConceptExpr::Kind::Union:
      return set_union(eval_cexpr(e.args[0], mode, ctx),
                       eval_cexpr(e.args[1], mode, ctx));
    case ConceptExpr::Kind::Intersect:
      return set_intersect(eval_cexpr(e.args[0], mode, ctx),
                           eval_cexpr(e.args[1], mode, ctx));
    case ConceptExpr::Kind::Diff:
      return set_difference(eval_cexpr(e.args[0], mode, ctx),
                            eval_cexpr(e.args[1], mode, ctx));
    case ConceptExpr::Kind::Product:
      return cartesian_product(eval_cexpr(e.args[0], mode, ctx),
                               eval_cexpr(e.args[1], mode, ctx));
    case ConceptExpr::Kind::Power:
      return power_set(eval_cexpr(e.args[0], mode, ctx));
    case ConceptExpr::Kind::Replace: {
      if (mode == ReplaceMode::Skip) return Value::empty_set();
      std::vector<Value> sources;
      sources.reserve(e.args.size());
      for (const ConceptExpr& src : e.args) {
        sources.push_back(eval_cexpr(src, mode, ctx));
        if (!sources.back().is_set()) {
          throw NonSetOperand("replacement source is not a set");
        }
      }
      for (const Value& src : sources) {
        if (src.size() == 0) return Value::empty_set();
      }
      std::vector<Value> image;
      std::vector<std::size_t> idx(sources.size(), 0);
      for (;;) {
        std::vector<Value> args;
        args.reserve(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i) {
          args.push_back(sources[i].elements()[idx[i]]);
        }
        image.push_back(detail::apply_operator(ctx, e.name, args));
        std::size_t i = idx.size();
        for (;;) {
          if (i == 0) return Value::set(std::move(image));
          --i;
          if (++idx[i] < sources[i].size()) break;
          idx[i] = 0;
        }
      }
    }
  }
  throw Error("unreachable concept expression kind");
}

bool is_replacement_class(const Definition& d) {
  return d.kind() == DefKind::Concept &&
         contains_replace(std::get<ConceptDef>(d.node).body);
}

// Topological order of the definitions over non-replacement edges between
// defined targets; ties broken by declaration order.
std::vector<const Definition*> dependency_order(
    const std::vector<Definition>& defs, const DependencyGraph& graph) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < defs.size(); ++i) index[defs[i].target()] = i;

  std::vector<std::set<std::string>> waiting(defs.size());
  for (const DependencyEdge& e : graph.edges) {
    if (e.replacement || e.from == e.to) continue;
    auto from = index.find(e.from);
    auto to = index.find(e.to);
    if (from != index.end() && to != index.end()) {
      waiting[from->second].insert(e.to);
    }
  }

  std::vector<const Definition*> order;
  std::vector<bool> done(defs.size(), false);
  while (order.size() < defs.size()) {
    std::size_t pick = defs.size();
    for (std::size_t i = 0; i < defs.size(); ++i) {
      if (!done[i] && waiting[i].empty()) {
        pick = i;
        break;
      }
    }
    if (pick == defs.size()) {
      throw RecursiveDefinition("definitions do not admit an evaluation "
                                "order");
    }
    done[pick] = true;
    order.push_back(&defs[pick]);
    for (std::size_t i = 0; i < defs.size(); ++i) {
      if (!done[i]) waiting[i].erase(defs[pick].target());
    }
  }
  return order;
}

void compute_definition(const Definition& def, ReplaceMode mode,
                        Interpretation& interp, const EvalContext& ctx) {
  switch (def.kind()) {
    case DefKind::Individual: {
      const auto& d = std::get<IndividualDef>(def.node);
      interp.individuals[d.target] = eval_term(ctx, d.body);
      return;
    }
    case DefKind::Operator:
      return;  // resolved lazily through its body
    case DefKind::Concept: {
      const auto& d = std::get<ConceptDef>(def.node);
      Value v = eval_cexpr(d.body, mode, ctx);
      if (!v.is_set()) {
        throw NonSetOperand("definition of concept '" + d.target +
                            "' is not a set");
      }
      auto it = interp.concepts.find(d.target);
      interp.concepts[d.target] =
          it == interp.concepts.end() ? v : set_union(it->second, v);
      return;
    }
    case DefKind::Comprehension: {
      const auto& d = std::get<ComprehensionDef>(def.node);
      auto src = interp.concepts.find(d.source);
      if (src == interp.concepts.end()) {
        throw MissingExtent("no extent for concept '" + d.source + "'");
      }
      Value v = evaluate_comprehension(src->second, d.filter, ctx);
      auto it = interp.concepts.find(d.target);
      interp.concepts[d.target] =
          it == interp.concepts.end() ? v : set_union(it->second, v);
      return;
    }
  }
}

}  // namespace

EvaluationResult evaluate(const KnowledgeBase& kb,
                          const EvaluationResult& seed,
                          std::size_t max_rounds) {
  DependencyGraph graph = build_dependency_graph(kb.definitions);
  if (auto cycle = find_definition_cycle(graph)) {
    std::string walk;
    for (const std::string& n : *cycle) {
      if (!walk.empty()) walk += " -> ";
      walk += n;
    }
    throw RecursiveDefinition("definition cycle: " + walk);
  }

  EvaluationResult result;
  result.interp = seed.interp;
  Interpretation& interp = result.interp;
  for (const std::string& name : kb.structure.individuals) {
    if (!kb.find_definition(name) && !interp.individuals.count(name)) {
      interp.individuals[name] = Value::atom(name);
    }
  }

  EvalContext ctx{&interp, &kb};
  std::vector<const Definition*> order =
      dependency_order(kb.definitions, graph);

  for (const Definition* def : order) {
    compute_definition(*def, ReplaceMode::Skip, interp, ctx);
  }

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    Interpretation before = interp;
    for (const Definition* def : order) {
      if (!is_replacement_class(*def)) {
        compute_definition(*def, ReplaceMode::Skip, interp, ctx);
      }
    }
    for (const Definition& def : kb.definitions) {
      if (is_replacement_class(def)) {
        compute_definition(def, ReplaceMode::Apply, interp, ctx);
      }
    }
    result.rounds_executed = round;
    if (interp == before) {
      result.fixpoint_reached = true;
      break;
    }
  }
  return result;
}

EvaluationResult seed_from_facts(const KnowledgeBase& kb) {
  EvaluationResult result;
  Interpretation& interp = result.interp;
  for (const std::string& name : kb.structure.individuals) {
    if (!kb.find_definition(name)) {
      interp.individuals[name] = Value::atom(name);
    }
  }
  // Declared concepts start empty: facts grow them, and a concept no fact
  // mentions denotes ∅ rather than being left without an extent.
  for (const std::string& name : kb.structure.concepts) {
    if (!kb.find_definition(name)) {
      interp.concepts[name] = Value::empty_set();
    }
  }

  EvalContext ctx{&interp, &kb};
  for (const AssertionEntry& e : kb.assertions) {
    const Assertion& a = e.assertion;
    if (a.lhs.kind != TermKind::Apply) continue;
    if (a.lhs.name == builtin::member_op) {
      if (a.lhs.args.size() == 2 && a.lhs.args[1].kind == TermKind::Atomic &&
          kb.structure.is_concept(a.lhs.args[1].name) &&
          eval_term(ctx, a.rhs) == Value::top()) {
        const std::string& concept_name = a.lhs.args[1].name;
        Value element = eval_term(ctx, a.lhs.args[0]);
        auto it = interp.concepts.find(concept_name);
        Value current =
            it == interp.concepts.end() ? Value::empty_set() : it->second;
        interp.concepts[concept_name] =
            set_union(current, Value::set({std::move(element)}));
      }
      continue;
    }
    if (is_builtin_operator(a.lhs.name)) continue;
    bool flat_args = true;
    for (const Term& arg : a.lhs.args) flat_args = flat_args && is_flat(arg);
    if (!flat_args || !is_flat(a.rhs)) continue;

    std::vector<Value> key;
    key.reserve(a.lhs.args.size());
    for (const Term& arg : a.lhs.args) key.push_back(eval_term(ctx, arg));
    OperatorTable& table = interp.operators[a.lhs.name];
    table.arity = a.lhs.args.size();
    table.entries[std::move(key)] = eval_term(ctx, a.rhs);
  }
  return result;
}

}  // namespace setkr
