#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "setkr/defs_engine.hpp"
#include "setkr/dl.hpp"
#include "setkr/parser.hpp"
#include "setkr/semantics.hpp"

#include "gen.hpp"

// Direct model-theoretic reading of the concept language, computed without
// any of the translation machinery. Agreement between this and the
// translated knowledge base is what the tests and the acceptance suite
// establish.
namespace setkr::testing {

struct DlWorld {
  std::set<std::string> individuals;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> roles;
  std::map<std::string, std::set<std::string>> concepts;
};

inline std::set<std::string> extension(const DlExpr& e, const DlWorld& w) {
  auto related = [&](const std::string& x, const std::string& y) {
    auto it = w.roles.find(e.role.name);
    if (it == w.roles.end()) return false;
    return e.role.inverse ? it->second.count({y, x}) > 0
                          : it->second.count({x, y}) > 0;
  };
  std::set<std::string> out;
  switch (e.kind) {
    case DlExprKind::AtomicConcept: {
      if (e.name == dlnames::thing) return w.individuals;
      auto it = w.concepts.find(e.name);
      return it == w.concepts.end() ? out : it->second;
    }
    case DlExprKind::Nominal:
      out.insert(e.name);
      return out;
    case DlExprKind::Intersect: {
      std::set<std::string> a = extension(e.args[0], w);
      for (const std::string& x : extension(e.args[1], w)) {
        if (a.count(x)) out.insert(x);
      }
      return out;
    }
    case DlExprKind::Union: {
      out = extension(e.args[0], w);
      for (const std::string& x : extension(e.args[1], w)) out.insert(x);
      return out;
    }
    case DlExprKind::Complement: {
      std::set<std::string> a = extension(e.args[0], w);
      for (const std::string& x : w.individuals) {
        if (!a.count(x)) out.insert(x);
      }
      return out;
    }
    case DlExprKind::Exists: {
      std::set<std::string> filler = extension(e.args[0], w);
      for (const std::string& x : w.individuals) {
        for (const std::string& y : w.individuals) {
          if (related(x, y) && filler.count(y)) {
            out.insert(x);
            break;
          }
        }
      }
      return out;
    }
    case DlExprKind::ForallR: {
      std::set<std::string> filler = extension(e.args[0], w);
      for (const std::string& x : w.individuals) {
        bool all = true;
        for (const std::string& y : w.individuals) {
          if (related(x, y) && !filler.count(y)) {
            all = false;
            break;
          }
        }
        if (all) out.insert(x);
      }
      return out;
    }
    case DlExprKind::AtLeast: {
      std::set<std::string> filler = extension(e.args[0], w);
      for (const std::string& x : w.individuals) {
        std::size_t hits = 0;
        for (const std::string& y : w.individuals) {
          if (related(x, y) && filler.count(y)) ++hits;
        }
        if (hits >= e.n) out.insert(x);
      }
      return out;
    }
    case DlExprKind::InverseRole:
      break;
  }
  return out;
}

inline Value atoms_value(const std::set<std::string>& names) {
  std::vector<Value> elems;
  for (const std::string& n : names) elems.push_back(Value::atom(n));
  return Value::set(std::move(elems));
}

inline std::vector<DlAxiom> world_abox(const DlWorld& w) {
  std::vector<DlAxiom> axioms;
  for (const auto& [concept_name, members] : w.concepts) {
    for (const std::string& m : members) {
      axioms.push_back(
          DlAxiom::concept_assertion(DlExpr::atomic(concept_name), m));
    }
  }
  for (const auto& [role_name, pairs] : w.roles) {
    for (const auto& [a, b] : pairs) {
      axioms.push_back(DlAxiom::role_assertion({role_name, false}, a, b));
    }
  }
  return axioms;
}

inline DlSignature world_signature(const DlWorld& w) {
  DlSignature sig;
  sig.individuals = w.individuals;
  for (const auto& [name, members] : w.concepts) sig.concepts.insert(name);
  for (const auto& [name, pairs] : w.roles) sig.roles.insert(name);
  return sig;
}

// Translate e over the world's facts and evaluate the resulting knowledge
// base; returns the root concept's extent. The evaluated base is the
// reprinted and reparsed one, so every agreement check also covers the
// concrete syntax of the translation.
inline Value translated_extent(const DlExpr& e, const DlWorld& w) {
  KnowledgeBase kb = dl_base_kb(world_signature(w));
  DlTranslator translator(kb);
  for (const DlAxiom& ax : world_abox(w)) translator.translate_axiom(ax);
  std::string root = translator.translate_expr(e);
  std::vector<Diagnostic> issues = validate_structure(kb);
  if (!issues.empty()) {
    throw std::runtime_error("translated base is ill-formed: " +
                             format(issues.front()));
  }
  ParseResult reparsed = parse_kb(print_kb(kb), "<reprint>");
  if (!reparsed.ok()) {
    throw std::runtime_error("translated base does not reparse: " +
                             format(reparsed.diagnostics.front()));
  }
  EvaluationResult result =
      evaluate(*reparsed.kb, seed_from_facts(*reparsed.kb));
  return result.interp.concepts.at(root);
}

inline DlExpr random_expr(Rng& rng, const std::vector<std::string>& inds,
                          const std::vector<std::string>& concepts,
                          const std::vector<std::string>& roles, int depth) {
  DlRole role{roles[pick(rng, roles.size())], chance(rng, 0.3)};
  switch (depth <= 0 ? pick(rng, 2) : pick(rng, 8)) {
    case 0:
      if (chance(rng, 0.15)) return DlExpr::atomic(dlnames::thing);
      return DlExpr::atomic(concepts[pick(rng, concepts.size())]);
    case 1:
      return DlExpr::nominal(inds[pick(rng, inds.size())]);
    case 2:
      return DlExpr::intersect(
          random_expr(rng, inds, concepts, roles, depth - 1),
          random_expr(rng, inds, concepts, roles, depth - 1));
    case 3:
      return DlExpr::unite(random_expr(rng, inds, concepts, roles, depth - 1),
                           random_expr(rng, inds, concepts, roles, depth - 1));
    case 4:
      return DlExpr::complement(
          random_expr(rng, inds, concepts, roles, depth - 1));
    case 5:
      return DlExpr::exists(role,
                            random_expr(rng, inds, concepts, roles, depth - 1));
    case 6:
      return DlExpr::forall(role,
                            random_expr(rng, inds, concepts, roles, depth - 1));
    default:
      return DlExpr::at_least(
          pick(rng, 3), role,
          random_expr(rng, inds, concepts, roles, depth - 1));
  }
}

inline DlWorld random_world(Rng& rng, const std::vector<std::string>& inds,
                            const std::vector<std::string>& concepts,
                            const std::vector<std::string>& roles) {
  DlWorld world;
  std::size_t count = 1 + pick(rng, inds.size());
  for (std::size_t i = 0; i < count; ++i) world.individuals.insert(inds[i]);
  for (const std::string& c : concepts) {
    world.concepts[c] = {};
    for (const std::string& x : world.individuals) {
      if (chance(rng, 0.4)) world.concepts[c].insert(x);
    }
  }
  for (const std::string& r : roles) {
    world.roles[r] = {};
    for (const std::string& x : world.individuals) {
      for (const std::string& y : world.individuals) {
        if (chance(rng, 0.3)) world.roles[r].emplace(x, y);
      }
    }
  }
  return world;
}

}  // namespace setkr::testing
