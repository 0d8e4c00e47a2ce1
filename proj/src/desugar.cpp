#include "setkr/desugar.hpp"

#include <deque>
#include <utility>

#include "setkr/errors.hpp"

namespace setkr {

Formula Formula::make_prim(Assertion a) {
  Formula f;
  f.kind = Kind::Prim;
  f.prim = std::move(a);
  return f;
}

Formula Formula::make_multi(std::vector<Formula> parts) {
  if (parts.empty()) throw Error("multi-assertion needs at least one part");
  Formula f;
  f.kind = Kind::Multi;
  f.kids = std::move(parts);
  return f;
}

Formula Formula::make_not(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.kids.push_back(std::move(inner));
  return f;
}

Formula Formula::make_binary(Kind k, Formula a, Formula b) {
  Formula f;
  f.kind = k;
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}

Formula Formula::make_quantifier(Kind k, std::string bound_concept,
                                 Assertion body) {
  Formula f;
  f.kind = k;
  f.bound = std::move(bound_concept);
  f.body = std::move(body);
  return f;
}

bool Formula::operator==(const Formula& o) const {
  return kind == o.kind && prim == o.prim && kids == o.kids &&
         bound == o.bound && body == o.body;
}

FreshNamer::FreshNamer(std::string prefix, std::set<std::string> taken)
    : prefix_(std::move(prefix)), taken_(std::move(taken)) {}

FreshNamer::FreshNamer(const KnowledgeBase& kb, std::string prefix)
    : prefix_(std::move(prefix)) {
  taken_ = kb.structure.individuals;
  taken_.insert(kb.structure.concepts.begin(), kb.structure.concepts.end());
  for (const auto& [name, sig] : kb.structure.operators) taken_.insert(name);
  for (const Definition& d : kb.definitions) taken_.insert(d.target());
}

std::string FreshNamer::fresh() {
  for (;;) {
    std::string name = prefix_ + std::to_string(++counter_);
    if (!taken_.count(name)) return name;
  }
}

Assertion desugar_multi(const std::vector<Assertion>& asserts) {
  if (asserts.empty()) throw Error("multi-assertion needs at least one part");
  if (asserts.size() == 1) return asserts.front();
  std::vector<Term> lhs, rhs;
  lhs.reserve(asserts.size());
  rhs.reserve(asserts.size());
  for (const Assertion& a : asserts) {
    lhs.push_back(a.lhs);
    rhs.push_back(a.rhs);
  }
  return {Term::tuple_of(std::move(lhs)), Term::tuple_of(std::move(rhs))};
}

namespace {

bool has_extractable_args(const Term& t) {
  return t.kind == TermKind::Apply || t.kind == TermKind::SetLit ||
         t.kind == TermKind::TupleLit;
}

}  // namespace

std::vector<Assertion> flatten_nested(const Assertion& a, FreshNamer& namer) {
  std::deque<std::pair<std::string, Term>> pending;
  auto shallow = [&](Term t) -> Term {
    if (has_extractable_args(t)) {
      for (Term& arg : t.args) {
        if (!is_flat(arg)) {
          std::string name = namer.fresh();
          pending.emplace_back(name, std::move(arg));
          arg = Term::atomic(name);
        }
      }
    }
    return t;
  };

  std::vector<Assertion> out;
  out.push_back({shallow(a.lhs), shallow(a.rhs)});
  while (!pending.empty()) {
    auto [name, compound] = std::move(pending.front());
    pending.pop_front();
    out.push_back({Term::atomic(name), shallow(std::move(compound))});
  }
  return out;
}

namespace {

Term singleton(Term t) { return Term::set_of({std::move(t)}); }

Term isect(Term a, Term b) {
  return Term::apply(builtin::intersect_op, {std::move(a), std::move(b)});
}

Term setunion(Term a, Term b) {
  return Term::apply(builtin::union_op, {std::move(a), std::move(b)});
}

Term diff(Term a, Term b) {
  return Term::apply(builtin::difference_op, {std::move(a), std::move(b)});
}

Term empty_lit() { return Term::lit(Value::empty_set()); }

// {a} ∩ {a'} = ∅
Assertion encode_not(const Assertion& a) {
  return {isect(singleton(a.lhs), singleton(a.rhs)), empty_lit()};
}

// X ≠ ∅, spelled through the negation encoding: {X} ∩ {∅} = ∅
Assertion encode_nonempty(Term x) {
  return encode_not({std::move(x), empty_lit()});
}

// ({a}∩{a'}) ∪ ({b}∩{b'})
Term conjunction_lhs(const Assertion& a, const Assertion& b) {
  return setunion(isect(singleton(a.lhs), singleton(a.rhs)),
                  isect(singleton(b.lhs), singleton(b.rhs)));
}

Assertion encode_and(const Assertion& a, const Assertion& b) {
  return {conjunction_lhs(a, b),
          Term::set_of({a.lhs, a.rhs, b.lhs, b.rhs})};
}

Assertion encode_or(const Assertion& a, const Assertion& b) {
  return encode_nonempty(conjunction_lhs(a, b));
}

// ({a,a'} \ ({a}∩{a'})) ∪ ({b}∩{b'}) ≠ ∅
Assertion encode_implies(const Assertion& a, const Assertion& b) {
  Term antecedent = diff(Term::set_of({a.lhs, a.rhs}),
                         isect(singleton(a.lhs), singleton(a.rhs)));
  return encode_nonempty(
      setunion(std::move(antecedent), isect(singleton(b.lhs), singleton(b.rhs))));
}

}  // namespace

Assertion desugar_logic(const Formula& f, FreshNamer& namer) {
  switch (f.kind) {
    case Formula::Kind::Prim:
      return f.prim;
    case Formula::Kind::Multi: {
      std::vector<Assertion> parts;
      parts.reserve(f.kids.size());
      for (const Formula& kid : f.kids)
        parts.push_back(desugar_logic(kid, namer));
      return desugar_multi(parts);
    }
    case Formula::Kind::Not:
      return encode_not(desugar_logic(f.kids[0], namer));
    case Formula::Kind::And:
      return encode_and(desugar_logic(f.kids[0], namer),
                        desugar_logic(f.kids[1], namer));
    case Formula::Kind::Or:
      return encode_or(desugar_logic(f.kids[0], namer),
                       desugar_logic(f.kids[1], namer));
    case Formula::Kind::Implies:
      return encode_implies(desugar_logic(f.kids[0], namer),
                            desugar_logic(f.kids[1], namer));
    case Formula::Kind::Equiv: {
      Assertion a = desugar_logic(f.kids[0], namer);
      Assertion b = desugar_logic(f.kids[1], namer);
      return encode_and(encode_implies(a, b), encode_implies(b, a));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw Error("quantifier reached connective lowering");
  }
  throw Error("unreachable formula kind");
}

Assertion desugar_quantifier(const Formula& f) {
  std::set<std::pair<std::string, int>> refs;
  collect_free_concept_refs(f.body, refs);
  for (const auto& r : refs) {
    if (r.first != f.bound) {
      throw BodyMentionsForeignConcept("quantifier over '" + f.bound +
                                       "' mentions concept '" + r.first + "'");
    }
  }
  Term selected = Term::compr(f.bound, f.body);
  if (f.kind == Formula::Kind::Forall) {
    return {std::move(selected), Term::atomic(f.bound)};
  }
  if (f.kind == Formula::Kind::Exists) {
    return encode_nonempty(std::move(selected));
  }
  throw Error("not a quantifier");
}

Formula desugar_quantifiers(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return Formula::make_prim(desugar_quantifier(f));
    case Formula::Kind::Prim:
      return f;
    default: {
      Formula out = f;
      for (Formula& kid : out.kids) kid = desugar_quantifiers(kid);
      return out;
    }
  }
}

Assertion desugar_formula(const Formula& f, FreshNamer& namer) {
  return desugar_logic(desugar_quantifiers(f), namer);
}

std::vector<Assertion> lower_formula(const Formula& f, FreshNamer& namer) {
  return flatten_nested(desugar_formula(f, namer), namer);
}

KnowledgeBase lower_kb(const KnowledgeBase& kb) {
  FreshNamer namer(kb);  // one namer across the whole base: names stay unique
  KnowledgeBase out = kb;
  out.assertions.clear();
  for (const AssertionEntry& e : kb.assertions) {
    for (Assertion& flat : flatten_nested(e.assertion, namer)) {
      out.assertions.push_back({std::move(flat), e.span});
    }
  }
  std::set<std::string> names;
  for (const AssertionEntry& e : out.assertions) {
    collect_atomic_names(e.assertion.lhs, names);
    collect_atomic_names(e.assertion.rhs, names);
  }
  for (const std::string& name : names) {
    if (!kb.structure.is_individual(name) && !kb.structure.is_concept(name) &&
        !is_numeral(name)) {
      out.structure.individuals.insert(name);
    }
  }
  return out;
}

}  // namespace setkr
