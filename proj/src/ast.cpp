#include "setkr/ast.hpp"

#include <algorithm>
#include <sstream>

#include "setkr/errors.hpp"

namespace setkr {

std::string format(const Diagnostic& d) {
  std::ostringstream os;
  os << d.span.file << ":" << d.span.line << ":" << d.span.column << ": "
     << (d.severity == Diagnostic::Severity::Error ? "error" : "warning")
     << ": " << d.message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) {
    return d.severity == Diagnostic::Severity::Error;
  });
}

// ---------------------------------------------------------------------------
// Term construction and equality

Term Term::atomic(std::string name) {
  Term t;
  t.kind = TermKind::Atomic;
  t.name = std::move(name);
  return t;
}

Term Term::lit(Value v) {
  Term t;
  t.kind = TermKind::Literal;
  t.literal = std::move(v);
  return t;
}

Term Term::concept_ref(std::string name, int copy) {
  Term t;
  t.kind = TermKind::ConceptRef;
  t.name = std::move(name);
  t.copy = copy;
  return t;
}

Term Term::set_of(std::vector<Term> elems) {
  if (elems.empty()) return lit(Value::empty_set());
  Term t;
  t.kind = TermKind::SetLit;
  t.args = std::move(elems);
  return t;
}

Term Term::tuple_of(std::vector<Term> items) {
  if (items.size() < 2) throw Error("tuple term needs at least two items");
  Term t;
  t.kind = TermKind::TupleLit;
  t.args = std::move(items);
  return t;
}

Term Term::apply(std::string op, std::vector<Term> args) {
  Term t;
  t.kind = TermKind::Apply;
  t.name = std::move(op);
  t.args = std::move(args);
  return t;
}

Term Term::compr(std::string concept_name, Assertion filter) {
  Term t;
  t.kind = TermKind::Compr;
  t.name = std::move(concept_name);
  t.filter = std::make_shared<const Assertion>(std::move(filter));
  return t;
}

bool Term::operator==(const Term& other) const {
  if (kind != other.kind || name != other.name) return false;
  if (kind == TermKind::ConceptRef && copy != other.copy) return false;
  if (literal.has_value() != other.literal.has_value()) return false;
  if (literal && !(*literal == *other.literal)) return false;
  if (args != other.args) return false;
  if (!filter != !other.filter) return false;
  if (filter && !(*filter == *other.filter)) return false;
  return true;
}

bool Assertion::operator==(const Assertion& other) const {
  return lhs == other.lhs && rhs == other.rhs;
}

// ---------------------------------------------------------------------------
// Shape predicates

bool is_flat(const Term& t) {
  return t.kind == TermKind::Atomic || t.kind == TermKind::Literal ||
         t.kind == TermKind::ConceptRef;
}

bool is_primitive(const Term& t) {
  if (is_flat(t)) return true;
  if (t.kind == TermKind::Compr) return true;
  return std::all_of(t.args.begin(), t.args.end(), is_flat);
}

bool is_primitive(const Assertion& a) {
  return is_primitive(a.lhs) && is_primitive(a.rhs);
}

// ---------------------------------------------------------------------------
// Walking

namespace {

void collect_refs_impl(const Term& t, std::set<std::string>& bound,
                       std::set<std::pair<std::string, int>>& out) {
  switch (t.kind) {
    case TermKind::ConceptRef:
      if (!bound.count(t.name)) out.emplace(t.name, t.copy);
      return;
    case TermKind::Compr: {
      const bool already = bound.count(t.name) > 0;
      bound.insert(t.name);
      collect_refs_impl(t.filter->lhs, bound, out);
      collect_refs_impl(t.filter->rhs, bound, out);
      if (!already) bound.erase(t.name);
      return;
    }
    default:
      for (const Term& arg : t.args) collect_refs_impl(arg, bound, out);
  }
}

}  // namespace

void collect_free_concept_refs(const Term& t,
                               std::set<std::pair<std::string, int>>& out) {
  std::set<std::string> bound;
  collect_refs_impl(t, bound, out);
}

void collect_free_concept_refs(const Assertion& a,
                               std::set<std::pair<std::string, int>>& out) {
  collect_free_concept_refs(a.lhs, out);
  collect_free_concept_refs(a.rhs, out);
}

bool is_schema(const Assertion& a) {
  std::set<std::pair<std::string, int>> refs;
  collect_free_concept_refs(a, refs);
  return !refs.empty();
}

void collect_applied_operators(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Apply) out.insert(t.name);
  for (const Term& arg : t.args) collect_applied_operators(arg, out);
  if (t.filter) {
    collect_applied_operators(t.filter->lhs, out);
    collect_applied_operators(t.filter->rhs, out);
  }
}

void collect_atomic_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Atomic) out.insert(t.name);
  for (const Term& arg : t.args) collect_atomic_names(arg, out);
  if (t.filter) {
    collect_atomic_names(t.filter->lhs, out);
    collect_atomic_names(t.filter->rhs, out);
  }
}

bool is_numeral(const std::string& name) {
  if (name.empty() || name.size() > 18) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

// ---------------------------------------------------------------------------
// Built-ins

bool is_builtin_operator(const std::string& name) {
  return name == builtin::union_op || name == builtin::intersect_op ||
         name == builtin::difference_op || name == builtin::product_op ||
         name == builtin::power_op || name == builtin::member_op ||
         name == builtin::subset_op || name == builtin::card_op ||
         name == builtin::geq_op || name == builtin::eq_op;
}

std::size_t builtin_arity(const std::string& name) {
  if (name == builtin::power_op || name == builtin::card_op) return 1;
  return 2;
}

bool is_boolean_builtin(const std::string& name) {
  return name == builtin::member_op || name == builtin::subset_op ||
         name == builtin::geq_op || name == builtin::eq_op;
}

// ---------------------------------------------------------------------------
// Concept expressions

ConceptExpr ConceptExpr::concept_name(std::string n) {
  ConceptExpr e;
  e.kind = Kind::Name;
  e.name = std::move(n);
  return e;
}

ConceptExpr ConceptExpr::members_of(std::vector<Term> ts) {
  ConceptExpr e;
  e.kind = Kind::Members;
  e.members = std::move(ts);
  return e;
}

ConceptExpr ConceptExpr::binary(Kind k, ConceptExpr a, ConceptExpr b) {
  ConceptExpr e;
  e.kind = k;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

ConceptExpr ConceptExpr::power(ConceptExpr a) {
  ConceptExpr e;
  e.kind = Kind::Power;
  e.args.push_back(std::move(a));
  return e;
}

ConceptExpr ConceptExpr::replace(std::string op,
                                 std::vector<ConceptExpr> sources) {
  ConceptExpr e;
  e.kind = Kind::Replace;
  e.name = std::move(op);
  e.args = std::move(sources);
  return e;
}

bool ConceptExpr::operator==(const ConceptExpr& other) const {
  return kind == other.kind && name == other.name &&
         members == other.members && args == other.args;
}

bool contains_replace(const ConceptExpr& e) {
  if (e.kind == ConceptExpr::Kind::Replace) return true;
  return std::any_of(e.args.begin(), e.args.end(), contains_replace);
}

// ---------------------------------------------------------------------------
// Definitions

const std::string& Definition::target() const {
  return std::visit([](const auto& d) -> const std::string& { return d.target; },
                    node);
}

std::string Definition::kind_label() const {
  switch (kind()) {
    case DefKind::Individual: return "individual";
    case DefKind::Operator: return "operator";
    case DefKind::Comprehension: return "comprehension";
    case DefKind::Concept: {
      const auto& body = std::get<ConceptDef>(node).body;
      if (body.kind == ConceptExpr::Kind::Members) return "enumeration";
      if (contains_replace(body)) return "replacement";
      return "operation";
    }
  }
  return "definition";
}

const Definition* KnowledgeBase::find_definition(
    const std::string& target) const {
  for (const Definition& d : definitions) {
    if (d.target() == target) return &d;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const KnowledgeBase& kb) : kb_(kb) {}

  std::vector<Diagnostic> run() {
    check_structure();
    std::set<std::string> targets;
    for (const Definition& d : kb_.definitions) {
      if (!targets.insert(d.target()).second) {
        error(d.span, "duplicate definition of '" + d.target() + "'");
      }
      std::visit([&](const auto& node) { check_def(node, d.span); }, d.node);
    }
    for (const AssertionEntry& e : kb_.assertions) {
      check_term(e.assertion.lhs, e.span, ground_scope());
      check_term(e.assertion.rhs, e.span, ground_scope());
      if (is_schema(e.assertion)) {
        error(e.span, "assertion with concept references does not belong in "
                      "the ground assertion list");
      }
    }
    for (const AssertionEntry& e : kb_.schema_assertions) {
      check_term(e.assertion.lhs, e.span, open_scope());
      check_term(e.assertion.rhs, e.span, open_scope());
    }
    return std::move(diags_);
  }

 private:
  void check_structure() {
    const auto& st = kb_.structure;
    for (const auto& [name, sig] : st.operators) {
      SourceSpan span;
      if (is_builtin_operator(name)) {
        error(span, "operator '" + name + "' is built in and cannot be "
                    "redeclared");
      }
      for (const std::string& c : sig.domain) {
        if (!st.is_concept(c)) {
          error(span, "operator '" + name + "' domain mentions undeclared "
                      "concept '" + c + "'");
        }
      }
      if (sig.range && !st.is_concept(*sig.range)) {
        error(span, "operator '" + name + "' range mentions undeclared "
                    "concept '" + *sig.range + "'");
      }
      if (sig.infix && sig.arity() != 2) {
        error(span, "operator '" + name + "' is declared infix but is not "
                    "binary");
      }
    }
  }

  void check_def(const IndividualDef& d, const SourceSpan& span) {
    if (!kb_.structure.is_individual(d.target)) {
      error(span, "definition target '" + d.target + "' is not a declared "
                  "individual");
    }
    check_term(d.body, span, ground_scope());
    std::set<std::pair<std::string, int>> refs;
    collect_free_concept_refs(d.body, refs);
    if (!refs.empty()) {
      error(span, "individual definition body must be a ground term");
    }
  }

  void check_def(const OperatorDef& d, const SourceSpan& span) {
    const OperatorSig* sig = kb_.structure.find_operator(d.target);
    if (!sig) {
      error(span, "definition target '" + d.target + "' is not a declared "
                  "operator");
    } else {
      if (sig->arity() != d.params.size()) {
        error(span, "operator '" + d.target + "' is declared with arity " +
                    std::to_string(sig->arity()) + " but defined with " +
                    std::to_string(d.params.size()) + " parameters");
      } else {
        for (std::size_t i = 0; i < d.params.size(); ++i) {
          if (d.params[i].first != sig->domain[i]) {
            error(span, "parameter " + std::to_string(i + 1) + " of '" +
                        d.target + "' names concept '" + d.params[i].first +
                        "' but the declared domain is '" + sig->domain[i] +
                        "'");
          }
        }
      }
    }
    std::set<std::pair<std::string, int>> params(d.params.begin(),
                                                 d.params.end());
    for (const auto& [c, k] : params) {
      if (!kb_.structure.is_concept(c)) {
        error(span, "operator parameter mentions undeclared concept '" + c +
                    "'");
      }
      (void)k;
    }
    check_term(d.body, span, open_scope());
    std::set<std::pair<std::string, int>> refs;
    collect_free_concept_refs(d.body, refs);
    for (const auto& r : refs) {
      if (!params.count(r)) {
        error(span, "operator body of '" + d.target + "' mentions '" +
                    r.first + "^" + std::to_string(r.second) +
                    "' which is not among its parameters");
      }
    }
  }

  void check_def(const ConceptDef& d, const SourceSpan& span) {
    if (!kb_.structure.is_concept(d.target)) {
      error(span, "definition target '" + d.target + "' is not a declared "
                  "concept");
    }
    check_cexpr(d.body, span);
  }

  void check_def(const ComprehensionDef& d, const SourceSpan& span) {
    if (!kb_.structure.is_concept(d.target)) {
      error(span, "definition target '" + d.target + "' is not a declared "
                  "concept");
    }
    if (!kb_.structure.is_concept(d.source)) {
      error(span, "comprehension ranges over undeclared concept '" +
                  d.source + "'");
    }
    check_term(d.filter.lhs, span, open_scope());
    check_term(d.filter.rhs, span, open_scope());
    std::set<std::pair<std::string, int>> refs;
    collect_free_concept_refs(d.filter, refs);
    for (const auto& r : refs) {
      if (r.first != d.source) {
        error(span, "comprehension filter mentions concept '" + r.first +
                    "' other than its source '" + d.source + "'");
      }
    }
  }

  void check_cexpr(const ConceptExpr& e, const SourceSpan& span) {
    switch (e.kind) {
      case ConceptExpr::Kind::Name:
        if (!kb_.structure.is_concept(e.name)) {
          error(span, "unknown concept '" + e.name + "'");
        }
        return;
      case ConceptExpr::Kind::Members:
        for (const Term& t : e.members) {
          check_term(t, span, ground_scope());
          std::set<std::pair<std::string, int>> refs;
          collect_free_concept_refs(t, refs);
          if (!refs.empty()) {
            error(span, "enumeration members must be ground terms");
          }
        }
        return;
      case ConceptExpr::Kind::Replace: {
        const OperatorSig* sig = kb_.structure.find_operator(e.name);
        if (!sig && !is_builtin_operator(e.name)) {
          error(span, "unknown operator '" + e.name + "' in replacement");
        } else if (sig && sig->arity() != e.args.size()) {
          error(span, "operator '" + e.name + "' applied to " +
                      std::to_string(e.args.size()) + " collections but has "
                      "arity " + std::to_string(sig->arity()));
        }
        break;
      }
      default:
        break;
    }
    for (const ConceptExpr& a : e.args) check_cexpr(a, span);
  }

  // Which concept references a term may contain: any (schema contexts,
  // definition bodies, whose free references are checked at the definition
  // level), or only those bound by an enclosing comprehension (ground
  // contexts start with an empty scope).
  struct RefScope {
    bool any = false;
    std::set<std::string> bound;

    bool allows(const std::string& n) const {
      return any || bound.count(n) > 0;
    }
    RefScope with(const std::string& n) const {
      RefScope s = *this;
      s.bound.insert(n);
      return s;
    }
  };
  static RefScope ground_scope() { return {}; }
  static RefScope open_scope() { return {true, {}}; }

  void check_term(const Term& t, const SourceSpan& span,
                  const RefScope& scope) {
    switch (t.kind) {
      case TermKind::Atomic: {
        if (kb_.structure.is_individual(t.name) ||
            kb_.structure.is_concept(t.name) || is_numeral(t.name)) {
          return;
        }
        error(span, "unknown name '" + t.name + "'");
        return;
      }
      case TermKind::Literal:
        return;
      case TermKind::ConceptRef: {
        if (!kb_.structure.is_concept(t.name)) {
          error(span, "unknown concept '" + t.name + "'");
        } else if (!scope.allows(t.name)) {
          error(span, "concept reference '" + t.name + "' is not bound by "
                      "an enclosing comprehension");
        }
        if (t.copy < 1) error(span, "concept copy index must be at least 1");
        return;
      }
      case TermKind::SetLit:
        if (t.args.empty()) error(span, "set literal must not be empty");
        break;
      case TermKind::TupleLit:
        if (t.args.size() < 2) {
          error(span, "tuple literal needs at least two items");
        }
        break;
      case TermKind::Apply: {
        std::size_t want = 0;
        if (is_builtin_operator(t.name)) {
          want = builtin_arity(t.name);
        } else if (const OperatorSig* sig =
                       kb_.structure.find_operator(t.name)) {
          want = sig->arity();
        } else {
          error(span, "unknown operator '" + t.name + "'");
          break;
        }
        if (t.args.size() != want) {
          error(span, "operator '" + t.name + "' expects " +
                      std::to_string(want) + " arguments, got " +
                      std::to_string(t.args.size()));
        }
        break;
      }
      case TermKind::Compr: {
        if (!kb_.structure.is_concept(t.name)) {
          error(span, "unknown concept '" + t.name + "' in comprehension");
        }
        RefScope inner = scope.with(t.name);
        check_term(t.filter->lhs, span, inner);
        check_term(t.filter->rhs, span, inner);
        return;
      }
    }
    for (const Term& arg : t.args) check_term(arg, span, scope);
  }

  void error(const SourceSpan& span, std::string message) {
    diags_.push_back({Diagnostic::Severity::Error, std::move(message), span});
  }

  const KnowledgeBase& kb_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_structure(const KnowledgeBase& kb) {
  return Validator(kb).run();
}

// ---------------------------------------------------------------------------
// Grounding and substitution

namespace {

Term subst_impl(const Term& t,
                const std::map<std::pair<std::string, int>, Term>& binding,
                std::set<std::string>& shadowed) {
  switch (t.kind) {
    case TermKind::ConceptRef: {
      if (shadowed.count(t.name)) return t;
      auto it = binding.find({t.name, t.copy});
      return it == binding.end() ? t : it->second;
    }
    case TermKind::Compr: {
      const bool already = shadowed.count(t.name) > 0;
      shadowed.insert(t.name);
      Assertion f{subst_impl(t.filter->lhs, binding, shadowed),
                  subst_impl(t.filter->rhs, binding, shadowed)};
      if (!already) shadowed.erase(t.name);
      return Term::compr(t.name, std::move(f));
    }
    default: {
      if (t.args.empty()) return t;
      Term out = t;
      for (Term& arg : out.args) {
        arg = subst_impl(arg, binding, shadowed);
      }
      return out;
    }
  }
}

Term element_term(const Value& v, GroundingStyle style) {
  if (style == GroundingStyle::NamedAtoms && v.is_atom() &&
      v != Value::top() && v != Value::bottom()) {
    return Term::atomic(v.atom_name());
  }
  return Term::lit(v);
}

}  // namespace

Term substitute_concept_refs(
    const Term& t,
    const std::map<std::pair<std::string, int>, Term>& binding) {
  std::set<std::string> shadowed;
  return subst_impl(t, binding, shadowed);
}

Assertion substitute_concept_refs(
    const Assertion& a,
    const std::map<std::pair<std::string, int>, Term>& binding) {
  return {substitute_concept_refs(a.lhs, binding),
          substitute_concept_refs(a.rhs, binding)};
}

void ground_schema(const Assertion& schema, const ConceptExtents& extents,
                   const std::function<void(const Assertion&)>& fn,
                   GroundingStyle style) {
  std::set<std::pair<std::string, int>> ref_set;
  collect_free_concept_refs(schema, ref_set);
  std::vector<std::pair<std::string, int>> refs(ref_set.begin(),
                                                ref_set.end());
  std::vector<const std::vector<Value>*> pools;
  for (const auto& [concept_name, copy] : refs) {
    (void)copy;
    auto it = extents.find(concept_name);
    if (it == extents.end()) {
      throw MissingExtent("no extent for concept '" + concept_name + "'");
    }
    if (!it->second.is_set()) {
      throw NonSetOperand("extent of '" + concept_name + "' is not a set");
    }
    pools.push_back(&it->second.elements());
  }
  if (refs.empty()) {
    fn(schema);
    return;
  }
  for (const auto* pool : pools) {
    if (pool->empty()) return;  // empty product
  }
  std::vector<std::size_t> idx(refs.size(), 0);
  for (;;) {
    std::map<std::pair<std::string, int>, Term> binding;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      binding.emplace(refs[i], element_term((*pools[i])[idx[i]], style));
    }
    fn(substitute_concept_refs(schema, binding));
    std::size_t i = refs.size();
    while (i > 0) {
      --i;
      if (++idx[i] < pools[i]->size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

std::vector<Assertion> ground_schema(const Assertion& schema,
                                     const ConceptExtents& extents,
                                     GroundingStyle style) {
  std::vector<Assertion> out;
  ground_schema(schema, extents,
                [&out](const Assertion& a) { out.push_back(a); }, style);
  return out;
}

}  // namespace setkr
