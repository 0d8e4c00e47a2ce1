#pragma once

// Description-logic front end: a small concept language with roles, parsed
// from text or built programmatically, rewritten into concepts, operators
// and assertions of the core formalism.
//
// Roles become binary operators over Thing with range Bool, so their tables
// are closed-world total. Each role R gets successor operators on demand:
// R_hat maps an individual c to {d | R(c, d) = ⊤} and R_hat_inv to
// {d | R(d, c) = ⊤}. Quantified concepts comprehend over Thing, testing the
// bound individual's successor set: `some R. C` keeps x when
// R_hat(x) ∩ C ≠ ∅, `only R. C` when R_hat(x) ⊆ C, and `atleast n R. C`
// when card(R_hat(x) ∩ C) ≥ n. Inverse role positions swap to R_hat_inv.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "setkr/ast.hpp"

namespace setkr {

// ---------------------------------------------------------------------------
// Expressions and axioms

// A role position: a named binary relation, possibly reversed.
struct DlRole {
  std::string name;
  bool inverse = false;

  bool operator==(const DlRole&) const = default;
};

enum class DlExprKind {
  AtomicConcept,  // a named concept
  Nominal,        // {a}, the concept whose sole member is the individual a
  Intersect,      // C and D
  Union,          // C or D
  Complement,     // not C
  Exists,         // some R. C
  ForallR,        // only R. C
  AtLeast,        // atleast n R. C
  InverseRole,    // inv(R); only meaningful where a role is expected
};

struct DlExpr {
  DlExprKind kind = DlExprKind::AtomicConcept;
  std::string name;          // AtomicConcept / Nominal / InverseRole
  DlRole role;               // Exists / ForallR / AtLeast
  std::size_t n = 0;         // AtLeast
  std::vector<DlExpr> args;  // children of the composite forms

  static DlExpr atomic(std::string name);
  static DlExpr nominal(std::string individual);
  static DlExpr intersect(DlExpr a, DlExpr b);
  static DlExpr unite(DlExpr a, DlExpr b);
  static DlExpr complement(DlExpr a);
  static DlExpr exists(DlRole r, DlExpr filler);
  static DlExpr forall(DlRole r, DlExpr filler);
  static DlExpr at_least(std::size_t n, DlRole r, DlExpr filler);
  static DlExpr inverse_role(std::string role);

  bool operator==(const DlExpr& other) const;
  bool operator!=(const DlExpr& other) const { return !(*this == other); }
};

enum class DlAxiomKind {
  ConceptAssertion,    // a : C
  RoleAssertion,       // (a, b) : R
  IndividualEquality,  // a == b
  ConceptInclusion,    // C [= D
};

struct DlAxiom {
  DlAxiomKind kind = DlAxiomKind::ConceptAssertion;
  DlExpr lhs;     // ConceptAssertion concept / ConceptInclusion left side
  DlExpr rhs;     // ConceptInclusion right side
  DlRole role;    // RoleAssertion
  std::string a;  // first individual
  std::string b;  // second individual

  static DlAxiom concept_assertion(DlExpr c, std::string individual);
  static DlAxiom role_assertion(DlRole r, std::string a, std::string b);
  static DlAxiom equality(std::string a, std::string b);
  static DlAxiom inclusion(DlExpr c, DlExpr d);

  bool operator==(const DlAxiom& other) const;
  bool operator!=(const DlAxiom& other) const { return !(*this == other); }
};

// ---------------------------------------------------------------------------
// Text format
//
//   document := (axiom ';')*          '#' starts a line comment
//   axiom    := '(' a ',' b ')' ':' role | a ':' expr | a '==' b
//             | expr '[=' expr
//   expr     := conj ('or' conj)*
//   conj     := unary ('and' unary)*
//   unary    := 'not' unary | 'some' role '.' unary | 'only' role '.' unary
//             | 'atleast' NAT role '.' unary | primary
//   primary  := '(' expr ')' | '{' a '}' | NAME
//   role     := NAME | 'inv' '(' NAME ')'
//
// Restrictions bind tighter than 'and', which binds tighter than 'or':
// `some R. C and D` reads as (some R. C) and D.

struct DlParseResult {
  std::vector<DlAxiom> axioms;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

struct DlExprParse {
  std::optional<DlExpr> expr;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return expr.has_value() && !has_errors(diagnostics); }
};

DlParseResult parse_dl(std::string_view text, std::string file = "<input>");
DlExprParse parse_dl_expr(std::string_view text, std::string file = "<expr>");

// ---------------------------------------------------------------------------
// Translation

// Every name occurring in a batch of axioms, grouped by kind. Individuals
// come from assertion subjects and nominals, roles from role positions,
// concepts from atomic concept names.
struct DlSignature {
  std::set<std::string> individuals;
  std::set<std::string> concepts;
  std::set<std::string> roles;
};

void collect_signature(const DlExpr& e, DlSignature& out);
DlSignature collect_signature(const std::vector<DlAxiom>& axioms);

namespace dlnames {
// The concept of all individuals, enumerated by the translation.
inline constexpr const char* thing = "Thing";
// Range concept for roles, defined as {⊤, ⊥}.
inline constexpr const char* boolean = "Bool";
// Binder concept naming the successor operators' parameter. It needs no
// extent: applications substitute their argument for it directly.
inline constexpr const char* binder = "Domain";
}  // namespace dlnames

enum class HatDirection { Forward, Inverse };

// Operator name the successor rewrite uses for a role.
std::string hat_name(const std::string& role, HatDirection direction);

// The successor operator for a role, as a definition:
//   role_hat(Domain)     ::= (Thing | role(Domain^1, Thing^1) = ⊤)
//   role_hat_inv(Domain) ::= (Thing | role(Thing^1, Domain^1) = ⊤)
// Applied to an individual c this yields {d | role(c, d) = ⊤}, respectively
// {d | role(d, c) = ⊤}. Throws UndeclaredRole unless the role is declared
// in kb as a binary operator with range Bool.
Definition hat_transform(const KnowledgeBase& kb, const std::string& role,
                         HatDirection direction);

// Rewrites expressions and axioms into a knowledge base, extending it with
// the declarations, definitions and fresh concept names the rewrite needs.
// Fresh root concepts are named E1, E2, ... skipping names already taken.
class DlTranslator {
 public:
  explicit DlTranslator(KnowledgeBase& kb);

  // Declare a name of the given kind unless already present. Roles become
  // binary operators over Thing with range Bool.
  void declare_individual(const std::string& name);
  void declare_concept(const std::string& name);
  void declare_role(const std::string& name);

  // Emits definitions for e and returns the name of a concept whose extent
  // is the extension of e. Atomic concepts translate to themselves;
  // composite expressions get a fresh defined concept. Unseen atomic
  // concepts and nominal individuals are declared on the fly; unseen roles
  // throw UndeclaredRole.
  std::string translate_expr(const DlExpr& e);

  // Translates one axiom, appends it to the knowledge base and returns it:
  // a : C becomes a ∈ C' = ⊤, (a, b) : R becomes R(a, b) = ⊤ (reversed for
  // inv(R)), a == b becomes a = b, C [= D becomes ⊆(C', D') = ⊤.
  Assertion translate_axiom(const DlAxiom& ax);

  // Declares and defines the successor operator for a role position on
  // first use; returns its name.
  std::string hat_operator(const DlRole& role);

 private:
  std::string fresh_concept();
  // Keeps Thing's enumeration in step with the declared individuals.
  void refresh_thing();

  KnowledgeBase* kb_;
  std::size_t next_fresh_ = 1;
  std::map<std::string, std::string> hats_;  // "R" / "R-" -> operator name
};

// Knowledge base over a signature: Thing enumerating the individuals,
// Bool = {⊤, ⊥}, the binder concept, the atomic concepts and the roles.
KnowledgeBase dl_base_kb(const DlSignature& sig);

// Full document translation: the base knowledge base over the axioms'
// signature plus one assertion per axiom. The result evaluates with
// seed_from_facts + evaluate and prints as parseable text.
KnowledgeBase dl_to_kb(const std::vector<DlAxiom>& axioms);

}  // namespace setkr
