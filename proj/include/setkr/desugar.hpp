#pragma once

#include <set>
#include <string>
#include <vector>

#include "setkr/ast.hpp"

namespace setkr {

// Assertion-level logic tree. Everything here is sugar: the engine core
// only understands plain equality assertions, and the functions below
// lower each connective to one.
struct Formula {
  enum class Kind {
    Prim,     // a plain assertion
    Multi,    // conjunction written with commas, >= 1 component
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Forall,   // bound concept + schema assertion body
    Exists,
  };

  Kind kind = Kind::Prim;
  Assertion prim;               // Prim
  std::vector<Formula> kids;    // Multi / connective operands
  std::string bound;            // Forall / Exists
  Assertion body;               // Forall / Exists

  static Formula make_prim(Assertion a);
  static Formula make_multi(std::vector<Formula> parts);
  static Formula make_not(Formula f);
  static Formula make_binary(Kind k, Formula a, Formula b);
  static Formula make_quantifier(Kind k, std::string bound_concept,
                                 Assertion body);

  bool operator==(const Formula& o) const;
};

// Hands out names guaranteed not to collide with anything in the source
// knowledge base. Confined to one lowering call; never shared.
class FreshNamer {
 public:
  FreshNamer(std::string prefix, std::set<std::string> taken);
  explicit FreshNamer(const KnowledgeBase& kb, std::string prefix = "_v");

  std::string fresh();

 private:
  std::string prefix_;
  unsigned counter_ = 0;
  std::set<std::string> taken_;
};

// Combines assertions a1=b1 ... an=bn into (a1,..,an) = (b1,..,bn).
// The tuple equality holds exactly when every component does. A single
// assertion passes through unchanged.
Assertion desugar_multi(const std::vector<Assertion>& asserts);

// Rewrites an assertion so that no argument of an application, set
// literal, or tuple is itself compound, introducing one fresh individual
// per extracted subterm. Output order: the rewritten assertion first,
// then one defining assertion per fresh name in the order the names were
// handed out. Every output is primitive.
std::vector<Assertion> flatten_nested(const Assertion& a, FreshNamer& namer);

// Lowers connectives to set-algebra equalities:
//   not(a=a')          {a} ∩ {a'} = ∅
//   and(A, B)          ({a}∩{a'}) ∪ ({b}∩{b'}) = {a,a',b,b'}
//   or(A, B)           ({a}∩{a'}) ∪ ({b}∩{b'}) ≠ ∅
//   implies(A, B)      ({a,a'} \ ({a}∩{a'})) ∪ ({b}∩{b'}) ≠ ∅
//   equiv(A, B)        and(implies(A,B), implies(B,A))
// where X ≠ Y itself lowers to {X} ∩ {Y} = ∅. Operands are lowered
// bottom-up, so nested connectives compose. The input must not contain
// quantifiers; run desugar_quantifiers first.
Assertion desugar_logic(const Formula& f, FreshNamer& namer);

// forall(C, A)  ->  (C | A) = C
// exists(C, A)  ->  (C | A) ≠ ∅   (negation-encoded)
// The body may mention only the bound concept, in any number of copies.
Assertion desugar_quantifier(const Formula& f);

// Replaces every quantifier node with its encoded assertion, leaving a
// quantifier-free formula.
Formula desugar_quantifiers(const Formula& f);

// Quantifiers, then connectives bottom-up: one assertion per formula.
Assertion desugar_formula(const Formula& f, FreshNamer& namer);

// Full pipeline for one formula: desugar, then flatten. The returned
// assertions, conjoined, are primitive and model-equivalent to f.
std::vector<Assertion> lower_formula(const Formula& f, FreshNamer& namer);

// Flattens every ground assertion of the knowledge base, declaring the
// fresh individuals it introduces. Definitions and schema assertions are
// carried over unchanged.
KnowledgeBase lower_kb(const KnowledgeBase& kb);

}  // namespace setkr
