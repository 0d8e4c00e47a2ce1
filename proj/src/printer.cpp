#include <set>
#include <sstream>
#include <string>

#include "setkr/parser.hpp"

namespace setkr {

namespace {

bool infix_builtin(const std::string& name) {
  return name == builtin::union_op || name == builtin::intersect_op ||
         name == builtin::difference_op || name == builtin::product_op ||
         name == builtin::member_op || name == builtin::subset_op ||
         name == builtin::eq_op;
}

struct TermPrinter {
  const SyntacticStructure* structure = nullptr;

  bool prints_infix(const std::string& name) const {
    if (infix_builtin(name)) return true;
    if (!structure) return false;
    const OperatorSig* sig = structure->find_operator(name);
    return sig && sig->infix;
  }

  void term(std::ostream& os, const Term& t,
            const std::set<std::string>* refs) const {
    switch (t.kind) {
      case TermKind::Atomic:
        os << t.name;
        return;
      case TermKind::Literal:
        os << t.literal->text();
        return;
      case TermKind::ConceptRef:
        if (t.copy == 1 && refs && refs->count(t.name)) {
          os << t.name;
        } else {
          os << t.name << "^" << t.copy;
        }
        return;
      case TermKind::SetLit: {
        os << "{";
        bool first = true;
        for (const Term& e : t.args) {
          if (!first) os << ", ";
          first = false;
          term(os, e, refs);
        }
        os << "}";
        return;
      }
      case TermKind::TupleLit: {
        os << "(";
        bool first = true;
        for (const Term& e : t.args) {
          if (!first) os << ", ";
          first = false;
          term(os, e, refs);
        }
        os << ")";
        return;
      }
      case TermKind::Apply: {
        if (t.args.size() == 2 && prints_infix(t.name)) {
          os << "(";
          term(os, t.args[0], refs);
          os << " " << t.name << " ";
          term(os, t.args[1], refs);
          os << ")";
          return;
        }
        os << t.name << "(";
        bool first = true;
        for (const Term& a : t.args) {
          if (!first) os << ", ";
          first = false;
          term(os, a, refs);
        }
        os << ")";
        return;
      }
      case TermKind::Compr: {
        os << "(" << t.name << " | ";
        std::set<std::string> inner = refs ? *refs : std::set<std::string>{};
        inner.insert(t.name);
        assertion(os, *t.filter, &inner);
        os << ")";
        return;
      }
    }
  }

  void assertion(std::ostream& os, const Assertion& a,
                 const std::set<std::string>* refs) const {
    term(os, a.lhs, refs);
    os << " = ";
    term(os, a.rhs, refs);
  }
};

void concept_expr(std::ostream& os, const ConceptExpr& e,
                  const TermPrinter& tp) {
  auto binary = [&](const char* op) {
    os << "(";
    concept_expr(os, e.args[0], tp);
    os << " " << op << " ";
    concept_expr(os, e.args[1], tp);
    os << ")";
  };
  switch (e.kind) {
    case ConceptExpr::Kind::Name:
      os << e.name;
      return;
    case ConceptExpr::Kind::Members: {
      os << "{";
      bool first = true;
      for (const Term& m : e.members) {
        if (!first) os << ", ";
        first = false;
        tp.term(os, m, nullptr);
      }
      os << "}";
      return;
    }
    case ConceptExpr::Kind::Union:
      binary("∪");
      return;
    case ConceptExpr::Kind::Intersect:
      binary("∩");
      return;
    case ConceptExpr::Kind::Diff:
      binary("\\");
      return;
    case ConceptExpr::Kind::Product:
      binary("×");
      return;
    case ConceptExpr::Kind::Power:
      os << "pow(";
      concept_expr(os, e.args[0], tp);
      os << ")";
      return;
    case ConceptExpr::Kind::Replace: {
      os << e.name << "(";
      bool first = true;
      for (const ConceptExpr& s : e.args) {
        if (!first) os << ", ";
        first = false;
        concept_expr(os, s, tp);
      }
      os << ")";
      return;
    }
  }
}

void definition(std::ostream& os, const Definition& d,
                const TermPrinter& tp) {
  os << "def ";
  if (const auto* ind = std::get_if<IndividualDef>(&d.node)) {
    os << ind->target << " ::= ";
    tp.term(os, ind->body, nullptr);
  } else if (const auto* op = std::get_if<OperatorDef>(&d.node)) {
    os << op->target << "(";
    std::set<std::string> refs;
    bool first = true;
    for (const auto& [c, copy] : op->params) {
      if (!first) os << ", ";
      first = false;
      os << c;
      if (copy != 1) os << "^" << copy;
      refs.insert(c);
    }
    os << ") ::= ";
    tp.term(os, op->body, &refs);
  } else if (const auto* cd = std::get_if<ConceptDef>(&d.node)) {
    os << cd->target << " ::= ";
    concept_expr(os, cd->body, tp);
  } else if (const auto* comp = std::get_if<ComprehensionDef>(&d.node)) {
    os << comp->target << " ::= (" << comp->source << " | ";
    std::set<std::string> refs{comp->source};
    tp.assertion(os, comp->filter, &refs);
    os << ")";
  }
  os << ";";
}

}  // namespace

std::string print_term(const Term& t) {
  std::ostringstream os;
  TermPrinter{}.term(os, t, nullptr);
  return os.str();
}

std::string print_assertion(const Assertion& a) {
  std::ostringstream os;
  TermPrinter{}.assertion(os, a, nullptr);
  return os.str();
}

std::string print_concept_expr(const ConceptExpr& e) {
  std::ostringstream os;
  concept_expr(os, e, TermPrinter{});
  return os.str();
}

std::string print_definition(const Definition& d) {
  std::ostringstream os;
  definition(os, d, TermPrinter{});
  return os.str();
}

std::string print_kb(const KnowledgeBase& kb) {
  std::ostringstream os;
  TermPrinter tp{&kb.structure};
  if (!kb.structure.individuals.empty()) {
    os << "individual ";
    bool first = true;
    for (const std::string& n : kb.structure.individuals) {
      if (!first) os << ", ";
      first = false;
      os << n;
    }
    os << ";\n";
  }
  if (!kb.structure.concepts.empty()) {
    os << "concept ";
    bool first = true;
    for (const std::string& n : kb.structure.concepts) {
      if (!first) os << ", ";
      first = false;
      os << n;
    }
    os << ";\n";
  }
  for (const auto& [name, sig] : kb.structure.operators) {
    os << "op " << name << "(";
    bool first = true;
    for (const std::string& c : sig.domain) {
      if (!first) os << ", ";
      first = false;
      os << c;
    }
    os << ")";
    if (sig.range) os << ": " << *sig.range;
    if (sig.infix) os << " infix";
    os << ";\n";
  }
  for (const Definition& d : kb.definitions) {
    definition(os, d, tp);
    os << "\n";
  }
  for (const AssertionEntry& e : kb.assertions) {
    os << "assert ";
    tp.assertion(os, e.assertion, nullptr);
    os << ";\n";
  }
  for (const AssertionEntry& e : kb.schema_assertions) {
    os << "assert ";
    tp.assertion(os, e.assertion, nullptr);
    os << ";\n";
  }
  return os.str();
}

}  // namespace setkr
