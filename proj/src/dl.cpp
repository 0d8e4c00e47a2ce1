#include "setkr/dl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

#include "setkr/errors.hpp"

namespace setkr {

// ---------------------------------------------------------------------------
// Factories

DlExpr DlExpr::atomic(std::string name) {
  DlExpr e;
  e.kind = DlExprKind::AtomicConcept;
  e.name = std::move(name);
  return e;
}

DlExpr DlExpr::nominal(std::string individual) {
  DlExpr e;
  e.kind = DlExprKind::Nominal;
  e.name = std::move(individual);
  return e;
}

DlExpr DlExpr::intersect(DlExpr a, DlExpr b) {
  DlExpr e;
  e.kind = DlExprKind::Intersect;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

DlExpr DlExpr::unite(DlExpr a, DlExpr b) {
  DlExpr e;
  e.kind = DlExprKind::Union;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

DlExpr DlExpr::complement(DlExpr a) {
  DlExpr e;
  e.kind = DlExprKind::Complement;
  e.args.push_back(std::move(a));
  return e;
}

DlExpr DlExpr::exists(DlRole r, DlExpr filler) {
  DlExpr e;
  e.kind = DlExprKind::Exists;
  e.role = std::move(r);
  e.args.push_back(std::move(filler));
  return e;
}

DlExpr DlExpr::forall(DlRole r, DlExpr filler) {
  DlExpr e;
  e.kind = DlExprKind::ForallR;
  e.role = std::move(r);
  e.args.push_back(std::move(filler));
  return e;
}

DlExpr DlExpr::at_least(std::size_t n, DlRole r, DlExpr filler) {
  DlExpr e;
  e.kind = DlExprKind::AtLeast;
  e.n = n;
  e.role = std::move(r);
  e.args.push_back(std::move(filler));
  return e;
}

DlExpr DlExpr::inverse_role(std::string role) {
  DlExpr e;
  e.kind = DlExprKind::InverseRole;
  e.name = std::move(role);
  return e;
}

bool DlExpr::operator==(const DlExpr& other) const {
  return kind == other.kind && name == other.name && role == other.role &&
         n == other.n && args == other.args;
}

DlAxiom DlAxiom::concept_assertion(DlExpr c, std::string individual) {
  DlAxiom ax;
  ax.kind = DlAxiomKind::ConceptAssertion;
  ax.lhs = std::move(c);
  ax.a = std::move(individual);
  return ax;
}

DlAxiom DlAxiom::role_assertion(DlRole r, std::string a, std::string b) {
  DlAxiom ax;
  ax.kind = DlAxiomKind::RoleAssertion;
  ax.role = std::move(r);
  ax.a = std::move(a);
  ax.b = std::move(b);
  return ax;
}

DlAxiom DlAxiom::equality(std::string a, std::string b) {
  DlAxiom ax;
  ax.kind = DlAxiomKind::IndividualEquality;
  ax.a = std::move(a);
  ax.b = std::move(b);
  return ax;
}

DlAxiom DlAxiom::inclusion(DlExpr c, DlExpr d) {
  DlAxiom ax;
  ax.kind = DlAxiomKind::ConceptInclusion;
  ax.lhs = std::move(c);
  ax.rhs = std::move(d);
  return ax;
}

bool DlAxiom::operator==(const DlAxiom& other) const {
  return kind == other.kind && lhs == other.lhs && rhs == other.rhs &&
         role == other.role && a == other.a && b == other.b;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct DlToken {
  enum class Kind { Ident, Nat, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct DlLexer {
  std::string_view src;
  std::string file;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  std::vector<Diagnostic> diags = {};

  SourceSpan here(std::size_t length = 1) const {
    return SourceSpan{file, line, column, length};
  }

  void bump(std::size_t n) {
    for (std::size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  }

  std::vector<DlToken> lex() {
    std::vector<DlToken> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') bump(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump(1);
        continue;
      }
      if (ident_start(c)) {
        SourceSpan span = here();
        std::size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) bump(1);
        span.length = pos - start;
        out.push_back({DlToken::Kind::Ident,
                       std::string(src.substr(start, pos - start)), span});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        SourceSpan span = here();
        std::size_t start = pos;
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos]))) {
          bump(1);
        }
        span.length = pos - start;
        out.push_back({DlToken::Kind::Nat,
                       std::string(src.substr(start, pos - start)), span});
        continue;
      }
      std::string_view rest = src.substr(pos);
      if (rest.starts_with("==") || rest.starts_with("[=")) {
        SourceSpan span = here(2);
        out.push_back({DlToken::Kind::Sym, std::string(rest.substr(0, 2)),
                       span});
        bump(2);
        continue;
      }
      if (std::string("(){},:;.").find(c) != std::string::npos) {
        out.push_back({DlToken::Kind::Sym, std::string(1, c), here()});
        bump(1);
        continue;
      }
      diags.push_back({Diagnostic::Severity::Error,
                       std::string("unexpected character '") + c + "'",
                       here()});
      bump(1);
    }
    out.push_back({DlToken::Kind::End, "", here(0)});
    return out;
  }
};

const char* const kReserved[] = {"and", "or", "not", "some",
                                 "only", "atleast", "inv"};

bool is_reserved(const std::string& word) {
  return std::find(std::begin(kReserved), std::end(kReserved), word) !=
         std::end(kReserved);
}

struct DlBail {};

struct DlParser {
  std::vector<DlToken> toks;
  std::size_t pos = 0;
  std::vector<Diagnostic> diags = {};

  const DlToken& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos + ahead, toks.size() - 1);
    return toks[i];
  }
  const DlToken& advance() { return toks[std::min(pos++, toks.size() - 1)]; }
  bool at_end() const { return peek().kind == DlToken::Kind::End; }

  [[noreturn]] void fail(const std::string& msg) {
    diags.push_back({Diagnostic::Severity::Error, msg, peek().span});
    throw DlBail{};
  }

  bool at_sym(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == DlToken::Kind::Sym && peek(ahead).text == s;
  }
  bool at_kw(const std::string& w, std::size_t ahead = 0) const {
    return peek(ahead).kind == DlToken::Kind::Ident && peek(ahead).text == w;
  }
  bool accept_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    advance();
    return true;
  }
  bool accept_kw(const std::string& w) {
    if (!at_kw(w)) return false;
    advance();
    return true;
  }
  void expect_sym(const std::string& s, const std::string& where) {
    if (!accept_sym(s)) fail("expected '" + s + "' " + where);
  }

  std::string ident(const std::string& what) {
    if (peek().kind != DlToken::Kind::Ident) fail("expected " + what);
    if (is_reserved(peek().text)) {
      fail("'" + peek().text + "' is reserved and cannot name " + what);
    }
    return advance().text;
  }

  DlRole role() {
    if (accept_kw("inv")) {
      expect_sym("(", "after inv");
      std::string name = ident("a role name");
      expect_sym(")", "after the role name");
      return DlRole{std::move(name), true};
    }
    return DlRole{ident("a role name"), false};
  }

  DlExpr primary() {
    if (accept_sym("(")) {
      DlExpr e = expr();
      expect_sym(")", "to close the expression");
      return e;
    }
    if (accept_sym("{")) {
      std::string name = ident("an individual name");
      expect_sym("}", "to close the nominal");
      return DlExpr::nominal(std::move(name));
    }
    return DlExpr::atomic(ident("a concept expression"));
  }

  DlExpr unary() {
    if (accept_kw("not")) return DlExpr::complement(unary());
    if (accept_kw("some")) {
      DlRole r = role();
      expect_sym(".", "after the role");
      return DlExpr::exists(std::move(r), unary());
    }
    if (accept_kw("only")) {
      DlRole r = role();
      expect_sym(".", "after the role");
      return DlExpr::forall(std::move(r), unary());
    }
    if (accept_kw("atleast")) {
      if (peek().kind != DlToken::Kind::Nat) fail("expected a number");
      std::size_t n = std::stoull(advance().text);
      DlRole r = role();
      expect_sym(".", "after the role");
      return DlExpr::at_least(n, std::move(r), unary());
    }
    return primary();
  }

  DlExpr conj() {
    DlExpr e = unary();
    while (accept_kw("and")) e = DlExpr::intersect(std::move(e), unary());
    return e;
  }

  DlExpr expr() {
    DlExpr e = conj();
    while (accept_kw("or")) e = DlExpr::unite(std::move(e), conj());
    return e;
  }

  DlAxiom axiom() {
    // "(a, b) : R" is the only form opening with "(" Ident ",".
    if (at_sym("(") && peek(1).kind == DlToken::Kind::Ident && at_sym(",", 2)) {
      advance();
      std::string a = ident("an individual name");
      expect_sym(",", "between the individuals");
      std::string b = ident("an individual name");
      expect_sym(")", "after the pair");
      expect_sym(":", "before the role");
      return DlAxiom::role_assertion(role(), std::move(a), std::move(b));
    }
    if (peek().kind == DlToken::Kind::Ident && !is_reserved(peek().text)) {
      if (at_sym(":", 1)) {
        std::string a = advance().text;
        advance();
        return DlAxiom::concept_assertion(expr(), std::move(a));
      }
      if (at_sym("==", 1)) {
        std::string a = advance().text;
        advance();
        return DlAxiom::equality(std::move(a), ident("an individual name"));
      }
    }
    DlExpr lhs = expr();
    if (!accept_sym("[=")) fail("expected ':', '==' or '[=' in the axiom");
    return DlAxiom::inclusion(std::move(lhs), expr());
  }
};

}  // namespace

DlParseResult parse_dl(std::string_view text, std::string file) {
  DlLexer lexer{text, std::move(file)};
  DlParser parser{lexer.lex()};
  DlParseResult result;
  result.diagnostics = std::move(lexer.diags);
  if (has_errors(result.diagnostics)) return result;
  try {
    while (!parser.at_end()) {
      result.axioms.push_back(parser.axiom());
      if (!parser.accept_sym(";") && !parser.at_end()) {
        parser.fail("expected ';' after the axiom");
      }
    }
  } catch (const DlBail&) {
  }
  result.diagnostics.insert(result.diagnostics.end(), parser.diags.begin(),
                            parser.diags.end());
  return result;
}

DlExprParse parse_dl_expr(std::string_view text, std::string file) {
  DlLexer lexer{text, std::move(file)};
  DlParser parser{lexer.lex()};
  DlExprParse result;
  result.diagnostics = std::move(lexer.diags);
  if (has_errors(result.diagnostics)) return result;
  try {
    DlExpr e = parser.expr();
    if (!parser.at_end()) parser.fail("expected the end of the expression");
    result.expr = std::move(e);
  } catch (const DlBail&) {
  }
  result.diagnostics.insert(result.diagnostics.end(), parser.diags.begin(),
                            parser.diags.end());
  return result;
}

// ---------------------------------------------------------------------------
// Signature

void collect_signature(const DlExpr& e, DlSignature& out) {
  switch (e.kind) {
    case DlExprKind::AtomicConcept:
      out.concepts.insert(e.name);
      return;
    case DlExprKind::Nominal:
      out.individuals.insert(e.name);
      return;
    case DlExprKind::InverseRole:
      out.roles.insert(e.name);
      return;
    case DlExprKind::Exists:
    case DlExprKind::ForallR:
    case DlExprKind::AtLeast:
      out.roles.insert(e.role.name);
      break;
    case DlExprKind::Intersect:
    case DlExprKind::Union:
    case DlExprKind::Complement:
      break;
  }
  for (const DlExpr& child : e.args) collect_signature(child, out);
}

DlSignature collect_signature(const std::vector<DlAxiom>& axioms) {
  DlSignature sig;
  for (const DlAxiom& ax : axioms) {
    switch (ax.kind) {
      case DlAxiomKind::ConceptAssertion:
        sig.individuals.insert(ax.a);
        collect_signature(ax.lhs, sig);
        break;
      case DlAxiomKind::RoleAssertion:
        sig.roles.insert(ax.role.name);
        sig.individuals.insert(ax.a);
        sig.individuals.insert(ax.b);
        break;
      case DlAxiomKind::IndividualEquality:
        sig.individuals.insert(ax.a);
        sig.individuals.insert(ax.b);
        break;
      case DlAxiomKind::ConceptInclusion:
        collect_signature(ax.lhs, sig);
        collect_signature(ax.rhs, sig);
        break;
    }
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Hat operators

std::string hat_name(const std::string& role, HatDirection direction) {
  return role + (direction == HatDirection::Forward ? "_hat" : "_hat_inv");
}

namespace {

void require_role(const KnowledgeBase& kb, const std::string& role) {
  const OperatorSig* sig = kb.structure.find_operator(role);
  if (!sig || sig->arity() != 2 || sig->range != dlnames::boolean) {
    throw UndeclaredRole("role '" + role +
                         "' is not declared as a binary operator with range "
                         "Bool");
  }
}

Definition make_hat(const std::string& role, HatDirection direction,
                    std::string target) {
  Term binder = Term::concept_ref(dlnames::binder, 1);
  Term element = Term::concept_ref(dlnames::thing, 1);
  std::vector<Term> pair =
      direction == HatDirection::Forward
          ? std::vector<Term>{std::move(binder), std::move(element)}
          : std::vector<Term>{std::move(element), std::move(binder)};
  Assertion filter{Term::apply(role, std::move(pair)),
                   Term::lit(Value::top())};
  OperatorDef def;
  def.target = std::move(target);
  def.params = {{dlnames::binder, 1}};
  def.body = Term::compr(dlnames::thing, std::move(filter));
  return Definition{std::move(def), SourceSpan{}};
}

}  // namespace

Definition hat_transform(const KnowledgeBase& kb, const std::string& role,
                         HatDirection direction) {
  require_role(kb, role);
  return make_hat(role, direction, hat_name(role, direction));
}

// ---------------------------------------------------------------------------
// Translator

namespace {

bool name_taken(const SyntacticStructure& s, const std::string& name) {
  return s.is_individual(name) || s.is_concept(name) ||
         s.find_operator(name) != nullptr;
}

}  // namespace

DlTranslator::DlTranslator(KnowledgeBase& kb) : kb_(&kb) {
  kb_->structure.concepts.insert(dlnames::thing);
  kb_->structure.concepts.insert(dlnames::boolean);
  kb_->structure.concepts.insert(dlnames::binder);
  if (!kb_->find_definition(dlnames::boolean)) {
    ConceptDef truth;
    truth.target = dlnames::boolean;
    truth.body = ConceptExpr::members_of(
        {Term::lit(Value::top()), Term::lit(Value::bottom())});
    kb_->definitions.push_back(Definition{std::move(truth), SourceSpan{}});
  }
  refresh_thing();
}

void DlTranslator::refresh_thing() {
  std::vector<Term> members;
  for (const std::string& n : kb_->structure.individuals) {
    members.push_back(Term::atomic(n));
  }
  for (Definition& d : kb_->definitions) {
    if (d.target() != dlnames::thing) continue;
    if (auto* cd = std::get_if<ConceptDef>(&d.node);
        cd && cd->body.kind == ConceptExpr::Kind::Members) {
      cd->body.members = std::move(members);
    }
    return;  // an exotic user definition of Thing is left alone
  }
  ConceptDef all;
  all.target = dlnames::thing;
  all.body = ConceptExpr::members_of(std::move(members));
  kb_->definitions.push_back(Definition{std::move(all), SourceSpan{}});
}

void DlTranslator::declare_individual(const std::string& name) {
  if (kb_->structure.individuals.insert(name).second) refresh_thing();
}

void DlTranslator::declare_concept(const std::string& name) {
  kb_->structure.concepts.insert(name);
}

void DlTranslator::declare_role(const std::string& name) {
  if (kb_->structure.find_operator(name)) return;
  OperatorSig sig;
  sig.name = name;
  sig.domain = {dlnames::thing, dlnames::thing};
  sig.range = dlnames::boolean;
  kb_->structure.operators.emplace(name, std::move(sig));
}

std::string DlTranslator::hat_operator(const DlRole& role) {
  require_role(*kb_, role.name);
  HatDirection direction =
      role.inverse ? HatDirection::Inverse : HatDirection::Forward;
  std::string key = role.name + (role.inverse ? "-" : "+");
  auto it = hats_.find(key);
  if (it != hats_.end()) return it->second;

  std::string target = hat_name(role.name, direction);
  while (name_taken(kb_->structure, target)) target += "_";
  OperatorSig sig;
  sig.name = target;
  sig.domain = {dlnames::binder};
  kb_->structure.operators.emplace(target, std::move(sig));
  kb_->definitions.push_back(make_hat(role.name, direction, target));
  hats_.emplace(std::move(key), target);
  return target;
}

std::string DlTranslator::fresh_concept() {
  std::string name;
  do {
    name = "E" + std::to_string(next_fresh_++);
  } while (name_taken(kb_->structure, name));
  declare_concept(name);
  return name;
}

std::string DlTranslator::translate_expr(const DlExpr& e) {
  switch (e.kind) {
    case DlExprKind::AtomicConcept:
      declare_concept(e.name);
      return e.name;
    case DlExprKind::Nominal: {
      declare_individual(e.name);
      std::string root = fresh_concept();
      ConceptDef def;
      def.target = root;
      def.body = ConceptExpr::members_of({Term::atomic(e.name)});
      kb_->definitions.push_back(Definition{std::move(def), SourceSpan{}});
      return root;
    }
    case DlExprKind::Intersect:
    case DlExprKind::Union: {
      std::string lhs = translate_expr(e.args[0]);
      std::string rhs = translate_expr(e.args[1]);
      std::string root = fresh_concept();
      ConceptDef def;
      def.target = root;
      def.body = ConceptExpr::binary(e.kind == DlExprKind::Intersect
                                         ? ConceptExpr::Kind::Intersect
                                         : ConceptExpr::Kind::Union,
                                     ConceptExpr::concept_name(lhs),
                                     ConceptExpr::concept_name(rhs));
      kb_->definitions.push_back(Definition{std::move(def), SourceSpan{}});
      return root;
    }
    case DlExprKind::Complement: {
      std::string inner = translate_expr(e.args[0]);
      std::string root = fresh_concept();
      ConceptDef def;
      def.target = root;
      def.body = ConceptExpr::binary(ConceptExpr::Kind::Diff,
                                     ConceptExpr::concept_name(dlnames::thing),
                                     ConceptExpr::concept_name(inner));
      kb_->definitions.push_back(Definition{std::move(def), SourceSpan{}});
      return root;
    }
    case DlExprKind::Exists:
    case DlExprKind::ForallR:
    case DlExprKind::AtLeast: {
      std::string filler = translate_expr(e.args[0]);
      if (filler == dlnames::thing) {
        // The filter lives inside a comprehension over Thing, where every
        // mention of Thing is bound to the running member. Alias the filler
        // so it still names the whole extent.
        std::string alias = fresh_concept();
        ConceptDef def;
        def.target = alias;
        def.body = ConceptExpr::concept_name(dlnames::thing);
        kb_->definitions.push_back(Definition{std::move(def), SourceSpan{}});
        filler = alias;
      }
      std::string hat = hat_operator(e.role);
      std::string root = fresh_concept();
      Term successors =
          Term::apply(hat, {Term::concept_ref(dlnames::thing, 1)});
      Assertion filter;
      if (e.kind == DlExprKind::ForallR) {
        filter = Assertion{Term::apply(builtin::subset_op,
                                       {std::move(successors),
                                        Term::atomic(filler)}),
                           Term::lit(Value::top())};
      } else {
        Term hits = Term::apply(
            builtin::intersect_op,
            {std::move(successors), Term::atomic(filler)});
        if (e.kind == DlExprKind::Exists) {
          // hits ≠ ∅, encoded as {hits} ∩ {∅} = ∅.
          filter = Assertion{
              Term::apply(builtin::intersect_op,
                          {Term::set_of({std::move(hits)}),
                           Term::set_of({Term::lit(Value::empty_set())})}),
              Term::lit(Value::empty_set())};
        } else {
          filter = Assertion{
              Term::apply(builtin::geq_op,
                          {Term::apply(builtin::card_op, {std::move(hits)}),
                           Term::atomic(std::to_string(e.n))}),
              Term::lit(Value::top())};
        }
      }
      ComprehensionDef def;
      def.target = root;
      def.source = dlnames::thing;
      def.filter = std::move(filter);
      kb_->definitions.push_back(Definition{std::move(def), SourceSpan{}});
      return root;
    }
    case DlExprKind::InverseRole:
      throw Error("inv(" + e.name + ") names a role, not a concept");
  }
  throw Error("unhandled description-logic expression");
}

Assertion DlTranslator::translate_axiom(const DlAxiom& ax) {
  Assertion out;
  switch (ax.kind) {
    case DlAxiomKind::ConceptAssertion: {
      std::string root = translate_expr(ax.lhs);
      declare_individual(ax.a);
      out = Assertion{Term::apply(builtin::member_op,
                                  {Term::atomic(ax.a), Term::atomic(root)}),
                      Term::lit(Value::top())};
      break;
    }
    case DlAxiomKind::RoleAssertion: {
      declare_role(ax.role.name);
      declare_individual(ax.a);
      declare_individual(ax.b);
      const std::string& first = ax.role.inverse ? ax.b : ax.a;
      const std::string& second = ax.role.inverse ? ax.a : ax.b;
      out = Assertion{Term::apply(ax.role.name, {Term::atomic(first),
                                                 Term::atomic(second)}),
                      Term::lit(Value::top())};
      break;
    }
    case DlAxiomKind::IndividualEquality:
      declare_individual(ax.a);
      declare_individual(ax.b);
      out = Assertion{Term::atomic(ax.a), Term::atomic(ax.b)};
      break;
    case DlAxiomKind::ConceptInclusion: {
      std::string lhs = translate_expr(ax.lhs);
      std::string rhs = translate_expr(ax.rhs);
      out = Assertion{Term::apply(builtin::subset_op,
                                  {Term::atomic(lhs), Term::atomic(rhs)}),
                      Term::lit(Value::top())};
      break;
    }
  }
  kb_->assertions.push_back(AssertionEntry{out, SourceSpan{}});
  return out;
}

// ---------------------------------------------------------------------------
// Documents

KnowledgeBase dl_base_kb(const DlSignature& sig) {
  KnowledgeBase kb;
  kb.structure.individuals = sig.individuals;
  for (const std::string& c : sig.concepts) kb.structure.concepts.insert(c);
  DlTranslator translator(kb);
  for (const std::string& r : sig.roles) translator.declare_role(r);
  return kb;
}

KnowledgeBase dl_to_kb(const std::vector<DlAxiom>& axioms) {
  KnowledgeBase kb = dl_base_kb(collect_signature(axioms));
  DlTranslator translator(kb);
  for (const DlAxiom& ax : axioms) translator.translate_axiom(ax);
  return kb;
}

}  // namespace setkr
