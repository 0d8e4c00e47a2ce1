#include "setkr/parser.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>

#include "setkr/desugar.hpp"
#include "setkr/errors.hpp"

namespace setkr {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  End,
  Ident,
  Sym,
  KwIndividual,
  KwConcept,
  KwOp,
  KwDef,
  KwAssert,
  KwInfix,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

// Multibyte operators recognized as-is.
const char* const kUnicodeOps[] = {
    "∅", "∪", "∩", "×", "⊤", "⊥", "∈", "⊆", "≠",
    "¬", "∧", "∨", "→", "≡", "∀", "∃", "≥",
};

// ASCII spellings normalized to the canonical symbol.
const std::pair<const char*, const char*> kAsciiSeqs[] = {
    {"::=", "::="}, {"\\/", "∪"}, {"/\\", "∩"}, {"->", "→"},
    {">=", "≥"},    {"!=", "≠"},
};

const std::pair<const char*, const char*> kWordAliases[] = {
    {"in", "∈"},       {"subseteq", "⊆"}, {"not", "¬"},
    {"and", "∧"},      {"or", "∨"},       {"implies", "→"},
    {"equiv", "≡"},    {"forall", "∀"},   {"exists", "∃"},
    {"top", "⊤"},      {"bot", "⊥"},
};

const std::pair<const char*, Tok> kKeywords[] = {
    {"individual", Tok::KwIndividual}, {"concept", Tok::KwConcept},
    {"op", Tok::KwOp},                 {"def", Tok::KwDef},
    {"assert", Tok::KwAssert},         {"infix", Tok::KwInfix},
};

bool is_symbol_char(char c) {
  return std::string_view("+-*/<>~%&?!@$").find(c) != std::string_view::npos;
}

bool is_ascii_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

std::size_t utf8_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // invalid byte; consume one
}

class Lexer {
 public:
  Lexer(const std::string& src, std::string file,
        std::vector<Diagnostic>& diags)
      : src_(src), file_(std::move(file)), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (i_ >= src_.size()) break;
      Token t = next_token();
      if (t.kind != Tok::End) out.push_back(std::move(t));
    }
    out.push_back({Tok::End, "", here(0)});
    return out;
  }

 private:
  const std::string& src_;
  std::string file_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  SourceSpan here(std::size_t length) const {
    return {file_, line_, col_, length};
  }

  void advance_codepoint() {
    std::size_t n = utf8_len(static_cast<unsigned char>(src_[i_]));
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    i_ += std::min(n, src_.size() - i_);
  }

  void skip_trivia() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance_codepoint();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance_codepoint();
      } else {
        break;
      }
    }
  }

  bool starts_with(const char* s) const {
    return src_.compare(i_, std::char_traits<char>::length(s), s) == 0;
  }

  // A reserved multi-codepoint operator beginning at position p?
  bool unicode_op_at(std::size_t p, std::string* which = nullptr) const {
    for (const char* op : kUnicodeOps) {
      if (src_.compare(p, std::char_traits<char>::length(op), op) == 0) {
        if (which) *which = op;
        return true;
      }
    }
    return false;
  }

  Token take(Tok kind, std::string text, std::size_t codepoints) {
    Token t{kind, std::move(text), here(codepoints)};
    for (std::size_t k = 0; k < codepoints; ++k) advance_codepoint();
    return t;
  }

  Token next_token() {
    std::string uop;
    if (unicode_op_at(i_, &uop)) return take(Tok::Sym, uop, 1);
    for (const auto& [seq, canon] : kAsciiSeqs) {
      if (starts_with(seq)) {
        return take(Tok::Sym, canon, std::char_traits<char>::length(seq));
      }
    }
    char c = src_[i_];
    if (std::string_view(";,(){}.|^:=\\").find(c) != std::string_view::npos) {
      return take(Tok::Sym, std::string(1, c), 1);
    }
    if (is_symbol_char(c)) {
      std::size_t j = i_;
      while (j < src_.size() && is_symbol_char(src_[j])) ++j;
      return take(Tok::Sym, src_.substr(i_, j - i_), j - i_);
    }
    if (is_ascii_ident_char(c) ||
        static_cast<unsigned char>(c) >= 0x80) {
      std::string text;
      std::size_t codepoints = 0;
      std::size_t j = i_;
      while (j < src_.size()) {
        unsigned char b = static_cast<unsigned char>(src_[j]);
        if (b < 0x80) {
          if (!is_ascii_ident_char(src_[j])) break;
          text += src_[j];
          ++j;
        } else {
          if (unicode_op_at(j)) break;
          std::size_t n = utf8_len(b);
          text += src_.substr(j, n);
          j += n;
        }
        ++codepoints;
      }
      for (const auto& [word, kw] : kKeywords) {
        if (text == word) return take(kw, text, codepoints);
      }
      for (const auto& [word, sym] : kWordAliases) {
        if (text == word) return take(Tok::Sym, sym, codepoints);
      }
      return take(Tok::Ident, text, codepoints);
    }
    diags_.push_back({Diagnostic::Severity::Error,
                      "unexpected character '" + std::string(1, c) + "'",
                      here(1)});
    advance_codepoint();
    return {Tok::End, "", here(0)};
  }
};

// ---------------------------------------------------------------------------
// Parser

struct SyncError {};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags,
         const SyntacticStructure* external)
      : toks_(std::move(toks)),
        diags_(diags),
        external_(external),
        checking_(external != nullptr) {}

  KnowledgeBase run_kb() {
    checking_ = true;
    while (!at_end()) {
      try {
        statement();
      } catch (const SyncError&) {
        resync();
      }
    }
    return std::move(kb_);
  }

  // Single sugared assertion, for goal strings and the like.
  std::pair<Assertion, bool> run_assertion() {
    Formula f = parse_formula(nullptr);
    accept(";");
    if (!at_end()) error(peek().span, "trailing input after assertion");
    Assertion a = f.kind == Formula::Kind::Prim ? f.prim : lowered(f);
    return {a, is_schema(a)};
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  KnowledgeBase kb_;
  std::vector<Diagnostic>& diags_;
  const SyntacticStructure* external_;
  bool checking_;

  const SyntacticStructure& structure() const {
    return external_ ? *external_ : kb_.structure;
  }

  // --- token plumbing

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t p = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[p];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at_sym(const char* text) const {
    return peek().kind == Tok::Sym && peek().text == text;
  }
  const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool accept(const char* text) {
    if (at_sym(text)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* text, const char* what) {
    if (!accept(text)) {
      error(peek().span, std::string("expected '") + text + "' " + what);
    }
  }
  std::string expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) {
      error(peek().span, std::string("expected ") + what);
    }
    return advance().text;
  }

  [[noreturn]] void error(const SourceSpan& span, const std::string& msg) {
    diags_.push_back({Diagnostic::Severity::Error, msg, span});
    throw SyncError{};
  }

  void resync() {
    while (!at_end()) {
      if (advance().text == ";") return;
    }
  }

  // --- name lookups against the structure built so far

  bool known_operator(const std::string& n) const {
    return is_builtin_operator(n) || structure().find_operator(n) != nullptr;
  }
  bool known_infix(const std::string& n) const {
    const OperatorSig* sig = structure().find_operator(n);
    return sig && sig->infix;
  }
  bool declared_anywhere(const std::string& n) const {
    return structure().is_individual(n) || structure().is_concept(n) ||
           structure().find_operator(n) != nullptr;
  }
  bool boolean_result(const Term& t) const {
    if (t.kind != TermKind::Apply) return false;
    if (is_boolean_builtin(t.name)) return true;
    const OperatorSig* sig = structure().find_operator(t.name);
    return sig && sig->range && *sig->range == "Bool";
  }

  // --- statements

  void statement() {
    switch (peek().kind) {
      case Tok::KwIndividual:
      case Tok::KwConcept:
        declaration();
        return;
      case Tok::KwOp:
        operator_declaration();
        return;
      case Tok::KwDef:
        definition();
        return;
      case Tok::KwAssert:
        assert_statement();
        return;
      default:
        error(peek().span,
              "expected 'individual', 'concept', 'op', 'def', or 'assert'");
    }
  }

  void check_fresh_name(const std::string& name, const SourceSpan& span) {
    if (declared_anywhere(name) || is_builtin_operator(name)) {
      diags_.push_back({Diagnostic::Severity::Error,
                        "'" + name + "' is already declared", span});
    }
  }

  void declaration() {
    bool individuals = peek().kind == Tok::KwIndividual;
    advance();
    do {
      SourceSpan span = peek().span;
      std::string name = expect_ident(individuals ? "an individual name"
                                                  : "a concept name");
      check_fresh_name(name, span);
      if (individuals) {
        kb_.structure.individuals.insert(name);
      } else {
        kb_.structure.concepts.insert(name);
      }
    } while (accept(","));
    expect(";", "after declaration");
  }

  void operator_declaration() {
    advance();
    SourceSpan span = peek().span;
    if (peek().kind != Tok::Ident && peek().kind != Tok::Sym) {
      error(span, "expected an operator name");
    }
    std::string name = advance().text;
    check_fresh_name(name, span);
    OperatorSig sig;
    sig.name = name;
    expect("(", "after operator name");
    do {
      SourceSpan cspan = peek().span;
      std::string c = expect_ident("a domain concept name");
      if (!structure().is_concept(c)) {
        error(cspan, "domain concept '" + c + "' is not declared");
      }
      sig.domain.push_back(c);
    } while (accept(","));
    expect(")", "after operator domain");
    if (accept(":")) {
      SourceSpan rspan = peek().span;
      std::string r = expect_ident("a range concept name");
      if (!structure().is_concept(r)) {
        error(rspan, "range concept '" + r + "' is not declared");
      }
      sig.range = r;
    }
    if (peek().kind == Tok::KwInfix) {
      advance();
      sig.infix = true;
      if (sig.arity() != 2) {
        diags_.push_back({Diagnostic::Severity::Error,
                          "infix operator '" + name + "' must be binary",
                          span});
      }
    }
    expect(";", "after operator declaration");
    kb_.structure.operators[name] = std::move(sig);
  }

  // --- definitions

  void definition() {
    SourceSpan span = peek().span;
    advance();
    if (peek().kind != Tok::Ident && peek().kind != Tok::Sym) {
      error(peek().span, "expected a definition target");
    }
    SourceSpan target_span = peek().span;
    std::string target = advance().text;

    if (at_sym("(")) {
      if (!known_operator(target)) {
        error(target_span, "definition target '" + target +
                               "' is not a declared operator");
      }
      operator_definition(target, span);
      return;
    }
    if (structure().is_individual(target)) {
      expect("::=", "in definition");
      Term body = parse_term(nullptr, true);
      expect(";", "after definition");
      kb_.definitions.push_back({IndividualDef{target, std::move(body)}, span});
      return;
    }
    if (structure().is_concept(target)) {
      expect("::=", "in definition");
      concept_definition(target, span);
      return;
    }
    error(target_span, "definition target '" + target + "' is not declared");
  }

  void operator_definition(const std::string& target, const SourceSpan& span) {
    expect("(", "after operator name");
    std::vector<std::pair<std::string, int>> params;
    std::set<std::string> param_concepts;
    do {
      SourceSpan cspan = peek().span;
      std::string c = expect_ident("a parameter concept");
      if (checking_ && !structure().is_concept(c)) {
        error(cspan, "parameter '" + c + "' is not a declared concept");
      }
      int copy = 1;
      if (accept("^")) copy = parse_copy_index();
      for (const auto& p : params) {
        if (p.first == c && p.second == copy) {
          error(cspan, "duplicate parameter " + c + "^" +
                           std::to_string(copy));
        }
      }
      params.emplace_back(c, copy);
      param_concepts.insert(c);
    } while (accept(","));
    expect(")", "after parameters");
    expect("::=", "in definition");
    Term body = parse_term(&param_concepts, true);
    expect(";", "after definition");
    kb_.definitions.push_back(
        {OperatorDef{target, std::move(params), std::move(body)}, span});
  }

  void concept_definition(const std::string& target, const SourceSpan& span) {
    // (Source | filter) at the top level is a comprehension definition.
    if (at_sym("(") && peek(1).kind == Tok::Ident &&
        peek(2).kind == Tok::Sym && peek(2).text == "|") {
      advance();
      SourceSpan sspan = peek().span;
      std::string source = advance().text;
      if (checking_ && !structure().is_concept(source)) {
        error(sspan, "comprehension source '" + source +
                         "' is not a declared concept");
      }
      advance();  // |
      std::set<std::string> refs{source};
      Assertion filter = lowered(parse_formula(&refs));
      expect(")", "after comprehension filter");
      expect(";", "after definition");
      kb_.definitions.push_back(
          {ComprehensionDef{target, source, std::move(filter)}, span});
      return;
    }
    ConceptExpr body = parse_concept_expr();
    expect(";", "after definition");
    kb_.definitions.push_back({ConceptDef{target, std::move(body)}, span});
  }

  int parse_copy_index() {
    SourceSpan span = peek().span;
    std::string digits = expect_ident("a copy index");
    if (!is_numeral(digits)) error(span, "copy index must be a number");
    long v = std::stol(digits);
    if (v < 1) error(span, "copy index must be at least 1");
    return static_cast<int>(v);
  }

  // --- concept expressions

  ConceptExpr parse_concept_expr() { return cexpr_union(); }

  ConceptExpr cexpr_union() {
    ConceptExpr e = cexpr_isect();
    while (accept("∪")) {
      e = ConceptExpr::binary(ConceptExpr::Kind::Union, std::move(e),
                              cexpr_isect());
    }
    return e;
  }

  ConceptExpr cexpr_isect() {
    ConceptExpr e = cexpr_product();
    for (;;) {
      if (accept("∩")) {
        e = ConceptExpr::binary(ConceptExpr::Kind::Intersect, std::move(e),
                                cexpr_product());
      } else if (accept("\\")) {
        e = ConceptExpr::binary(ConceptExpr::Kind::Diff, std::move(e),
                                cexpr_product());
      } else {
        return e;
      }
    }
  }

  ConceptExpr cexpr_product() {
    ConceptExpr e = cexpr_primary();
    while (accept("×") || (peek().kind == Tok::Ident && peek().text == "x" &&
                           (++pos_, true))) {
      e = ConceptExpr::binary(ConceptExpr::Kind::Product, std::move(e),
                              cexpr_primary());
    }
    return e;
  }

  ConceptExpr cexpr_primary() {
    if (accept("(")) {
      ConceptExpr e = parse_concept_expr();
      expect(")", "in concept expression");
      return e;
    }
    if (at_sym("{")) {
      advance();
      std::vector<Term> members;
      if (!accept("}")) {
        do {
          members.push_back(parse_term(nullptr, false));
        } while (accept(","));
        expect("}", "after enumeration members");
      }
      return ConceptExpr::members_of(std::move(members));
    }
    SourceSpan span = peek().span;
    if (peek().kind != Tok::Ident && peek().kind != Tok::Sym) {
      error(span, "expected a concept expression");
    }
    std::string name = advance().text;
    if (name == "pow" && at_sym("(")) {
      advance();
      ConceptExpr arg = parse_concept_expr();
      expect(")", "after pow argument");
      return ConceptExpr::power(std::move(arg));
    }
    if (at_sym("(")) {
      if (checking_ && !known_operator(name)) {
        error(span, "replacement operator '" + name + "' is not declared");
      }
      advance();
      std::vector<ConceptExpr> sources;
      do {
        sources.push_back(parse_concept_expr());
      } while (accept(","));
      expect(")", "after replacement arguments");
      return ConceptExpr::replace(name, std::move(sources));
    }
    if (checking_ && !structure().is_concept(name)) {
      error(span, "concept '" + name + "' is not declared");
    }
    return ConceptExpr::concept_name(name);
  }

  // --- assertions and formulas

  void assert_statement() {
    SourceSpan span = peek().span;
    advance();
    std::vector<Formula> parts;
    do {
      parts.push_back(parse_formula(nullptr));
    } while (accept(","));
    expect(";", "after assertion");
    Formula f = parts.size() == 1 ? std::move(parts.front())
                                  : Formula::make_multi(std::move(parts));
    Assertion a = f.kind == Formula::Kind::Prim ? f.prim : lowered(f);
    if (is_schema(a)) {
      kb_.schema_assertions.push_back({std::move(a), span});
    } else {
      kb_.assertions.push_back({std::move(a), span});
    }
  }

  Assertion lowered(const Formula& f) {
    try {
      FreshNamer namer(kb_with_external());
      return desugar_formula(f, namer);
    } catch (const Error& e) {
      error(peek().span, e.what());
    }
  }

  KnowledgeBase kb_with_external() const {
    if (!external_) return kb_;
    KnowledgeBase shell;
    shell.structure = *external_;
    return shell;
  }

  Formula parse_formula(const std::set<std::string>* refs) {
    Formula f = formula_implies(refs);
    while (accept("≡")) {
      f = Formula::make_binary(Formula::Kind::Equiv, std::move(f),
                               formula_implies(refs));
    }
    return f;
  }

  Formula formula_implies(const std::set<std::string>* refs) {
    Formula f = formula_or(refs);
    if (accept("→")) {
      return Formula::make_binary(Formula::Kind::Implies, std::move(f),
                                  formula_implies(refs));
    }
    return f;
  }

  Formula formula_or(const std::set<std::string>* refs) {
    Formula f = formula_and(refs);
    while (accept("∨")) {
      f = Formula::make_binary(Formula::Kind::Or, std::move(f),
                               formula_and(refs));
    }
    return f;
  }

  Formula formula_and(const std::set<std::string>* refs) {
    Formula f = formula_unary(refs);
    while (accept("∧")) {
      f = Formula::make_binary(Formula::Kind::And, std::move(f),
                               formula_unary(refs));
    }
    return f;
  }

  Formula formula_unary(const std::set<std::string>* refs) {
    if (accept("¬")) return Formula::make_not(formula_unary(refs));
    if (at_sym("∀") || at_sym("∃")) return quantifier();
    return formula_atom(refs);
  }

  Formula quantifier() {
    bool universal = peek().text == "∀";
    advance();
    expect("(", "after quantifier");
    SourceSpan cspan = peek().span;
    std::string bound = expect_ident("a quantified concept name");
    if (checking_ && !structure().is_concept(bound)) {
      error(cspan, "quantified concept '" + bound + "' is not declared");
    }
    expect(",", "after quantified concept");
    std::set<std::string> refs{bound};
    Assertion body = lowered(parse_formula(&refs));
    expect(")", "after quantifier body");
    return Formula::make_quantifier(
        universal ? Formula::Kind::Forall : Formula::Kind::Exists, bound,
        std::move(body));
  }

  // Both a parenthesized formula and a term can open with '('; try the
  // formula reading and back off when the suffix proves it was a term.
  Formula formula_atom(const std::set<std::string>* refs) {
    if (at_sym("(")) {
      std::size_t save_pos = pos_;
      std::size_t save_diags = diags_.size();
      try {
        advance();
        Formula f = parse_formula(refs);
        expect(")", "after formula");
        if (!term_continues()) return f;
      } catch (const SyncError&) {
      }
      pos_ = save_pos;
      diags_.resize(save_diags);
    }
    return assertion_core(refs);
  }

  bool term_continues() const {
    if (peek().kind == Tok::Ident) {
      return peek().text == "x" || known_infix(peek().text);
    }
    if (peek().kind != Tok::Sym) return false;
    const std::string& t = peek().text;
    static const std::set<std::string> cont{"=", "≠", "∪", "∩", "\\", "×",
                                            "∈", "⊆", "≥", "^", "."};
    return cont.count(t) > 0 || known_infix(t);
  }

  Formula assertion_core(const std::set<std::string>* refs) {
    SourceSpan span = peek().span;
    Term lhs = parse_term(refs, true);
    if (accept("=")) {
      Term rhs = parse_term(refs, true);
      return Formula::make_prim({std::move(lhs), std::move(rhs)});
    }
    if (accept("≠")) {
      Term rhs = parse_term(refs, true);
      return Formula::make_not(
          Formula::make_prim({std::move(lhs), std::move(rhs)}));
    }
    if (boolean_result(lhs)) {
      return Formula::make_prim({std::move(lhs), Term::lit(Value::top())});
    }
    error(span, "expected '=', '≠', or a truth-valued application");
  }

  // --- terms
  // Precedence, tightest first: postfix '.', user infix, ×, ∩ and \,
  // ∪, then ∈ ⊆ ≥ (and = when nested inside a larger term).

  Term parse_term(const std::set<std::string>* refs, bool top) {
    Term t = term_union(refs);
    for (;;) {
      std::string op;
      if (at_sym("∈")) {
        op = builtin::member_op;
      } else if (at_sym("⊆")) {
        op = builtin::subset_op;
      } else if (at_sym("≥")) {
        op = builtin::geq_op;
      } else if (!top && at_sym("=")) {
        op = builtin::eq_op;
      } else {
        return t;
      }
      advance();
      Term rhs = term_union(refs);
      t = Term::apply(op, {std::move(t), std::move(rhs)});
    }
  }

  Term term_union(const std::set<std::string>* refs) {
    Term t = term_isect(refs);
    while (accept("∪")) {
      t = Term::apply(builtin::union_op, {std::move(t), term_isect(refs)});
    }
    return t;
  }

  Term term_isect(const std::set<std::string>* refs) {
    Term t = term_product(refs);
    for (;;) {
      if (accept("∩")) {
        t = Term::apply(builtin::intersect_op,
                        {std::move(t), term_product(refs)});
      } else if (accept("\\")) {
        t = Term::apply(builtin::difference_op,
                        {std::move(t), term_product(refs)});
      } else {
        return t;
      }
    }
  }

  Term term_product(const std::set<std::string>* refs) {
    Term t = term_user_infix(refs);
    for (;;) {
      if (accept("×") || (peek().kind == Tok::Ident && peek().text == "x" &&
                          !known_infix("x") && (++pos_, true))) {
        t = Term::apply(builtin::product_op,
                        {std::move(t), term_user_infix(refs)});
      } else {
        return t;
      }
    }
  }

  Term term_user_infix(const std::set<std::string>* refs) {
    Term t = term_postfix(refs);
    while ((peek().kind == Tok::Sym || peek().kind == Tok::Ident) &&
           known_infix(peek().text)) {
      std::string op = advance().text;
      t = Term::apply(op, {std::move(t), term_postfix(refs)});
    }
    return t;
  }

  Term term_postfix(const std::set<std::string>* refs) {
    Term t = term_primary(refs);
    while (at_sym(".") && (peek(1).kind == Tok::Ident ||
                           peek(1).kind == Tok::Sym)) {
      advance();
      SourceSpan span = peek().span;
      std::string op = advance().text;
      if (checking_ && !known_operator(op)) {
        error(span, "postfix operator '" + op + "' is not declared");
      }
      t = Term::apply(op, {std::move(t)});
    }
    return t;
  }

  Term term_primary(const std::set<std::string>* refs) {
    const Token& tk = peek();
    if (tk.kind == Tok::Sym) {
      if (accept("∅")) return Term::lit(Value::empty_set());
      if (accept("⊤")) return Term::lit(Value::top());
      if (accept("⊥")) return Term::lit(Value::bottom());
      if (at_sym("{")) return set_literal(refs);
      if (at_sym("(")) return paren_term(refs);
      if (known_operator(tk.text) && peek(1).kind == Tok::Sym &&
          peek(1).text == "(") {
        std::string name = advance().text;
        return application(name, refs);
      }
      error(tk.span, "expected a term");
    }
    if (tk.kind != Tok::Ident) error(tk.span, "expected a term");
    SourceSpan span = tk.span;
    std::string name = advance().text;
    if (at_sym("(")) return application(name, span, refs);
    if (accept("^")) {
      int copy = parse_copy_index();
      if (checking_ && !structure().is_concept(name)) {
        error(span, "copy suffix on '" + name + "', which is not a concept");
      }
      return Term::concept_ref(name, copy);
    }
    if (refs && refs->count(name)) return Term::concept_ref(name, 1);
    if (checking_ && !declared_anywhere(name) && !is_numeral(name)) {
      error(span, "unknown name '" + name + "'");
    }
    return Term::atomic(name);
  }

  Term application(const std::string& name,
                   const std::set<std::string>* refs) {
    return application(name, peek().span, refs);
  }

  Term application(const std::string& name, const SourceSpan& span,
                   const std::set<std::string>* refs) {
    if (checking_ && !known_operator(name)) {
      error(span, "unknown operator '" + name + "'");
    }
    expect("(", "in application");
    std::vector<Term> args;
    do {
      args.push_back(parse_term(refs, false));
    } while (accept(","));
    expect(")", "after arguments");
    return Term::apply(name, std::move(args));
  }

  Term set_literal(const std::set<std::string>* refs) {
    advance();
    if (accept("}")) return Term::lit(Value::empty_set());
    std::vector<Term> elems;
    do {
      elems.push_back(parse_term(refs, false));
    } while (accept(","));
    expect("}", "after set elements");
    return Term::set_of(std::move(elems));
  }

  Term paren_term(const std::set<std::string>* refs) {
    advance();
    // (C | filter) selects the members of C passing the filter.
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Sym &&
        peek(1).text == "|") {
      SourceSpan span = peek().span;
      std::string source = advance().text;
      if (checking_ && !structure().is_concept(source)) {
        error(span, "comprehension source '" + source +
                        "' is not a declared concept");
      }
      advance();  // |
      std::set<std::string> inner = refs ? *refs : std::set<std::string>{};
      inner.insert(source);
      Assertion filter = lowered(parse_formula(&inner));
      expect(")", "after comprehension filter");
      return Term::compr(source, std::move(filter));
    }
    std::vector<Term> items;
    do {
      items.push_back(parse_term(refs, false));
    } while (accept(","));
    expect(")", "after term");
    if (items.size() == 1) return std::move(items.front());
    return Term::tuple_of(std::move(items));
  }
};

std::vector<Diagnostic> dedup_by_message(std::vector<Diagnostic> ds) {
  std::set<std::string> seen;
  std::vector<Diagnostic> out;
  for (auto& d : ds) {
    if (seen.insert(d.message).second) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

ParseResult parse_kb(const std::string& source, const std::string& filename) {
  ParseResult result;
  Lexer lexer(source, filename, result.diagnostics);
  std::vector<Token> toks = lexer.run();
  if (has_errors(result.diagnostics)) return result;

  Parser parser(std::move(toks), result.diagnostics, nullptr);
  KnowledgeBase kb = parser.run_kb();
  if (has_errors(result.diagnostics)) {
    result.diagnostics = dedup_by_message(std::move(result.diagnostics));
    return result;
  }

  std::vector<Diagnostic> semantic = validate_structure(kb);
  for (Diagnostic& d : semantic) {
    if (d.span.file.empty()) d.span.file = filename;
    result.diagnostics.push_back(std::move(d));
  }
  result.diagnostics = dedup_by_message(std::move(result.diagnostics));
  if (!has_errors(result.diagnostics)) result.kb = std::move(kb);
  return result;
}

AssertionParse parse_assertion(const std::string& source,
                               const std::string& filename,
                               const SyntacticStructure* structure) {
  AssertionParse result;
  Lexer lexer(source, filename, result.diagnostics);
  std::vector<Token> toks = lexer.run();
  if (has_errors(result.diagnostics)) return result;

  Parser parser(std::move(toks), result.diagnostics, structure);
  try {
    auto [assertion, schema] = parser.run_assertion();
    result.assertion = std::move(assertion);
    result.schema = schema;
  } catch (const SyncError&) {
  }
  if (has_errors(result.diagnostics)) result.assertion.reset();
  return result;
}

}  // namespace setkr
