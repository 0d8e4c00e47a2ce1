#include "setkr/parser.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "setkr/desugar.hpp"
#include "setkr/errors.hpp"
#include "support/gen.hpp"

using namespace setkr;
using namespace setkr::testing;

namespace {

const char* kArithmetic =
    "individual 0; concept N; op Succ(N);\n"
    "def 0 ::= ∅;\n"
    "def Succ(N) ::= {N, {N}};\n"
    "def N ::= {0} ∪ Succ(N);\n"
    "assert Succ(0) = {∅, {∅}};\n";

SyntacticStructure demo_structure() {
  SyntacticStructure st;
  st.individuals = {"a", "b", "c"};
  st.concepts = {"C", "D", "Bool"};
  st.operators["Succ"] = {"Succ", {"C"}, std::nullopt, false};
  st.operators["+"] = {"+", {"C", "C"}, std::string("C"), true};
  st.operators["R"] = {"R", {"C", "C"}, std::string("Bool"), false};
  return st;
}

Term at(const char* n) { return Term::atomic(n); }

Assertion parse_one(const std::string& text,
                    const SyntacticStructure& st) {
  auto r = parse_assertion(text, "<test>", &st);
  REQUIRE_MESSAGE(r.ok(), text << ": " <<
                  (r.diagnostics.empty() ? "" : r.diagnostics[0].message));
  return *r.assertion;
}

}  // namespace

TEST_CASE("parses declarations and definitions of the arithmetic base") {
  auto r = parse_kb(kArithmetic, "arith.skr");
  REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty()
                               ? ""
                               : format(r.diagnostics[0])));
  const KnowledgeBase& kb = *r.kb;
  CHECK(kb.structure.individuals == std::set<std::string>{"0"});
  CHECK(kb.structure.concepts == std::set<std::string>{"N"});
  REQUIRE(kb.definitions.size() == 3);
  CHECK(kb.definitions[0].kind_label() == "individual");
  CHECK(kb.definitions[1].kind_label() == "operator");
  CHECK(kb.definitions[2].kind_label() == "replacement");
  const auto& succ = std::get<OperatorDef>(kb.definitions[1].node);
  CHECK(succ.params ==
        std::vector<std::pair<std::string, int>>{{"N", 1}});
  CHECK(succ.body == Term::set_of({Term::concept_ref("N"),
                                   Term::set_of({Term::concept_ref("N")})}));
  REQUIRE(kb.assertions.size() == 1);
  Value nested = Value::set({Value::empty_set(),
                             Value::set({Value::empty_set()})});
  CHECK(kb.assertions[0].assertion.rhs ==
        Term::set_of({Term::lit(Value::empty_set()),
                      Term::set_of({Term::lit(Value::empty_set())})}));
  CHECK(nested.size() == 2);
}

TEST_CASE("parses enumerations and concept operations") {
  auto r = parse_kb(
      "concept Digits, Human, Male, Man;\n"
      "def Digits ::= {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};\n"
      "def Man ::= Human /\\ Male;\n");
  REQUIRE(r.ok());
  const auto& digits = std::get<ConceptDef>(r.kb->definitions[0].node);
  CHECK(digits.body.kind == ConceptExpr::Kind::Members);
  CHECK(digits.body.members.size() == 10);
  CHECK(r.kb->definitions[0].kind_label() == "enumeration");
  const auto& man = std::get<ConceptDef>(r.kb->definitions[1].node);
  CHECK(man.body == ConceptExpr::binary(ConceptExpr::Kind::Intersect,
                                        ConceptExpr::concept_name("Human"),
                                        ConceptExpr::concept_name("Male")));
  CHECK(r.kb->definitions[1].kind_label() == "operation");
}

TEST_CASE("parses infix and nested assertions") {
  auto st = demo_structure();
  st.individuals.insert("0");
  st.individuals.insert("5");
  Assertion plus = parse_one("2 + 3 = 5", st);
  CHECK(plus.lhs == Term::apply("+", {at("2"), at("3")}));
  CHECK(plus.rhs == at("5"));

  Assertion refl = parse_one("a = a", st);
  CHECK(refl.lhs == refl.rhs);

  SyntacticStructure nested_st;
  nested_st.individuals = {"a", "b", "c", "d"};
  nested_st.concepts = {"T"};
  nested_st.operators["Op"] = {"Op", {"T", "T"}, std::nullopt, false};
  nested_st.operators["Opp"] = {"Opp", {"T"}, std::nullopt, false};
  Assertion nested = parse_one("Op(a, Op(b, Opp(c))) = Opp(d)", nested_st);
  CHECK(!is_primitive(nested));
  CHECK(nested.lhs ==
        Term::apply("Op", {at("a"), Term::apply("Op", {at("b"),
                           Term::apply("Opp", {at("c")})})}));
}

TEST_CASE("unicode and ascii spellings agree") {
  auto st = demo_structure();
  CHECK(parse_one("a ∪ b = c", st) == parse_one("a \\/ b = c", st));
  CHECK(parse_one("a ∩ b = c", st) == parse_one("a /\\ b = c", st));
  CHECK(parse_one("a ∈ C", st) == parse_one("a in C", st));
  CHECK(parse_one("a ⊆ b", st) == parse_one("a subseteq b", st));
  CHECK(parse_one("a ≠ b", st) == parse_one("a != b", st));
  CHECK(parse_one("¬(a = b)", st) == parse_one("not (a = b)", st));
  CHECK(parse_one("a = b ∧ b = c", st) ==
        parse_one("a = b and b = c", st));
  CHECK(parse_one("a = b ∨ b = c", st) == parse_one("a = b or b = c", st));
  CHECK(parse_one("a = b → b = c", st) ==
        parse_one("a = b implies b = c", st));
  CHECK(parse_one("a = b ≡ b = c", st) ==
        parse_one("a = b equiv b = c", st));
  CHECK(parse_one("∀(C, C = C)", st) == parse_one("forall(C, C = C)", st));
  CHECK(parse_one("∃(C, C = a)", st) == parse_one("exists(C, C = a)", st));
  CHECK(parse_one("a = ⊤", st) == parse_one("a = top", st));
  CHECK(parse_one("a = ⊥", st) == parse_one("a = bot", st));
  CHECK(parse_one("a x b = c", st) == parse_one("a × b = c", st));
  CHECK(parse_one("card(C) ≥ 2", st) == parse_one("card(C) >= 2", st));
}

TEST_CASE("term precedence") {
  auto st = demo_structure();
  // ∪ looser than ∩, which matches \ and is left-associative
  CHECK(parse_one("a ∪ b ∩ c = a", st).lhs ==
        Term::apply("∪", {at("a"),
                               Term::apply("∩", {at("b"), at("c")})}));
  CHECK(parse_one("a \\ b ∩ c = a", st).lhs ==
        Term::apply("∩",
                    {Term::apply("\\", {at("a"), at("b")}), at("c")}));
  // × binds tighter than ∩
  CHECK(parse_one("a ∩ b × c = a", st).lhs ==
        Term::apply("∩", {at("a"),
                               Term::apply("×", {at("b"), at("c")})}));
  // declared infix + binds tighter than ×
  CHECK(parse_one("a × b + c = a", st).lhs ==
        Term::apply("×", {at("a"),
                               Term::apply("+", {at("b"), at("c")})}));
  // postfix application binds tightest
  CHECK(parse_one("a.Succ + b = c", st).lhs ==
        Term::apply("+", {Term::apply("Succ", {at("a")}), at("b")}));
  // ∈ loosest: both sides are full set expressions
  CHECK(parse_one("a ∪ b ∈ c ∪ a", st).lhs ==
        Term::apply("∈",
                    {Term::apply("∪", {at("a"), at("b")}),
                     Term::apply("∪", {at("c"), at("a")})}));
}

TEST_CASE("literals, tuples, comprehensions, copies") {
  auto st = demo_structure();
  CHECK(parse_one("{} = ∅", st).lhs == Term::lit(Value::empty_set()));
  CHECK(parse_one("(a, b) = c", st).lhs ==
        Term::tuple_of({at("a"), at("b")}));
  CHECK(parse_one("((a)) = a", st).lhs == at("a"));

  Assertion compr = parse_one("(C | C = a) = ∅", st);
  CHECK(compr.lhs ==
        Term::compr("C", {Term::concept_ref("C", 1), at("a")}));

  auto sch = parse_assertion("C^1 = C^2", "<t>", &st);
  REQUIRE(sch.ok());
  CHECK(sch.schema);
  CHECK(sch.assertion->lhs == Term::concept_ref("C", 1));
  CHECK(sch.assertion->rhs == Term::concept_ref("C", 2));

  // bare concept name in term position denotes the concept itself
  Assertion bare = parse_one("C = {a, b}", st);
  CHECK(bare.lhs == at("C"));
  CHECK(!is_schema(bare));
}

TEST_CASE("logic sugar lowers at parse time") {
  auto st = demo_structure();
  auto sing = [](Term t) { return Term::set_of({std::move(t)}); };
  auto isect = [&](Term x, Term y) {
    return Term::apply("∩", {std::move(x), std::move(y)});
  };

  Assertion neq = parse_one("a != b", st);
  CHECK(neq.lhs == isect(sing(at("a")), sing(at("b"))));
  CHECK(neq.rhs == Term::lit(Value::empty_set()));

  Assertion conj = parse_one("a = b and b = c", st);
  CHECK(conj.lhs ==
        Term::apply("∪", {isect(sing(at("a")), sing(at("b"))),
                               isect(sing(at("b")), sing(at("c")))}));
  CHECK(conj.rhs == Term::set_of({at("a"), at("b"), at("b"), at("c")}));

  // or / implies end in the nonemptiness shape {LHS} ∩ {∅} = ∅
  Assertion disj = parse_one("a = b or b = c", st);
  CHECK(disj.rhs == Term::lit(Value::empty_set()));
  REQUIRE(disj.lhs.kind == TermKind::Apply);
  CHECK(disj.lhs.name == "∩");
  CHECK(disj.lhs.args[1] ==
        Term::set_of({Term::lit(Value::empty_set())}));

  Assertion imp = parse_one("a = b implies b = c", st);
  Term antecedent = Term::apply(
      "\\", {Term::set_of({at("a"), at("b")}),
             isect(sing(at("a")), sing(at("b")))});
  CHECK(imp.lhs.args[0] ==
        sing(Term::apply("∪",
                         {antecedent, isect(sing(at("b")), sing(at("c")))})));

  Assertion fa = parse_one("forall(C, C = a)", st);
  CHECK(fa.lhs == Term::compr("C", {Term::concept_ref("C", 1), at("a")}));
  CHECK(fa.rhs == at("C"));

  Assertion ex = parse_one("exists(C, C = a)", st);
  CHECK(ex.lhs ==
        isect(sing(Term::compr("C", {Term::concept_ref("C", 1), at("a")})),
              sing(Term::lit(Value::empty_set()))));
  CHECK(ex.rhs == Term::lit(Value::empty_set()));
}

TEST_CASE("bare truth-valued applications elaborate to = top") {
  auto st = demo_structure();
  CHECK(parse_one("a in C", st) ==
        Assertion{Term::apply("∈", {at("a"), at("C")}),
                  Term::lit(Value::top())});
  CHECK(parse_one("R(a, b)", st) ==
        Assertion{Term::apply("R", {at("a"), at("b")}),
                  Term::lit(Value::top())});
  // Succ has no Bool range: bare use is an error
  auto r = parse_assertion("Succ(a)", "<t>", &st);
  CHECK(!r.ok());
}

TEST_CASE("comma assertions combine into one tuple equality") {
  auto r = parse_kb(
      "individual a, b, c, d;\n"
      "assert a = b, c = d;\n");
  REQUIRE(r.ok());
  REQUIRE(r.kb->assertions.size() == 1);
  CHECK(r.kb->assertions[0].assertion ==
        Assertion{Term::tuple_of({at("a"), at("c")}),
                  Term::tuple_of({at("b"), at("d")})});
}

TEST_CASE("schema assertions are routed separately") {
  auto r = parse_kb(
      "individual a; concept C;\n"
      "assert C^1 = C^1;\n"
      "assert a = a;\n");
  REQUIRE(r.ok());
  CHECK(r.kb->assertions.size() == 1);
  CHECK(r.kb->schema_assertions.size() == 1);
}

TEST_CASE("comprehension definitions parse") {
  auto r = parse_kb(
      "concept N, Even; op R(N, N): 0;\n");
  CHECK(!r.ok());  // 0 is not a concept
  r = parse_kb(
      "concept N, Even, Bool; op R(N, N): Bool;\n"
      "def Even ::= (N | R(N, N^2));\n");
  REQUIRE_MESSAGE(r.ok(),
                  (r.diagnostics.empty() ? "" : format(r.diagnostics[0])));
  const auto& def = std::get<ComprehensionDef>(r.kb->definitions[0].node);
  CHECK(def.source == "N");
  CHECK(def.filter ==
        Assertion{Term::apply("R", {Term::concept_ref("N", 1),
                                    Term::concept_ref("N", 2)}),
                  Term::lit(Value::top())});
}

TEST_CASE("diagnostics carry usable spans and recovery continues") {
  std::string src =
      "concept C;\n"
      "def C ::= D;\n"
      "assert mystery = mystery;\n";
  auto r = parse_kb(src, "bad.skr");
  CHECK(!r.ok());
  REQUIRE(r.diagnostics.size() >= 2);
  std::size_t lines = 4;
  for (const auto& d : r.diagnostics) {
    CHECK(!d.message.empty());
    CHECK(d.span.line >= 1);
    CHECK(d.span.line <= lines);
    CHECK(d.span.column >= 1);
    CHECK(d.span.file == "bad.skr");
  }
  CHECK(r.diagnostics[0].message.find("'D'") != std::string::npos);
  CHECK(r.diagnostics[1].message.find("mystery") != std::string::npos);
}

TEST_CASE("parse failures never yield a base") {
  for (const char* bad : {
           "individual a",               // missing terminator
           "def x ::= ∅;",          // undeclared target
           "concept C; def C ::= pow;",  // malformed expression
           "assert ;",                   // empty assertion
           "op F(A);",                   // unknown domain concept
           "individual a; assert a;",    // bare non-boolean
           "individual a; individual a;" // duplicate declaration
       }) {
    auto r = parse_kb(bad);
    CHECK_MESSAGE(!r.ok(), bad);
    CHECK(!r.diagnostics.empty());
  }
}

TEST_CASE("printed arithmetic base matches the canonical layout") {
  auto r = parse_kb(kArithmetic);
  REQUIRE(r.ok());
  CHECK(print_kb(*r.kb) ==
        "individual 0;\n"
        "concept N;\n"
        "op Succ(N);\n"
        "def 0 ::= ∅;\n"
        "def Succ(N) ::= {N, {N}};\n"
        "def N ::= ({0} ∪ Succ(N));\n"
        "assert Succ(0) = {∅, {∅}};\n");
}

namespace {

// Random well-formed knowledge bases drawn from the parser's own image.
struct KbGen {
  Rng rng;
  SyntacticStructure st = demo_structure();

  explicit KbGen(std::uint64_t seed) : rng(seed) {}

  Term leaf(const std::vector<std::pair<std::string, int>>* refs) {
    switch (pick(rng, refs ? 6 : 5)) {
      case 0: return Term::atomic("a");
      case 1: return Term::atomic("b");
      case 2: return Term::atomic(std::to_string(pick(rng, 10)));
      case 3: return Term::lit(Value::empty_set());
      case 4: return pick(rng, 2) ? Term::lit(Value::top())
                                  : Term::lit(Value::bottom());
      default: {
        const auto& r = (*refs)[pick(rng, refs->size())];
        return Term::concept_ref(r.first, r.second);
      }
    }
  }

  Term term(int depth, const std::vector<std::pair<std::string, int>>* refs) {
    if (depth <= 0 || chance(rng, 0.35)) return leaf(refs);
    switch (pick(rng, 8)) {
      case 0: {
        std::vector<Term> elems;
        for (std::size_t i = 0, n = 1 + pick(rng, 3); i < n; ++i)
          elems.push_back(term(depth - 1, refs));
        return Term::set_of(std::move(elems));
      }
      case 1: {
        std::vector<Term> items;
        for (std::size_t i = 0, n = 2 + pick(rng, 2); i < n; ++i)
          items.push_back(term(depth - 1, refs));
        return Term::tuple_of(std::move(items));
      }
      case 2:
        return Term::apply("Succ", {term(depth - 1, refs)});
      case 3:
        return Term::apply("+", {term(depth - 1, refs),
                                 term(depth - 1, refs)});
      case 4: {
        const char* ops[] = {"∪", "∩", "\\", "×"};
        return Term::apply(ops[pick(rng, 4)],
                           {term(depth - 1, refs), term(depth - 1, refs)});
      }
      case 5: {
        const char* ops[] = {"∈", "⊆", "=", "geq"};
        return Term::apply(ops[pick(rng, 4)],
                           {term(depth - 1, refs), term(depth - 1, refs)});
      }
      case 6:
        return Term::apply(pick(rng, 2) ? "pow" : "card",
                           {term(depth - 1, refs)});
      default: {
        std::string source = pick(rng, 2) ? "C" : "D";
        std::vector<std::pair<std::string, int>> inner =
            refs ? *refs : std::vector<std::pair<std::string, int>>{};
        inner.emplace_back(source, 1);
        if (chance(rng, 0.3)) inner.emplace_back(source, 2);
        Assertion filter{term(depth - 1, &inner), term(depth - 1, &inner)};
        return Term::compr(source, std::move(filter));
      }
    }
  }

  ConceptExpr cexpr(int depth) {
    if (depth <= 0 || chance(rng, 0.3)) {
      const char* names[] = {"C", "D", "Bool"};
      return ConceptExpr::concept_name(names[pick(rng, 3)]);
    }
    switch (pick(rng, 5)) {
      case 0: {
        std::vector<Term> members;
        for (std::size_t i = 0, n = pick(rng, 3); i < n; ++i)
          members.push_back(term(1, nullptr));
        return ConceptExpr::members_of(std::move(members));
      }
      case 1: {
        ConceptExpr::Kind ks[] = {
            ConceptExpr::Kind::Union, ConceptExpr::Kind::Intersect,
            ConceptExpr::Kind::Diff, ConceptExpr::Kind::Product};
        return ConceptExpr::binary(ks[pick(rng, 4)], cexpr(depth - 1),
                                   cexpr(depth - 1));
      }
      case 2:
        return ConceptExpr::power(cexpr(depth - 1));
      case 3:
        return ConceptExpr::replace("Succ", {cexpr(depth - 1)});
      default:
        return ConceptExpr::replace("+", {cexpr(depth - 1), cexpr(depth - 1)});
    }
  }

  KnowledgeBase make() {
    KnowledgeBase kb;
    kb.structure = st;
    kb.structure.individuals.insert("d0");
    if (chance(rng, 0.7)) {
      kb.definitions.push_back({IndividualDef{"d0", term(2, nullptr)}, {}});
    }
    if (chance(rng, 0.5)) {
      std::vector<std::pair<std::string, int>> params{{"C", 1}};
      if (chance(rng, 0.5)) params.emplace_back("C", 2);
      Term body = term(2, &params);
      std::string target = params.size() == 1 ? "Succ" : "+";
      std::vector<std::pair<std::string, int>> declared = params;
      kb.definitions.push_back(
          {OperatorDef{target, std::move(declared), std::move(body)}, {}});
    }
    if (chance(rng, 0.6)) {
      kb.definitions.push_back({ConceptDef{"D", cexpr(2)}, {}});
    } else if (chance(rng, 0.5)) {
      std::vector<std::pair<std::string, int>> srefs{{"C", 1}, {"C", 2}};
      kb.definitions.push_back(
          {ComprehensionDef{"D", "C",
                            Assertion{term(1, &srefs), term(1, &srefs)}},
           {}});
    }
    for (std::size_t i = 0, n = 1 + pick(rng, 3); i < n; ++i) {
      Assertion a{term(3, nullptr), term(3, nullptr)};
      if (is_schema(a)) {
        kb.schema_assertions.push_back({std::move(a), {}});
      } else {
        kb.assertions.push_back({std::move(a), {}});
      }
    }
    if (chance(rng, 0.4)) {
      std::vector<std::pair<std::string, int>> srefs{{"C", 1}, {"C", 2}};
      Assertion a{term(2, &srefs), term(2, &srefs)};
      if (is_schema(a)) kb.schema_assertions.push_back({std::move(a), {}});
    }
    return kb;
  }
};

}  // namespace

TEST_CASE("round trip: parse of printed base reproduces the ast") {
  KbGen gen(20260817);
  for (int trial = 0; trial < 300; ++trial) {
    KnowledgeBase kb = gen.make();
    std::string text = print_kb(kb);
    CAPTURE(text);
    auto r = parse_kb(text, "roundtrip.skr");
    REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty()
                                 ? text
                                 : format(r.diagnostics[0]) + "\n" + text));
    CHECK(*r.kb == kb);
  }
}

TEST_CASE("round trip: standalone assertions") {
  KbGen gen(77);
  auto st = demo_structure();
  for (int trial = 0; trial < 400; ++trial) {
    Assertion a{gen.term(3, nullptr), gen.term(3, nullptr)};
    std::string text = print_assertion(a);
    CAPTURE(text);
    auto r = parse_assertion(text, "<t>", &st);
    REQUIRE_MESSAGE(r.ok(), text);
    CHECK(*r.assertion == a);
  }
}
