#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "setkr/defs_engine.hpp"
#include "setkr/desugar.hpp"
#include "setkr/dl.hpp"
#include "setkr/errors.hpp"
#include "setkr/parser.hpp"
#include "setkr/semantics.hpp"
#include "support/dl_oracle.hpp"
#include "support/gen.hpp"

using namespace setkr;
using Clock = std::chrono::steady_clock;

namespace {

Term at(const std::string& name) { return Term::atomic(name); }

// Each criterion reports through this: failures append to `detail`,
// successful work bumps `checks`.
struct Report {
  std::uint64_t checks = 0;
  std::string detail;
  bool ok() const { return detail.empty(); }
  void fail(const std::string& msg) {
    if (detail.empty()) detail = msg;
  }
  void expect(bool cond, const std::string& msg) {
    ++checks;
    if (!cond) fail(msg);
  }
};

KnowledgeBase parse_or_die(const std::string& text, Report& report) {
  ParseResult r = parse_kb(text, "<acceptance>");
  if (!r.ok()) {
    report.fail("fixture does not parse: " + format(r.diagnostics.front()));
    return {};
  }
  return std::move(*r.kb);
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2 share one interpretation family: two equalities w = x and
// y = z whose four sides each denote one atom of a universe of one, two, or
// three atoms.

void each_four_term_interpretation(
    const std::function<void(const Interpretation&, bool, bool)>& fn) {
  for (std::size_t universe = 1; universe <= 3; ++universe) {
    std::vector<Value> atoms;
    for (std::size_t i = 1; i <= universe; ++i) {
      atoms.push_back(Value::atom("u" + std::to_string(i)));
    }
    std::vector<std::size_t> idx(4, 0);
    bool exhausted = false;
    while (!exhausted) {
      Interpretation interp;
      interp.individuals["w"] = atoms[idx[0]];
      interp.individuals["x"] = atoms[idx[1]];
      interp.individuals["y"] = atoms[idx[2]];
      interp.individuals["z"] = atoms[idx[3]];
      fn(interp, idx[0] == idx[1], idx[2] == idx[3]);
      std::size_t i = idx.size();
      for (;;) {
        if (i == 0) {
          exhausted = true;
          break;
        }
        --i;
        if (++idx[i] < atoms.size()) break;
        idx[i] = 0;
      }
    }
  }
}

const Assertion kFirst{at("w"), at("x")};
const Assertion kSecond{at("y"), at("z")};

Assertion lower_connective(const Formula& f) {
  FreshNamer namer("_v", {"w", "x", "y", "z"});
  return desugar_formula(f, namer);
}

Report criterion_connectives() {
  Report report;
  Formula a1 = Formula::make_prim(kFirst);
  Formula a2 = Formula::make_prim(kSecond);
  struct Case {
    const char* name;
    Formula formula;
    std::function<bool(bool, bool)> truth;
  };
  std::vector<Case> cases{
      {"negation", Formula::make_not(a1),
       [](bool t1, bool) { return !t1; }},
      {"conjunction", Formula::make_binary(Formula::Kind::And, a1, a2),
       [](bool t1, bool t2) { return t1 && t2; }},
      {"disjunction", Formula::make_binary(Formula::Kind::Or, a1, a2),
       [](bool t1, bool t2) { return t1 || t2; }},
      {"implication", Formula::make_binary(Formula::Kind::Implies, a1, a2),
       [](bool t1, bool t2) { return !t1 || t2; }},
      {"equivalence", Formula::make_binary(Formula::Kind::Equiv, a1, a2),
       [](bool t1, bool t2) { return t1 == t2; }},
  };
  for (const Case& c : cases) {
    Assertion encoded = lower_connective(c.formula);
    each_four_term_interpretation(
        [&](const Interpretation& interp, bool t1, bool t2) {
          report.expect(models(interp, encoded) == c.truth(t1, t2),
                        std::string(c.name) + " encoding diverges when w=x is " +
                            (t1 ? "true" : "false") + " and y=z is " +
                            (t2 ? "true" : "false"));
        });
  }
  return report;
}

Report criterion_tautologies() {
  Report report;
  Formula a1 = Formula::make_prim(kFirst);
  Formula a2 = Formula::make_prim(kSecond);
  using K = Formula::Kind;
  std::vector<std::pair<const char*, Formula>> laws{
      {"first De Morgan law",
       Formula::make_binary(
           K::Equiv, Formula::make_not(Formula::make_binary(K::And, a1, a2)),
           Formula::make_binary(K::Or, Formula::make_not(a1),
                                Formula::make_not(a2)))},
      {"second De Morgan law",
       Formula::make_binary(
           K::Equiv, Formula::make_not(Formula::make_binary(K::Or, a1, a2)),
           Formula::make_binary(K::And, Formula::make_not(a1),
                                Formula::make_not(a2)))},
      {"material implication",
       Formula::make_binary(
           K::Equiv, Formula::make_binary(K::Implies, a1, a2),
           Formula::make_binary(K::Or, Formula::make_not(a1), a2))},
  };
  for (const auto& [name, law] : laws) {
    Assertion encoded = lower_connective(law);
    each_four_term_interpretation(
        [&](const Interpretation& interp, bool, bool) {
          report.expect(models(interp, encoded),
                        std::string(name) + " fails in some interpretation");
        });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 3: quantifier encodings against direct quantification.

Report criterion_quantifiers() {
  Report report;
  Assertion body{Term::apply("F", {Term::concept_ref("C", 1)}),
                 Term::lit(Value::top())};
  Assertion forall_enc =
      desugar_quantifier(Formula::make_quantifier(Formula::Kind::Forall, "C",
                                                  body));
  Assertion exists_enc =
      desugar_quantifier(Formula::make_quantifier(Formula::Kind::Exists, "C",
                                                  body));
  FreshNamer namer("_v", {"C", "F"});
  Assertion not_body = desugar_logic(
      Formula::make_not(Formula::make_prim(body)), namer);
  Assertion exists_not = desugar_quantifier(
      Formula::make_quantifier(Formula::Kind::Exists, "C", not_body));
  Assertion dual_enc = desugar_logic(
      Formula::make_not(Formula::make_prim(exists_not)), namer);

  for (std::size_t n = 0; n <= 4; ++n) {
    std::vector<Value> extent;
    for (std::size_t i = 1; i <= n; ++i) {
      extent.push_back(Value::atom("e" + std::to_string(i)));
    }
    for (unsigned table = 0; table < (1u << n); ++table) {
      Interpretation interp;
      interp.concepts["C"] = Value::set(extent);
      OperatorTable& f = interp.operators["F"];
      f.arity = 1;
      bool all = true;
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        bool hit = (table >> i) & 1u;
        f.entries[{extent[i]}] = hit ? Value::top() : Value::bottom();
        all = all && hit;
        any = any || hit;
      }
      report.expect(models(interp, forall_enc) == all,
                    "universal encoding diverges on a table of " +
                        std::to_string(n) + " rows");
      report.expect(models(interp, exists_enc) == any,
                    "existential encoding diverges on a table of " +
                        std::to_string(n) + " rows");
      report.expect(models(interp, dual_enc) == all,
                    "quantifier duality fails on a table of " +
                        std::to_string(n) + " rows");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 4: the growing chain of numerals.

Value encoded_nat(std::size_t n) {
  Value v = Value::empty_set();
  for (std::size_t i = 0; i < n; ++i) {
    v = Value::set({v, Value::set({v})});
  }
  return v;
}

Report criterion_fixpoint() {
  Report report;
  KnowledgeBase kb = parse_or_die(
      "individual 0;\nconcept N;\nop Succ(N);\n"
      "def 0 ::= ∅;\n"
      "def Succ(N) ::= {N, {N}};\n"
      "def N ::= {0} ∪ Succ(N);\n",
      report);
  if (!report.ok()) return report;

  for (std::size_t k = 0; k <= 6; ++k) {
    EvaluationResult r = evaluate(kb, {}, k);
    const Value& extent = r.interp.concepts.at("N");
    report.expect(extent.elements().size() == k + 1,
                  "after " + std::to_string(k) + " rounds the chain has " +
                      std::to_string(extent.elements().size()) +
                      " elements instead of " + std::to_string(k + 1));
    std::vector<Value> expected;
    for (std::size_t i = 0; i <= k; ++i) expected.push_back(encoded_nat(i));
    report.expect(extent == Value::set(expected),
                  "after " + std::to_string(k) +
                      " rounds the chain is not the first encodings");
  }

  EvaluationResult r = evaluate(kb, {}, 1);
  EvalContext ctx{&r.interp, &kb};
  Value succ0 = eval_term(ctx, Term::apply("Succ", {at("0")}));
  report.expect(succ0 == encoded_nat(1), "Succ(0) is not {∅, {∅}}");
  report.expect(succ0.text() == "{∅, {∅}}",
                "Succ(0) prints as " + succ0.text());
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 5: flattening preserves satisfaction under forced fresh values.

struct FlatVocabulary {
  std::vector<std::string> individuals{"a", "b", "c", "d"};
  std::vector<std::string> unary{"f", "g"};
  std::vector<std::string> binary{"h"};
  std::vector<Value> atoms{Value::atom("u1"), Value::atom("u2"),
                           Value::atom("u3")};
};

Term random_tree(testing::Rng& rng, const FlatVocabulary& voc, int depth,
                 bool under_op) {
  unsigned kinds = under_op ? 2 : 4;
  switch (depth <= 0 ? 0 : testing::pick(rng, kinds)) {
    case 1: {
      if (testing::chance(rng, 0.5)) {
        std::string op = voc.unary[testing::pick(rng, voc.unary.size())];
        return Term::apply(op, {random_tree(rng, voc, depth - 1, true)});
      }
      std::string op = voc.binary[testing::pick(rng, voc.binary.size())];
      return Term::apply(op, {random_tree(rng, voc, depth - 1, true),
                              random_tree(rng, voc, depth - 1, true)});
    }
    case 2: {
      std::vector<Term> elems;
      std::size_t count = 1 + testing::pick(rng, 2);
      for (std::size_t i = 0; i < count; ++i) {
        elems.push_back(random_tree(rng, voc, depth - 1, false));
      }
      return Term::set_of(std::move(elems));
    }
    case 3:
      return Term::tuple_of({random_tree(rng, voc, depth - 1, false),
                             random_tree(rng, voc, depth - 1, false)});
    default:
      return at(voc.individuals[testing::pick(rng, voc.individuals.size())]);
  }
}

Interpretation random_flat_interp(testing::Rng& rng,
                                  const FlatVocabulary& voc) {
  Interpretation interp;
  for (const std::string& name : voc.individuals) {
    interp.individuals[name] = voc.atoms[testing::pick(rng, voc.atoms.size())];
  }
  for (const std::string& op : voc.unary) {
    OperatorTable& t = interp.operators[op];
    t.arity = 1;
    for (const Value& a : voc.atoms) {
      t.entries[{a}] = voc.atoms[testing::pick(rng, voc.atoms.size())];
    }
  }
  for (const std::string& op : voc.binary) {
    OperatorTable& t = interp.operators[op];
    t.arity = 2;
    for (const Value& a : voc.atoms) {
      for (const Value& b : voc.atoms) {
        t.entries[{a, b}] = voc.atoms[testing::pick(rng, voc.atoms.size())];
      }
    }
  }
  return interp;
}

Report criterion_flattening(std::uint64_t seed) {
  Report report;

  // The doubly nested shape must flatten to exactly its three equalities.
  Assertion nested{
      Term::apply(
          "Op", {at("a"), Term::apply("Op", {at("b"),
                                             Term::apply("Opp", {at("c")})})}),
      Term::apply("Opp", {at("d")})};
  FreshNamer pinned("_v", {"Op", "Opp", "a", "b", "c", "d"});
  std::vector<Assertion> flat = flatten_nested(nested, pinned);
  report.expect(flat.size() == 3, "the worked example flattens to " +
                                      std::to_string(flat.size()) +
                                      " assertions instead of 3");
  if (flat.size() == 3) {
    report.expect(flat[0] == Assertion{Term::apply("Op", {at("a"), at("_v1")}),
                                       Term::apply("Opp", {at("d")})},
                  "unexpected rewritten spine");
    report.expect(
        flat[1] == Assertion{at("_v1"), Term::apply("Op", {at("b"), at("_v2")})},
        "unexpected first extraction");
    report.expect(flat[2] == Assertion{at("_v2"), Term::apply("Opp", {at("c")})},
                  "unexpected second extraction");
  }

  FlatVocabulary voc;
  std::set<std::string> taken(voc.individuals.begin(), voc.individuals.end());
  taken.insert(voc.unary.begin(), voc.unary.end());
  taken.insert(voc.binary.begin(), voc.binary.end());

  testing::Rng rng(seed);
  for (int trial = 0; trial < 1200 && report.ok(); ++trial) {
    Assertion original{random_tree(rng, voc, 3, false),
                       random_tree(rng, voc, 3, false)};
    Interpretation base = random_flat_interp(rng, voc);
    bool original_truth = models(base, original);

    FreshNamer namer("_v", taken);
    std::vector<Assertion> pieces = flatten_nested(original, namer);
    for (const Assertion& p : pieces) {
      report.expect(is_primitive(p), "flattening left a nested assertion");
    }

    // Fresh individuals are forced to the value of the subterm they name.
    // Later names are extracted from deeper positions, so assigning in
    // reverse order always evaluates a closed term.
    Interpretation extended = base;
    EvalContext ctx{&extended, nullptr};
    for (std::size_t i = pieces.size(); i-- > 1;) {
      const Assertion& def = pieces[i];
      if (def.lhs.kind != TermKind::Atomic) {
        report.fail("extraction does not define a fresh individual");
        break;
      }
      extended.individuals[def.lhs.name] = eval_term(ctx, def.rhs);
    }
    if (!report.ok()) break;

    bool conjunction = true;
    for (const Assertion& p : pieces) {
      conjunction = conjunction && models(extended, p);
    }
    report.expect(conjunction == original_truth,
                  "satisfaction changed in trial " + std::to_string(trial));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 6: the tuple encoding of several assertions at once.

Report criterion_multi(std::uint64_t) {
  Report report;
  std::vector<Value> atoms{Value::atom("u1"), Value::atom("u2")};
  std::vector<std::string> lhs_names{"x1", "x2", "x3"};
  std::vector<std::string> rhs_names{"y1", "y2", "y3"};
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<Assertion> parts;
    for (std::size_t i = 0; i < n; ++i) {
      parts.push_back(Assertion{at(lhs_names[i]), at(rhs_names[i])});
    }
    Assertion combined = desugar_multi(parts);

    std::vector<std::size_t> idx(2 * n, 0);
    for (;;) {
      Interpretation interp;
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        interp.individuals[lhs_names[i]] = atoms[idx[2 * i]];
        interp.individuals[rhs_names[i]] = atoms[idx[2 * i + 1]];
        all = all && (idx[2 * i] == idx[2 * i + 1]);
      }
      report.expect(models(interp, combined) == all,
                    "combined assertion diverges from its components at n = " +
                        std::to_string(n));
      std::size_t i = idx.size();
      for (;;) {
        if (i == 0) goto next_n;
        --i;
        if (++idx[i] < atoms.size()) break;
        idx[i] = 0;
      }
    }
  next_n:;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 7: translated concept extents equal the direct reading.

Report criterion_dl_agreement(std::uint64_t seed) {
  Report report;
  using testing::DlWorld;

  auto agree = [&](const DlExpr& e, const DlWorld& w, const char* where) {
    Value translated = testing::translated_extent(e, w);
    Value direct = testing::atoms_value(testing::extension(e, w));
    report.expect(translated == direct,
                  std::string("translation diverges (") + where + "): got " +
                      translated.text() + ", expected " + direct.text());
  };

  DlRole r{"R", false};
  DlRole rinv{"R", true};
  std::vector<DlExpr> family{
      DlExpr::atomic("C"),
      DlExpr::nominal("a"),
      DlExpr::complement(DlExpr::atomic("C")),
      DlExpr::intersect(DlExpr::atomic("C"), DlExpr::nominal("a")),
      DlExpr::unite(DlExpr::atomic("C"), DlExpr::nominal("b")),
      DlExpr::exists(r, DlExpr::atomic("C")),
      DlExpr::forall(r, DlExpr::atomic("C")),
      DlExpr::at_least(0, r, DlExpr::atomic("C")),
      DlExpr::at_least(1, r, DlExpr::atomic("C")),
      DlExpr::at_least(2, r, DlExpr::atomic("C")),
      DlExpr::exists(rinv, DlExpr::atomic("C")),
      DlExpr::forall(rinv, DlExpr::atomic("C")),
      DlExpr::exists(r, DlExpr::exists(r, DlExpr::atomic("C"))),
      DlExpr::complement(DlExpr::exists(r, DlExpr::atomic("C"))),
      DlExpr::exists(r, DlExpr::atomic(dlnames::thing)),
      DlExpr::forall(rinv, DlExpr::atomic(dlnames::thing)),
      DlExpr::at_least(2, r, DlExpr::atomic(dlnames::thing)),
      DlExpr::intersect(DlExpr::atomic(dlnames::thing), DlExpr::atomic("C")),
      DlExpr::complement(DlExpr::atomic(dlnames::thing)),
  };

  std::vector<std::string> inds{"a", "b"};
  std::vector<std::pair<std::string, std::string>> all_pairs;
  for (const std::string& x : inds) {
    for (const std::string& y : inds) all_pairs.emplace_back(x, y);
  }
  for (unsigned rel = 0; rel < 16 && report.ok(); ++rel) {
    for (unsigned ext = 0; ext < 4 && report.ok(); ++ext) {
      DlWorld world;
      world.individuals = {"a", "b"};
      world.roles["R"] = {};
      world.concepts["C"] = {};
      for (std::size_t i = 0; i < all_pairs.size(); ++i) {
        if (rel & (1u << i)) world.roles["R"].insert(all_pairs[i]);
      }
      for (std::size_t i = 0; i < inds.size(); ++i) {
        if (ext & (1u << i)) world.concepts["C"].insert(inds[i]);
      }
      for (const DlExpr& e : family) agree(e, world, "exhaustive");
    }
  }

  std::vector<std::string> pool{"i1", "i2", "i3", "i4", "i5"};
  std::vector<std::string> concepts{"C", "D"};
  std::vector<std::string> roles{"R", "S"};
  testing::Rng rng(seed);
  for (int trial = 0; trial < 500 && report.ok(); ++trial) {
    DlWorld world = testing::random_world(rng, pool, concepts, roles);
    DlExpr e = testing::random_expr(rng, pool, concepts, roles, 3);
    DlSignature sig = testing::world_signature(world);
    collect_signature(e, sig);
    for (const std::string& extra : sig.individuals) {
      world.individuals.insert(extra);
    }
    agree(e, world, "random");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 8: recursion outside replacements is rejected with a witness.

Report criterion_recursion_guard() {
  Report report;

  KnowledgeBase self = parse_or_die(
      "individual a, 1;\nconcept N;\nop Add(N, N);\n"
      "def a ::= Add(a, 1);\n",
      report);
  if (!report.ok()) return report;
  try {
    evaluate(self);
    report.fail("a self-referential individual was accepted");
  } catch (const RecursiveDefinition& e) {
    std::string msg = e.what();
    report.expect(msg.find("cycle") != std::string::npos &&
                      msg.find("a -> a") != std::string::npos,
                  "self-cycle witness missing from: " + msg);
  }

  KnowledgeBase pair = parse_or_die(
      "individual a, b;\ndef a ::= {b};\ndef b ::= {a};\n", report);
  if (!report.ok()) return report;
  try {
    evaluate(pair);
    report.fail("a two-step definition cycle was accepted");
  } catch (const RecursiveDefinition& e) {
    std::string msg = e.what();
    report.expect(msg.find("cycle") != std::string::npos &&
                      msg.find("a") != std::string::npos &&
                      msg.find("b") != std::string::npos &&
                      msg.find("->") != std::string::npos,
                  "two-step cycle witness missing from: " + msg);
  }

  std::ifstream in(std::string(SETKR_TEST_DATA_DIR) + "/arithmetic.skr");
  std::ostringstream buf;
  buf << in.rdbuf();
  KnowledgeBase arithmetic = parse_or_die(buf.str(), report);
  if (!report.ok()) return report;
  try {
    EvaluationResult r = evaluate(arithmetic, {}, 6);
    report.expect(r.rounds_executed == 6,
                  "the numeral base stopped early without a fixpoint");
  } catch (const Error& e) {
    report.fail(std::string("the numeral base was rejected: ") + e.what());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Criterion 9: fact lookup agrees with entailment, and stays tractable.

Assertion parse_query(const std::string& text, const KnowledgeBase& kb,
                      Report& report) {
  AssertionParse q = parse_assertion(text, "<query>", &kb.structure);
  if (!q.ok()) {
    report.fail("query does not parse: " + text);
    return {};
  }
  return *q.assertion;
}

Report criterion_database(std::uint64_t seed) {
  Report report;
  testing::Rng rng(seed);

  SearchBound bound;
  bound.max_atoms = 2;
  bound.max_depth = 1;

  for (int instance = 0; instance < 40 && report.ok(); ++instance) {
    std::ostringstream src;
    src << "individual p, q;\nconcept M;\nop F(M);\n";
    for (const char* arg : {"p", "q"}) {
      if (testing::chance(rng, 0.6)) {
        src << "assert F(" << arg << ") = "
            << (testing::chance(rng, 0.5) ? "p" : "q") << ";\n";
      }
      if (testing::chance(rng, 0.5)) {
        src << "assert " << arg << " ∈ M;\n";
      }
    }
    KnowledgeBase kb = parse_or_die(src.str(), report);
    if (!report.ok()) break;
    if (classify_fragment(kb) != FragmentClass::Database) {
      report.fail("a generated instance left the fact fragment");
      break;
    }

    std::vector<std::string> queries{"F(p) = p", "F(p) = q", "F(q) = p",
                                     "F(q) = q", "p ∈ M",    "q ∈ M"};
    for (const std::string& text : queries) {
      Assertion query = parse_query(text, kb, report);
      if (!report.ok()) break;
      bool looked_up = query_database(kb, query);
      Verdict verdict = check_entails(kb, query, bound);
      if (verdict.kind == Verdict::Kind::BoundExhausted) {
        report.fail("entailment exhausted its bound on " + text);
        break;
      }
      report.expect(looked_up == (verdict.kind == Verdict::Kind::Holds),
                    "lookup and entailment disagree on " + text +
                        " for instance " + std::to_string(instance));
    }
  }
  if (!report.ok()) return report;

  // Timing: full lookup calls over fact bases of growing size. The fit is a
  // log-log least-squares line; linear growth means an exponent near one,
  // and every measured point must sit within a factor two of the fit.
  std::vector<std::size_t> sizes{1000, 3162, 10000, 31623, 100000};
  std::vector<double> times;
  for (std::size_t n : sizes) {
    KnowledgeBase kb;
    kb.structure.concepts.insert("M");
    kb.structure.individuals.insert("v");
    OperatorSig sig;
    sig.name = "F";
    sig.domain = {"M"};
    kb.structure.operators.emplace("F", sig);
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = "a" + std::to_string(i);
      kb.structure.individuals.insert(name);
      kb.assertions.push_back(AssertionEntry{
          Assertion{Term::apply("F", {at(name)}), at("v")}, SourceSpan{}});
    }
    std::vector<Assertion> queries;
    for (int j = 0; j < 30; ++j) {
      std::string name = "a" + std::to_string(testing::pick(rng, n));
      queries.push_back(
          Assertion{Term::apply("F", {at(name)}),
                    at(j % 2 == 0 ? "v" : "a" + std::to_string(j))});
    }
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      auto start = Clock::now();
      std::size_t hits = 0;
      for (const Assertion& q : queries) {
        hits += query_database(kb, q) ? 1 : 0;
      }
      double elapsed = std::chrono::duration<double>(Clock::now() - start)
                           .count();
      best = std::min(best, elapsed);
      report.expect(hits <= queries.size(), "impossible hit count");
    }
    times.push_back(best);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double lx = std::log(static_cast<double>(sizes[i]));
    double ly = std::log(times[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double count = static_cast<double>(sizes.size());
  double exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  double intercept = (sy - exponent * sx) / count;
  report.expect(exponent <= 1.25,
                "lookup time grows with exponent " + std::to_string(exponent) +
                    ", faster than linear");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double fitted = std::exp(
        intercept + exponent * std::log(static_cast<double>(sizes[i])));
    bool within = times[i] <= 2.0 * fitted && times[i] >= fitted / 2.0;
    report.expect(within, "the measurement at " + std::to_string(sizes[i]) +
                              " facts strays beyond twice the fit");
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  std::uint64_t seed = 42;

  CLI::App app{"acceptance checks"};
  app.add_option("--criterion", criterion, "criterion number, 0 for all")
      ->check(CLI::Range(0, 9));
  app.add_option("--seed", seed, "seed for the randomized suites");
  CLI11_PARSE(app, argc, argv);

  struct Entry {
    int id;
    const char* title;
    std::function<Report()> run;
    double budget_seconds;
  };
  std::vector<Entry> entries{
      {1, "connective encodings match boolean truth",
       [] { return criterion_connectives(); }, 5.0},
      {2, "De Morgan laws and material implication are tautologies",
       [] { return criterion_tautologies(); }, 5.0},
      {3, "quantifier encodings match direct quantification",
       [] { return criterion_quantifiers(); }, 10.0},
      {4, "the numeral chain grows one encoding per round",
       [] { return criterion_fixpoint(); }, 1.0},
      {5, "flattening preserves satisfaction under forced fresh values",
       [seed] { return criterion_flattening(seed); }, 30.0},
      {6, "combined assertions hold exactly when every component does",
       [seed] { return criterion_multi(seed); }, 5.0},
      {7, "translated concepts agree with the direct reading",
       [seed] { return criterion_dl_agreement(seed); }, 30.0},
      {8, "definition cycles are rejected with a witness",
       [] { return criterion_recursion_guard(); }, 1.0},
      {9, "fact lookup agrees with entailment and scales linearly",
       [seed] { return criterion_database(seed); }, 60.0},
  };

  bool all_ok = true;
  for (const Entry& entry : entries) {
    if (criterion != 0 && entry.id != criterion) continue;
    auto start = Clock::now();
    Report report = entry.run();
    double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (report.ok() && elapsed > entry.budget_seconds) {
      report.fail("took " + std::to_string(elapsed) + "s, budget " +
                  std::to_string(entry.budget_seconds) + "s");
    }
    std::printf("criterion %d: %s %s (%llu checks, %.2fs)%s%s\n", entry.id,
                report.ok() ? "PASS" : "FAIL", entry.title,
                static_cast<unsigned long long>(report.checks), elapsed,
                report.ok() ? "" : ": ",
                report.ok() ? "" : report.detail.c_str());
    all_ok = all_ok && report.ok();
  }
  return all_ok ? 0 : 1;
}
