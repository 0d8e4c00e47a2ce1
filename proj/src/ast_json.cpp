#include "setkr/json_io.hpp"

#include "setkr/defs_engine.hpp"
#include "setkr/semantics.hpp"

namespace setkr {

Json to_json(const Term& t) {
  Json j;
  switch (t.kind) {
    case TermKind::Atomic:
      j["kind"] = "atomic";
      j["name"] = t.name;
      break;
    case TermKind::Literal:
      j["kind"] = "literal";
      j["value"] = t.literal->text();
      break;
    case TermKind::ConceptRef:
      j["kind"] = "concept-ref";
      j["name"] = t.name;
      j["copy"] = t.copy;
      break;
    case TermKind::SetLit: {
      j["kind"] = "set";
      Json elems = Json::array();
      for (const Term& e : t.args) elems.push_back(to_json(e));
      j["elements"] = std::move(elems);
      break;
    }
    case TermKind::TupleLit: {
      j["kind"] = "tuple";
      Json items = Json::array();
      for (const Term& e : t.args) items.push_back(to_json(e));
      j["items"] = std::move(items);
      break;
    }
    case TermKind::Apply: {
      j["kind"] = "apply";
      j["op"] = t.name;
      Json args = Json::array();
      for (const Term& e : t.args) args.push_back(to_json(e));
      j["args"] = std::move(args);
      break;
    }
    case TermKind::Compr:
      j["kind"] = "comprehension";
      j["concept"] = t.name;
      j["filter"] = to_json(*t.filter);
      break;
  }
  return j;
}

Json to_json(const Assertion& a) {
  return Json{{"lhs", to_json(a.lhs)}, {"rhs", to_json(a.rhs)}};
}

Json to_json(const ConceptExpr& e) {
  Json j;
  switch (e.kind) {
    case ConceptExpr::Kind::Name:
      j["kind"] = "concept-name";
      j["name"] = e.name;
      return j;
    case ConceptExpr::Kind::Members: {
      j["kind"] = "members";
      Json ms = Json::array();
      for (const Term& t : e.members) ms.push_back(to_json(t));
      j["members"] = std::move(ms);
      return j;
    }
    case ConceptExpr::Kind::Union: j["kind"] = "union"; break;
    case ConceptExpr::Kind::Intersect: j["kind"] = "intersection"; break;
    case ConceptExpr::Kind::Diff: j["kind"] = "difference"; break;
    case ConceptExpr::Kind::Product: j["kind"] = "product"; break;
    case ConceptExpr::Kind::Power: j["kind"] = "power"; break;
    case ConceptExpr::Kind::Replace:
      j["kind"] = "replacement";
      j["op"] = e.name;
      break;
  }
  Json args = Json::array();
  for (const ConceptExpr& a : e.args) args.push_back(to_json(a));
  j["args"] = std::move(args);
  return j;
}

Json to_json(const Definition& d) {
  Json j;
  j["kind"] = d.kind_label();
  j["target"] = d.target();
  switch (d.kind()) {
    case DefKind::Individual:
      j["body"] = to_json(std::get<IndividualDef>(d.node).body);
      break;
    case DefKind::Operator: {
      const auto& od = std::get<OperatorDef>(d.node);
      Json params = Json::array();
      for (const auto& [c, k] : od.params) {
        params.push_back(Json{{"concept", c}, {"copy", k}});
      }
      j["params"] = std::move(params);
      j["body"] = to_json(od.body);
      break;
    }
    case DefKind::Concept:
      j["expr"] = to_json(std::get<ConceptDef>(d.node).body);
      break;
    case DefKind::Comprehension: {
      const auto& cd = std::get<ComprehensionDef>(d.node);
      j["source"] = cd.source;
      j["filter"] = to_json(cd.filter);
      break;
    }
  }
  return j;
}

Json to_json(const OperatorSig& sig) {
  Json j;
  j["name"] = sig.name;
  j["domain"] = sig.domain;
  if (sig.range) j["range"] = *sig.range;
  j["infix"] = sig.infix;
  return j;
}

Json to_json(const SyntacticStructure& st) {
  Json j;
  j["individuals"] = st.individuals;
  j["concepts"] = st.concepts;
  Json ops = Json::array();
  for (const auto& [name, sig] : st.operators) ops.push_back(to_json(sig));
  j["operators"] = std::move(ops);
  return j;
}

Json to_json(const KnowledgeBase& kb) {
  Json j;
  j["structure"] = to_json(kb.structure);
  Json defs = Json::array();
  for (const Definition& d : kb.definitions) defs.push_back(to_json(d));
  j["definitions"] = std::move(defs);
  Json as = Json::array();
  for (const AssertionEntry& e : kb.assertions) {
    as.push_back(to_json(e.assertion));
  }
  j["assertions"] = std::move(as);
  Json ss = Json::array();
  for (const AssertionEntry& e : kb.schema_assertions) {
    ss.push_back(to_json(e.assertion));
  }
  j["schema_assertions"] = std::move(ss);
  return j;
}

Json to_json(const Diagnostic& d) {
  Json j;
  j["severity"] =
      d.severity == Diagnostic::Severity::Error ? "error" : "warning";
  j["message"] = d.message;
  j["file"] = d.span.file;
  j["line"] = d.span.line;
  j["column"] = d.span.column;
  return j;
}

Json to_json(const Interpretation& interp) {
  Json j;
  Json universe = Json::array();
  for (const Value& v : interp.universe) universe.push_back(v.text());
  j["universe"] = std::move(universe);
  Json inds = Json::object();
  for (const auto& [name, v] : interp.individuals) inds[name] = v.text();
  j["individuals"] = std::move(inds);
  Json cons = Json::object();
  for (const auto& [name, v] : interp.concepts) {
    Json elems = Json::array();
    for (const Value& e : v.elements()) elems.push_back(e.text());
    cons[name] = std::move(elems);
  }
  j["concepts"] = std::move(cons);
  Json ops = Json::object();
  for (const auto& [name, table] : interp.operators) {
    Json rows = Json::array();
    for (const auto& [args, result] : table.entries) {
      Json row;
      Json in = Json::array();
      for (const Value& a : args) in.push_back(a.text());
      row["args"] = std::move(in);
      row["value"] = result.text();
      rows.push_back(std::move(row));
    }
    ops[name] = std::move(rows);
  }
  j["operators"] = std::move(ops);
  return j;
}

Json to_json(const EvaluationResult& result) {
  Json j = to_json(result.interp);
  j["rounds_executed"] = result.rounds_executed;
  j["fixpoint_reached"] = result.fixpoint_reached;
  return j;
}

Json to_json(const Verdict& verdict) {
  Json j;
  switch (verdict.kind) {
    case Verdict::Kind::Holds: j["verdict"] = "holds"; break;
    case Verdict::Kind::CounterModel: j["verdict"] = "countermodel"; break;
    case Verdict::Kind::BoundExhausted:
      j["verdict"] = "bound-exhausted";
      break;
  }
  j["interpretations_checked"] = verdict.stats.interpretations_checked;
  if (verdict.counter_model) {
    j["countermodel"] = to_json(*verdict.counter_model);
  }
  return j;
}

}  // namespace setkr
