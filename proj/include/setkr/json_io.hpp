#pragma once

// JSON export for syntax trees and engine results, used by the CLI and by
// golden tests. Keys are emitted in a fixed order so output is byte-stable.

#include "json.hpp"
#include "setkr/ast.hpp"

namespace setkr {

using Json = nlohmann::ordered_json;

Json to_json(const Term& t);
Json to_json(const Assertion& a);
Json to_json(const ConceptExpr& e);
Json to_json(const Definition& d);
Json to_json(const OperatorSig& sig);
Json to_json(const SyntacticStructure& st);
Json to_json(const KnowledgeBase& kb);
Json to_json(const Diagnostic& d);

struct Interpretation;
struct EvaluationResult;
struct Verdict;

Json to_json(const Interpretation& interp);
Json to_json(const EvaluationResult& result);
Json to_json(const Verdict& verdict);

}  // namespace setkr
