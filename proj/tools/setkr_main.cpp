#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "setkr/defs_engine.hpp"
#include "setkr/desugar.hpp"
#include "setkr/dl.hpp"
#include "setkr/errors.hpp"
#include "setkr/json_io.hpp"
#include "setkr/parser.hpp"
#include "setkr/semantics.hpp"

namespace {

using namespace setkr;

// Exit conventions: 0 success / holds / true, 1 countermodel / false /
// diagnostics, 2 usage or I/O problems.
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

bool read_input(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    out = buf.str();
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

void report(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) std::cerr << format(d) << "\n";
}

// Loads and structurally validates a knowledge base; returns kOk or the
// exit code to use.
int load_kb(const std::string& path, KnowledgeBase& kb) {
  std::string text;
  if (!read_input(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return kUsage;
  }
  ParseResult parsed = parse_kb(text, path == "-" ? "<stdin>" : path);
  report(parsed.diagnostics);
  if (!parsed.ok()) return kNo;
  std::vector<Diagnostic> issues = validate_structure(*parsed.kb);
  report(issues);
  if (has_errors(issues)) return kNo;
  kb = std::move(*parsed.kb);
  return kOk;
}

void print_interpretation_text(std::ostream& os, const Interpretation& in) {
  if (!in.individuals.empty()) {
    os << "individuals:\n";
    for (const auto& [name, v] : in.individuals) {
      os << "  " << name << " = " << v.text() << "\n";
    }
  }
  if (!in.concepts.empty()) {
    os << "concepts:\n";
    for (const auto& [name, v] : in.concepts) {
      os << "  " << name << " = " << v.text() << "\n";
    }
  }
  if (!in.operators.empty()) {
    os << "operators:\n";
    for (const auto& [name, table] : in.operators) {
      for (const auto& [args, value] : table.entries) {
        os << "  " << name << "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (i) os << ", ";
          os << args[i].text();
        }
        os << ") = " << value.text() << "\n";
      }
    }
  }
}

int run_parse(const std::string& file, const std::string& fmt) {
  KnowledgeBase kb;
  if (int rc = load_kb(file, kb); rc != kOk) return rc;
  if (fmt == "json") {
    std::cout << to_json(kb).dump(2) << "\n";
  } else {
    std::cout << print_kb(kb);
  }
  return kOk;
}

int run_validate(const std::string& file, const std::string& fmt) {
  std::string text;
  if (!read_input(file, text)) {
    std::cerr << "error: cannot read " << file << "\n";
    return kUsage;
  }
  ParseResult parsed = parse_kb(text, file == "-" ? "<stdin>" : file);
  std::vector<Diagnostic> diags = parsed.diagnostics;
  if (parsed.ok()) {
    std::vector<Diagnostic> issues = validate_structure(*parsed.kb);
    diags.insert(diags.end(), issues.begin(), issues.end());
  }
  if (fmt == "json") {
    Json j;
    Json list = Json::array();
    for (const Diagnostic& d : diags) list.push_back(to_json(d));
    j["diagnostics"] = std::move(list);
    std::cout << j.dump(2) << "\n";
  } else {
    report(diags);
  }
  return has_errors(diags) ? kNo : kOk;
}

int run_desugar(const std::string& file, const std::string& fmt) {
  KnowledgeBase kb;
  if (int rc = load_kb(file, kb); rc != kOk) return rc;
  KnowledgeBase lowered = lower_kb(kb);
  if (fmt == "json") {
    std::cout << to_json(lowered).dump(2) << "\n";
  } else {
    std::cout << print_kb(lowered);
  }
  return kOk;
}

int run_eval(const std::string& file, std::size_t max_rounds,
             const std::string& fmt) {
  KnowledgeBase kb;
  if (int rc = load_kb(file, kb); rc != kOk) return rc;
  EvaluationResult result = evaluate(kb, seed_from_facts(kb), max_rounds);
  if (fmt == "text") {
    print_interpretation_text(std::cout, result.interp);
    std::cout << "rounds_executed: " << result.rounds_executed << "\n";
    std::cout << "fixpoint_reached: "
              << (result.fixpoint_reached ? "true" : "false") << "\n";
  } else {
    std::cout << to_json(result).dump(2) << "\n";
  }
  return kOk;
}

int run_check(const std::string& model_file, const std::string& kb_file,
              std::size_t max_rounds, const std::string& fmt) {
  KnowledgeBase model_kb;
  if (int rc = load_kb(model_file, model_kb); rc != kOk) return rc;
  KnowledgeBase kb;
  if (int rc = load_kb(kb_file, kb); rc != kOk) return rc;
  EvaluationResult model =
      evaluate(model_kb, seed_from_facts(model_kb), max_rounds);
  KbCheck result = check_kb(model.interp, kb);
  if (fmt == "json") {
    Json j;
    j["satisfied"] = result.ok;
    if (result.first_failure) {
      j["first_failure"] = print_assertion(*result.first_failure);
    }
    std::cout << j.dump(2) << "\n";
  } else if (!result.ok && result.first_failure) {
    std::cout << "fails: " << print_assertion(*result.first_failure) << "\n";
  }
  return result.ok ? kOk : kNo;
}

int parse_query_arg(const KnowledgeBase& kb, const std::string& text,
                    Assertion& out) {
  AssertionParse parsed = parse_assertion(text, "<query>", &kb.structure);
  report(parsed.diagnostics);
  if (!parsed.ok()) return kNo;
  if (parsed.schema) {
    std::cerr << "error: the query must be ground, not a schema\n";
    return kNo;
  }
  out = *parsed.assertion;
  return kOk;
}

int run_entail(const std::string& file, const std::string& query_text,
               const SearchBound& bound, const std::string& fmt) {
  KnowledgeBase kb;
  if (int rc = load_kb(file, kb); rc != kOk) return rc;
  Assertion query;
  if (int rc = parse_query_arg(kb, query_text, query); rc != kOk) return rc;
  Verdict verdict = check_entails(kb, query, bound);
  if (fmt == "json") {
    std::cout << to_json(verdict).dump(2) << "\n";
  } else {
    switch (verdict.kind) {
      case Verdict::Kind::Holds: std::cout << "holds\n"; break;
      case Verdict::Kind::CounterModel: std::cout << "countermodel\n"; break;
      case Verdict::Kind::BoundExhausted:
        std::cout << "bound-exhausted\n";
        break;
    }
  }
  return verdict.kind == Verdict::Kind::Holds ? kOk : kNo;
}

int run_query(const std::string& file, const std::string& query_text,
              const std::string& fmt) {
  KnowledgeBase kb;
  if (int rc = load_kb(file, kb); rc != kOk) return rc;
  Assertion query;
  if (int rc = parse_query_arg(kb, query_text, query); rc != kOk) return rc;
  bool answer = query_database(kb, query);
  if (fmt == "json") {
    Json j;
    j["answer"] = answer;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (answer ? "true" : "false") << "\n";
  }
  return answer ? kOk : kNo;
}

int run_dl2skr(const std::string& file, const std::string& fmt) {
  std::string text;
  if (!read_input(file, text)) {
    std::cerr << "error: cannot read " << file << "\n";
    return kUsage;
  }
  DlParseResult parsed = parse_dl(text, file == "-" ? "<stdin>" : file);
  report(parsed.diagnostics);
  if (!parsed.ok()) return kNo;
  KnowledgeBase kb = dl_to_kb(parsed.axioms);
  if (fmt == "json") {
    std::cout << to_json(kb).dump(2) << "\n";
  } else {
    std::cout << print_kb(kb);
  }
  return kOk;
}

void apply_env_limits() {
  if (const char* raw = std::getenv("SETKR_MAX_SET_SIZE")) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(raw, &end, 10);
    if (end && *end == '\0' && parsed > 0) {
      limits().max_set_size = static_cast<std::size_t>(parsed);
    } else {
      std::cerr << "warning: ignoring malformed SETKR_MAX_SET_SIZE\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_env_limits();

  CLI::App app{"knowledge bases over hereditarily finite sets"};
  app.require_subcommand(1);

  std::string file;
  std::string model_file;
  std::string query_text;
  std::string fmt_text = "text";
  std::string fmt_json = "json";
  SearchBound bound;
  std::size_t max_rounds = 32;

  auto add_format = [](CLI::App* cmd, std::string& fmt) {
    cmd->add_option("--format", fmt, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* parse_cmd =
      app.add_subcommand("parse", "parse a knowledge base and reprint it");
  parse_cmd->add_option("file", file, ".skr file, or - for stdin")
      ->required();
  add_format(parse_cmd, fmt_text);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "report syntax and structural diagnostics");
  validate_cmd->add_option("file", file, ".skr file, or - for stdin")
      ->required();
  add_format(validate_cmd, fmt_text);

  CLI::App* desugar_cmd = app.add_subcommand(
      "desugar", "lower every assertion to primitive form");
  desugar_cmd->add_option("file", file, ".skr file, or - for stdin")
      ->required();
  add_format(desugar_cmd, fmt_text);

  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "evaluate definitions over the asserted facts");
  eval_cmd->add_option("file", file, ".skr file, or - for stdin")->required();
  eval_cmd->add_option("--max-rounds", max_rounds, "evaluation round budget");
  add_format(eval_cmd, fmt_json);

  CLI::App* check_cmd = app.add_subcommand(
      "check", "check the model induced by one file against another");
  check_cmd->add_option("model", model_file, "model .skr file")->required();
  check_cmd->add_option("kb", file, "knowledge base .skr file")->required();
  check_cmd->add_option("--max-rounds", max_rounds,
                        "model evaluation round budget");
  add_format(check_cmd, fmt_text);

  CLI::App* entail_cmd = app.add_subcommand(
      "entail", "decide bounded entailment of a query assertion");
  entail_cmd->add_option("file", file, ".skr file, or - for stdin")
      ->required();
  entail_cmd->add_option("-q,--query", query_text, "query assertion")
      ->required();
  entail_cmd->add_option("--atoms", bound.max_atoms,
                         "largest universe size searched");
  entail_cmd->add_option("--depth", bound.max_depth,
                         "value nesting depth searched");
  entail_cmd->add_option("--max-rounds", bound.max_rounds,
                         "evaluation round budget per candidate");
  entail_cmd->add_option("--max-interps", bound.max_interps,
                         "interpretation budget");
  add_format(entail_cmd, fmt_text);

  CLI::App* query_cmd = app.add_subcommand(
      "query", "answer a ground query against a fact base");
  query_cmd->add_option("file", file, ".skr file, or - for stdin")
      ->required();
  query_cmd->add_option("-q,--query", query_text, "query assertion")
      ->required();
  add_format(query_cmd, fmt_text);

  CLI::App* dl_cmd = app.add_subcommand(
      "dl2skr", "translate a description-logic document");
  dl_cmd->add_option("file", file, ".dl file, or - for stdin")->required();
  add_format(dl_cmd, fmt_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kUsage;
  }

  try {
    if (parse_cmd->parsed()) return run_parse(file, fmt_text);
    if (validate_cmd->parsed()) return run_validate(file, fmt_text);
    if (desugar_cmd->parsed()) return run_desugar(file, fmt_text);
    if (eval_cmd->parsed()) return run_eval(file, max_rounds, fmt_json);
    if (check_cmd->parsed()) {
      return run_check(model_file, file, max_rounds, fmt_text);
    }
    if (entail_cmd->parsed()) {
      return run_entail(file, query_text, bound, fmt_text);
    }
    if (query_cmd->parsed()) return run_query(file, query_text, fmt_text);
    if (dl_cmd->parsed()) return run_dl2skr(file, fmt_text);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNo;
  }
  return kUsage;
}
