// bttb: categorical decision-tree classifier with backtrack tie-breaking.
//
// Exit codes: 0 success, 1 usage or validation error, 2 verification failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bttb/evaluation.hpp"
#include "bttb/induction.hpp"
#include "bttb/predictor.hpp"
#include "bttb/verification.hpp"

namespace {

using namespace bttb;

bool tree_has_attribute(const Tree& tree, const std::string& name) {
  const auto& names = tree.attribute_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string format_path(const std::vector<std::pair<std::string, std::string>>& constraints) {
  std::string out;
  for (const auto& [attribute, value] : constraints) {
    if (!out.empty()) out += ", ";
    out += attribute + "=" + value;
  }
  return out.empty() ? "root" : out;
}

TieStrategy parse_strategy(const std::string& name) {
  const auto strategy = tie_strategy_from_string(name);
  if (!strategy)
    throw Error(Errc::invalid_argument,
                "unknown tie strategy '" + name + "' (expected backtrack or random)");
  return *strategy;
}

EvalMethod parse_method(const std::string& name, std::size_t k) {
  if (name == "loo") return EvalMethod::leave_one_out();
  if (name == "kfold") return EvalMethod::k_fold(k);
  throw Error(Errc::invalid_argument, "unknown method '" + name + "' (expected loo or kfold)");
}

Tree load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_model, "model '" + path + "': " + e.what());
  }
  return tree_from_json(j);
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// "Attr A=a0,Attr B=b0": pairs split on commas, each on the first '='.
Query parse_query(const std::string& text, const Tree& tree) {
  Query query;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::invalid_argument, "malformed query pair '" + pair + "' (expected k=v)");
    const std::string key = trimmed(pair.substr(0, eq));
    const std::string value = trimmed(pair.substr(eq + 1));
    if (key.empty())
      throw Error(Errc::invalid_argument, "malformed query pair '" + pair + "': empty attribute");
    if (!tree_has_attribute(tree, key))
      throw Error(Errc::invalid_argument, "query names unknown attribute '" + key + "'");
    query.values[key] = value;
  }
  if (query.values.empty()) throw Error(Errc::invalid_argument, "empty query");
  return query;
}

struct TrainArgs {
  std::string data, outcome_col, out;
  std::string strategy = "backtrack";
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& args) {
  const Dataset dataset = load_csv_file(args.data, args.outcome_col);
  Tree tree = annotate_labels(build_tree(dataset), parse_strategy(args.strategy), Rng(args.seed));

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + args.out + "'");
  out << tree_to_json(tree).dump(2) << "\n";

  std::cout << "nodes: " << tree.node_count() << "\n";
  for (const NodeId leaf : tree.leaves()) {
    std::cout << "leaf " << leaf << " (" << format_path(path_constraints(tree, leaf))
              << "): " << tree.node(leaf).resolved_label.value_or("?") << "\n";
  }
  return 0;
}

struct PredictArgs {
  std::string model, query, data;
  std::string strategy = "backtrack";
  std::uint64_t seed = 0;
  bool trace = false;
};

int cmd_predict(const PredictArgs& args) {
  const Tree tree = load_model(args.model);
  const TieStrategy strategy = parse_strategy(args.strategy);

  std::vector<Query> queries;
  if (!args.query.empty()) {
    queries.push_back(parse_query(args.query, tree));
  } else {
    // Batch mode: every CSV row becomes a query. Columns the model does not
    // know (an outcome column, say) are ignored.
    std::ifstream in(args.data, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + args.data + "'");
    std::stringstream content;
    content << in.rdbuf();

    std::vector<std::string> header;
    std::string line;
    std::istringstream lines(content.str());
    std::size_t row_index = 0;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string field;
      while (std::getline(ls, field, ',')) fields.push_back(trimmed(field));
      if (line.back() == ',') fields.push_back("");
      if (header.empty()) {
        header = fields;
        continue;
      }
      if (fields.size() != header.size())
        throw Error(Errc::csv_ragged_row,
                    "csv: row " + std::to_string(row_index) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
      Query q;
      for (std::size_t c = 0; c < header.size(); ++c)
        if (tree_has_attribute(tree, header[c])) q.values[header[c]] = fields[c];
      queries.push_back(std::move(q));
      ++row_index;
    }
    if (header.empty()) throw Error(Errc::csv_missing_header, "csv: missing header row");
    if (queries.empty()) throw Error(Errc::csv_empty_data, "csv: no data rows");
  }

  const Rng base = Rng(args.seed).split("predict");
  for (std::size_t i = 0; i < queries.size(); ++i) {
    Rng rng = base.split(i);
    const Prediction p = predict(tree, queries[i], strategy, rng);
    if (args.trace)
      std::cout << prediction_to_json(p).dump() << "\n";
    else
      std::cout << p.label << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string data, outcome_col;
  std::string method = "loo";
  std::size_t k = 5;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_evaluate(const EvalArgs& args, bool paired_output) {
  const Dataset dataset = load_csv_file(args.data, args.outcome_col);
  const EvalReport report =
      evaluate(dataset, parse_method(args.method, args.k),
               {TieStrategy::backtrack, TieStrategy::random}, args.seed);
  if (args.json)
    std::cout << report_to_json(report, paired_output).dump(2) << "\n";
  else
    std::cout << format_report(report, paired_output);
  return 0;
}

struct VerifyArgs {
  std::string data, outcome_col, model;
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& args) {
  const Dataset dataset = load_csv_file(args.data, args.outcome_col);
  const Tree tree = args.model.empty() ? build_tree(dataset) : load_model(args.model);
  if (tree.attribute_names() != dataset.attribute_names())
    throw Error(Errc::invalid_model, "model attributes do not match the dataset");

  bool all_pass = true;
  for (const LeafCheck& check : verify_against_oracle(tree, dataset, args.seed)) {
    const auto path = format_path(path_constraints(tree, check.leaf));
    if (check.pass) {
      std::cout << "PASS leaf " << check.leaf << " (" << path
                << "): " << check.tree_result.label << "\n";
    } else {
      all_pass = false;
      std::cout << "FAIL leaf " << check.leaf << " (" << path << ")\n";
      std::cout << "  tree:   " << prediction_to_json(check.tree_result).dump() << "\n";
      nlohmann::json jo;
      jo["label"] = check.oracle_result.label;
      jo["candidates"] = check.oracle_result.final_candidates;
      jo["randomized"] = check.oracle_result.randomized;
      std::cout << "  oracle: " << jo.dump() << "\n";
    }
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Categorical decision-tree classifier with backtrack tie-breaking"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Induce a tree and write the model JSON");
  train->add_option("--data", train_args.data, "training CSV")->required();
  train->add_option("--outcome-col", train_args.outcome_col, "outcome column name")->required();
  train->add_option("--out", train_args.out, "model output path")->required();
  train->add_option("--tie-strategy", train_args.strategy, "backtrack|random");
  train->add_option("--seed", train_args.seed, "rng seed");

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Predict labels for queries or a CSV");
  predict->add_option("--model", predict_args.model, "model JSON path")->required();
  auto* query_opt = predict->add_option("--query", predict_args.query, "comma-separated k=v pairs");
  predict->add_option("--data", predict_args.data, "CSV of query rows")->excludes(query_opt);
  predict->add_option("--tie-strategy", predict_args.strategy, "backtrack|random");
  predict->add_option("--seed", predict_args.seed, "rng seed");
  predict->add_flag("--trace", predict_args.trace, "print the full prediction JSON per query");

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated accuracy per strategy");
  evaluate->add_option("--data", eval_args.data, "CSV")->required();
  evaluate->add_option("--outcome-col", eval_args.outcome_col, "outcome column name")->required();
  evaluate->add_option("--method", eval_args.method, "loo|kfold");
  evaluate->add_option("--k", eval_args.k, "fold count for kfold");
  evaluate->add_option("--seed", eval_args.seed, "rng seed");
  evaluate->add_flag("--json", eval_args.json, "emit the report as JSON");

  EvalArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Paired strategy comparison with a sign test");
  compare->add_option("--data", compare_args.data, "CSV")->required();
  compare->add_option("--outcome-col", compare_args.outcome_col, "outcome column name")->required();
  compare->add_option("--method", compare_args.method, "loo|kfold");
  compare->add_option("--k", compare_args.k, "fold count for kfold");
  compare->add_option("--seed", compare_args.seed, "rng seed");
  compare->add_flag("--json", compare_args.json, "emit the report as JSON");

  VerifyArgs verify_args;
  auto* verify =
      app.add_subcommand("verify", "Cross-check backtrack against the brute-force oracle");
  verify->add_option("--data", verify_args.data, "CSV")->required();
  verify->add_option("--outcome-col", verify_args.outcome_col, "outcome column name")->required();
  verify->add_option("--seed", verify_args.seed, "rng seed");
  verify->add_option("--model", verify_args.model, "check a stored model instead of a fresh build");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(predict)) {
      if (predict_args.query.empty() && predict_args.data.empty())
        throw Error(Errc::invalid_argument, "predict: needs --query or --data");
      return cmd_predict(predict_args);
    }
    if (app.got_subcommand(evaluate)) return cmd_evaluate(eval_args, /*paired_output=*/false);
    if (app.got_subcommand(compare)) return cmd_evaluate(compare_args, /*paired_output=*/true);
    if (app.got_subcommand(verify)) return cmd_verify(verify_args);
  } catch (const bttb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
