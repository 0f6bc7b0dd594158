#include "bttb/predictor.hpp"

#include <cassert>

namespace bttb {

namespace {

PredictionStep make_step(const TreeNode& node, const std::set<std::string>& examined,
                         const std::set<std::string>& still_tied) {
  PredictionStep step;
  step.node = node.id;
  step.candidates.assign(still_tied.begin(), still_tied.end());
  for (const auto& outcome : examined) {
    const std::size_t c = node.tally.count(outcome);
    assert(c > 0);  // ancestors own supersets of the rows that produced the tie
    step.counts[outcome] = c;
  }
  return step;
}

std::string pick_uniform(const std::set<std::string>& candidates, Rng& rng) {
  const std::vector<std::string> sorted(candidates.begin(), candidates.end());
  return sorted[rng.uniform_index(sorted.size())];
}

}  // namespace

std::string to_string(TieStrategy strategy) {
  return strategy == TieStrategy::backtrack ? "backtrack" : "random";
}

std::optional<TieStrategy> tie_strategy_from_string(std::string_view name) {
  if (name == "backtrack") return TieStrategy::backtrack;
  if (name == "random") return TieStrategy::random;
  return std::nullopt;
}

NodeId route(const Tree& tree, const Query& query) {
  NodeId current = tree.root();
  for (;;) {
    const TreeNode& n = tree.node(current);
    if (n.is_leaf()) return current;
    const std::string& attribute = tree.attribute_names().at(*n.split_attribute);
    const auto value = query.values.find(attribute);
    if (value == query.values.end())
      throw Error(Errc::missing_attribute_value,
                  "route: query is missing a value for '" + attribute + "'");
    const auto child = n.children.find(value->second);
    if (child == n.children.end()) return current;  // unseen-value stop
    current = child->second;
  }
}

std::set<std::string> max_candidates(const Histogram& tally) {
  if (tally.empty()) throw Error(Errc::empty_histogram, "max_candidates: empty tally");
  std::size_t best = 0;
  for (const auto& [_, count] : tally.counts()) best = std::max(best, count);
  std::set<std::string> out;
  for (const auto& [outcome, count] : tally.counts())
    if (count == best) out.insert(outcome);
  return out;
}

std::set<std::string> max_candidates(const Histogram& tally,
                                     const std::set<std::string>& restrict) {
  if (restrict.empty())
    throw Error(Errc::invalid_argument, "max_candidates: empty restriction set");
  std::size_t best = 0;
  for (const auto& outcome : restrict) best = std::max(best, tally.count(outcome));
  if (best == 0)
    throw Error(Errc::invalid_argument,
                "max_candidates: no restricted outcome present in tally");
  std::set<std::string> out;
  for (const auto& outcome : restrict)
    if (tally.count(outcome) == best) out.insert(outcome);
  return out;
}

Prediction resolve_backtrack(const Tree& tree, NodeId start, Rng& rng) {
  Prediction p;
  p.leaf = start;

  const TreeNode& first = tree.node(start);
  std::set<std::string> candidates = max_candidates(first.tally);
  p.steps.push_back(make_step(first, candidates, candidates));

  for (const NodeId ancestor : ancestor_chain(tree, start)) {
    if (candidates.size() <= 1) break;
    const TreeNode& node = tree.node(ancestor);
    const std::set<std::string> narrowed = max_candidates(node.tally, candidates);
    p.steps.push_back(make_step(node, candidates, narrowed));
    candidates = narrowed;
  }

  if (candidates.size() == 1) {
    p.label = *candidates.begin();
    p.randomized = false;
  } else {
    p.label = pick_uniform(candidates, rng);
    p.randomized = true;
  }
  return p;
}

Prediction resolve_random(const Tree& tree, NodeId start, Rng& rng) {
  Prediction p;
  p.leaf = start;

  const TreeNode& node = tree.node(start);
  const std::set<std::string> candidates = max_candidates(node.tally);
  p.steps.push_back(make_step(node, candidates, candidates));

  if (candidates.size() == 1) {
    p.label = *candidates.begin();
    p.randomized = false;
  } else {
    p.label = pick_uniform(candidates, rng);
    p.randomized = true;
  }
  return p;
}

Prediction predict(const Tree& tree, const Query& query, TieStrategy strategy, Rng& rng) {
  const NodeId stop = route(tree, query);
  return strategy == TieStrategy::backtrack ? resolve_backtrack(tree, stop, rng)
                                            : resolve_random(tree, stop, rng);
}

Tree annotate_labels(Tree tree, TieStrategy strategy, const Rng& rng) {
  for (const NodeId leaf : tree.leaves()) {
    Rng leaf_rng = rng.split(leaf);
    const Prediction p = strategy == TieStrategy::backtrack
                             ? resolve_backtrack(tree, leaf, leaf_rng)
                             : resolve_random(tree, leaf, leaf_rng);
    tree.set_resolved_label(leaf, p.label);
  }
  return tree;
}

nlohmann::json prediction_to_json(const Prediction& prediction) {
  nlohmann::json j;
  j["label"] = prediction.label;
  j["leaf"] = prediction.leaf;
  j["randomized"] = prediction.randomized;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& step : prediction.steps) {
    nlohmann::json js;
    js["node"] = step.node;
    js["candidates"] = step.candidates;
    js["counts"] = step.counts;
    steps.push_back(std::move(js));
  }
  return j;
}

}  // namespace bttb
