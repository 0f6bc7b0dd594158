#include "bttb/induction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace bttb {

namespace {

void validate(const std::vector<TreeNode>& nodes, NodeId root,
              const std::vector<std::string>& attribute_names,
              const std::set<std::string>& outcome_domain) {
  auto reject = [](const std::string& what) { throw Error(Errc::invalid_model, "tree: " + what); };

  if (nodes.empty()) reject("no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id != i) reject("node ids must be dense and match positions");
  if (nodes[root].parent.has_value()) reject("root must have no parent");

  std::size_t parentless = 0;
  for (const auto& n : nodes) {
    if (!n.parent.has_value()) ++parentless;
    if (n.indices.empty()) reject("node " + std::to_string(n.id) + " owns no rows");
    if (!std::is_sorted(n.indices.begin(), n.indices.end()))
      reject("node " + std::to_string(n.id) + " indices not sorted");
    if (n.tally.total() != n.indices.size())
      reject("node " + std::to_string(n.id) + " tally total != index count");
    for (const auto& [outcome, _] : n.tally.counts())
      if (!outcome_domain.count(outcome))
        reject("node " + std::to_string(n.id) + " tally outcome '" + outcome +
               "' outside outcome domain");
    if (n.resolved_label && !outcome_domain.count(*n.resolved_label))
      reject("node " + std::to_string(n.id) + " resolved label outside outcome domain");
    if (n.is_leaf()) {
      if (!n.children.empty()) reject("leaf " + std::to_string(n.id) + " has children");
      continue;
    }
    if (*n.split_attribute >= attribute_names.size())
      reject("node " + std::to_string(n.id) + " split attribute out of range");
    if (n.children.empty()) reject("internal node " + std::to_string(n.id) + " has no children");
    std::vector<std::size_t> merged;
    Histogram child_sum;
    for (const auto& [value, child_id] : n.children) {
      if (child_id >= nodes.size()) reject("child id out of range");
      const auto& child = nodes[child_id];
      if (!child.parent || *child.parent != n.id)
        reject("child " + std::to_string(child_id) + " does not point back to parent " +
               std::to_string(n.id));
      merged.insert(merged.end(), child.indices.begin(), child.indices.end());
      child_sum += child.tally;
    }
    std::sort(merged.begin(), merged.end());
    if (merged != n.indices)
      reject("children of node " + std::to_string(n.id) + " do not partition its rows");
    if (!(child_sum == n.tally))
      reject("children tallies of node " + std::to_string(n.id) + " do not sum to its tally");
  }
  if (parentless != 1) reject("expected exactly one root node");

  // Reachability from the root covers every node.
  std::vector<bool> seen(nodes.size(), false);
  std::deque<NodeId> queue{root};
  std::size_t reached = 0;
  seen[root] = true;
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    ++reached;
    for (const auto& [_, child] : nodes[id].children) {
      if (seen[child]) reject("node " + std::to_string(child) + " reached twice");
      seen[child] = true;
      queue.push_back(child);
    }
  }
  if (reached != nodes.size()) reject("unreachable nodes present");
}

NodeId find_root(const std::vector<TreeNode>& nodes) {
  for (const auto& n : nodes)
    if (!n.parent.has_value()) return n.id;
  throw Error(Errc::invalid_model, "tree: no root node");
}

}  // namespace

Tree::Tree(std::vector<TreeNode> nodes, std::vector<std::string> attribute_names,
           std::set<std::string> outcome_domain)
    : nodes_(std::move(nodes)),
      attribute_names_(std::move(attribute_names)),
      outcome_domain_(std::move(outcome_domain)) {
  root_ = find_root(nodes_);
  validate(nodes_, root_, attribute_names_, outcome_domain_);
}

const TreeNode& Tree::node(NodeId id) const {
  if (id >= nodes_.size())
    throw Error(Errc::unknown_node, "tree: unknown node id " + std::to_string(id));
  return nodes_[id];
}

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.is_leaf()) out.push_back(n.id);
  return out;
}

void Tree::set_resolved_label(NodeId id, std::string label) {
  if (id >= nodes_.size())
    throw Error(Errc::unknown_node, "tree: unknown node id " + std::to_string(id));
  if (!outcome_domain_.count(label))
    throw Error(Errc::invalid_argument, "tree: label '" + label + "' outside outcome domain");
  nodes_[id].resolved_label = std::move(label);
}

double entropy(const Histogram& tally) {
  if (tally.empty()) throw Error(Errc::empty_histogram, "entropy: empty tally");
  const double total = static_cast<double>(tally.total());
  double h = 0.0;
  for (const auto& [_, count] : tally.counts()) {
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(const Histogram& node_tally, const std::vector<Histogram>& partition) {
  Histogram sum;
  for (const auto& part : partition) sum += part;
  if (!(sum == node_tally))
    throw Error(Errc::partition_mismatch, "information_gain: partition does not sum to tally");

  const double total = static_cast<double>(node_tally.total());
  double weighted = 0.0;
  for (const auto& part : partition) {
    if (part.empty()) continue;
    weighted += (static_cast<double>(part.total()) / total) * entropy(part);
  }
  double gain = entropy(node_tally) - weighted;
  if (gain < 0.0 && gain > -1e-9) gain = 0.0;  // rounding noise on exact-zero gains
  return gain;
}

Tree build_tree(const Dataset& dataset) {
  struct Pending {
    NodeId id;
    std::vector<bool> used;  // attributes consumed on the path
  };

  std::vector<TreeNode> nodes;
  std::deque<Pending> queue;

  std::vector<std::size_t> all(dataset.num_rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  TreeNode root;
  root.id = 0;
  root.indices = all;
  root.tally = histogram(dataset, all);
  nodes.push_back(std::move(root));
  queue.push_back({0, std::vector<bool>(dataset.num_attributes(), false)});

  while (!queue.empty()) {
    auto [id, used] = queue.front();
    queue.pop_front();

    if (nodes[id].tally.distinct() <= 1) continue;  // pure leaf

    std::vector<std::size_t> unused;
    for (std::size_t a = 0; a < used.size(); ++a)
      if (!used[a]) unused.push_back(a);
    if (unused.empty()) continue;  // attributes exhausted: impure leaf

    // Best split: maximal information gain, lowest attribute index on ties.
    std::size_t best_attr = 0;
    double best_gain = -1.0;
    std::map<std::string, std::vector<std::size_t>> best_partition;
    for (std::size_t a : unused) {
      std::map<std::string, std::vector<std::size_t>> partition;
      for (std::size_t idx : nodes[id].indices)
        partition[dataset.row(idx).values[a]].push_back(idx);
      std::vector<Histogram> tallies;
      tallies.reserve(partition.size());
      for (const auto& [_, block] : partition) tallies.push_back(histogram(dataset, block));
      const double gain = information_gain(nodes[id].tally, tallies);
      if (gain > best_gain) {
        best_gain = gain;
        best_attr = a;
        best_partition = std::move(partition);
      }
    }

    nodes[id].split_attribute = best_attr;
    auto child_used = used;
    child_used[best_attr] = true;
    for (auto& [value, block] : best_partition) {
      TreeNode child;
      child.id = nodes.size();
      child.parent = id;
      child.tally = histogram(dataset, block);
      child.indices = std::move(block);
      nodes[id].children.emplace(value, child.id);
      queue.push_back({child.id, child_used});
      nodes.push_back(std::move(child));
    }
  }

  std::set<std::string> domain;
  for (const auto& [outcome, _] : nodes[0].tally.counts()) domain.insert(outcome);
  return Tree(std::move(nodes), dataset.attribute_names(), std::move(domain));
}

std::vector<NodeId> ancestor_chain(const Tree& tree, NodeId id) {
  std::vector<NodeId> chain;
  const TreeNode* current = &tree.node(id);
  while (current->parent.has_value()) {
    chain.push_back(*current->parent);
    current = &tree.node(*current->parent);
  }
  return chain;
}

std::vector<std::pair<std::string, std::string>> path_constraints(const Tree& tree, NodeId id) {
  std::vector<std::pair<std::string, std::string>> constraints;
  const TreeNode* current = &tree.node(id);
  while (current->parent.has_value()) {
    const TreeNode& parent = tree.node(*current->parent);
    for (const auto& [value, child] : parent.children) {
      if (child == current->id) {
        constraints.emplace_back(tree.attribute_names().at(*parent.split_attribute), value);
        break;
      }
    }
    current = &parent;
  }
  std::reverse(constraints.begin(), constraints.end());
  return constraints;
}

nlohmann::json tree_to_json(const Tree& tree) {
  nlohmann::json j;
  j["attribute_names"] = tree.attribute_names();
  j["outcome_domain"] = tree.outcome_domain();
  j["root"] = tree.root();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& n : tree.nodes()) {
    nlohmann::json jn;
    jn["id"] = n.id;
    jn["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
    jn["split_attribute"] = n.split_attribute
                                ? nlohmann::json(tree.attribute_names().at(*n.split_attribute))
                                : nlohmann::json(nullptr);
    jn["children"] = n.children.empty() ? nlohmann::json::object() : nlohmann::json(n.children);
    jn["tally"] = n.tally.counts();
    jn["indices"] = n.indices;
    jn["resolved_label"] =
        n.resolved_label ? nlohmann::json(*n.resolved_label) : nlohmann::json(nullptr);
    nodes.push_back(std::move(jn));
  }
  return j;
}

Tree tree_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> attribute_names =
        j.at("attribute_names").get<std::vector<std::string>>();
    std::set<std::string> outcome_domain = j.at("outcome_domain").get<std::set<std::string>>();
    const NodeId root = j.at("root").get<NodeId>();

    std::vector<TreeNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      TreeNode n;
      n.id = jn.at("id").get<NodeId>();
      if (!jn.at("parent").is_null()) n.parent = jn.at("parent").get<NodeId>();
      if (!jn.at("split_attribute").is_null()) {
        const auto name = jn.at("split_attribute").get<std::string>();
        const auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
        if (it == attribute_names.end())
          throw Error(Errc::invalid_model, "tree: unknown split attribute '" + name + "'");
        n.split_attribute = static_cast<std::size_t>(it - attribute_names.begin());
      }
      n.children = jn.at("children").get<std::map<std::string, NodeId>>();
      for (const auto& [outcome, count] : jn.at("tally").get<std::map<std::string, std::size_t>>())
        n.tally.add(outcome, count);
      n.indices = jn.at("indices").get<std::vector<std::size_t>>();
      if (!jn.at("resolved_label").is_null())
        n.resolved_label = jn.at("resolved_label").get<std::string>();
      nodes.push_back(std::move(n));
    }

    Tree tree(std::move(nodes), std::move(attribute_names), std::move(outcome_domain));
    if (tree.root() != root) throw Error(Errc::invalid_model, "tree: root field mismatch");
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_model, std::string("tree: malformed model json: ") + e.what());
  }
}

}  // namespace bttb
