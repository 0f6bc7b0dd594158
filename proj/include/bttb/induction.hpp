#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bttb/dataset.hpp"
#include "json.hpp"

namespace bttb {

using NodeId = std::size_t;

/// One node of an induced tree. Internal nodes split on one attribute with a
/// child per attribute value present among the node's rows; leaves keep the
/// outcome tally that prediction-time tie resolution consults.
struct TreeNode {
  NodeId id = 0;
  std::optional<NodeId> parent;                 // absent only for the root
  std::optional<std::size_t> split_attribute;   // absent == leaf
  std::map<std::string, NodeId> children;       // branch value -> child id
  std::vector<std::size_t> indices;             // owning row indices, sorted
  Histogram tally;                              // histogram over indices
  std::optional<std::string> resolved_label;    // stamped by annotate_labels

  bool is_leaf() const noexcept { return !split_attribute.has_value(); }
  bool operator==(const TreeNode&) const = default;
};

/// Induced decision tree. Nodes are stored by id (ids are dense, root is the
/// unique parentless node). Immutable apart from resolved-label stamping.
class Tree {
 public:
  Tree(std::vector<TreeNode> nodes, std::vector<std::string> attribute_names,
       std::set<std::string> outcome_domain);

  NodeId root() const noexcept { return root_; }
  const TreeNode& node(NodeId id) const;
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::set<std::string>& outcome_domain() const noexcept { return outcome_domain_; }

  std::vector<NodeId> leaves() const;
  void set_resolved_label(NodeId id, std::string label);

  bool operator==(const Tree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  NodeId root_ = 0;
  std::vector<std::string> attribute_names_;
  std::set<std::string> outcome_domain_;
};

/// Shannon entropy of the tally, in bits. Throws on an empty tally.
double entropy(const Histogram& tally);

/// entropy(node_tally) minus the count-weighted mean of the partition
/// entropies. The partition must sum pointwise to node_tally.
double information_gain(const Histogram& node_tally, const std::vector<Histogram>& partition);

/// ID3-style induction: splits on the unused attribute with maximal
/// information gain (ties broken by lowest attribute index) until a node is
/// pure or every attribute on its path is used. No pruning.
Tree build_tree(const Dataset& dataset);

/// Node ids from the node's parent up to and including the root; empty for
/// the root itself.
std::vector<NodeId> ancestor_chain(const Tree& tree, NodeId id);

/// Root-first (attribute name, branch value) pairs leading to the node.
std::vector<std::pair<std::string, std::string>> path_constraints(const Tree& tree, NodeId id);

/// JSON model document. Serialization round-trips losslessly and
/// byte-identically (keys and lists are stably ordered).
nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& j);

}  // namespace bttb
