#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bttb/induction.hpp"
#include "bttb/random.hpp"

namespace bttb {

/// Prediction-time tie policy: pick uniformly among the tied outcomes, or
/// back up the ancestor chain until the tie breaks.
enum class TieStrategy { random, backtrack };

std::string to_string(TieStrategy strategy);
std::optional<TieStrategy> tie_strategy_from_string(std::string_view name);

struct Query {
  std::map<std::string, std::string> values;  // attribute name -> value token
};

/// One stop of the resolution walk. `counts` holds this node's counts for the
/// candidates examined here; `candidates` is the (sorted) set still tied
/// afterwards.
struct PredictionStep {
  NodeId node = 0;
  std::vector<std::string> candidates;
  std::map<std::string, std::size_t> counts;

  bool operator==(const PredictionStep&) const = default;
};

struct Prediction {
  std::string label;
  NodeId leaf = 0;  // node where resolution started (leaf or unseen-value stop)
  std::vector<PredictionStep> steps;
  bool randomized = false;

  bool operator==(const Prediction&) const = default;
};

/// Descends from the root following the query's values. Returns the deepest
/// node reached: a leaf, or an internal node with no branch for the query's
/// value. Throws if the query omits an attribute consulted on the path.
NodeId route(const Tree& tree, const Query& query);

/// Outcomes achieving the maximal count. The restricted overload considers
/// only the given outcomes (absent ones count zero).
std::set<std::string> max_candidates(const Histogram& tally);
std::set<std::string> max_candidates(const Histogram& tally,
                                     const std::set<std::string>& restrict);

/// Backtrack tie-breaking: while several candidates share the maximal count,
/// consult the next ancestor's tally restricted to them. A unique survivor
/// wins deterministically; a tie persisting past the root is broken
/// uniformly at random. rng is only consulted in that final case.
Prediction resolve_backtrack(const Tree& tree, NodeId start, Rng& rng);

/// Baseline policy: uniform pick among the node's own maximal outcomes.
Prediction resolve_random(const Tree& tree, NodeId start, Rng& rng);

Prediction predict(const Tree& tree, const Query& query, TieStrategy strategy, Rng& rng);

/// Stamps resolved_label on every leaf using the strategy. Per-leaf rng
/// streams are split from `rng`, so stamping order cannot change labels.
Tree annotate_labels(Tree tree, TieStrategy strategy, const Rng& rng);

nlohmann::json prediction_to_json(const Prediction& prediction);

}  // namespace bttb
