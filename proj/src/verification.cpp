#include "bttb/verification.hpp"

namespace bttb {

std::vector<LeafCheck> verify_against_oracle(const Tree& tree, const Dataset& dataset,
                                             std::uint64_t seed) {
  std::vector<LeafCheck> checks;
  const Rng base = Rng(seed).split("verify");
  for (const NodeId leaf : tree.leaves()) {
    Rng tree_rng = base.split(leaf);
    Rng oracle_rng = base.split(leaf);

    LeafCheck check;
    check.leaf = leaf;
    check.tree_result = resolve_backtrack(tree, leaf, tree_rng);
    check.oracle_result = oracle_predict_detail(dataset, path_constraints(tree, leaf), oracle_rng);

    if (check.tree_result.randomized != check.oracle_result.randomized) {
      check.pass = false;
    } else if (check.tree_result.randomized) {
      check.pass =
          check.tree_result.steps.back().candidates == check.oracle_result.final_candidates;
    } else {
      check.pass = check.tree_result.label == check.oracle_result.label;
    }
    checks.push_back(std::move(check));
  }
  return checks;
}

}  // namespace bttb
