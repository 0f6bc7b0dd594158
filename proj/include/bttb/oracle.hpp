#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bttb/dataset.hpp"
#include "bttb/random.hpp"

namespace bttb {

struct OracleResult {
  std::string label;
  std::vector<std::string> final_candidates;  // sorted; the set the decision was made from
  bool randomized = false;
};

/// Brute-force reference predictor. Applies the backtrack tie policy directly
/// to the training rows: a node is a prefix of the root-first
/// (attribute, value) constraint list, and its outcome list is the histogram
/// of rows matching that prefix. Deliberately shares no tree code with the
/// primary implementation; O(rows x constraints) per query.
OracleResult oracle_predict_detail(const Dataset& dataset,
                                   const std::vector<std::pair<std::string, std::string>>& path_constraints,
                                   Rng& rng);

std::string oracle_predict(const Dataset& dataset,
                           const std::vector<std::pair<std::string, std::string>>& path_constraints,
                           Rng& rng);

}  // namespace bttb
