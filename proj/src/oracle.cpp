#include "bttb/oracle.hpp"

#include <algorithm>
#include <map>

namespace bttb {

namespace {

using Constraints = std::vector<std::pair<std::string, std::string>>;

std::map<std::string, std::size_t> counts_for_prefix(const Dataset& dataset,
                                                     const Constraints& constraints,
                                                     std::size_t prefix_len,
                                                     const std::vector<std::size_t>& columns) {
  std::map<std::string, std::size_t> counts;
  for (const Row& row : dataset.rows()) {
    bool matches = true;
    for (std::size_t c = 0; c < prefix_len; ++c) {
      if (row.values[columns[c]] != constraints[c].second) {
        matches = false;
        break;
      }
    }
    if (matches) ++counts[row.outcome];
  }
  return counts;
}

std::vector<std::string> argmax(const std::map<std::string, std::size_t>& counts,
                                const std::vector<std::string>& within) {
  std::size_t best = 0;
  auto count_of = [&](const std::string& outcome) {
    const auto it = counts.find(outcome);
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  for (const auto& outcome : within) best = std::max(best, count_of(outcome));
  std::vector<std::string> out;
  for (const auto& outcome : within)
    if (count_of(outcome) == best) out.push_back(outcome);
  return out;
}

}  // namespace

OracleResult oracle_predict_detail(const Dataset& dataset, const Constraints& path_constraints,
                                   Rng& rng) {
  std::vector<std::size_t> columns;
  columns.reserve(path_constraints.size());
  for (const auto& [attribute, _] : path_constraints) {
    const auto idx = dataset.attribute_index(attribute);
    if (!idx)
      throw Error(Errc::invalid_argument, "oracle: unknown attribute '" + attribute + "'");
    columns.push_back(*idx);
  }

  std::size_t prefix_len = path_constraints.size();
  const auto full = counts_for_prefix(dataset, path_constraints, prefix_len, columns);
  if (full.empty())
    throw Error(Errc::no_matching_rows, "oracle: no rows match the full constraint list");

  std::vector<std::string> all;
  for (const auto& [outcome, _] : full) all.push_back(outcome);
  std::vector<std::string> candidates = argmax(full, all);

  while (candidates.size() > 1 && prefix_len > 0) {
    --prefix_len;
    const auto counts = counts_for_prefix(dataset, path_constraints, prefix_len, columns);
    candidates = argmax(counts, candidates);
  }

  OracleResult result;
  result.final_candidates = candidates;  // already sorted: built from sorted maps
  if (candidates.size() == 1) {
    result.label = candidates.front();
    result.randomized = false;
  } else {
    result.label = candidates[rng.uniform_index(candidates.size())];
    result.randomized = true;
  }
  return result;
}

std::string oracle_predict(const Dataset& dataset, const Constraints& path_constraints,
                           Rng& rng) {
  return oracle_predict_detail(dataset, path_constraints, rng).label;
}

}  // namespace bttb
