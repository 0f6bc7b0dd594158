#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bttb/dataset.hpp"
#include "bttb/predictor.hpp"

namespace bttb {

struct EvalMethod {
  enum class Kind { leave_one_out, k_fold };

  Kind kind = Kind::leave_one_out;
  std::size_t k = 0;  // fold count, k_fold only

  static EvalMethod leave_one_out() { return {Kind::leave_one_out, 0}; }
  static EvalMethod k_fold(std::size_t k) { return {Kind::k_fold, k}; }

  bool operator==(const EvalMethod&) const = default;
};

struct StrategyStats {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t tied = 0;        // predictions whose routed node had >= 2 max candidates
  std::size_t randomized = 0;  // predictions that consumed randomness

  double accuracy() const { return total == 0 ? 0.0 : double(correct) / double(total); }
  double tie_rate() const { return total == 0 ? 0.0 : double(tied) / double(total); }
  double randomized_rate() const {
    return total == 0 ? 0.0 : double(randomized) / double(total);
  }

  bool operator==(const StrategyStats&) const = default;
};

struct PairedStats {
  std::size_t backtrack_wins = 0;  // backtrack correct, random wrong
  std::size_t random_wins = 0;     // random correct, backtrack wrong
  std::size_t both_correct = 0;
  std::size_t both_wrong = 0;
  double sign_test_p = 1.0;  // 1.0 when there are no discordant pairs

  bool operator==(const PairedStats&) const = default;
};

struct EvalReport {
  EvalMethod method;
  std::uint64_t seed = 0;
  std::map<TieStrategy, StrategyStats> per_strategy;
  std::optional<PairedStats> paired;  // present when both strategies were evaluated

  bool operator==(const EvalReport&) const = default;
};

/// Seed-deterministic partition of row indices into held-out folds.
/// k-fold is stratified by outcome; leave-one-out yields singleton folds.
std::vector<std::vector<std::size_t>> make_folds(const Dataset& dataset,
                                                 const EvalMethod& method, std::uint64_t seed);

/// Cross-validated accuracy estimation. Every strategy sees identical folds
/// and identical per-fold trees; rng streams are split per
/// (fold, row, strategy) so strategies cannot perturb each other's picks.
EvalReport evaluate(const Dataset& dataset, const EvalMethod& method,
                    const std::vector<TieStrategy>& strategies, std::uint64_t seed);

/// Two-sided exact binomial sign test on discordant pairs, p = 0.5.
double sign_test(std::size_t wins_a, std::size_t wins_b);

/// Seed-deterministic synthetic categorical data. tie_bias is the probability
/// that an emission duplicates an attribute profile with conflicting
/// outcomes, which raises the leaf-tie frequency of the induced tree.
/// Outcome frequencies are globally skewed so ancestor tallies carry signal.
Dataset generate_tie_heavy(std::size_t num_rows, std::size_t num_attributes,
                           std::size_t values_per_attribute, std::size_t num_outcomes,
                           double tie_bias, std::uint64_t seed);

nlohmann::json report_to_json(const EvalReport& report, bool include_paired = true);
std::string format_report(const EvalReport& report, bool include_paired = true);

}  // namespace bttb
