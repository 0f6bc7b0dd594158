#include "bttb/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "bttb/induction.hpp"

namespace bttb {

namespace {

void shuffle(std::vector<std::size_t>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[rng.uniform_index(i)]);
}

std::size_t strategy_ordinal(TieStrategy s) { return s == TieStrategy::random ? 0 : 1; }

std::vector<TieStrategy> dedup(const std::vector<TieStrategy>& strategies) {
  std::vector<TieStrategy> out;
  for (TieStrategy s : strategies)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> make_folds(const Dataset& dataset,
                                                 const EvalMethod& method, std::uint64_t seed) {
  const std::size_t n = dataset.num_rows();
  if (n < 2) throw Error(Errc::invalid_argument, "evaluate: need at least 2 rows");

  if (method.kind == EvalMethod::Kind::leave_one_out) {
    std::vector<std::vector<std::size_t>> folds(n);
    for (std::size_t i = 0; i < n; ++i) folds[i] = {i};
    return folds;
  }

  const std::size_t k = method.k;
  if (k < 2 || k > n)
    throw Error(Errc::invalid_argument,
                "evaluate: k must be in [2, rows], got k=" + std::to_string(k) +
                    " with rows=" + std::to_string(n));

  // Stratified dealing: shuffle each outcome's rows, then deal the classes
  // round-robin so every fold sees a near-proportional outcome mix.
  std::map<std::string, std::vector<std::size_t>> by_outcome;
  for (const Row& row : dataset.rows()) by_outcome[row.outcome].push_back(row.index);

  const Rng base = Rng(seed).split("folds");
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t dealt = 0;
  for (auto& [outcome, members] : by_outcome) {
    Rng rng = base.split(outcome);
    shuffle(members, rng);
    for (std::size_t idx : members) folds[dealt++ % k].push_back(idx);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

EvalReport evaluate(const Dataset& dataset, const EvalMethod& method,
                    const std::vector<TieStrategy>& strategies, std::uint64_t seed) {
  const std::vector<TieStrategy> active = dedup(strategies);
  if (active.empty()) throw Error(Errc::invalid_argument, "evaluate: no strategies given");

  const auto folds = make_folds(dataset, method, seed);

  EvalReport report;
  report.method = method;
  report.seed = seed;
  for (TieStrategy s : active) report.per_strategy[s];

  const bool track_paired =
      report.per_strategy.count(TieStrategy::backtrack) &&
      report.per_strategy.count(TieStrategy::random);
  PairedStats paired;

  const Rng base = Rng(seed).split("predict");
  std::vector<bool> held_out(dataset.num_rows());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    held_out.assign(dataset.num_rows(), false);
    for (std::size_t idx : folds[f]) held_out[idx] = true;
    std::vector<std::size_t> training;
    training.reserve(dataset.num_rows() - folds[f].size());
    for (std::size_t i = 0; i < dataset.num_rows(); ++i)
      if (!held_out[i]) training.push_back(i);

    const Tree tree = build_tree(subset(dataset, training));

    for (std::size_t idx : folds[f]) {
      const Row& row = dataset.row(idx);
      Query query;
      for (std::size_t a = 0; a < dataset.num_attributes(); ++a)
        query.values[dataset.attribute_names()[a]] = row.values[a];

      std::map<TieStrategy, bool> correct_by;
      for (TieStrategy s : active) {
        Rng rng = base.split(f).split(idx).split(strategy_ordinal(s));
        const Prediction p = predict(tree, query, s, rng);
        StrategyStats& stats = report.per_strategy[s];
        ++stats.total;
        const bool correct = p.label == row.outcome;
        if (correct) ++stats.correct;
        if (p.steps.front().candidates.size() >= 2) ++stats.tied;
        if (p.randomized) ++stats.randomized;
        correct_by[s] = correct;
      }
      if (track_paired) {
        const bool bt = correct_by[TieStrategy::backtrack];
        const bool rnd = correct_by[TieStrategy::random];
        if (bt && rnd) ++paired.both_correct;
        else if (bt) ++paired.backtrack_wins;
        else if (rnd) ++paired.random_wins;
        else ++paired.both_wrong;
      }
    }
  }

  if (track_paired) {
    paired.sign_test_p = (paired.backtrack_wins + paired.random_wins) == 0
                             ? 1.0
                             : sign_test(paired.backtrack_wins, paired.random_wins);
    report.paired = paired;
  }
  return report;
}

double sign_test(std::size_t wins_a, std::size_t wins_b) {
  const std::size_t n = wins_a + wins_b;
  if (n == 0) throw Error(Errc::invalid_argument, "sign_test: no discordant pairs");
  const std::size_t m = std::min(wins_a, wins_b);
  const double log_half = std::log(0.5);
  long double tail = 0.0L;
  for (std::size_t i = 0; i <= m; ++i) {
    const double log_term = std::lgamma(double(n) + 1.0) - std::lgamma(double(i) + 1.0) -
                            std::lgamma(double(n - i) + 1.0) + double(n) * log_half;
    tail += std::exp((long double)log_term);
  }
  return std::min(1.0, 2.0 * double(tail));
}

Dataset generate_tie_heavy(std::size_t num_rows, std::size_t num_attributes,
                           std::size_t values_per_attribute, std::size_t num_outcomes,
                           double tie_bias, std::uint64_t seed) {
  if (num_rows < 1 || num_attributes < 1 || values_per_attribute < 1 || num_outcomes < 1)
    throw Error(Errc::invalid_argument, "generate_tie_heavy: all counts must be >= 1");
  if (tie_bias < 0.0 || tie_bias > 1.0)
    throw Error(Errc::invalid_argument, "generate_tie_heavy: tie_bias must be in [0, 1]");
  if (tie_bias > 0.0 && num_outcomes < 2)
    throw Error(Errc::invalid_argument,
                "generate_tie_heavy: conflicting outcomes need num_outcomes >= 2");

  std::vector<std::string> attribute_names(num_attributes);
  for (std::size_t a = 0; a < num_attributes; ++a) attribute_names[a] = "f" + std::to_string(a);
  std::vector<std::string> outcomes(num_outcomes);
  for (std::size_t o = 0; o < num_outcomes; ++o) outcomes[o] = "c" + std::to_string(o);

  // Linearly declining outcome weights: c0 is globally most frequent, so
  // ancestor tallies prefer it and surviving ties are resolvable.
  std::vector<std::size_t> weights(num_outcomes);
  std::size_t weight_total = 0;
  for (std::size_t o = 0; o < num_outcomes; ++o) {
    weights[o] = num_outcomes - o;
    weight_total += weights[o];
  }
  auto draw_weighted = [&](Rng& rng, std::optional<std::size_t> exclude) {
    std::size_t span = weight_total - (exclude ? weights[*exclude] : 0);
    std::size_t x = rng.uniform_index(span);
    for (std::size_t o = 0; o < num_outcomes; ++o) {
      if (exclude && o == *exclude) continue;
      if (x < weights[o]) return o;
      x -= weights[o];
    }
    return num_outcomes - 1;  // unreachable
  };

  // The profile's own outcome is a deterministic function of its values, so
  // tie_bias = 0 yields conflict-free data.
  const Rng profile_base = Rng(seed).split("profile");
  auto profile_outcome = [&](const std::vector<std::string>& values) {
    Rng rng = profile_base;
    for (const auto& v : values) rng = rng.split(v);
    return draw_weighted(rng, std::nullopt);
  };

  Rng gen = Rng(seed).split("rows");
  std::vector<Row> rows;
  rows.reserve(num_rows);
  auto emit = [&](const std::vector<std::string>& values, std::size_t outcome) {
    rows.push_back(Row{rows.size(), values, outcomes[outcome]});
  };

  while (rows.size() < num_rows) {
    std::vector<std::string> values(num_attributes);
    for (std::size_t a = 0; a < num_attributes; ++a)
      values[a] = "v" + std::to_string(gen.uniform_index(values_per_attribute));
    const std::size_t own = profile_outcome(values);
    const bool conflict_pair =
        num_outcomes >= 2 && gen.bernoulli(tie_bias) && rows.size() + 2 <= num_rows;
    if (conflict_pair) {
      emit(values, own);
      emit(values, draw_weighted(gen, own));
    } else {
      emit(values, own);
    }
  }
  return Dataset(std::move(attribute_names), "outcome", std::move(rows));
}

nlohmann::json report_to_json(const EvalReport& report, bool include_paired) {
  nlohmann::json j;
  j["method"] = report.method.kind == EvalMethod::Kind::leave_one_out ? "loo" : "kfold";
  j["k"] = report.method.kind == EvalMethod::Kind::k_fold ? nlohmann::json(report.method.k)
                                                          : nlohmann::json(nullptr);
  j["seed"] = report.seed;
  auto& per = j["per_strategy"] = nlohmann::json::object();
  for (const auto& [strategy, stats] : report.per_strategy) {
    nlohmann::json js;
    js["accuracy"] = stats.accuracy();
    js["correct"] = stats.correct;
    js["total"] = stats.total;
    js["tie_rate"] = stats.tie_rate();
    js["ties"] = stats.tied;
    js["randomized_rate"] = stats.randomized_rate();
    js["randomized"] = stats.randomized;
    per[to_string(strategy)] = std::move(js);
  }
  if (include_paired && report.paired) {
    nlohmann::json jp;
    jp["backtrack_wins"] = report.paired->backtrack_wins;
    jp["random_wins"] = report.paired->random_wins;
    jp["both_correct"] = report.paired->both_correct;
    jp["both_wrong"] = report.paired->both_wrong;
    jp["sign_test_p"] = report.paired->sign_test_p;
    j["paired"] = std::move(jp);
  } else {
    j["paired"] = nullptr;
  }
  return j;
}

std::string format_report(const EvalReport& report, bool include_paired) {
  std::ostringstream out;
  out << "method: "
      << (report.method.kind == EvalMethod::Kind::leave_one_out
              ? std::string("leave-one-out")
              : std::to_string(report.method.k) + "-fold")
      << "  seed: " << report.seed << "\n";
  out << std::left << std::setw(11) << "strategy" << std::right << std::setw(10) << "accuracy"
      << std::setw(16) << "correct/total" << std::setw(10) << "tie_rate" << std::setw(18)
      << "randomized_rate" << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& [strategy, stats] : report.per_strategy) {
    const std::string ratio =
        std::to_string(stats.correct) + "/" + std::to_string(stats.total);
    out << std::left << std::setw(11) << to_string(strategy) << std::right << std::setw(10)
        << stats.accuracy() << std::setw(16) << ratio << std::setw(10) << stats.tie_rate()
        << std::setw(18) << stats.randomized_rate() << "\n";
  }
  if (include_paired && report.paired) {
    const auto& p = *report.paired;
    out << "paired: backtrack_wins=" << p.backtrack_wins << "  random_wins=" << p.random_wins
        << "  both_correct=" << p.both_correct << "  both_wrong=" << p.both_wrong << "\n";
    out << "sign test p-value: " << std::setprecision(6) << p.sign_test_p << "\n";
  }
  return out.str();
}

}  // namespace bttb
