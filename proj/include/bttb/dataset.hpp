#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bttb/error.hpp"

namespace bttb {

/// Per-outcome counts of a set of training rows. Absent keys mean zero;
/// present keys always hold a count >= 1.
class Histogram {
 public:
  Histogram() = default;

  void add(const std::string& outcome, std::size_t n = 1) {
    if (n == 0) return;
    counts_[outcome] += n;
    total_ += n;
  }

  std::size_t count(const std::string& outcome) const noexcept {
    auto it = counts_.find(outcome);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t total() const noexcept { return total_; }
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t distinct() const noexcept { return counts_.size(); }
  const std::map<std::string, std::size_t>& counts() const noexcept { return counts_; }

  Histogram& operator+=(const Histogram& other) {
    for (const auto& [outcome, n] : other.counts_) add(outcome, n);
    return *this;
  }
  friend Histogram operator+(Histogram lhs, const Histogram& rhs) {
    lhs += rhs;
    return lhs;
  }

  bool operator==(const Histogram&) const = default;

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

struct Row {
  std::size_t index = 0;
  std::vector<std::string> values;  // one token per attribute, in attribute order
  std::string outcome;

  bool operator==(const Row&) const = default;
};

/// Immutable categorical table: attribute columns plus one outcome column.
/// Row indices are 0-based, dense, and equal to storage position. Values are
/// opaque text tokens compared byte-wise; duplicate rows are permitted.
class Dataset {
 public:
  Dataset(std::vector<std::string> attribute_names, std::string outcome_name,
          std::vector<Row> rows);

  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::string& outcome_name() const noexcept { return outcome_name_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  std::size_t num_attributes() const noexcept { return attribute_names_.size(); }

  const Row& row(std::size_t index) const;
  std::optional<std::size_t> attribute_index(std::string_view name) const noexcept;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> attribute_names_;
  std::string outcome_name_;
  std::vector<Row> rows_;
};

/// Outcome counts over the given row indices. Throws on an out-of-range index.
Histogram histogram(const Dataset& dataset, const std::vector<std::size_t>& indices);

/// Reads RFC-4180-style CSV (header required, comma delimiter, UTF-8).
/// All non-outcome columns become attributes, in header order. Unquoted
/// fields are trimmed of surrounding whitespace; quoted fields are verbatim.
Dataset load_csv(std::istream& source, const std::string& outcome_column);
Dataset load_csv_file(const std::string& path, const std::string& outcome_column);

/// Writes CSV that load_csv reads back to an equal Dataset (attributes first,
/// outcome column last).
void save_csv(const Dataset& dataset, std::ostream& out);

/// New Dataset holding the selected rows, reindexed densely in the given order.
Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices);

/// Built-in 8-row, 2-attribute sample used across tests and docs.
Dataset builtin_table1();

}  // namespace bttb
