#pragma once

#include <stdexcept>
#include <string>

namespace bttb {

enum class Errc {
  csv_missing_header,
  csv_ragged_row,
  csv_unknown_outcome_column,
  csv_empty_data,
  csv_bad_quoting,
  invalid_dataset,
  index_out_of_range,
  empty_histogram,
  partition_mismatch,
  unknown_node,
  missing_attribute_value,
  invalid_model,
  invalid_argument,
  no_matching_rows,
  io_error,
};

/// Library-wide exception. code() distinguishes failure kinds; what() names
/// the offending row/column/node where applicable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bttb
