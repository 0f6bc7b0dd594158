#include "bttb/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace bttb {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

struct CsvRecord {
  std::vector<std::string> fields;
};

// Single-pass CSV reader. Supports quoted fields with embedded commas,
// newlines, and doubled quotes. Record numbering is for error messages only.
std::vector<CsvRecord> read_records(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<CsvRecord> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;        // inside a quoted field
  bool was_quoted = false;    // current field started with a quote
  bool after_close = false;   // saw the closing quote, expecting , or EOL
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto finish_field = [&]() {
    fields.push_back(was_quoted ? field : trim(field));
    field.clear();
    was_quoted = false;
    after_close = false;
  };
  auto finish_record = [&]() {
    finish_field();
    // Ignore a trailing blank line (single empty unquoted field).
    if (fields.size() == 1 && fields[0].empty() && !records.empty() && i >= n) {
      fields.clear();
      return;
    }
    records.push_back({std::move(fields)});
    fields = {};
  };

  while (i < n) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          quoted = false;
          after_close = true;
          ++i;
        }
      } else {
        field += c;
        ++i;
      }
      continue;
    }
    if (after_close && c != ',' && c != '\n' && c != '\r' && c != ' ' && c != '\t') {
      throw Error(Errc::csv_bad_quoting,
                  "csv: unexpected character after closing quote in record " +
                      std::to_string(records.size()));
    }
    switch (c) {
      case '"':
        if (field.empty() && !was_quoted) {
          quoted = true;
          was_quoted = true;
        } else {
          field += c;  // literal quote inside an unquoted field
        }
        ++i;
        break;
      case ',':
        finish_field();
        ++i;
        break;
      case '\r':
        ++i;  // handled with the following '\n' (or dropped)
        break;
      case '\n':
        ++i;
        finish_record();
        break;
      default:
        if (!after_close) field += c;  // drop padding after a closing quote
        ++i;
        break;
    }
  }
  if (quoted) {
    throw Error(Errc::csv_bad_quoting, "csv: unterminated quoted field in record " +
                                           std::to_string(records.size()));
  }
  if (!field.empty() || !fields.empty() || was_quoted) finish_record();
  return records;
}

bool needs_quoting(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.front() == '\t' || s.back() == ' ' || s.back() == '\t') return true;
  if (s.front() == '"') return true;
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

Dataset::Dataset(std::vector<std::string> attribute_names, std::string outcome_name,
                 std::vector<Row> rows)
    : attribute_names_(std::move(attribute_names)),
      outcome_name_(std::move(outcome_name)),
      rows_(std::move(rows)) {
  if (attribute_names_.empty())
    throw Error(Errc::invalid_dataset, "dataset: needs at least one attribute");
  if (rows_.empty()) throw Error(Errc::invalid_dataset, "dataset: needs at least one row");
  std::set<std::string_view> seen;
  for (const auto& name : attribute_names_) {
    if (!seen.insert(name).second)
      throw Error(Errc::invalid_dataset, "dataset: duplicate attribute name '" + name + "'");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].index != i)
      throw Error(Errc::invalid_dataset,
                  "dataset: row at position " + std::to_string(i) + " carries index " +
                      std::to_string(rows_[i].index));
    if (rows_[i].values.size() != attribute_names_.size())
      throw Error(Errc::invalid_dataset,
                  "dataset: row " + std::to_string(i) + " has " +
                      std::to_string(rows_[i].values.size()) + " values, expected " +
                      std::to_string(attribute_names_.size()));
  }
}

const Row& Dataset::row(std::size_t index) const {
  if (index >= rows_.size())
    throw Error(Errc::index_out_of_range,
                "dataset: row index " + std::to_string(index) + " out of range (rows: " +
                    std::to_string(rows_.size()) + ")");
  return rows_[index];
}

std::optional<std::size_t> Dataset::attribute_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < attribute_names_.size(); ++i)
    if (attribute_names_[i] == name) return i;
  return std::nullopt;
}

Histogram histogram(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  Histogram h;
  for (std::size_t idx : indices) h.add(dataset.row(idx).outcome);
  return h;
}

Dataset load_csv(std::istream& source, const std::string& outcome_column) {
  const auto records = read_records(source);
  if (records.empty()) throw Error(Errc::csv_missing_header, "csv: missing header row");

  const auto& header = records.front().fields;
  std::optional<std::size_t> outcome_pos;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!seen.insert(header[c]).second)
      throw Error(Errc::invalid_dataset, "csv: duplicate column '" + header[c] + "'");
    if (header[c] == outcome_column) outcome_pos = c;
  }
  if (!outcome_pos)
    throw Error(Errc::csv_unknown_outcome_column,
                "csv: outcome column '" + outcome_column + "' not in header");
  if (header.size() < 2)
    throw Error(Errc::invalid_dataset, "csv: no attribute columns besides '" +
                                           outcome_column + "'");
  if (records.size() == 1) throw Error(Errc::csv_empty_data, "csv: no data rows");

  std::vector<std::string> attribute_names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != *outcome_pos) attribute_names.push_back(header[c]);

  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& fields = records[r].fields;
    const std::size_t row_index = r - 1;
    if (fields.size() != header.size())
      throw Error(Errc::csv_ragged_row,
                  "csv: row " + std::to_string(row_index) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    Row row;
    row.index = row_index;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == *outcome_pos)
        row.outcome = fields[c];
      else
        row.values.push_back(fields[c]);
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(attribute_names), outcome_column, std::move(rows));
}

Dataset load_csv_file(const std::string& path, const std::string& outcome_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  return load_csv(in, outcome_column);
}

void save_csv(const Dataset& dataset, std::ostream& out) {
  for (const auto& name : dataset.attribute_names()) {
    write_field(out, name);
    out << ',';
  }
  write_field(out, dataset.outcome_name());
  out << '\n';
  for (const auto& row : dataset.rows()) {
    for (const auto& value : row.values) {
      write_field(out, value);
      out << ',';
    }
    write_field(out, row.outcome);
    out << '\n';
  }
}

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  std::vector<Row> rows;
  rows.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    Row row = dataset.row(indices[i]);
    row.index = i;
    rows.push_back(std::move(row));
  }
  return Dataset(dataset.attribute_names(), dataset.outcome_name(), std::move(rows));
}

Dataset builtin_table1() {
  const char* data[8][3] = {
      {"a1", "b0", "t3"}, {"a1", "b0", "t0"}, {"a0", "b1", "t0"}, {"a0", "b1", "t1"},
      {"a1", "b1", "t2"}, {"a1", "b1", "t2"}, {"a0", "b0", "t2"}, {"a0", "b0", "t1"},
  };
  std::vector<Row> rows;
  rows.reserve(8);
  for (std::size_t i = 0; i < 8; ++i)
    rows.push_back(Row{i, {data[i][0], data[i][1]}, data[i][2]});
  return Dataset({"Attr A", "Attr B"}, "Outcome", std::move(rows));
}

}  // namespace bttb
