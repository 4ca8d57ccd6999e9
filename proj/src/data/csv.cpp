// Copyright 2026 The FedSCS Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace fedscs::data {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void ingest_error(const std::string& source, std::size_t line, const std::string& column,
                               const std::string& what) {
  std::ostringstream os;
  os << source << ": line " << line;
  if (!column.empty()) os << ", column '" << column << "'";
  os << ": " << what;
  fail(ErrorCode::kIngest, os.str());
}

}  // namespace

Table Table::subset(const std::vector<std::size_t>& rows) const {
  Table out;
  out.data = data.subset(rows);
  out.feature_names = feature_names;
  out.class_names = class_names;
  if (has_ids()) {
    out.ids.reserve(rows.size());
    for (std::size_t r : rows) out.ids.push_back(ids[r]);
  }
  return out;
}

Table parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) ingest_error(source, 1, "", "missing header row");
  std::vector<std::string> header;
  for (auto f : split_fields(line)) header.emplace_back(trim(f));

  int label_col = -1;
  int id_col = -1;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.label_column) {
      label_col = static_cast<int>(c);
    } else if (!schema.id_column.empty() && header[c] == schema.id_column) {
      id_col = static_cast<int>(c);
    } else {
      feature_cols.push_back(c);
    }
  }
  if (label_col < 0) ingest_error(source, 1, schema.label_column, "label column not found");
  if (!schema.id_column.empty() && id_col < 0) {
    ingest_error(source, 1, schema.id_column, "id column not found");
  }
  if (feature_cols.empty()) ingest_error(source, 1, "", "no feature columns");

  Table table;
  for (std::size_t c : feature_cols) table.feature_names.push_back(header[c]);
  std::vector<double> values;
  std::unordered_map<std::string, int32_t> class_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      ingest_error(source, line_no, "",
                   "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    for (std::size_t c : feature_cols) {
      const std::string_view cell = trim(fields[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        ingest_error(source, line_no, header[c], "cannot parse '" + std::string(cell) + "' as a number");
      }
      if (!std::isfinite(v)) {
        ingest_error(source, line_no, header[c], "non-finite value '" + std::string(cell) + "'");
      }
      values.push_back(v);
    }
    const std::string label(trim(fields[static_cast<std::size_t>(label_col)]));
    if (label.empty()) ingest_error(source, line_no, schema.label_column, "empty label");
    auto [it, inserted] = class_index.emplace(label, static_cast<int32_t>(table.class_names.size()));
    if (inserted) table.class_names.push_back(label);
    table.data.labels.push_back(it->second);
    if (id_col >= 0) table.ids.emplace_back(trim(fields[static_cast<std::size_t>(id_col)]));
  }
  const std::size_t n = table.data.labels.size();
  if (n == 0) ingest_error(source, line_no, "", "no data rows");
  table.data.features = Matrix(n, feature_cols.size());
  table.data.features.data() = std::move(values);
  table.data.n_classes = static_cast<int>(table.class_names.size());
  return table;
}

Table load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open data file: " + path);
  return parse_csv(in, schema, path);
}

void write_csv(const std::string& path, const Table& table, const CsvSchema& schema) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write data file: " + path);
  const bool with_ids = table.has_ids() && !schema.id_column.empty();
  for (const auto& name : table.feature_names) out << name << ',';
  if (with_ids) out << schema.id_column << ',';
  out << schema.label_column << '\n';
  out << std::setprecision(17);
  const auto& d = table.data;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    for (double v : d.row(i)) out << v << ',';
    if (with_ids) out << table.ids[i] << ',';
    out << table.class_names[static_cast<std::size_t>(d.labels[i])] << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing data file: " + path);
}

}  // namespace fedscs::data
