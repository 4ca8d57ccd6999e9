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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gbt/dataset.hpp"

namespace fedscs::data {

struct CsvSchema {
  std::string label_column = "label";
  std::string id_column;  // empty: no id column
};

/// A dataset plus the metadata needed to map it back to the file.
struct Table {
  gbt::Dataset data;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;  // class_names[k] is the label mapped to k
  std::vector<std::string> ids;          // per row; empty without an id column

  bool has_ids() const { return !ids.empty(); }
  Table subset(const std::vector<std::size_t>& rows) const;
};

/// Header required, comma separated, no quoting. Labels are remapped to
/// 0..K-1 in order of first appearance. Throws kIo when the file cannot be
/// opened and kIngest (with line and column) for malformed content.
Table load_csv(const std::string& path, const CsvSchema& schema = {});
Table parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source = "<stream>");

/// Writes `table` in the format load_csv reads (features, then id, then label).
void write_csv(const std::string& path, const Table& table, const CsvSchema& schema = {});

}  // namespace fedscs::data
