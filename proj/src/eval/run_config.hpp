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
#include <utility>
#include <vector>

#include "data/synth.hpp"
#include "gbt/dataset.hpp"
#include "protocol/server.hpp"

namespace fedscs::eval {

enum class Mode : uint8_t { kCentral, kFed };

/// Everything one run needs. Every field has a `key = value` spelling; see
/// set() for the list.
struct RunConfig {
  std::string data;  // CSV path; empty means synthetic blobs
  std::string label_column = "label";
  std::string id_column;
  double train_fraction = 0.8;
  bool split_by_id = false;
  Mode mode = Mode::kCentral;
  std::string clients = "iid:1";
  gbt::TrainConfig train;
  double rho = 0.001;
  bool exact_sketch = false;
  double cohort_fraction = 1.0;
  double barrier_timeout = 0.0;  // 0: no timeout
  protocol::Fault fault = protocol::Fault::kNone;
  std::string out;
  data::BlobSpec synth;

  /// Sets one field from its text form. Throws kConfig on an unknown key or
  /// a malformed value.
  void set(const std::string& key, const std::string& value);
  /// Canonical key/value listing in stable order (used for the config echo).
  std::vector<std::pair<std::string, std::string>> echo() const;
  void validate() const;
};

/// Applies `key = value` lines from a stream. Blank lines and lines starting
/// with '#' are skipped. Throws kConfig with the line number on errors.
void apply_config(RunConfig& config, std::istream& in, const std::string& source);
/// File form of apply_config; a missing file throws kIo naming the path.
void apply_config_file(RunConfig& config, const std::string& path);

const char* mode_name(Mode m);
const char* fault_name(protocol::Fault f);
protocol::Fault parse_fault(const std::string& s);

}  // namespace fedscs::eval
