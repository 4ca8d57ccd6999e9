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

#include "eval/run_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "data/partition.hpp"

namespace fedscs::eval {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    fail(ErrorCode::kConfig, "bad value '" + v + "' for " + key);
  }
  return out;
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorCode::kConfig, "bad boolean '" + v + "' for " + key);
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::kCentral ? "central" : "fed"; }

const char* fault_name(protocol::Fault f) {
  switch (f) {
    case protocol::Fault::kNone: return "none";
    case protocol::Fault::kTieBreak: return "tie-break";
    case protocol::Fault::kDoubleEta: return "double-eta";
  }
  return "none";
}

protocol::Fault parse_fault(const std::string& s) {
  if (s == "none") return protocol::Fault::kNone;
  if (s == "tie-break") return protocol::Fault::kTieBreak;
  if (s == "double-eta") return protocol::Fault::kDoubleEta;
  fail(ErrorCode::kConfig, "unknown fault '" + s + "' (expected none, tie-break, double-eta)");
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "data") data = v;
  else if (key == "label_column") label_column = v;
  else if (key == "id_column") id_column = v;
  else if (key == "train_fraction") train_fraction = number<double>(key, v);
  else if (key == "split_key") {
    if (v != "row" && v != "id") fail(ErrorCode::kConfig, "split_key must be row or id");
    split_by_id = v == "id";
  } else if (key == "mode") {
    if (v == "central") mode = Mode::kCentral;
    else if (v == "fed") mode = Mode::kFed;
    else fail(ErrorCode::kConfig, "mode must be central or fed");
  } else if (key == "clients") {
    data::parse_partition(v, 0);  // syntax check only
    clients = v;
  } else if (key == "rounds") train.rounds = number<int>(key, v);
  else if (key == "depth") train.max_depth = number<int>(key, v);
  else if (key == "bins") train.bins = number<int>(key, v);
  else if (key == "lambda") train.lambda = number<double>(key, v);
  else if (key == "gamma") train.gamma = number<double>(key, v);
  else if (key == "eta") train.eta = number<double>(key, v);
  else if (key == "seed") train.seed = number<uint64_t>(key, v);
  else if (key == "rho") rho = number<double>(key, v);
  else if (key == "exact_sketch") exact_sketch = boolean(key, v);
  else if (key == "cohort_fraction") cohort_fraction = number<double>(key, v);
  else if (key == "barrier_timeout") barrier_timeout = number<double>(key, v);
  else if (key == "fault") fault = parse_fault(v);
  else if (key == "out") out = v;
  else if (key == "synth_rows") synth.rows = number<std::size_t>(key, v);
  else if (key == "synth_features") synth.features = number<int>(key, v);
  else if (key == "synth_classes") synth.classes = number<int>(key, v);
  else if (key == "synth_ids") synth.ids = number<int>(key, v);
  else if (key == "synth_discrete") synth.discrete = number<int>(key, v);
  else if (key == "synth_spread") synth.spread = number<double>(key, v);
  else if (key == "synth_center_box") synth.center_box = number<double>(key, v);
  else fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"data", data.empty() ? "<synthetic>" : data},
      {"label_column", label_column},
      {"id_column", id_column},
      {"train_fraction", format_double(train_fraction)},
      {"split_key", split_by_id ? "id" : "row"},
      {"mode", mode_name(mode)},
      {"clients", clients},
      {"rounds", std::to_string(train.rounds)},
      {"depth", std::to_string(train.max_depth)},
      {"bins", std::to_string(train.bins)},
      {"lambda", format_double(train.lambda)},
      {"gamma", format_double(train.gamma)},
      {"eta", format_double(train.eta)},
      {"seed", std::to_string(train.seed)},
      {"rho", format_double(rho)},
      {"exact_sketch", exact_sketch ? "true" : "false"},
      {"cohort_fraction", format_double(cohort_fraction)},
      {"barrier_timeout", format_double(barrier_timeout)},
      {"fault", fault_name(fault)},
  };
  if (data.empty()) {
    out.insert(out.end(), {
                              {"synth_rows", std::to_string(synth.rows)},
                              {"synth_features", std::to_string(synth.features)},
                              {"synth_classes", std::to_string(synth.classes)},
                              {"synth_ids", std::to_string(synth.ids)},
                              {"synth_discrete", std::to_string(synth.discrete)},
                              {"synth_spread", format_double(synth.spread)},
                              {"synth_center_box", format_double(synth.center_box)},
                          });
  }
  return out;
}

void RunConfig::validate() const {
  train.validate();
  require(train_fraction > 0.0 && train_fraction <= 1.0, ErrorCode::kConfig,
          "train_fraction must lie in (0, 1]");
  require(rho > 0.0 && rho < 1.0, ErrorCode::kConfig, "rho must lie in (0, 1)");
  require(cohort_fraction > 0.0 && cohort_fraction <= 1.0, ErrorCode::kConfig,
          "cohort_fraction must lie in (0, 1]");
  require(barrier_timeout >= 0.0, ErrorCode::kConfig, "barrier_timeout must be >= 0");
  data::parse_partition(clients, 0);
}

void apply_config(RunConfig& config, std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kConfig, source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      config.set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config file: " + path);
  apply_config(config, in, path);
}

}  // namespace fedscs::eval
