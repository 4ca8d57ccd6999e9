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

#include "eval/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "common.hpp"

namespace fedscs::eval {

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) fail(ErrorCode::kIo, "cannot write " + p.string());
  return out;
}

// Cells are written raw; commas and newlines would break the layout.
std::string cell(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

}  // namespace

MetricsRow MetricsRow::make(std::string engine, std::string split, std::string client,
                            Confusion c) {
  MetricsRow row{std::move(engine), std::move(split), std::move(client), std::move(c), 0.0, 0.0};
  row.accuracy = eval::accuracy(row.confusion);
  row.macro_f1 = eval::macro_f1(row.confusion);
  return row;
}

double objective_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t t = 0; t < std::min(a.size(), b.size()); ++t) {
    if (std::isnan(a[t]) || std::isnan(b[t])) continue;
    gap = std::max(gap, std::fabs(a[t] - b[t]));
  }
  return gap;
}

void RunReport::finalize() {
  max_gap = j_fed.empty() ? 0.0 : objective_gap(j_fed, j_central);
  for (auto& row : metrics) {
    row.accuracy = accuracy(row.confusion);
    row.macro_f1 = macro_f1(row.confusion);
  }
}

void RunReport::validate() const {
  const double gap = j_fed.empty() ? 0.0 : objective_gap(j_fed, j_central);
  require(same(gap, max_gap), ErrorCode::kInvalidInput,
          "report max_gap does not match the objective lists");
  for (const auto& row : metrics) {
    require(same(row.accuracy, accuracy(row.confusion)) &&
                same(row.macro_f1, macro_f1(row.confusion)),
            ErrorCode::kInvalidInput, "report metrics do not match their confusion matrix");
  }
}

const MetricsRow* RunReport::find(const std::string& engine, const std::string& split,
                                  const std::string& client) const {
  for (const auto& row : metrics) {
    if (row.engine == engine && row.split == split && row.client == client) return &row;
  }
  return nullptr;
}

void write_report(const RunReport& report, const std::string& dir) {
  report.validate();
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory " + dir + ": " + ec.message());

  {
    auto out = open_out(base / "objective.csv");
    out << "round,j_central,j_fed,abs_gap\n";
    for (std::size_t t = 0; t < report.j_central.size(); ++t) {
      const double c = report.j_central[t];
      const double f = t < report.j_fed.size() ? report.j_fed[t] : std::nan("");
      const double gap = std::isnan(f) || std::isnan(c) ? std::nan("") : std::fabs(f - c);
      out << t << ',' << format_double(c) << ',' << format_double(f) << ','
          << format_double(gap) << '\n';
    }
  }
  {
    auto out = open_out(base / "metrics.csv");
    out << "engine,split,client,n,accuracy,macro_f1\n";
    for (const auto& row : report.metrics) {
      out << row.engine << ',' << row.split << ',' << cell(row.client) << ','
          << row.confusion.total() << ',' << format_double(row.accuracy) << ','
          << format_double(row.macro_f1) << '\n';
    }
  }
  {
    auto out = open_out(base / "summary.csv");
    out << "key,value\n";
    for (const auto& [k, v] : report.config) out << "config." << k << ',' << cell(v) << '\n';
    out << "max_gap," << format_double(report.max_gap) << '\n';
    out << "tree_diff," << cell(report.tree_diff) << '\n';
    out << "eval_note," << cell(report.eval_note) << '\n';
  }
}

std::string format_report(const RunReport& report) {
  std::ostringstream os;
  for (const auto& [k, v] : report.config) {
    if (!v.empty()) os << std::left << std::setw(18) << k << v << '\n';
  }
  os << '\n' << std::right << std::setw(5) << "round" << std::setw(14) << "J_central";
  if (!report.j_fed.empty()) os << std::setw(14) << "J_fed" << std::setw(12) << "|gap|";
  os << '\n';
  for (std::size_t t = 0; t < report.j_central.size(); ++t) {
    os << std::setw(5) << t << std::setw(14) << fixed(report.j_central[t], 8);
    if (!report.j_fed.empty()) {
      const double f = report.j_fed[t];
      os << std::setw(14) << fixed(f, 8) << std::setw(12)
         << fixed(std::fabs(f - report.j_central[t]), 8);
    }
    os << '\n';
  }
  os << '\n'
     << std::left << std::setw(9) << "engine" << std::setw(7) << "split" << std::setw(14)
     << "client" << std::right << std::setw(8) << "n" << std::setw(10) << "acc" << std::setw(10)
     << "macroF1" << '\n';
  for (const auto& row : report.metrics) {
    os << std::left << std::setw(9) << row.engine << std::setw(7) << row.split << std::setw(14)
       << (row.client.empty() ? "ALL" : row.client) << std::right << std::setw(8)
       << row.confusion.total() << std::setw(10) << fixed(row.accuracy, 4) << std::setw(10)
       << fixed(row.macro_f1, 4) << '\n';
  }
  if (!report.j_fed.empty()) {
    os << "\nmax objective gap: " << format_double(report.max_gap) << '\n';
    os << "tree diff: " << report.tree_diff << '\n';
  }
  if (!report.eval_note.empty()) os << "note: " << report.eval_note << '\n';
  return os.str();
}

}  // namespace fedscs::eval
