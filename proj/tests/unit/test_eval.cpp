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

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "eval/metrics.hpp"
#include "eval/report.hpp"
#include "eval/run_config.hpp"
#include "eval/runner.hpp"
#include "eval/verify.hpp"
#include "expect_error.hpp"

namespace fedscs::eval {
namespace {

TEST(Metrics, SixSampleFixture) {
  const std::vector<int32_t> truth = {0, 0, 1, 1, 2, 2};
  const std::vector<int32_t> pred = {0, 1, 1, 1, 2, 0};
  const Confusion c = confusion(truth, pred, 3);
  EXPECT_EQ(c.total(), 6u);
  EXPECT_EQ(c.at(2, 0), 1u);
  EXPECT_DOUBLE_EQ(accuracy(c), 4.0 / 6.0);
  // Per-class F1: 1/2, 4/5, 2/3.
  EXPECT_NEAR(macro_f1(c), (0.5 + 0.8 + 2.0 / 3.0) / 3.0, 1e-15);
}

TEST(Metrics, AbsentClassesAndEmptyInput) {
  const std::vector<int32_t> y = {0, 0, 1};
  const Confusion c = confusion(y, y, 3);
  EXPECT_EQ(accuracy(c), 1.0);
  EXPECT_EQ(macro_f1(c), 1.0);
  const Confusion empty = confusion({}, {}, 2);
  EXPECT_EQ(empty.total(), 0u);
  EXPECT_FEDSCS_ERROR(confusion(y, std::vector<int32_t>{0}, 3), ErrorCode::kInvalidInput);
}

TEST(RunConfig, SetEchoAndErrors) {
  RunConfig c;
  c.set("bins", "128");
  c.set("mode", "fed");
  c.set("rho", "0.005");
  c.set("fault", "tie-break");
  EXPECT_EQ(c.train.bins, 128);
  EXPECT_EQ(c.mode, Mode::kFed);
  EXPECT_EQ(c.fault, protocol::Fault::kTieBreak);
  bool saw = false;
  for (const auto& [k, v] : c.echo()) {
    if (k == "rho") {
      EXPECT_EQ(v, "0.005");
      saw = true;
    }
  }
  EXPECT_TRUE(saw);
  EXPECT_FEDSCS_ERROR(c.set("nope", "1"), ErrorCode::kConfig);
  EXPECT_FEDSCS_ERROR(c.set("bins", "12x"), ErrorCode::kConfig);
  EXPECT_FEDSCS_ERROR(c.set("exact_sketch", "maybe"), ErrorCode::kConfig);
  c.set("rho", "1.5");
  EXPECT_FEDSCS_ERROR(c.validate(), ErrorCode::kConfig);
}

TEST(RunConfig, ConfigStreamReportsLine) {
  RunConfig c;
  std::istringstream good("# comment\nrounds = 7\n\ndepth=3\n");
  apply_config(c, good, "cfg");
  EXPECT_EQ(c.train.rounds, 7);
  EXPECT_EQ(c.train.max_depth, 3);
  std::istringstream bad("rounds = 7\nbogus line\n");
  try {
    apply_config(c, bad, "cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
  }
  EXPECT_FEDSCS_ERROR(apply_config_file(c, "/nonexistent.cfg"), ErrorCode::kIo);
}

TEST(Report, ValidateCatchesTampering) {
  RunReport r;
  r.j_central = {1.0, 0.5};
  r.j_fed = {1.0, 0.75};
  r.metrics.push_back(MetricsRow::make("central", "train", "", confusion(
      std::vector<int32_t>{0, 1}, std::vector<int32_t>{0, 0}, 2)));
  r.finalize();
  EXPECT_EQ(r.max_gap, 0.25);
  EXPECT_NO_THROW(r.validate());
  RunReport tampered = r;
  tampered.metrics[0].accuracy = 0.9;
  EXPECT_FEDSCS_ERROR(tampered.validate(), ErrorCode::kInvalidInput);
  tampered = r;
  tampered.max_gap = 0.0;
  EXPECT_FEDSCS_ERROR(tampered.validate(), ErrorCode::kInvalidInput);
}

TEST(Report, GapSkipsUnknownRounds) {
  EXPECT_EQ(objective_gap({1.0, NAN, 0.5}, {1.0, 0.1, 0.25}), 0.25);
}

RunConfig small_fed() {
  RunConfig c;
  c.mode = Mode::kFed;
  c.synth.rows = 1500;
  c.synth.features = 4;
  c.synth.classes = 4;
  c.train.rounds = 5;
  c.train.max_depth = 3;
  c.train.bins = 32;
  return c;
}

TEST(Runner, ExactSketchFedIsIdentical) {
  RunConfig c = small_fed();
  c.exact_sketch = true;
  c.clients = "iid:4";
  const auto out = run(c);
  EXPECT_EQ(out.report.tree_diff, "identical");
  EXPECT_LE(out.report.max_gap, 1e-9);
  EXPECT_NO_THROW(out.report.validate());
  ASSERT_NE(out.report.find("fed", "valid"), nullptr);
  EXPECT_EQ(out.report.find("fed", "valid")->accuracy,
            out.report.find("central", "valid")->accuracy);
}

TEST(Runner, SketchedFedStaysCloseToCentral) {
  RunConfig c = small_fed();
  c.clients = "iid:8";
  c.rho = 0.001;
  const auto out = run(c);
  const double fed = out.report.find("fed", "valid")->accuracy;
  const double central = out.report.find("central", "valid")->accuracy;
  EXPECT_LT(std::fabs(fed - central), 0.01);
}

TEST(Runner, SweepNeedsTwoValuesAndWritesFiles) {
  RunConfig c = small_fed();
  c.train.rounds = 2;
  EXPECT_FEDSCS_ERROR(sweep(c, SweepAxis::kBins, {"16"}), ErrorCode::kConfig);
  const auto s = sweep(c, SweepAxis::kBins, {"16", "32"});
  ASSERT_EQ(s.reports.size(), 2u);
  const auto dir = std::filesystem::temp_directory_path() / "fedscs_sweep_test";
  std::filesystem::remove_all(dir);
  write_sweep(s, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "sweep.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Verify, ChecksPassOnHealthyCode) {
  EXPECT_TRUE(check_gradients(20, 1).passed);
  EXPECT_TRUE(check_bracketing(10, 32, 0.01, 2).passed);
}

}  // namespace
}  // namespace fedscs::eval
