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

#include <optional>
#include <string>
#include <vector>

#include "eval/run_config.hpp"
#include "gbt/train.hpp"
#include "protocol/training.hpp"

namespace fedscs::eval {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  /// Name of the first failing check, or nullopt.
  std::optional<std::string> first_failure() const;
};

/// Runs the property suite on built-in synthetic data, in this order:
/// conservation, gradient, bracketing, objective-agreement,
/// central-equivalence, prefix-mass, determinism. Training parameters, rho,
/// seed and the injected fault come from `config`; its data fields are
/// ignored.
VerifyReport verify(const RunConfig& config);

std::string format_verify(const VerifyReport& report);

// Individual checks, shared with the test suites.

/// Atom totals equal gradient/Hessian column sums, and atom and sketch merges
/// over `partitions` random partitions equal the pooled summaries.
CheckResult check_conservation(const gbt::Dataset& data, int bins, double rho, int partitions,
                               uint64_t seed);

/// Softmax gradient and diagonal Hessian against central finite differences.
CheckResult check_gradients(int draws, uint64_t seed);

/// Sketch edges bracket the exact weighted CDF within the sketch's certified
/// rank error, over `streams` random Hessian-weighted streams.
CheckResult check_bracketing(int streams, int bins, double alpha_target, uint64_t seed);

/// Per round and feature, |H~(<e~_b) - H(<e_b)| <= alpha * H, where the true
/// weights are recomputed by replaying the federated ensemble on `train`.
CheckResult check_prefix_mass(const gbt::Dataset& train, const protocol::FedRun& fed, int bins);

/// Structure identical and leaf weights within `rel_tol`.
CheckResult check_equivalence(const gbt::Ensemble& central, const gbt::Ensemble& fed,
                              double rel_tol);

}  // namespace fedscs::eval
