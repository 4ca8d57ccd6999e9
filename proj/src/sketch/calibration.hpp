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

#include <span>
#include <vector>

#include "sketch/ddsketch.hpp"
#include "sketch/exact_quantiler.hpp"

namespace fedscs::sketch {

/// Quantile levels b/B for b = 0..B.
std::vector<double> edge_levels(int bins);

/// Worst bracketing violation of `edges` (one per level b/B) against the exact
/// weighted CDF: max over b of max(F(e_b-) - b/B, b/B - F(e_b), 0).
double bracketing_error(const ExactWeightedQuantiler& exact, std::span<const double> edges,
                        int bins);

/// Measured rank error of a rho-accurate sketch built from the stream.
double measured_rank_error(std::span<const double> values, std::span<const double> weights,
                           double rho, int bins);

/// 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 5e-4, 2e-4, 1e-4.
std::span<const double> default_rho_ladder();

struct Calibration {
  double rho = DDSketch::kDefaultRelativeAccuracy;
  double alpha_target = 0.0;
  double measured_alpha = 0.0;
  bool satisfied = false;
};

/// Coarsest relative accuracy in `ladder` whose sketch meets `alpha_target` on
/// the calibration stream. When no rung qualifies the finest one is returned
/// with satisfied == false.
Calibration calibrate_rho(std::span<const double> values, std::span<const double> weights,
                          double alpha_target, int bins,
                          std::span<const double> ladder = default_rho_ladder());

}  // namespace fedscs::sketch
