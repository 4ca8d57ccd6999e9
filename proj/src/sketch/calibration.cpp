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

#include "sketch/calibration.hpp"

#include <algorithm>
#include <array>

#include "common.hpp"

namespace fedscs::sketch {

std::vector<double> edge_levels(int bins) {
  require(bins >= 1, ErrorCode::kInvalidInput, "bins must be >= 1");
  std::vector<double> levels(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) levels[static_cast<std::size_t>(b)] = double(b) / bins;
  return levels;
}

double bracketing_error(const ExactWeightedQuantiler& exact, std::span<const double> edges,
                        int bins) {
  require(edges.size() == static_cast<std::size_t>(bins) + 1, ErrorCode::kInvalidInput,
          "need one edge per quantile level");
  const double total = exact.total_weight();
  double worst = 0.0;
  for (int b = 0; b <= bins; ++b) {
    const double level = double(b) / bins;
    const double e = edges[static_cast<std::size_t>(b)];
    const double below = exact.mass_below(e) / total;
    const double at = exact.mass_at_or_below(e) / total;
    worst = std::max({worst, below - level, level - at});
  }
  return worst;
}

double measured_rank_error(std::span<const double> values, std::span<const double> weights,
                           double rho, int bins) {
  ExactWeightedQuantiler exact(values, weights);
  DDSketch sk(rho);
  for (std::size_t i = 0; i < values.size(); ++i) sk.insert(values[i], weights[i]);
  const auto levels = edge_levels(bins);
  return bracketing_error(exact, sk.split_points(levels), bins);
}

std::span<const double> default_rho_ladder() {
  static constexpr std::array<double, 9> kLadder = {0.05,  0.02,  0.01,  0.005, 0.002,
                                                    0.001, 5e-4,  2e-4,  1e-4};
  return kLadder;
}

Calibration calibrate_rho(std::span<const double> values, std::span<const double> weights,
                          double alpha_target, int bins, std::span<const double> ladder) {
  require(!ladder.empty(), ErrorCode::kInvalidInput, "empty calibration ladder");
  require(alpha_target > 0.0 && alpha_target < 1.0, ErrorCode::kInvalidInput,
          "alpha target must lie in (0, 1)");
  Calibration out;
  out.alpha_target = alpha_target;
  for (double rho : ladder) {
    out.rho = rho;
    out.measured_alpha = measured_rank_error(values, weights, rho, bins);
    if (out.measured_alpha <= alpha_target) {
      out.satisfied = true;
      return out;
    }
  }
  return out;
}

}  // namespace fedscs::sketch
