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

#include <cstdint>
#include <span>
#include <vector>

#include "common.hpp"

namespace fedscs::gbt {

/// Per-sample, per-class first and second derivatives (n_rows x K, row-major).
struct GradHess {
  Matrix g;
  Matrix h;

  std::size_t n_rows() const { return g.rows(); }
  int n_classes() const { return static_cast<int>(g.cols()); }
};

/// Softmax cross-entropy derivatives with the diagonal Hessian:
///   g = p - onehot(y),  h = p (1 - p).
/// Throws kInvalidInput on non-finite margins or out-of-range labels.
GradHess softmax_grad_hess(const Matrix& margins, std::span<const int32_t> labels);

// Gradient statistics are snapped to a 2^-28 grid before any reduction. Sums of
// grid values stay exact in binary64 while |sum| < 2^25, so histogram totals do
// not depend on summation order or on how rows are spread over clients.
inline constexpr double kStatScale = 268435456.0;  // 2^28
inline constexpr std::size_t kMaxExactRows = std::size_t{1} << 24;

double quantize_stat(double v);
void quantize(GradHess& gh);

/// Per-sample sketch weight: sum over classes of the (quantized) Hessian.
std::vector<double> hessian_weights(const GradHess& gh);

/// Second-order split gain for one class.
double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda, double gamma);

inline double leaf_weight(double grad, double hess, double lambda) {
  return -grad / (hess + lambda);
}

/// Multiclass log-loss of one row of margins.
double row_log_loss(std::span<const double> margins, int32_t label);

/// Sum of row_log_loss over all rows, accumulated in row order.
double log_loss_sum(const Matrix& margins, std::span<const int32_t> labels);

double mean_log_loss(const Matrix& margins, std::span<const int32_t> labels);

}  // namespace fedscs::gbt
