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

#include "gbt/objective.hpp"

#include <algorithm>
#include <cmath>

namespace fedscs::gbt {

GradHess softmax_grad_hess(const Matrix& margins, std::span<const int32_t> labels) {
  const std::size_t n = margins.rows();
  const std::size_t k = margins.cols();
  require(labels.size() == n, ErrorCode::kInvalidInput, "label count does not match margins");
  require(k >= 1, ErrorCode::kInvalidInput, "margins need at least one class column");

  GradHess out{Matrix(n, k), Matrix(n, k)};
  std::vector<double> p(k);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = margins.row(i);
    require(labels[i] >= 0 && static_cast<std::size_t>(labels[i]) < k,
            ErrorCode::kInvalidInput, "label out of range");
    double mx = m[0];
    for (double v : m) {
      require(std::isfinite(v), ErrorCode::kInvalidInput, "non-finite margin");
      mx = std::max(mx, v);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      p[c] = std::exp(m[c] - mx);
      z += p[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double pc = p[c] / z;
      out.g(i, c) = pc - (static_cast<std::size_t>(labels[i]) == c ? 1.0 : 0.0);
      out.h(i, c) = pc * (1.0 - pc);
    }
  }
  return out;
}

double quantize_stat(double v) {
  return std::nearbyint(v * kStatScale) / kStatScale;
}

void quantize(GradHess& gh) {
  for (double& v : gh.g.data()) v = quantize_stat(v);
  for (double& v : gh.h.data()) v = quantize_stat(v);
}

std::vector<double> hessian_weights(const GradHess& gh) {
  std::vector<double> w(gh.n_rows(), 0.0);
  for (std::size_t i = 0; i < gh.n_rows(); ++i) {
    for (double v : gh.h.row(i)) w[i] += v;
  }
  return w;
}

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda, double gamma) {
  const double left = grad_left * grad_left / (hess_left + lambda);
  const double right = grad_right * grad_right / (hess_right + lambda);
  const double g = grad_left + grad_right;
  const double parent = g * g / ((hess_left + hess_right) + lambda);
  return 0.5 * (left + right - parent) - gamma;
}

double row_log_loss(std::span<const double> margins, int32_t label) {
  double mx = margins[0];
  for (double v : margins) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : margins) z += std::exp(v - mx);
  return mx + std::log(z) - margins[static_cast<std::size_t>(label)];
}

double log_loss_sum(const Matrix& margins, std::span<const int32_t> labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < margins.rows(); ++i) s += row_log_loss(margins.row(i), labels[i]);
  return s;
}

double mean_log_loss(const Matrix& margins, std::span<const int32_t> labels) {
  require(margins.rows() > 0, ErrorCode::kInvalidInput, "log-loss of an empty set");
  return log_loss_sum(margins, labels) / static_cast<double>(margins.rows());
}

}  // namespace fedscs::gbt
