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

#include "data/csv.hpp"

namespace fedscs::data {

/// Isotropic Gaussian blobs, one center per class drawn uniformly from
/// [-center_box, center_box]^d. Rows get ids "s0".."s{ids-1}" uniformly at
/// random; the first `discrete` features are rounded to integers to produce
/// heavy ties.
struct BlobSpec {
  std::size_t rows = 4000;
  int features = 8;
  int classes = 16;
  int ids = 8;
  int discrete = 0;
  double spread = 1.0;
  double center_box = 10.0;
  uint64_t seed = 0;
};

Table make_blobs(const BlobSpec& spec);

}  // namespace fedscs::data
