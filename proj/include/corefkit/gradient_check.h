// Copyright 2026 The corefkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Finite-difference verification of the analytic loss gradient.

#ifndef COREFKIT_GRADIENT_CHECK_H_
#define COREFKIT_GRADIENT_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corefkit/document.h"
#include "corefkit/model_params.h"

namespace corefkit {

struct GradientCheckOptions {
  int coordinates = 100;
  std::uint64_t seed = 0;
  double step = 1e-4;
  // Sample only coordinates whose analytic gradient is non-zero.
  bool nonzero_only = false;
};

struct GradientCheckReport {
  double loss = 0;
  std::vector<std::size_t> coords;
  std::vector<double> analytic;
  std::vector<double> numeric;
  std::vector<double> rel_error;
  double max_rel_error = 0;
};

// |ga - gn| / max(1e-8, |ga| + |gn|).
double RelativeError(double analytic, double numeric);

// Compares the analytic gradient of the loss of doc (one window) with
// central differences on randomly sampled coordinates. Throws
// std::runtime_error when the loss is not finite.
GradientCheckReport CheckGradients(const Document &doc,
                                   const ModelParams &params,
                                   const GradientCheckOptions &options);

}  // namespace corefkit

#endif  // COREFKIT_GRADIENT_CHECK_H_
