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

#include "corefkit/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "corefkit/model.h"
#include "corefkit/random.h"

namespace corefkit {

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradientCheckReport CheckGradients(const Document &doc,
                                   const ModelParams &params,
                                   const GradientCheckOptions &options) {
  if (options.coordinates < 1) {
    throw std::invalid_argument("need at least one coordinate");
  }
  const WindowInput in = PrepareWindow(doc, params.hp());
  ModelParams grads(params.hp());
  GradientCheckReport report;
  report.loss = ComputeLoss(in, params, &grads).total;
  if (!std::isfinite(report.loss)) {
    throw std::runtime_error("loss is not finite");
  }

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < grads.values().size(); ++i) {
    if (!options.nonzero_only || grads.values()[i] != 0) pool.push_back(i);
  }
  std::mt19937_64 rng = MakeRng({options.seed, 0x67726164ULL});
  const std::size_t n =
      std::min<std::size_t>(pool.size(), options.coordinates);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pick = k + UniformBelow(rng, pool.size() - k);
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(n);

  ModelParams probe = params;
  for (std::size_t coord : pool) {
    const double saved = probe.values()[coord];
    probe.values()[coord] = saved + options.step;
    const double plus = ComputeLoss(in, probe, nullptr).total;
    probe.values()[coord] = saved - options.step;
    const double minus = ComputeLoss(in, probe, nullptr).total;
    probe.values()[coord] = saved;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw std::runtime_error("loss is not finite");
    }
    const double numeric = (plus - minus) / (2 * options.step);
    const double analytic = grads.values()[coord];
    report.coords.push_back(coord);
    report.analytic.push_back(analytic);
    report.numeric.push_back(numeric);
    report.rel_error.push_back(RelativeError(analytic, numeric));
    report.max_rel_error = std::max(report.max_rel_error, report.rel_error.back());
  }
  return report;
}

}  // namespace corefkit
