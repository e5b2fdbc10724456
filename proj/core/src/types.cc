// Copyright 2026 The ctxattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctxattack/types.h"

#include <cmath>
#include <string>

namespace ctxattack {

std::string_view to_string(Task task) {
  return task == Task::kClassification ? "classification" : "entailment";
}

Task parse_task(std::string_view name) {
  if (name == "classification") return Task::kClassification;
  if (name == "entailment") return Task::kEntailment;
  throw std::invalid_argument("unknown task '" + std::string(name) +
                              "' (expected classification or entailment)");
}

ClassDistribution ClassDistribution::from_probs(std::vector<double> probs) {
  if (probs.empty()) throw BackendError("empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0 + 1e-6) {
      throw BackendError("probability out of range: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-3) {
    throw BackendError("probabilities sum to " + std::to_string(sum));
  }
  ClassDistribution dist;
  for (double& p : probs) p /= sum;
  std::size_t best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  dist.probs_ = std::move(probs);
  dist.predicted_ = static_cast<int>(best);
  return dist;
}

}  // namespace ctxattack
