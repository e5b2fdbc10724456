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

#ifndef CTXATTACK_TYPES_H_
#define CTXATTACK_TYPES_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxattack {

enum class Task { kClassification, kEntailment };

std::string_view to_string(Task task);
// Accepts "classification" and "entailment"; throws std::invalid_argument.
Task parse_task(std::string_view name);

// Malformed input files (embeddings, datasets, reports).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model backend failed: unreachable, bad status or malformed response.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cosine similarity, in [-1, 1].
struct SimilarityScore {
  double value = 0.0;

  bool operator==(const SimilarityScore&) const = default;
};

struct Candidate {
  std::string word;
  double mlm_prob = 0.0;
  std::optional<SimilarityScore> embed_sim;

  bool operator==(const Candidate&) const = default;
};

// Output of one target-model query.
class ClassDistribution {
 public:
  // Validates the vector (finite, non-negative, sums to 1 within 1e-3) and
  // renormalizes it so the sum is 1 within 1e-6. Throws BackendError.
  static ClassDistribution from_probs(std::vector<double> probs);

  const std::vector<double>& probs() const { return probs_; }
  // Argmax; the lowest index wins ties.
  int predicted() const { return predicted_; }
  double prob(int cls) const { return probs_.at(static_cast<std::size_t>(cls)); }
  int num_classes() const { return static_cast<int>(probs_.size()); }

 private:
  std::vector<double> probs_;
  int predicted_ = 0;
};

// Number of backend invocations made on behalf of one attack.
struct QueryLedger {
  std::uint64_t target_queries = 0;
  std::uint64_t mlm_queries = 0;
  std::uint64_t encoder_queries = 0;

  bool operator==(const QueryLedger&) const = default;
};

}  // namespace ctxattack

#endif  // CTXATTACK_TYPES_H_
