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

#ifndef CTXATTACK_TESTS_TESTING_FIXTURES_H_
#define CTXATTACK_TESTS_TESTING_FIXTURES_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ctxattack/attack.h"
#include "ctxattack/embedding.h"
#include "ctxattack/eval.h"
#include "ctxattack/models.h"

namespace ctxattack::testing {

// A small randomized attack problem, described by plain tables so that the
// reference implementation can work from the raw numbers.
struct RandomInstance {
  std::uint64_t seed = 0;
  std::vector<std::string> words;  // the document, one word per token
  std::vector<std::map<std::string, double>> weights;  // per class
  std::map<std::string, std::vector<std::pair<std::string, double>>> synonyms;
  std::map<std::string, std::vector<float>> vectors;
  AttackConfig cfg;

  std::string text() const;
  Document doc() const;
  TaskInput input() const;

  ToyLinearClassifier classifier() const;
  ToyMaskedLM masked_lm() const;
  std::shared_ptr<const EmbeddingStore> store() const;
};

// Up to `max_words` tokens and `max_candidates` synonyms per word. Weights,
// probabilities and vector components are drawn from coarse grids so that
// every score sum is exact and ties actually occur.
RandomInstance make_random_instance(std::uint64_t seed, int max_words = 8,
                                    int max_candidates = 4);

// Straightforward re-implementation of the attack working only from the
// instance tables. Returns the trace in AttackTrace::to_string() format.
std::string reference_trace(const RandomInstance& inst);

// Brute-force deletion importance for every eligible position, in index
// order: P(y|X) - P(y|X without token i).
std::vector<std::pair<std::size_t, double>> brute_force_importance(
    const RandomInstance& inst);

// The four toy backends of one instance, bundled.
struct InstanceBackends {
  explicit InstanceBackends(const RandomInstance& inst);

  ToyLinearClassifier target;
  ToyMaskedLM mlm;
  std::shared_ptr<const EmbeddingStore> store;
  ToyEncoder encoder;

  AttackBackends view() const { return {target, mlm, encoder, *store}; }
};

// Pass-through wrappers counting every backend invocation.
class CountingTarget : public TargetModel {
 public:
  explicit CountingTarget(const TargetModel& inner) : inner_(inner) {}
  ClassDistribution classify(const TaskInput& input) const override {
    ++calls;
    return inner_.classify(input);
  }
  mutable std::atomic<std::uint64_t> calls{0};

 private:
  const TargetModel& inner_;
};

class CountingMaskedLM : public MaskedLM {
 public:
  explicit CountingMaskedLM(const MaskedLM& inner) : inner_(inner) {}
  std::vector<Candidate> predict(const Document& original,
                                 const Document& masked,
                                 int top_k) const override {
    ++calls;
    return inner_.predict(original, masked, top_k);
  }
  mutable std::atomic<std::uint64_t> calls{0};

 private:
  const MaskedLM& inner_;
};

class CountingEncoder : public SentenceEncoder {
 public:
  explicit CountingEncoder(const SentenceEncoder& inner) : inner_(inner) {}
  double similarity(std::string_view a, std::string_view b) const override {
    ++calls;
    return inner_.similarity(a, b);
  }
  mutable std::atomic<std::uint64_t> calls{0};

 private:
  const SentenceEncoder& inner_;
};

// Target whose first `healthy_calls` invocations succeed and every later
// one throws BackendError.
class FlakyTarget : public TargetModel {
 public:
  FlakyTarget(const TargetModel& inner, std::uint64_t healthy_calls)
      : inner_(inner), healthy_(healthy_calls) {}
  ClassDistribution classify(const TaskInput& input) const override {
    if (calls++ >= healthy_) throw BackendError("injected failure");
    return inner_.classify(input);
  }
  mutable std::atomic<std::uint64_t> calls{0};

 private:
  const TargetModel& inner_;
  std::uint64_t healthy_;
};

// The fixtures from the worked examples: weights pos {love 2, great 1.5},
// neg {hate 2, bad 1.5}; class 0 = pos, class 1 = neg.
ToyLinearClassifier worked_example_classifier();

// 2-d vectors with cos(love, adore) = 0.82, cos(love, like) = 0.75 and
// cos(love, hate) = 0.35.
EmbeddingStore worked_example_store();

// A deterministic classification dataset of `size` examples over the
// random-instance vocabulary. Every `skip_every`-th label disagrees with
// the classifier returned by suite_classifier().
Dataset make_suite_dataset(std::size_t size, std::size_t skip_every,
                           std::uint64_t seed);
ToyLinearClassifier suite_classifier();
ToyMaskedLM suite_masked_lm();
std::shared_ptr<const EmbeddingStore> suite_store();

}  // namespace ctxattack::testing

#endif  // CTXATTACK_TESTS_TESTING_FIXTURES_H_
