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

#ifndef CTXATTACK_MODELS_H_
#define CTXATTACK_MODELS_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxattack/embedding.h"
#include "ctxattack/text.h"
#include "ctxattack/types.h"

namespace ctxattack {

// What the target model sees. For entailment only the hypothesis is ever
// perturbed; the premise stays raw text.
class TaskInput {
 public:
  // An empty classification input.
  TaskInput() = default;

  static TaskInput classification(Document text);
  static TaskInput entailment(std::string premise, Document hypothesis);

  Task task() const { return task_; }
  // The document under attack: the text, or the hypothesis.
  const Document& attacked() const { return attacked_; }
  // Empty for classification.
  const std::optional<std::string>& premise() const { return premise_; }

  // Same task and premise, different attacked document.
  TaskInput with_attacked(Document doc) const;

 private:
  Task task_ = Task::kClassification;
  std::optional<std::string> premise_;
  Document attacked_;
};

// Backend contracts. Implementations must be safe to call concurrently from
// several attacks.

class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual ClassDistribution classify(const TaskInput& input) const = 0;
};

class MaskedLM {
 public:
  virtual ~MaskedLM() = default;
  // Raw predictions for the mask position of `masked`, queried with the
  // (original, masked) sentence pair. May contain junk; fill_mask() cleans
  // it.
  virtual std::vector<Candidate> predict(const Document& original,
                                         const Document& masked,
                                         int top_k) const = 0;
};

class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;
  virtual double similarity(std::string_view a, std::string_view b) const = 0;
};

class GrammarChecker {
 public:
  virtual ~GrammarChecker() = default;
  virtual int count_errors(std::string_view text) const = 0;
};

// Metered entry points. Each call adds one query to `ledger`.

ClassDistribution classify(const TargetModel& target, const TaskInput& input,
                           QueryLedger& ledger);

// At most k candidates sorted by mlm_prob descending (ties by word). The
// original word, the mask string, stopwords, punctuation, subword pieces
// ("##x") and duplicates are removed. `i` indexes the mask in `masked`.
std::vector<Candidate> fill_mask(const MaskedLM& mlm, const Document& original,
                                 const Document& masked, std::size_t i, int k,
                                 QueryLedger& ledger);

// Result clamped to [0, 1]. Throws std::invalid_argument on empty input.
double sentence_similarity(const SentenceEncoder& encoder, std::string_view a,
                           std::string_view b, QueryLedger& ledger);

int grammar_errors(const GrammarChecker& checker, std::string_view text);

// ---------------------------------------------------------------------------
// Deterministic offline backends.

// Bag-of-words linear model: the score of class c is the sum of
// weights[c][token] over all tokens (premise first for entailment),
// followed by a softmax.
class ToyLinearClassifier : public TargetModel {
 public:
  using Weights = std::unordered_map<std::string, double>;

  explicit ToyLinearClassifier(std::vector<Weights> class_weights);

  ClassDistribution classify(const TaskInput& input) const override;
  int num_classes() const { return static_cast<int>(weights_.size()); }

  // Small built-in sentiment lexicon, class 0 = negative, 1 = positive.
  static ToyLinearClassifier sentiment_lexicon();

 private:
  std::vector<Weights> weights_;
};

// Looks up the original word at the mask position in a synonym table.
class ToyMaskedLM : public MaskedLM {
 public:
  using Table = std::map<std::string, std::vector<std::pair<std::string, double>>,
                         std::less<>>;

  explicit ToyMaskedLM(Table table);

  // Table built from the nearest neighbours of every vocabulary word in an
  // embedding store (cosine > 0), with probabilities proportional to the
  // cosine. Quadratic in the vocabulary size.
  static ToyMaskedLM from_neighbours(const EmbeddingStore& store,
                                     std::size_t per_word);

  std::vector<Candidate> predict(const Document& original,
                                 const Document& masked,
                                 int top_k) const override;

 private:
  Table table_;
};

// Cosine of the mean word vectors of both texts, clamped to [0, 1]. Texts
// without any known word score 1 when their token sequences are equal and
// 0 otherwise.
class ToyEncoder : public SentenceEncoder {
 public:
  explicit ToyEncoder(std::shared_ptr<const EmbeddingStore> store);

  double similarity(std::string_view a, std::string_view b) const override;

 private:
  std::shared_ptr<const EmbeddingStore> store_;
};

class NullChecker : public GrammarChecker {
 public:
  int count_errors(std::string_view) const override { return 0; }
};

}  // namespace ctxattack

#endif  // CTXATTACK_MODELS_H_
