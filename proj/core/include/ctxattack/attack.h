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

#ifndef CTXATTACK_ATTACK_H_
#define CTXATTACK_ATTACK_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxattack/embedding.h"
#include "ctxattack/models.h"
#include "ctxattack/text.h"
#include "ctxattack/types.h"

namespace ctxattack {

struct AttackConfig {
  int k = 50;                 // MLM candidates per position
  double lambda_sim = 0.8;    // sentence-similarity gate
  double delta_embed = 0.7;   // word-embedding cosine filter
  std::size_t window = 30;    // context window, in tokens
  Task task = Task::kClassification;

  // Defaults for a task: lambda 0.8 for classification, 0.6 for entailment.
  static AttackConfig for_task(Task task);
  static double default_lambda(Task task);

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct RankedWord {
  std::size_t index = 0;
  // P(y | text) - P(y | text without token `index`).
  double importance = 0.0;

  bool operator==(const RankedWord&) const = default;
};

// Non-stopword word tokens: the positions the attack may touch.
std::vector<std::size_t> eligible_positions(const Document& doc);

// Deletion-based importance of every eligible position of input.attacked(),
// sorted by importance descending, ties by lower index. Makes 1 + #eligible
// target queries, or #eligible when `base` (the distribution of the
// unmodified input) is supplied. Throws std::invalid_argument when nothing
// is eligible.
std::vector<RankedWord> rank_words(const TaskInput& input,
                                   const TargetModel& target, int y,
                                   QueryLedger& ledger,
                                   const ClassDistribution* base = nullptr);

// mask -> context window -> fill_mask(k) -> embedding filter(delta).
std::vector<Candidate> generate_candidates(const Document& doc, std::size_t i,
                                           const MaskedLM& mlm,
                                           const EmbeddingStore& store,
                                           const AttackConfig& cfg,
                                           QueryLedger& ledger);

struct SelectionOutcome {
  enum class Kind { kNone, kFlipped, kBestPartial };

  Kind kind = Kind::kNone;
  std::optional<Document> doc;
  std::string word;
  // P(y | doc) of the chosen substitution.
  double confidence = 0.0;
  double similarity = 0.0;
  int predicted = -1;
  // Candidates that passed the similarity gate, in query order.
  std::vector<std::string> survivors;
};

struct SelectionContext {
  const TaskInput& input;           // template: premise and task
  const Document& original;         // unperturbed attacked document
  const TargetModel& target;
  const SentenceEncoder& encoder;
  const AttackConfig& cfg;
  int y = 0;                        // original prediction
};

// Tries each candidate at position i of `current` in order. A candidate is
// dropped when its sentence similarity to the original falls below lambda;
// otherwise it is classified. The first label flip wins and stops the scan.
// Without a flip, the surviving candidate with the lowest P(y) is returned
// as kBestPartial if that is strictly below `current_confidence`.
SelectionOutcome select_candidate(const SelectionContext& ctx,
                                  const Document& current, std::size_t i,
                                  std::span<const Candidate> candidates,
                                  double current_confidence,
                                  QueryLedger& ledger);

// Discrete record of every decision an attack took.
struct AttackTrace {
  enum class Step { kNoCandidates, kNone, kPartial, kFlipped };

  struct Position {
    std::size_t index = 0;
    std::vector<std::string> candidates;
    std::vector<std::string> survivors;
    Step step = Step::kNoCandidates;
    std::string chosen;
  };

  std::vector<std::size_t> ranking;
  std::vector<Position> positions;
  std::string status;

  // One line per item:
  //   rank: 2 0 1
  //   pos 2 cands=[a,b] surv=[a] -> partial a
  //   status: success
  std::string to_string() const;
};

enum class AttackStatus { kSuccess, kFailed, kSkippedMisclassified, kErrored };

std::string_view to_string(AttackStatus status);
AttackStatus parse_attack_status(std::string_view name);

struct AttackResult {
  AttackStatus status = AttackStatus::kFailed;
  std::optional<Document> adversarial;
  std::vector<std::size_t> perturbed_indices;  // in commit order
  std::optional<double> similarity;
  QueryLedger ledger;
  // Queries spent re-verifying a success; kept out of `ledger` so that it
  // holds exactly the search cost.
  QueryLedger verification;
  int pred_before = -1;
  std::optional<int> pred_after;
  std::string message;  // error text or verification warning
  AttackTrace trace;
};

struct AttackBackends {
  const TargetModel& target;
  const MaskedLM& mlm;
  const SentenceEncoder& encoder;
  const EmbeddingStore& store;
};

// Full attack on one example. When `gold` is given and the model already
// gets it wrong, the example is skipped after a single query. A success is
// re-verified (re-classified and re-scored) before it is reported; a
// success that fails verification is downgraded to kFailed. Backend errors
// yield kErrored.
AttackResult attack(const TaskInput& input, const AttackBackends& backends,
                    const AttackConfig& cfg, std::optional<int> gold = {});

}  // namespace ctxattack

#endif  // CTXATTACK_ATTACK_H_
