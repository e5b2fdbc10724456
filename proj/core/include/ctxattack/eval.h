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

#ifndef CTXATTACK_EVAL_H_
#define CTXATTACK_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxattack/attack.h"
#include "ctxattack/models.h"

namespace ctxattack {

struct Example {
  std::size_t id = 0;
  TaskInput input;
  int label = 0;
};

struct Dataset {
  Task task = Task::kClassification;
  int num_classes = 0;
  std::vector<Example> examples;
};

// Line-delimited JSON: {"text", "label"} for classification, {"premise",
// "hypothesis", "label"} for entailment. Ids are 0-based line numbers and
// blank lines are skipped. When num_classes is 0 it becomes max label + 1.
// Throws FormatError naming the line.
Dataset load_dataset(const std::filesystem::path& path, Task task,
                     int num_classes = 0);
Dataset parse_dataset(std::string_view contents, Task task, int num_classes = 0);

struct Record {
  std::size_t id = 0;
  AttackStatus status = AttackStatus::kFailed;
  std::optional<std::string> premise;
  std::string original;
  std::optional<std::string> adversarial;
  int gold = 0;
  int pred_before = -1;
  std::optional<int> pred_after;
  std::vector<std::size_t> perturbed_indices;
  std::size_t num_words = 0;
  std::optional<double> similarity;
  QueryLedger queries;
  std::optional<int> grammar_original;
  std::optional<int> grammar_adversarial;
  std::string message;

  bool operator==(const Record&) const = default;
};

// Percentages are in [0, 100]. Errored examples are excluded from every
// denominator and counted separately.
struct Metrics {
  std::size_t total = 0;
  std::size_t errored = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  double original_accuracy = 0.0;
  double after_attack_accuracy = 0.0;
  double avg_perturbation_rate = 0.0;
  double grammar_error_increase = 0.0;
  double avg_queries = 0.0;
  double avg_similarity = 0.0;
  // successes / attacked (not skipped), as a percentage.
  double success_rate = 0.0;

  bool operator==(const Metrics&) const = default;
};

// Accuracy before the attack is the share of non-skipped records and after
// the attack the share of failed ones. Perturbation rate and grammar
// increase are per-success values normalized by the word count and
// averaged over successes. avg_queries averages target queries over the
// attacked examples; avg_similarity averages over successes.
Metrics compute_metrics(const std::vector<Record>& records);

struct Report {
  std::vector<Record> records;
  Metrics summary;
};

struct SuiteBackends {
  const TargetModel& target;
  const MaskedLM& mlm;
  const SentenceEncoder& encoder;
  const EmbeddingStore& store;
  const GrammarChecker& grammar;
};

Record make_record(const Example& example, const AttackResult& result);

// Attacks every example once on up to `workers` threads. Records come back
// in dataset order. One probe query is sent first and a failing probe
// throws BackendError; later backend failures only mark their example as
// errored.
Report run_suite(const Dataset& ds, const SuiteBackends& backends,
                 const AttackConfig& cfg, std::size_t workers);

// One JSON object per record, then {"summary": {...}} on the last line.
void write_report(std::ostream& out, const Report& report);
void write_report(const std::filesystem::path& path, const Report& report);
Report read_report(std::istream& in);
Report read_report(const std::filesystem::path& path);

std::string summary_json(const Metrics& metrics);

// Human-readable table: Orig%, Acc%, Pert%, I% plus counts.
std::string format_table(const Metrics& metrics);

}  // namespace ctxattack

#endif  // CTXATTACK_EVAL_H_
