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

#include "ctxattack/eval.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ctxattack {
namespace {

using json = nlohmann::ordered_json;

std::string line_error(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

std::string required_string(const json& obj, const char* name,
                            std::size_t line_no) {
  if (!obj.contains(name)) {
    throw FormatError(line_error(line_no, std::string("missing field \"") +
                                              name + "\""));
  }
  if (!obj[name].is_string()) {
    throw FormatError(line_error(line_no, std::string("field \"") + name +
                                              "\" is not a string"));
  }
  return obj[name].get<std::string>();
}

int required_label(const json& obj, std::size_t line_no) {
  if (!obj.contains("label")) {
    throw FormatError(line_error(line_no, "missing field \"label\""));
  }
  const json& label = obj["label"];
  if (!label.is_number_integer()) {
    throw FormatError(line_error(line_no, "label is not an integer"));
  }
  const auto value = label.get<long long>();
  if (value < 0 || value > 1'000'000) {
    throw FormatError(line_error(line_no, "label out of range"));
  }
  return static_cast<int>(value);
}

}  // namespace

Dataset parse_dataset(std::string_view contents, Task task, int num_classes) {
  Dataset ds;
  ds.task = task;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  int max_label = -1;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    const std::size_t id = line_no++;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw FormatError(line_error(id, "not a JSON object"));
    }
    Example ex;
    ex.id = id;
    ex.label = required_label(obj, id);
    if (task == Task::kClassification) {
      ex.input = TaskInput::classification(tokenize(required_string(obj, "text", id)));
    } else {
      std::string premise = required_string(obj, "premise", id);
      ex.input = TaskInput::entailment(
          std::move(premise), tokenize(required_string(obj, "hypothesis", id)));
    }
    max_label = std::max(max_label, ex.label);
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.empty()) throw FormatError("dataset is empty");
  if (num_classes > 0) {
    for (const Example& ex : ds.examples) {
      if (ex.label >= num_classes) {
        throw FormatError(line_error(ex.id, "label out of range"));
      }
    }
    ds.num_classes = num_classes;
  } else {
    ds.num_classes = max_label + 1;
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, Task task,
                     int num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), task, num_classes);
}

Metrics compute_metrics(const std::vector<Record>& records) {
  Metrics m;
  m.total = records.size();
  double pert_sum = 0.0, grammar_sum = 0.0, sim_sum = 0.0, query_sum = 0.0;
  for (const Record& r : records) {
    switch (r.status) {
      case AttackStatus::kErrored:
        ++m.errored;
        break;
      case AttackStatus::kSkippedMisclassified:
        ++m.skipped;
        break;
      case AttackStatus::kFailed:
        ++m.failed;
        query_sum += static_cast<double>(r.queries.target_queries);
        break;
      case AttackStatus::kSuccess: {
        ++m.succeeded;
        query_sum += static_cast<double>(r.queries.target_queries);
        const double words = static_cast<double>(r.num_words);
        if (words > 0) {
          pert_sum += 100.0 * static_cast<double>(r.perturbed_indices.size()) / words;
          grammar_sum += 100.0 *
                         (r.grammar_adversarial.value_or(0) -
                          r.grammar_original.value_or(0)) /
                         words;
        }
        sim_sum += r.similarity.value_or(0.0);
        break;
      }
    }
  }
  const std::size_t counted = m.total - m.errored;
  const std::size_t attacked = m.succeeded + m.failed;
  if (counted > 0) {
    const double n = static_cast<double>(counted);
    m.original_accuracy = 100.0 * static_cast<double>(counted - m.skipped) / n;
    m.after_attack_accuracy = 100.0 * static_cast<double>(m.failed) / n;
  }
  if (m.succeeded > 0) {
    const double s = static_cast<double>(m.succeeded);
    m.avg_perturbation_rate = pert_sum / s;
    m.grammar_error_increase = grammar_sum / s;
    m.avg_similarity = sim_sum / s;
  }
  if (attacked > 0) {
    m.avg_queries = query_sum / static_cast<double>(attacked);
    m.success_rate =
        100.0 * static_cast<double>(m.succeeded) / static_cast<double>(attacked);
  }
  return m;
}

Record make_record(const Example& example, const AttackResult& result) {
  Record r;
  r.id = example.id;
  r.status = result.status;
  r.premise = example.input.premise();
  r.original = example.input.attacked().source;
  if (result.adversarial) r.adversarial = detokenize(*result.adversarial);
  r.gold = example.label;
  r.pred_before = result.pred_before;
  r.pred_after = result.pred_after;
  r.perturbed_indices = result.perturbed_indices;
  r.num_words = example.input.attacked().word_count();
  r.similarity = result.similarity;
  r.queries = result.ledger;
  r.message = result.message;
  return r;
}

Report run_suite(const Dataset& ds, const SuiteBackends& backends,
                 const AttackConfig& cfg, std::size_t workers) {
  cfg.validate();
  if (ds.task != cfg.task) {
    throw std::invalid_argument("dataset task does not match the attack config");
  }
  if (!ds.examples.empty()) {
    // Health probe; deliberately outside every attack's ledger.
    (void)backends.target.classify(ds.examples.front().input);
  }

  const AttackBackends attack_backends{backends.target, backends.mlm,
                                       backends.encoder, backends.store};
  std::vector<Record> records(ds.examples.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < ds.examples.size(); i = next++) {
      const Example& ex = ds.examples[i];
      Record rec;
      try {
        const AttackResult result = attack(ex.input, attack_backends, cfg, ex.label);
        rec = make_record(ex, result);
        if (rec.status == AttackStatus::kSuccess) {
          rec.grammar_original =
              grammar_errors(backends.grammar, detokenize(ex.input.attacked()));
          rec.grammar_adversarial =
              grammar_errors(backends.grammar, *rec.adversarial);
        }
      } catch (const std::exception& e) {
        rec = Record{};
        rec.id = ex.id;
        rec.status = AttackStatus::kErrored;
        rec.premise = ex.input.premise();
        rec.original = ex.input.attacked().source;
        rec.gold = ex.label;
        rec.num_words = ex.input.attacked().word_count();
        rec.message = e.what();
      }
      records[i] = std::move(rec);
    }
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(workers, ds.examples.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  Report report;
  report.records = std::move(records);
  report.summary = compute_metrics(report.records);
  return report;
}

namespace {

json to_json(const Record& r) {
  json j;
  j["id"] = r.id;
  j["status"] = std::string(to_string(r.status));
  if (r.premise) j["premise"] = *r.premise;
  j["original"] = r.original;
  j["adversarial"] = r.adversarial ? json(*r.adversarial) : json(nullptr);
  j["gold"] = r.gold;
  j["pred_before"] = r.pred_before;
  j["pred_after"] = r.pred_after ? json(*r.pred_after) : json(nullptr);
  j["perturbed_indices"] = r.perturbed_indices;
  j["num_words"] = r.num_words;
  j["similarity"] = r.similarity ? json(*r.similarity) : json(nullptr);
  j["queries"] = {{"target", r.queries.target_queries},
                  {"mlm", r.queries.mlm_queries},
                  {"encoder", r.queries.encoder_queries}};
  j["grammar_original"] =
      r.grammar_original ? json(*r.grammar_original) : json(nullptr);
  j["grammar_adversarial"] =
      r.grammar_adversarial ? json(*r.grammar_adversarial) : json(nullptr);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json to_json(const Metrics& m) {
  return json{{"total", m.total},
              {"errored", m.errored},
              {"succeeded", m.succeeded},
              {"failed", m.failed},
              {"skipped", m.skipped},
              {"original_accuracy", m.original_accuracy},
              {"after_attack_accuracy", m.after_attack_accuracy},
              {"avg_perturbation_rate", m.avg_perturbation_rate},
              {"grammar_error_increase", m.grammar_error_increase},
              {"avg_queries", m.avg_queries},
              {"avg_similarity", m.avg_similarity},
              {"success_rate", m.success_rate}};
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* name) {
  if (!j.contains(name) || j[name].is_null()) return std::nullopt;
  return j[name].get<T>();
}

Record record_from_json(const json& j) {
  Record r;
  r.id = j.at("id").get<std::size_t>();
  r.status = parse_attack_status(j.at("status").get<std::string>());
  r.premise = optional_field<std::string>(j, "premise");
  r.original = j.at("original").get<std::string>();
  r.adversarial = optional_field<std::string>(j, "adversarial");
  r.gold = j.at("gold").get<int>();
  r.pred_before = j.at("pred_before").get<int>();
  r.pred_after = optional_field<int>(j, "pred_after");
  r.perturbed_indices = j.at("perturbed_indices").get<std::vector<std::size_t>>();
  r.num_words = j.at("num_words").get<std::size_t>();
  r.similarity = optional_field<double>(j, "similarity");
  const json& q = j.at("queries");
  r.queries.target_queries = q.at("target").get<std::uint64_t>();
  r.queries.mlm_queries = q.at("mlm").get<std::uint64_t>();
  r.queries.encoder_queries = q.at("encoder").get<std::uint64_t>();
  r.grammar_original = optional_field<int>(j, "grammar_original");
  r.grammar_adversarial = optional_field<int>(j, "grammar_adversarial");
  r.message = j.value("message", std::string());
  return r;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.total = j.at("total").get<std::size_t>();
  m.errored = j.at("errored").get<std::size_t>();
  m.succeeded = j.at("succeeded").get<std::size_t>();
  m.failed = j.at("failed").get<std::size_t>();
  m.skipped = j.at("skipped").get<std::size_t>();
  m.original_accuracy = j.at("original_accuracy").get<double>();
  m.after_attack_accuracy = j.at("after_attack_accuracy").get<double>();
  m.avg_perturbation_rate = j.at("avg_perturbation_rate").get<double>();
  m.grammar_error_increase = j.at("grammar_error_increase").get<double>();
  m.avg_queries = j.at("avg_queries").get<double>();
  m.avg_similarity = j.at("avg_similarity").get<double>();
  m.success_rate = j.at("success_rate").get<double>();
  return m;
}

}  // namespace

std::string summary_json(const Metrics& metrics) {
  return json{{"summary", to_json(metrics)}}.dump();
}

void write_report(std::ostream& out, const Report& report) {
  for (const Record& r : report.records) out << to_json(r).dump() << '\n';
  out << summary_json(report.summary) << '\n';
}

void write_report(const std::filesystem::path& path, const Report& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report " + path.string());
  write_report(out, report);
  if (!out) throw std::runtime_error("error writing report " + path.string());
}

Report read_report(std::istream& in) {
  Report report;
  std::optional<Metrics> summary;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    const std::size_t id = line_no++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (summary) throw FormatError(line_error(id, "content after summary line"));
    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw FormatError(line_error(id, "not a JSON object"));
    }
    try {
      if (j.contains("summary")) {
        summary = metrics_from_json(j["summary"]);
      } else {
        report.records.push_back(record_from_json(j));
      }
    } catch (const std::exception& e) {
      throw FormatError(line_error(id, e.what()));
    }
  }
  if (!summary) throw FormatError("report has no summary line");
  report.summary = *summary;
  return report;
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read report " + path.string());
  return read_report(in);
}

std::string format_table(const Metrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%8s %8s %8s %8s %10s %8s\n"
                "%8.1f %8.1f %8.2f %8.2f %10.1f %8.3f\n"
                "examples: %zu  success: %zu  failed: %zu  skipped: %zu  "
                "errored: %zu\n",
                "Orig%", "Acc%", "Pert%", "I%", "Queries", "Sim",
                m.original_accuracy, m.after_attack_accuracy,
                m.avg_perturbation_rate, m.grammar_error_increase,
                m.avg_queries, m.avg_similarity, m.total, m.succeeded,
                m.failed, m.skipped, m.errored);
  return buf;
}

}  // namespace ctxattack
