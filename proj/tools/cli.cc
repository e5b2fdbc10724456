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

#include "cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ctxattack/attack.h"
#include "ctxattack/eval.h"
#include "ctxattack/http_backends.h"
#include "json.hpp"

namespace ctxattack::cli {
namespace {

using nlohmann::json;

// Neighbours per word when the toy MLM is derived from the embeddings.
constexpr std::size_t kToyNeighbours = 20;

json read_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read toy fixture " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument("toy fixture " + path + " is not a JSON object");
  }
  return j;
}

ServerUrl url_of(const Selector& sel) { return parse_server_url(sel.argument); }

// Flag errors carry the flag name, as in "--target: ...".
struct FlagError : std::invalid_argument {
  FlagError(std::string_view flag, const std::string& what)
      : std::invalid_argument(std::string(flag) + ": " + what) {}
};

template <typename Fn>
auto for_flag(std::string_view flag, Fn&& fn) {
  try {
    return fn();
  } catch (const FlagError&) {
    throw;
  } catch (const std::exception& e) {
    throw FlagError(flag, e.what());
  }
}

}  // namespace

Selector parse_selector(std::string_view flag, std::string_view value) {
  Selector sel;
  if (value == "toy") return sel;
  if (value == "null") {
    sel.kind = Selector::Kind::kNull;
    return sel;
  }
  if (value.starts_with("toy:")) {
    sel.argument = std::string(value.substr(4));
    if (sel.argument.empty()) throw FlagError(flag, "empty toy fixture path");
    return sel;
  }
  if (value == "http" || value.starts_with("http:")) {
    sel.kind = Selector::Kind::kHttp;
    if (value == "http") {
      const char* env = std::getenv("MODEL_SERVER_URL");
      if (env == nullptr || *env == '\0') {
        throw FlagError(flag, "'http' needs a URL (http:<url>) or MODEL_SERVER_URL");
      }
      sel.argument = env;
    } else {
      sel.argument = std::string(value.substr(5));
    }
    try {
      (void)parse_server_url(sel.argument);
    } catch (const std::invalid_argument& e) {
      throw FlagError(flag, e.what());
    }
    return sel;
  }
  throw FlagError(flag, "unknown backend '" + std::string(value) +
                            "' (expected toy, toy:<file>, http or http:<url>)");
}

std::unique_ptr<TargetModel> make_target(const Selector& sel, int num_classes) {
  switch (sel.kind) {
    case Selector::Kind::kHttp:
      return std::make_unique<HttpTargetModel>(url_of(sel), num_classes);
    case Selector::Kind::kNull:
      throw std::invalid_argument("the target model cannot be null");
    case Selector::Kind::kToy:
      break;
  }
  std::unique_ptr<ToyLinearClassifier> model;
  if (sel.argument.empty()) {
    model = std::make_unique<ToyLinearClassifier>(
        ToyLinearClassifier::sentiment_lexicon());
  } else {
    const json j = read_fixture(sel.argument);
    if (!j.contains("classes") || !j["classes"].is_array()) {
      throw std::invalid_argument("toy fixture has no \"classes\" list");
    }
    model = std::make_unique<ToyLinearClassifier>(
        j["classes"].get<std::vector<ToyLinearClassifier::Weights>>());
  }
  if (num_classes > 0 && model->num_classes() != num_classes) {
    throw std::invalid_argument(
        "toy classifier has " + std::to_string(model->num_classes()) +
        " classes, dataset expects " + std::to_string(num_classes));
  }
  return model;
}

std::unique_ptr<MaskedLM> make_mlm(const Selector& sel,
                                   const EmbeddingStore& store) {
  switch (sel.kind) {
    case Selector::Kind::kHttp:
      return std::make_unique<HttpMaskedLM>(url_of(sel));
    case Selector::Kind::kNull:
      throw std::invalid_argument("the masked LM cannot be null");
    case Selector::Kind::kToy:
      break;
  }
  if (sel.argument.empty()) {
    return std::make_unique<ToyMaskedLM>(
        ToyMaskedLM::from_neighbours(store, kToyNeighbours));
  }
  const json j = read_fixture(sel.argument);
  if (!j.contains("synonyms") || !j["synonyms"].is_object()) {
    throw std::invalid_argument("toy fixture has no \"synonyms\" object");
  }
  ToyMaskedLM::Table table;
  for (const auto& [word, entries] : j["synonyms"].items()) {
    table.emplace(word,
                  entries.get<std::vector<std::pair<std::string, double>>>());
  }
  return std::make_unique<ToyMaskedLM>(std::move(table));
}

std::unique_ptr<SentenceEncoder> make_encoder(
    const Selector& sel, std::shared_ptr<const EmbeddingStore> store) {
  switch (sel.kind) {
    case Selector::Kind::kHttp:
      return std::make_unique<HttpSentenceEncoder>(url_of(sel));
    case Selector::Kind::kNull:
      throw std::invalid_argument("the sentence encoder cannot be null");
    case Selector::Kind::kToy:
      break;
  }
  if (!sel.argument.empty()) {
    throw std::invalid_argument("the toy encoder takes no fixture; it uses --embeddings");
  }
  return std::make_unique<ToyEncoder>(std::move(store));
}

std::unique_ptr<GrammarChecker> make_grammar(const Selector& sel) {
  if (sel.kind == Selector::Kind::kHttp) {
    return std::make_unique<HttpGrammarChecker>(url_of(sel));
  }
  return std::make_unique<NullChecker>();
}

namespace {

struct AttackFlags {
  std::string dataset;
  std::string task = "classification";
  std::string target;
  std::string mlm;
  std::string encoder;
  std::string grammar = "null";
  std::string embeddings;
  int k = 50;
  double lambda = 0.0;
  double delta = 0.7;
  std::size_t window = 30;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  int num_classes = 0;
  std::string out;
};

struct RankFlags {
  std::string text;
  std::string premise;
  std::string task = "classification";
  std::string target;
  int num_classes = 0;
};

const CLI::IsMember& task_names() {
  static const CLI::IsMember kTasks({"classification", "entailment"});
  return kTasks;
}

int run_attack(const AttackFlags& f, bool lambda_given, std::ostream& out,
               std::ostream& err) {
  const Task task = parse_task(f.task);
  AttackConfig cfg = AttackConfig::for_task(task);
  cfg.k = f.k;
  if (lambda_given) cfg.lambda_sim = f.lambda;
  cfg.delta_embed = f.delta;
  cfg.window = f.window;
  for_flag("--lambda", [&] { cfg.validate(); });

  const Dataset ds = for_flag("--dataset", [&] {
    return load_dataset(f.dataset, task, f.num_classes);
  });
  auto store = for_flag("--embeddings", [&] {
    return std::make_shared<const EmbeddingStore>(load_embeddings(f.embeddings));
  });
  const Selector target_sel = parse_selector("--target", f.target);
  const Selector mlm_sel = parse_selector("--mlm", f.mlm);
  const Selector encoder_sel = parse_selector("--encoder", f.encoder);
  const Selector grammar_sel = parse_selector("--grammar", f.grammar);
  auto target = for_flag("--target", [&] { return make_target(target_sel, ds.num_classes); });
  auto mlm = for_flag("--mlm", [&] { return make_mlm(mlm_sel, *store); });
  auto encoder = for_flag("--encoder", [&] { return make_encoder(encoder_sel, store); });
  auto grammar = for_flag("--grammar", [&] { return make_grammar(grammar_sel); });

  Report report;
  try {
    report = run_suite(ds, SuiteBackends{*target, *mlm, *encoder, *store, *grammar},
                       cfg, f.workers);
  } catch (const BackendError& e) {
    err << "error: backend probe failed: " << e.what() << '\n';
    return kExitPartialFailure;
  }
  for_flag("--out", [&] { write_report(f.out, report); });
  out << format_table(report.summary);
  if (report.summary.errored > 0) {
    err << "warning: " << report.summary.errored
        << " example(s) failed with backend errors\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

int run_rank(const RankFlags& f, std::ostream& out) {
  const Task task = parse_task(f.task);
  if (task == Task::kEntailment && f.premise.empty()) {
    throw FlagError("--premise", "required for the entailment task");
  }
  const Selector sel = parse_selector("--target", f.target);
  auto target = for_flag("--target", [&] { return make_target(sel, f.num_classes); });
  const TaskInput input = task == Task::kClassification
                              ? TaskInput::classification(tokenize(f.text))
                              : TaskInput::entailment(f.premise, tokenize(f.text));
  QueryLedger ledger;
  const ClassDistribution base = classify(*target, input, ledger);
  const auto ranked = for_flag("--text", [&] {
    return rank_words(input, *target, base.predicted(), ledger, &base);
  });
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", base.prob(base.predicted()));
  out << "predicted " << base.predicted() << " p=" << buf << '\n';
  for (const RankedWord& r : ranked) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.importance);
    out << r.index << '\t' << input.attacked()[r.index].text << '\t' << buf << '\n';
  }
  out << "target queries: " << ledger.target_queries << '\n';
  return kExitOk;
}

int run_metrics(const std::string& path, bool table, std::ostream& out,
                std::ostream& err) {
  const Report report = for_flag("--report", [&] { return read_report(path); });
  const Metrics recomputed = compute_metrics(report.records);
  out << summary_json(recomputed) << '\n';
  if (table) out << format_table(recomputed);
  if (!(recomputed == report.summary)) {
    err << "warning: stored summary differs from the recomputed one\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Black-box word-substitution attacks on text classifiers", "ctxattack"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", "ctxattack 0.1.0");

  AttackFlags af;
  CLI::App* attack_cmd = app.add_subcommand("attack", "Attack every example of a dataset and write a report");
  attack_cmd->add_option("--dataset", af.dataset, "JSONL dataset")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--task", af.task, "classification or entailment")->capture_default_str()->check(task_names());
  attack_cmd->add_option("--target", af.target, "Target model: toy, toy:<file>, http, http:<url>")->required();
  attack_cmd->add_option("--mlm", af.mlm, "Masked LM: toy, toy:<file>, http, http:<url>")->required();
  attack_cmd->add_option("--encoder", af.encoder, "Sentence encoder: toy, http, http:<url>")->required();
  attack_cmd->add_option("--grammar", af.grammar, "Grammar checker: null, http, http:<url>")->capture_default_str();
  attack_cmd->add_option("--embeddings", af.embeddings, "Counter-fitted word vectors (text format)")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--k", af.k, "MLM candidates per word")->capture_default_str()->check(CLI::PositiveNumber);
  CLI::Option* lambda_opt = attack_cmd->add_option("--lambda", af.lambda, "Sentence similarity threshold")
      ->default_str("0.8 (classification) / 0.6 (entailment)")->check(CLI::Range(0.0, 1.0));
  attack_cmd->add_option("--delta", af.delta, "Word embedding cosine threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  attack_cmd->add_option("--window", af.window, "Context window in tokens")->capture_default_str()->check(CLI::PositiveNumber);
  attack_cmd->add_option("--workers", af.workers, "Parallel attacks")->capture_default_str()->check(CLI::PositiveNumber);
  attack_cmd->add_option("--seed", af.seed, "Seed for stochastic backends (toy backends ignore it)")->capture_default_str();
  attack_cmd->add_option("--num-classes", af.num_classes, "Class count; 0 infers it from the labels")->capture_default_str()->check(CLI::NonNegativeNumber);
  attack_cmd->add_option("--out", af.out, "Report path (JSONL)")->required();

  RankFlags rf;
  CLI::App* rank_cmd = app.add_subcommand("rank", "Print word importance scores for one input");
  rank_cmd->add_option("--text", rf.text, "Text (the hypothesis for entailment)")->required();
  rank_cmd->add_option("--premise", rf.premise, "Premise for entailment");
  rank_cmd->add_option("--task", rf.task, "classification or entailment")->capture_default_str()->check(task_names());
  rank_cmd->add_option("--target", rf.target, "Target model: toy, toy:<file>, http, http:<url>")->required();
  rank_cmd->add_option("--num-classes", rf.num_classes, "Expected class count; 0 skips the check")->capture_default_str()->check(CLI::NonNegativeNumber);

  std::string report_path;
  bool table = false;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "Recompute the summary of an existing report");
  metrics_cmd->add_option("--report", report_path, "Report path (JSONL)")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_flag("--table", table, "Also print the human-readable table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Errors inside a subcommand print that subcommand's usage.
    const auto parsed = app.get_subcommands();
    CLI::App* scope = parsed.empty() ? &app : parsed.front();
    const int code = scope->exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*attack_cmd) return run_attack(af, lambda_opt->count() > 0, out, err);
    if (*rank_cmd) return run_rank(rf, out);
    return run_metrics(report_path, table, out, err);
  } catch (const BackendError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPartialFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ctxattack::cli
