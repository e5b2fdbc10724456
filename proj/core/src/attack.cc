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

#include "ctxattack/attack.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ctxattack {

AttackConfig AttackConfig::for_task(Task task) {
  AttackConfig cfg;
  cfg.task = task;
  cfg.lambda_sim = default_lambda(task);
  return cfg;
}

double AttackConfig::default_lambda(Task task) {
  return task == Task::kClassification ? 0.8 : 0.6;
}

void AttackConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(lambda_sim >= 0.0 && lambda_sim <= 1.0)) {
    throw std::invalid_argument("lambda must be in [0, 1]");
  }
  if (!(delta_embed >= 0.0 && delta_embed <= 1.0)) {
    throw std::invalid_argument("delta must be in [0, 1]");
  }
  if (window < 1) throw std::invalid_argument("window must be >= 1");
}

std::vector<std::size_t> eligible_positions(const Document& doc) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (doc[i].kind == TokenKind::kWord && !doc[i].is_stopword) out.push_back(i);
  }
  return out;
}

std::vector<RankedWord> rank_words(const TaskInput& input,
                                   const TargetModel& target, int y,
                                   QueryLedger& ledger,
                                   const ClassDistribution* base) {
  const Document& doc = input.attacked();
  const std::vector<std::size_t> eligible = eligible_positions(doc);
  if (eligible.empty()) {
    throw std::invalid_argument("rank_words: no eligible word positions");
  }
  const double p_full =
      base ? base->prob(y) : classify(target, input, ledger).prob(y);

  std::vector<RankedWord> ranked;
  ranked.reserve(eligible.size());
  for (std::size_t i : eligible) {
    const ClassDistribution without =
        classify(target, input.with_attacked(delete_token(doc, i)), ledger);
    ranked.push_back(RankedWord{i, p_full - without.prob(y)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedWord& a, const RankedWord& b) {
                     return a.importance > b.importance;
                   });
  return ranked;
}

std::vector<Candidate> generate_candidates(const Document& doc, std::size_t i,
                                           const MaskedLM& mlm,
                                           const EmbeddingStore& store,
                                           const AttackConfig& cfg,
                                           QueryLedger& ledger) {
  const Document masked = mask_word(doc, i);
  const WindowedPair pair = context_window(doc, masked, i, cfg.window);
  const std::vector<Candidate> predicted =
      fill_mask(mlm, pair.original, pair.masked, pair.mask_index, cfg.k, ledger);
  return filter_candidates(store, doc[i].text, predicted, cfg.delta_embed);
}

SelectionOutcome select_candidate(const SelectionContext& ctx,
                                  const Document& current, std::size_t i,
                                  std::span<const Candidate> candidates,
                                  double current_confidence,
                                  QueryLedger& ledger) {
  SelectionOutcome best;
  const std::string original_text = detokenize(ctx.original);
  for (const Candidate& cand : candidates) {
    Document perturbed = substitute(current, i, cand.word);
    const double sim = sentence_similarity(ctx.encoder, original_text,
                                           detokenize(perturbed), ledger);
    if (sim < ctx.cfg.lambda_sim) continue;
    best.survivors.push_back(cand.word);

    const ClassDistribution dist =
        classify(ctx.target, ctx.input.with_attacked(perturbed), ledger);
    const double confidence = dist.prob(ctx.y);
    if (dist.predicted() != ctx.y) {
      best.kind = SelectionOutcome::Kind::kFlipped;
      best.doc = std::move(perturbed);
      best.word = cand.word;
      best.confidence = confidence;
      best.similarity = sim;
      best.predicted = dist.predicted();
      return best;
    }
    const bool improves = best.doc ? confidence < best.confidence
                                   : confidence < current_confidence;
    if (improves) {
      best.kind = SelectionOutcome::Kind::kBestPartial;
      best.doc = std::move(perturbed);
      best.word = cand.word;
      best.confidence = confidence;
      best.similarity = sim;
      best.predicted = dist.predicted();
    }
  }
  return best;
}

namespace {

void join(std::ostringstream& out, const std::vector<std::string>& words) {
  for (std::size_t j = 0; j < words.size(); ++j) {
    if (j > 0) out << ',';
    out << words[j];
  }
}

}  // namespace

std::string AttackTrace::to_string() const {
  std::ostringstream out;
  out << "rank:";
  for (std::size_t i : ranking) out << ' ' << i;
  out << '\n';
  for (const Position& p : positions) {
    out << "pos " << p.index << " cands=[";
    join(out, p.candidates);
    out << "] surv=[";
    join(out, p.survivors);
    out << "] -> ";
    switch (p.step) {
      case Step::kNoCandidates: out << "empty"; break;
      case Step::kNone: out << "none"; break;
      case Step::kPartial: out << "partial " << p.chosen; break;
      case Step::kFlipped: out << "flip " << p.chosen; break;
    }
    out << '\n';
  }
  out << "status: " << status << '\n';
  return out.str();
}

std::string_view to_string(AttackStatus status) {
  switch (status) {
    case AttackStatus::kSuccess: return "success";
    case AttackStatus::kFailed: return "failed";
    case AttackStatus::kSkippedMisclassified: return "skipped-misclassified";
    case AttackStatus::kErrored: return "errored";
  }
  return "unknown";
}

AttackStatus parse_attack_status(std::string_view name) {
  for (AttackStatus s : {AttackStatus::kSuccess, AttackStatus::kFailed,
                         AttackStatus::kSkippedMisclassified,
                         AttackStatus::kErrored}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown attack status '" + std::string(name) + "'");
}

namespace {

void run_attack(const TaskInput& input, const AttackBackends& backends,
                const AttackConfig& cfg, std::optional<int> gold,
                AttackResult& result) {
  const Document& original = input.attacked();
  const ClassDistribution base = classify(backends.target, input, result.ledger);
  const int y = base.predicted();
  result.pred_before = y;
  if (gold && *gold != y) {
    result.status = AttackStatus::kSkippedMisclassified;
    return;
  }

  result.status = AttackStatus::kFailed;
  if (eligible_positions(original).empty()) return;

  const std::vector<RankedWord> ranked =
      rank_words(input, backends.target, y, result.ledger, &base);
  for (const RankedWord& r : ranked) result.trace.ranking.push_back(r.index);

  const SelectionContext ctx{input, original, backends.target, backends.encoder,
                             cfg, y};
  Document current = original;
  double confidence = base.prob(y);

  for (const RankedWord& r : ranked) {
    AttackTrace::Position& pos = result.trace.positions.emplace_back();
    pos.index = r.index;
    const std::vector<Candidate> cands = generate_candidates(
        current, r.index, backends.mlm, backends.store, cfg, result.ledger);
    for (const Candidate& c : cands) pos.candidates.push_back(c.word);
    if (cands.empty()) continue;

    SelectionOutcome outcome =
        select_candidate(ctx, current, r.index, cands, confidence, result.ledger);
    pos.survivors = std::move(outcome.survivors);
    switch (outcome.kind) {
      case SelectionOutcome::Kind::kNone:
        pos.step = AttackTrace::Step::kNone;
        break;
      case SelectionOutcome::Kind::kBestPartial:
        pos.step = AttackTrace::Step::kPartial;
        pos.chosen = outcome.word;
        current = std::move(*outcome.doc);
        confidence = outcome.confidence;
        result.perturbed_indices.push_back(r.index);
        break;
      case SelectionOutcome::Kind::kFlipped:
        pos.step = AttackTrace::Step::kFlipped;
        pos.chosen = outcome.word;
        result.perturbed_indices.push_back(r.index);
        result.status = AttackStatus::kSuccess;
        result.adversarial = std::move(*outcome.doc);
        result.similarity = outcome.similarity;
        result.pred_after = outcome.predicted;
        return;
    }
  }
}

// Re-classifies and re-scores a success instead of trusting the loop.
void verify_success(const TaskInput& input, const AttackBackends& backends,
                    const AttackConfig& cfg, AttackResult& result) {
  const ClassDistribution again = classify(
      backends.target, input.with_attacked(*result.adversarial),
      result.verification);
  const double sim = sentence_similarity(
      backends.encoder, detokenize(input.attacked()),
      detokenize(*result.adversarial), result.verification);
  if (again.predicted() != result.pred_before && sim >= cfg.lambda_sim) return;
  result.status = AttackStatus::kFailed;
  result.message = "verification failed: re-classified as " +
                   std::to_string(again.predicted()) + ", similarity " +
                   std::to_string(sim);
  result.adversarial.reset();
  result.similarity.reset();
  result.pred_after.reset();
}

}  // namespace

AttackResult attack(const TaskInput& input, const AttackBackends& backends,
                    const AttackConfig& cfg, std::optional<int> gold) {
  cfg.validate();
  if (input.task() != cfg.task) {
    throw std::invalid_argument("input task does not match the attack config");
  }
  AttackResult result;
  try {
    run_attack(input, backends, cfg, gold, result);
    if (result.status == AttackStatus::kSuccess) {
      verify_success(input, backends, cfg, result);
    }
  } catch (const BackendError& e) {
    result.status = AttackStatus::kErrored;
    result.message = e.what();
    result.adversarial.reset();
    result.similarity.reset();
    result.pred_after.reset();
  }
  result.trace.status = std::string(to_string(result.status));
  return result;
}

}  // namespace ctxattack
