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

#include "ctxattack/models.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ctxattack {

TaskInput TaskInput::classification(Document text) {
  TaskInput in;
  in.task_ = Task::kClassification;
  in.attacked_ = std::move(text);
  return in;
}

TaskInput TaskInput::entailment(std::string premise, Document hypothesis) {
  TaskInput in;
  in.task_ = Task::kEntailment;
  in.premise_ = std::move(premise);
  in.attacked_ = std::move(hypothesis);
  return in;
}

TaskInput TaskInput::with_attacked(Document doc) const {
  TaskInput in = *this;
  in.attacked_ = std::move(doc);
  return in;
}

ClassDistribution classify(const TargetModel& target, const TaskInput& input,
                           QueryLedger& ledger) {
  ++ledger.target_queries;
  return target.classify(input);
}

namespace {

bool acceptable_candidate(std::string_view word, std::string_view original) {
  if (word.empty() || word == original || word == kMaskToken) return false;
  if (word.starts_with("##")) return false;
  const Document parsed = tokenize(word);
  return parsed.size() == 1 && parsed[0].kind == TokenKind::kWord &&
         parsed[0].text == word && !parsed[0].is_stopword;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::vector<Candidate> fill_mask(const MaskedLM& mlm, const Document& original,
                                 const Document& masked, std::size_t i, int k,
                                 QueryLedger& ledger) {
  if (i >= masked.size() || masked[i].kind != TokenKind::kMask) {
    throw std::invalid_argument("fill_mask: no mask sentinel at index " +
                                std::to_string(i));
  }
  if (i >= original.size() || original[i].kind != TokenKind::kWord) {
    throw std::invalid_argument("fill_mask: original token is not a word");
  }
  if (k < 1) throw std::invalid_argument("fill_mask: k must be >= 1");
  ++ledger.mlm_queries;
  std::vector<Candidate> raw = mlm.predict(original, masked, k);

  const std::string& source_word = original[i].text;
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (Candidate& c : raw) {
    c.word = lowercase(c.word);
    if (!std::isfinite(c.mlm_prob)) continue;
    c.mlm_prob = std::clamp(c.mlm_prob, 0.0, 1.0);
    if (!acceptable_candidate(c.word, source_word)) continue;
    out.push_back(std::move(c));
  }
  // Highest probability first, so the dedup below keeps the best copy.
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.mlm_prob != b.mlm_prob) return a.mlm_prob > b.mlm_prob;
                     return a.word < b.word;
                   });
  std::erase_if(out, [&](const Candidate& c) {
    return !seen.insert(c.word).second;
  });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

double sentence_similarity(const SentenceEncoder& encoder, std::string_view a,
                           std::string_view b, QueryLedger& ledger) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("sentence_similarity: empty input");
  }
  ++ledger.encoder_queries;
  const double score = encoder.similarity(a, b);
  if (!std::isfinite(score)) throw BackendError("non-finite similarity score");
  return std::clamp(score, 0.0, 1.0);
}

int grammar_errors(const GrammarChecker& checker, std::string_view text) {
  const int count = checker.count_errors(text);
  if (count < 0) throw BackendError("negative grammar error count");
  return count;
}

// ---------------------------------------------------------------------------

ToyLinearClassifier::ToyLinearClassifier(std::vector<Weights> class_weights)
    : weights_(std::move(class_weights)) {
  if (weights_.size() < 2) {
    throw std::invalid_argument("a classifier needs at least two classes");
  }
}

ClassDistribution ToyLinearClassifier::classify(const TaskInput& input) const {
  std::vector<const Token*> tokens;
  Document premise;
  if (input.premise()) {
    premise = tokenize(*input.premise());
    for (const Token& t : premise.tokens) tokens.push_back(&t);
  }
  for (const Token& t : input.attacked().tokens) tokens.push_back(&t);

  std::vector<double> scores(weights_.size(), 0.0);
  for (std::size_t c = 0; c < weights_.size(); ++c) {
    for (const Token* t : tokens) {
      const auto it = weights_[c].find(t->text);
      if (it != weights_[c].end()) scores[c] += it->second;
    }
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (double& s : scores) s /= total;
  return ClassDistribution::from_probs(std::move(scores));
}

ToyLinearClassifier ToyLinearClassifier::sentiment_lexicon() {
  Weights negative = {{"bad", 1.5},      {"hate", 2.0},     {"awful", 2.0},
                      {"terrible", 2.0}, {"boring", 1.5},   {"dull", 1.2},
                      {"worst", 2.5},    {"poor", 1.2},     {"vile", 1.8},
                      {"tacky", 1.4},    {"mess", 1.0},     {"waste", 1.6},
                      {"stupid", 1.5},   {"ugly", 1.2},     {"weak", 1.0},
                      {"dislike", 1.5},  {"horrible", 2.0}, {"annoying", 1.3}};
  Weights positive = {{"good", 1.5},      {"love", 2.0},    {"great", 1.5},
                      {"excellent", 2.0}, {"best", 1.2},    {"wonderful", 2.0},
                      {"beautiful", 1.5}, {"grace", 1.0},   {"brilliant", 2.0},
                      {"enjoy", 1.3},     {"fun", 1.0},     {"moving", 1.0},
                      {"charming", 1.4},  {"adore", 1.8},   {"superb", 2.0},
                      {"like", 0.8},      {"fine", 0.6},    {"nice", 1.0}};
  return ToyLinearClassifier({std::move(negative), std::move(positive)});
}

ToyMaskedLM::ToyMaskedLM(Table table) : table_(std::move(table)) {}

ToyMaskedLM ToyMaskedLM::from_neighbours(const EmbeddingStore& store,
                                         std::size_t per_word) {
  const std::vector<std::string> vocab = store.words();
  Table table;
  for (const std::string& word : vocab) {
    const auto origin = *store.lookup(word);
    std::vector<std::pair<std::string, double>> scored;
    for (const std::string& other : vocab) {
      if (other == word) continue;
      try {
        const double sim = cosine(origin, *store.lookup(other)).value;
        if (sim > 0.0) scored.emplace_back(other, sim);
      } catch (const std::invalid_argument&) {
        // zero vector
      }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (scored.size() > per_word) scored.resize(per_word);
    double total = 0.0;
    for (const auto& entry : scored) total += entry.second;
    for (auto& entry : scored) entry.second /= total;
    if (!scored.empty()) table.emplace(word, std::move(scored));
  }
  return ToyMaskedLM(std::move(table));
}

std::vector<Candidate> ToyMaskedLM::predict(const Document& original,
                                            const Document& masked,
                                            int /*top_k*/) const {
  const auto it = std::find_if(
      masked.tokens.begin(), masked.tokens.end(),
      [](const Token& t) { return t.kind == TokenKind::kMask; });
  if (it == masked.tokens.end()) throw BackendError("no mask token in input");
  const auto index = static_cast<std::size_t>(it - masked.tokens.begin());
  if (index >= original.size()) throw BackendError("mask index past original");

  std::vector<Candidate> out;
  const auto entry = table_.find(original[index].text);
  if (entry == table_.end()) return out;
  for (const auto& [word, prob] : entry->second) {
    out.push_back(Candidate{word, prob, std::nullopt});
  }
  return out;
}

ToyEncoder::ToyEncoder(std::shared_ptr<const EmbeddingStore> store)
    : store_(std::move(store)) {
  if (!store_) throw std::invalid_argument("ToyEncoder needs a store");
}

double ToyEncoder::similarity(std::string_view a, std::string_view b) const {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty input");
  const Document da = tokenize(a);
  const Document db = tokenize(b);

  auto mean = [&](const Document& d) -> std::optional<std::vector<double>> {
    std::vector<double> sum(store_->dimension(), 0.0);
    std::size_t known = 0;
    for (const Token& t : d.tokens) {
      if (t.kind != TokenKind::kWord) continue;
      const auto v = store_->lookup(t.text);
      if (!v) continue;
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += (*v)[j];
      ++known;
    }
    if (known == 0) return std::nullopt;
    bool nonzero = false;
    for (double& x : sum) {
      x /= static_cast<double>(known);
      nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) return std::nullopt;
    return sum;
  };

  const auto ma = mean(da);
  const auto mb = mean(db);
  if (!ma || !mb) return da.tokens == db.tokens ? 1.0 : 0.0;

  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < ma->size(); ++j) {
    dot += (*ma)[j] * (*mb)[j];
    na += (*ma)[j] * (*ma)[j];
    nb += (*mb)[j] * (*mb)[j];
  }
  const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(cos, 0.0, 1.0);
}

}  // namespace ctxattack
