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

#include "testing/fixtures.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace ctxattack::testing {
namespace {

const std::vector<std::string>& content_words() {
  static const std::vector<std::string> kWords = {
      "love", "great", "movie", "film",  "plot",  "acting",
      "dull", "fun",   "story", "scene", "cast",  "music"};
  return kWords;
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> kWords = {"the", "a", "is", "this", "and"};
  return kWords;
}

struct Universe {
  std::vector<std::map<std::string, double>> weights;
  std::map<std::string, std::vector<std::pair<std::string, double>>> synonyms;
  std::map<std::string, std::vector<float>> vectors;
};

Universe make_universe(std::mt19937_64& rng, int max_candidates) {
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Universe u;
  u.weights.resize(2);
  for (auto& cls : u.weights) {
    for (const std::string& w : content_words()) {
      if (uniform(0, 1) == 0) cls[w] = 0.5 * uniform(1, 6);
    }
  }
  for (const std::string& w : content_words()) {
    if (uniform(0, 9) == 0) continue;  // out of vocabulary
    std::vector<float> v(4);
    do {
      for (float& x : v) x = static_cast<float>(uniform(-3, 3));
    } while (std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; }));
    u.vectors[w] = v;
  }
  for (const std::string& w : content_words()) {
    const int n = uniform(0, max_candidates);
    auto& entry = u.synonyms[w];
    for (int j = 0; j < n; ++j) {
      std::string cand;
      const int roll = uniform(0, 19);
      if (roll == 0) {
        cand = function_words()[static_cast<std::size_t>(uniform(0, 4))];
      } else if (roll == 1) {
        cand = w;
      } else {
        cand = content_words()[static_cast<std::size_t>(
            uniform(0, static_cast<int>(content_words().size()) - 1))];
      }
      entry.emplace_back(cand, 0.1 * uniform(1, 9));
    }
  }
  return u;
}

std::vector<double> reference_probs(const RandomInstance& inst,
                                    const std::vector<std::string>& words) {
  std::vector<double> scores(inst.weights.size(), 0.0);
  for (std::size_t c = 0; c < scores.size(); ++c) {
    for (const std::string& w : words) {
      const auto it = inst.weights[c].find(w);
      if (it != inst.weights[c].end()) scores[c] += it->second;
    }
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (double& s : scores) s /= total;
  return scores;
}

int argmax(const std::vector<double>& p) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(p.size()); ++c) {
    if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

double reference_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += a[j] * b[j];
    na += a[j] * a[j];
    nb += b[j] * b[j];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::optional<std::vector<double>> reference_mean(
    const RandomInstance& inst, const std::vector<std::string>& words) {
  std::vector<double> sum(4, 0.0);
  std::size_t known = 0;
  for (const std::string& w : words) {
    const auto it = inst.vectors.find(w);
    if (it == inst.vectors.end()) continue;
    for (std::size_t j = 0; j < 4; ++j) sum[j] += it->second[j];
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
}

double reference_similarity(const RandomInstance& inst,
                            const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  const auto ma = reference_mean(inst, a);
  const auto mb = reference_mean(inst, b);
  if (!ma || !mb) return a == b ? 1.0 : 0.0;
  return std::clamp(reference_cosine(*ma, *mb), 0.0, 1.0);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t j = 0; j < words.size(); ++j) {
    if (j > 0) out += ',';
    out += words[j];
  }
  return out;
}

}  // namespace

std::string RandomInstance::text() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

Document RandomInstance::doc() const { return tokenize(text()); }

TaskInput RandomInstance::input() const { return TaskInput::classification(doc()); }

ToyLinearClassifier RandomInstance::classifier() const {
  std::vector<ToyLinearClassifier::Weights> w;
  for (const auto& cls : weights) w.emplace_back(cls.begin(), cls.end());
  return ToyLinearClassifier(std::move(w));
}

ToyMaskedLM RandomInstance::masked_lm() const {
  ToyMaskedLM::Table table;
  for (const auto& [word, entries] : synonyms) table.emplace(word, entries);
  return ToyMaskedLM(std::move(table));
}

std::shared_ptr<const EmbeddingStore> RandomInstance::store() const {
  auto store = std::make_shared<EmbeddingStore>(4);
  for (const auto& [word, v] : vectors) store->insert(word, v);
  return store;
}

RandomInstance make_random_instance(std::uint64_t seed, int max_words,
                                    int max_candidates) {
  std::mt19937_64 rng(seed);
  RandomInstance inst;
  inst.seed = seed;
  Universe u = make_universe(rng, max_candidates);
  inst.weights = std::move(u.weights);
  inst.synonyms = std::move(u.synonyms);
  inst.vectors = std::move(u.vectors);

  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int n = uniform(1, max_words);
  for (int i = 0; i < n; ++i) {
    if (uniform(0, 4) == 0) {
      inst.words.push_back(function_words()[static_cast<std::size_t>(uniform(0, 4))]);
    } else {
      inst.words.push_back(content_words()[static_cast<std::size_t>(
          uniform(0, static_cast<int>(content_words().size()) - 1))]);
    }
  }
  inst.cfg = AttackConfig::for_task(Task::kClassification);
  inst.cfg.k = uniform(1, max_candidates + 1);
  inst.cfg.lambda_sim = 0.5;
  inst.cfg.delta_embed = 0.3;
  return inst;
}

std::vector<std::pair<std::size_t, double>> brute_force_importance(
    const RandomInstance& inst) {
  const std::vector<double> full = reference_probs(inst, inst.words);
  const int y = argmax(full);
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < inst.words.size(); ++i) {
    if (is_stopword(inst.words[i])) continue;
    std::vector<std::string> rest;
    for (std::size_t j = 0; j < inst.words.size(); ++j) {
      if (j != i) rest.push_back(inst.words[j]);
    }
    const std::vector<double> without = reference_probs(inst, rest);
    out.emplace_back(i, full[static_cast<std::size_t>(y)] -
                            without[static_cast<std::size_t>(y)]);
  }
  return out;
}

std::string reference_trace(const RandomInstance& inst) {
  std::ostringstream out;
  const std::vector<double> p0 = reference_probs(inst, inst.words);
  const int y = argmax(p0);

  auto ranked = brute_force_importance(inst);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out << "rank:";
  for (const auto& r : ranked) out << ' ' << r.first;
  out << '\n';

  std::vector<std::string> current = inst.words;
  double confidence = p0[static_cast<std::size_t>(y)];
  for (const auto& [i, importance] : ranked) {
    const std::string& word = current[i];

    // MLM output, cleaned and truncated to k.
    std::vector<std::pair<std::string, double>> raw;
    if (const auto it = inst.synonyms.find(word); it != inst.synonyms.end()) {
      raw = it->second;
    }
    std::vector<std::pair<std::string, double>> clean;
    for (const auto& c : raw) {
      if (c.first != word && !is_stopword(c.first)) clean.push_back(c);
    }
    std::stable_sort(clean.begin(), clean.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::vector<std::string> cands;
    std::set<std::string> seen;
    for (const auto& c : clean) {
      if (seen.insert(c.first).second) cands.push_back(c.first);
    }
    if (cands.size() > static_cast<std::size_t>(inst.cfg.k)) {
      cands.resize(static_cast<std::size_t>(inst.cfg.k));
    }

    // Embedding filter.
    if (const auto origin = inst.vectors.find(word); origin != inst.vectors.end()) {
      std::vector<std::string> kept;
      const std::vector<double> o(origin->second.begin(), origin->second.end());
      for (const std::string& c : cands) {
        const auto v = inst.vectors.find(c);
        if (v == inst.vectors.end()) continue;
        const std::vector<double> cv(v->second.begin(), v->second.end());
        if (reference_cosine(o, cv) >= inst.cfg.delta_embed) kept.push_back(c);
      }
      cands = std::move(kept);
    }

    out << "pos " << i << " cands=[" << join(cands) << "] surv=[";
    if (cands.empty()) {
      out << "] -> empty\n";
      continue;
    }
    std::vector<std::string> survivors;
    std::optional<std::pair<std::string, double>> best;
    std::vector<std::string> best_doc;
    bool flipped = false;
    std::string flip_word;
    for (const std::string& c : cands) {
      std::vector<std::string> perturbed = current;
      perturbed[i] = c;
      if (reference_similarity(inst, inst.words, perturbed) < inst.cfg.lambda_sim) {
        continue;
      }
      survivors.push_back(c);
      const std::vector<double> p = reference_probs(inst, perturbed);
      if (argmax(p) != y) {
        flipped = true;
        flip_word = c;
        break;
      }
      const double conf = p[static_cast<std::size_t>(y)];
      if (conf < (best ? best->second : confidence)) {
        best = std::make_pair(c, conf);
        best_doc = perturbed;
      }
    }
    out << join(survivors) << "] -> ";
    if (flipped) {
      out << "flip " << flip_word << '\n';
      out << "status: success\n";
      return out.str();
    }
    if (best) {
      out << "partial " << best->first << '\n';
      current = best_doc;
      confidence = best->second;
    } else {
      out << "none\n";
    }
  }
  out << "status: failed\n";
  return out.str();
}

InstanceBackends::InstanceBackends(const RandomInstance& inst)
    : target(inst.classifier()),
      mlm(inst.masked_lm()),
      store(inst.store()),
      encoder(store) {}

ToyLinearClassifier worked_example_classifier() {
  return ToyLinearClassifier(
      {{{"love", 2.0}, {"great", 1.5}}, {{"hate", 2.0}, {"bad", 1.5}}});
}

EmbeddingStore worked_example_store() {
  auto unit = [](double cos) {
    return std::vector<float>{static_cast<float>(cos),
                              static_cast<float>(std::sqrt(1.0 - cos * cos))};
  };
  EmbeddingStore store(2);
  store.insert("love", {1.0f, 0.0f});
  store.insert("adore", unit(0.82));
  store.insert("like", unit(0.75));
  store.insert("hate", unit(0.35));
  return store;
}

namespace {

constexpr std::uint64_t kSuiteUniverseSeed = 20201;

const Universe& suite_universe() {
  static const Universe kUniverse = [] {
    std::mt19937_64 rng(kSuiteUniverseSeed);
    return make_universe(rng, 4);
  }();
  return kUniverse;
}

}  // namespace

ToyLinearClassifier suite_classifier() {
  std::vector<ToyLinearClassifier::Weights> w;
  for (const auto& cls : suite_universe().weights) w.emplace_back(cls.begin(), cls.end());
  return ToyLinearClassifier(std::move(w));
}

ToyMaskedLM suite_masked_lm() {
  ToyMaskedLM::Table table;
  for (const auto& [word, entries] : suite_universe().synonyms) {
    table.emplace(word, entries);
  }
  return ToyMaskedLM(std::move(table));
}

std::shared_ptr<const EmbeddingStore> suite_store() {
  auto store = std::make_shared<EmbeddingStore>(4);
  for (const auto& [word, v] : suite_universe().vectors) store->insert(word, v);
  return store;
}

Dataset make_suite_dataset(std::size_t size, std::size_t skip_every,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const ToyLinearClassifier target = suite_classifier();
  Dataset ds;
  ds.task = Task::kClassification;
  ds.num_classes = 2;
  for (std::size_t id = 0; id < size; ++id) {
    std::string text;
    const int n = uniform(3, 8);
    for (int i = 0; i < n; ++i) {
      if (i > 0) text += ' ';
      text += uniform(0, 4) == 0
                  ? function_words()[static_cast<std::size_t>(uniform(0, 4))]
                  : content_words()[static_cast<std::size_t>(
                        uniform(0, static_cast<int>(content_words().size()) - 1))];
    }
    Example ex;
    ex.id = id;
    ex.input = TaskInput::classification(tokenize(text));
    const int predicted = target.classify(ex.input).predicted();
    const bool skip = skip_every > 0 && id % skip_every == skip_every - 1;
    ex.label = skip ? 1 - predicted : predicted;
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace ctxattack::testing
