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

#include <memory>
#include <random>
#include <string>

#include "benchmark/benchmark.h"
#include "ctxattack/attack.h"
#include "ctxattack/embedding.h"
#include "ctxattack/text.h"

namespace ctxattack {
namespace {

std::string review(std::size_t words) {
  static const char* kWords[] = {"the", "movie", "was", "great", "but", "plot",
                                 "dull", "and", "acting", "fine", "love", "it"};
  std::mt19937 rng(1);
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    text += kWords[rng() % 12];
    text += i % 9 == 8 ? ". " : " ";
  }
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = review(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tokenize)->Arg(30)->Arg(300)->Arg(3000);

EmbeddingStore random_store(std::size_t words, std::size_t dim) {
  std::mt19937 rng(2);
  std::normal_distribution<float> gauss;
  EmbeddingStore store(dim);
  std::vector<float> v(dim);
  for (std::size_t w = 0; w < words; ++w) {
    for (float& x : v) x = gauss(rng);
    store.insert("w" + std::to_string(w), v);
  }
  return store;
}

void BM_FilterCandidates(benchmark::State& state) {
  const EmbeddingStore store = random_store(1000, 300);
  std::vector<Candidate> cands;
  for (int i = 0; i < state.range(0); ++i) {
    cands.push_back({"w" + std::to_string(i + 1), 0.01, {}});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_candidates(store, "w0", cands, 0.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterCandidates)->Arg(50)->Arg(500);

void BM_ToyAttack(benchmark::State& state) {
  auto store = std::make_shared<EmbeddingStore>(random_store(200, 16));
  const ToyMaskedLM mlm = ToyMaskedLM::from_neighbours(*store, 20);
  const ToyEncoder encoder(store);
  ToyLinearClassifier::Weights pos, neg;
  for (int w = 0; w < 200; w += 2) pos["w" + std::to_string(w)] = 0.1 * (w % 7);
  for (int w = 1; w < 200; w += 2) neg["w" + std::to_string(w)] = 0.1 * (w % 5);
  const ToyLinearClassifier target({pos, neg});
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "w" + std::to_string(i * 7 % 200) + " ";
  const TaskInput input = TaskInput::classification(tokenize(text));
  AttackConfig cfg = AttackConfig::for_task(Task::kClassification);
  cfg.delta_embed = 0.2;
  cfg.lambda_sim = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(attack(input, AttackBackends{target, mlm, encoder, *store}, cfg));
  }
}
BENCHMARK(BM_ToyAttack)->Arg(20)->Arg(80);

}  // namespace
}  // namespace ctxattack

BENCHMARK_MAIN();
