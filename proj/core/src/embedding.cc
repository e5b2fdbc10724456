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

#include "ctxattack/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ctxattack {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r') {
      ++end;
    }
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool parse_float(std::string_view s, float& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("embedding dimension is 0");
}

bool EmbeddingStore::insert(std::string word, std::vector<float> vector) {
  if (vector.size() != dimension_) {
    throw std::invalid_argument("vector for '" + word + "' has dimension " +
                                std::to_string(vector.size()) + ", expected " +
                                std::to_string(dimension_));
  }
  return vectors_.try_emplace(std::move(word), std::move(vector)).second;
}

std::optional<std::span<const float>> EmbeddingStore::lookup(
    std::string_view word) const {
  const auto it = vectors_.find(word);
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const float>(it->second);
}

std::vector<std::string> EmbeddingStore::words() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& entry : vectors_) out.push_back(entry.first);
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingStore parse_embeddings(std::string_view contents) {
  std::optional<EmbeddingStore> store;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    const std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) &&
        is_integer(fields[1])) {
      continue;  // "count dim" header
    }
    if (fields.size() < 2) continue;

    std::vector<float> values(fields.size() - 1);
    bool ok = true;
    for (std::size_t f = 1; f < fields.size() && ok; ++f) {
      ok = parse_float(fields[f], values[f - 1]);
    }
    if (!ok) continue;

    if (!store) store.emplace(values.size());
    if (values.size() != store->dimension()) {
      throw FormatError("embedding dimension mismatch on line " +
                        std::to_string(line_no) + ": got " +
                        std::to_string(values.size()) + ", expected " +
                        std::to_string(store->dimension()));
    }
    store->insert(lowercase(fields[0]), std::move(values));
  }
  if (!store) throw FormatError("no embeddings loaded");
  return std::move(*store);
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read embeddings file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str());
}

SimilarityScore cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine: dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine: zero-norm vector");
  }
  const double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return SimilarityScore{std::clamp(value, -1.0, 1.0)};
}

namespace {

bool is_zero(std::span<const float> v) {
  for (float x : v) {
    if (x != 0.0f) return false;
  }
  return true;
}

}  // namespace

std::vector<Candidate> filter_candidates(const EmbeddingStore& store,
                                         std::string_view original,
                                         std::span<const Candidate> candidates,
                                         double threshold) {
  const auto origin = store.lookup(original);
  if (!origin || is_zero(*origin)) {
    return {candidates.begin(), candidates.end()};
  }
  std::vector<Candidate> kept;
  for (const Candidate& c : candidates) {
    const auto vec = store.lookup(c.word);
    if (!vec || is_zero(*vec)) continue;
    const SimilarityScore sim = cosine(*origin, *vec);
    if (sim.value >= threshold) {
      Candidate out = c;
      out.embed_sim = sim;
      kept.push_back(std::move(out));
    }
  }
  return kept;
}

}  // namespace ctxattack
