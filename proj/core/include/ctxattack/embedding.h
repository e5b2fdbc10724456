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

#ifndef CTXATTACK_EMBEDDING_H_
#define CTXATTACK_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxattack/types.h"

namespace ctxattack {

// Read-only word-vector table (counter-fitted vectors in practice).
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension);

  // Returns false (and keeps the existing vector) for a word already
  // present. Throws std::invalid_argument on a dimension mismatch.
  bool insert(std::string word, std::vector<float> vector);

  std::optional<std::span<const float>> lookup(std::string_view word) const;
  bool contains(std::string_view word) const { return lookup(word).has_value(); }

  // Vocabulary in lexicographic order.
  std::vector<std::string> words() const;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<float>, Hash, std::equal_to<>>
      vectors_;
};

// Parses "word v1 ... vd" lines. An optional "count dim" header is skipped,
// duplicate words keep their first vector and words are lowercased. Throws
// FormatError on an unreadable file, a dimension mismatch (with the line
// number) or when nothing could be loaded.
EmbeddingStore load_embeddings(const std::filesystem::path& path);
EmbeddingStore parse_embeddings(std::string_view contents);

// Throws std::invalid_argument on a dimension mismatch or a zero vector.
SimilarityScore cosine(std::span<const float> a, std::span<const float> b);

// Keeps candidates whose vector has cosine >= threshold with the original
// word, filling in Candidate::embed_sim. Candidates missing from the store
// are dropped. When the original word itself is missing, the input is
// returned unchanged.
std::vector<Candidate> filter_candidates(const EmbeddingStore& store,
                                         std::string_view original,
                                         std::span<const Candidate> candidates,
                                         double threshold);

}  // namespace ctxattack

#endif  // CTXATTACK_EMBEDDING_H_
