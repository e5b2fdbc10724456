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

#ifndef CTXATTACK_TEXT_H_
#define CTXATTACK_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ctxattack {

// Literal used for the mask position, both in memory and on the wire.
inline constexpr std::string_view kMaskToken = "[MASK]";

enum class TokenKind { kWord, kPunctuation, kMask };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kWord;
  bool is_stopword = false;

  bool operator==(const Token&) const = default;
};

// A tokenized text. Immutable by convention: every operation below returns
// a fresh copy.
struct Document {
  std::vector<Token> tokens;
  // Raw text the document was tokenized from. Masking and substitution
  // keep it unchanged.
  std::string source;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }

  // Number of kWord tokens (stopwords included).
  std::size_t word_count() const;

  bool operator==(const Document&) const = default;
};

bool is_stopword(std::string_view lowercase_word);

// Lowercases ASCII, splits on whitespace and splits punctuation into
// separate tokens. An apostrophe or hyphen between two word characters
// stays inside the word ("don't", "well-known"). The literal "[MASK]" is
// recognized as the mask sentinel.
Document tokenize(std::string_view raw);

// Joins token texts with single spaces.
std::string detokenize(const Document& doc);

// Throws std::out_of_range for a bad index and std::invalid_argument when
// token i is not a word.
Document mask_word(const Document& doc, std::size_t i);

// Replaces word i by `word`; the stopword flag is recomputed. `word` must
// be a single lowercase word token.
Document substitute(const Document& doc, std::size_t i, std::string_view word);

// Removes token i entirely. Used for deletion-based importance scoring.
Document delete_token(const Document& doc, std::size_t i);

struct WindowedPair {
  Document original;
  Document masked;
  // Position of the mask sentinel inside both truncated documents.
  std::size_t mask_index = 0;
};

// Truncates both documents to the same span of at most `window` tokens
// around index i: floor(window/2) tokens to the left, the remainder to the
// right, shifted inward at the document boundaries.
WindowedPair context_window(const Document& original, const Document& masked,
                            std::size_t i, std::size_t window);

}  // namespace ctxattack

#endif  // CTXATTACK_TEXT_H_
