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

#include "ctxattack/text.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ctxattack {
namespace {

// The common NLTK English list.
const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> kStopwords = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
      "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
      "yourselves", "he", "him", "his", "himself", "she", "she's", "her",
      "hers", "herself", "it", "it's", "its", "itself", "they", "them",
      "their", "theirs", "themselves", "what", "which", "who", "whom",
      "this", "that", "that'll", "these", "those", "am", "is", "are", "was",
      "were", "be", "been", "being", "have", "has", "had", "having", "do",
      "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
      "because", "as", "until", "while", "of", "at", "by", "for", "with",
      "about", "against", "between", "into", "through", "during", "before",
      "after", "above", "below", "to", "from", "up", "down", "in", "out",
      "on", "off", "over", "under", "again", "further", "then", "once",
      "here", "there", "when", "where", "why", "how", "all", "any", "both",
      "each", "few", "more", "most", "other", "some", "such", "no", "nor",
      "not", "only", "own", "same", "so", "than", "too", "very", "s", "t",
      "can", "will", "just", "don", "don't", "should", "should've", "now",
      "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't",
      "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn",
      "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma",
      "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan",
      "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren",
      "weren't", "won", "won't", "wouldn", "wouldn't"};
  return kStopwords;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes >= 0x80 belong to UTF-8 sequences and are treated as word bytes.
bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z') || c == '_';
}

bool is_joiner(char c) { return c == '\'' || c == '-'; }

char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

Token make_word(std::string text) {
  Token t;
  t.is_stopword = is_stopword(text);
  t.text = std::move(text);
  t.kind = TokenKind::kWord;
  return t;
}

// Splits one whitespace-free chunk.
void split_chunk(std::string_view chunk, std::vector<Token>& out) {
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(make_word(std::move(word)));
      word.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < chunk.size()) {
    if (chunk.substr(pos, kMaskToken.size()) == kMaskToken) {
      flush();
      out.push_back(Token{std::string(kMaskToken), TokenKind::kMask, false});
      pos += kMaskToken.size();
      continue;
    }
    const char c = chunk[pos];
    if (is_word_char(c)) {
      word.push_back(to_lower(c));
    } else if (is_joiner(c) && !word.empty() && pos + 1 < chunk.size() &&
               is_word_char(chunk[pos + 1])) {
      word.push_back(c);
    } else {
      flush();
      out.push_back(Token{std::string(1, c), TokenKind::kPunctuation, false});
    }
    ++pos;
  }
  flush();
}

void check_word_index(const Document& doc, std::size_t i) {
  if (i >= doc.size()) {
    throw std::out_of_range("word index " + std::to_string(i) +
                            " out of range for document of " +
                            std::to_string(doc.size()) + " tokens");
  }
  if (doc[i].kind != TokenKind::kWord) {
    throw std::invalid_argument("token " + std::to_string(i) + " ('" +
                                doc[i].text + "') is not a word");
  }
}

}  // namespace

bool is_stopword(std::string_view lowercase_word) {
  return stopwords().contains(lowercase_word);
}

std::size_t Document::word_count() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) {
        return t.kind == TokenKind::kWord;
      }));
}

Document tokenize(std::string_view raw) {
  Document doc;
  doc.source = std::string(raw);
  std::size_t pos = 0;
  while (pos < raw.size()) {
    while (pos < raw.size() && is_space(raw[pos])) ++pos;
    std::size_t end = pos;
    while (end < raw.size() && !is_space(raw[end])) ++end;
    if (end > pos) split_chunk(raw.substr(pos, end - pos), doc.tokens);
    pos = end;
  }
  return doc;
}

std::string detokenize(const Document& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += doc[i].text;
  }
  return out;
}

Document mask_word(const Document& doc, std::size_t i) {
  check_word_index(doc, i);
  Document out = doc;
  out.tokens[i] = Token{std::string(kMaskToken), TokenKind::kMask, false};
  return out;
}

Document substitute(const Document& doc, std::size_t i, std::string_view word) {
  check_word_index(doc, i);
  const Document parsed = tokenize(word);
  if (parsed.size() != 1 || parsed[0].kind != TokenKind::kWord ||
      parsed[0].text != word) {
    throw std::invalid_argument("replacement '" + std::string(word) +
                                "' is not a single lowercase word");
  }
  Document out = doc;
  out.tokens[i] = parsed[0];
  return out;
}

Document delete_token(const Document& doc, std::size_t i) {
  if (i >= doc.size()) {
    throw std::out_of_range("token index " + std::to_string(i) +
                            " out of range");
  }
  Document out = doc;
  out.tokens.erase(out.tokens.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

WindowedPair context_window(const Document& original, const Document& masked,
                            std::size_t i, std::size_t window) {
  if (original.size() != masked.size()) {
    throw std::invalid_argument(
        "context_window: length mismatch (" + std::to_string(original.size()) +
        " vs " + std::to_string(masked.size()) + ")");
  }
  if (i >= masked.size() || masked[i].kind != TokenKind::kMask) {
    throw std::invalid_argument("context_window: no mask sentinel at index " +
                                std::to_string(i));
  }
  if (window == 0) throw std::invalid_argument("context_window: window is 0");

  const std::size_t n = original.size();
  const std::size_t left = window / 2;
  std::size_t start = i > left ? i - left : 0;
  if (n > window) start = std::min(start, n - window);
  else start = 0;
  const std::size_t end = std::min(n, start + window);

  auto slice = [&](const Document& d) {
    Document out;
    out.source = d.source;
    out.tokens.assign(d.tokens.begin() + static_cast<std::ptrdiff_t>(start),
                      d.tokens.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
  };
  return WindowedPair{slice(original), slice(masked), i - start};
}

}  // namespace ctxattack
