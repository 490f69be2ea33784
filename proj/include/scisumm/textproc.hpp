// Copyright 2026 The scisumm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Text normalization: sentence segmentation, tokenization, stopword removal
// and relative-frequency n-gram bags.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scisumm/errors.hpp"

namespace scisumm {

/// Map from an n-gram (tokens joined by a single space) to its relative
/// frequency. Frequencies of a non-empty bag sum to one.
struct NGramBag {
  std::map<std::string, double> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  double at(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0.0 : it->second;
  }
  bool operator==(const NGramBag&) const = default;
};

/// One sentence of a section with its normalized representations.
struct SentenceUnit {
  std::size_t id = 0;
  std::string raw;
  std::vector<std::string> tokens;
  NGramBag unigrams;
  NGramBag bigrams;
  std::size_t token_count = 0;

  bool operator==(const SentenceUnit&) const = default;
};

class Stopwords {
 public:
  Stopwords() = default;
  explicit Stopwords(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  // The list shipped as data/stopwords.txt, compiled in.
  static const Stopwords& builtin();

  // One lowercase word per line; '#' starts a comment line.
  static Stopwords load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(Errc::kInvalidArgument, "cannot open stopword file " + path);
    }
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      auto last = line.find_last_not_of(" \t\r");
      words.insert(line.substr(first, last - first + 1));
    }
    return Stopwords(std::move(words));
  }

  bool contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
  }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

namespace detail {

inline constexpr const char* kBuiltinStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "her", "hers", "herself", "it", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
    "that", "these", "those", "am", "is", "are", "was", "were", "be", "been",
    "being", "have", "has", "had", "having", "do", "does", "did", "doing",
    "a", "an", "the", "and", "but", "if", "or", "because", "as", "until",
    "while", "of", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below", "to",
    "from", "up", "down", "in", "out", "on", "off", "over", "under", "again",
    "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some",
    "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too",
    "very", "s", "t", "can", "will", "just", "don", "should", "now", "d",
    "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn",
    "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan",
    "shouldn", "wasn", "weren", "won", "wouldn",
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are treated as word
// characters, so non-ASCII letters stay inside tokens.
inline bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z') || u >= 0x80;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

inline bool is_closer(char c) {
  return c == ')' || c == ']' || c == '"' || c == '\'';
}

// Tokens that end in a period without ending the sentence.
inline bool is_abbreviation(std::string_view word) {
  static const std::unordered_set<std::string> kGuard = {
      "fig.", "figs.", "eq.", "eqs.", "al.", "e.g.", "i.e.", "vs.", "tab.",
      "sec.", "secs.", "no.", "cf.", "approx.", "resp.", "dr.", "mr.",
      "ms.", "prof.", "ref.", "refs.", "viz."};
  while (!word.empty() && (word.front() == '(' || word.front() == '[')) {
    word.remove_prefix(1);
  }
  if (kGuard.count(to_lower(word)) != 0) return true;
  // Single-letter initials such as "J." in author names.
  return word.size() == 2 && word[0] >= 'A' && word[0] <= 'Z';
}

}  // namespace detail

inline const Stopwords& Stopwords::builtin() {
  static const Stopwords kWords = [] {
    std::unordered_set<std::string> words;
    for (const char* w : detail::kBuiltinStopwords) words.insert(w);
    return Stopwords(std::move(words));
  }();
  return kWords;
}

/// Splits text into sentences at terminal punctuation and blank lines.
/// Abbreviations from the guard list, single-letter initials and a following
/// lowercase word suppress a split. Returned sentences are trimmed and never
/// empty.
inline std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto emit = [&out](std::string_view piece) {
    auto t = detail::trim(piece);
    if (!t.empty()) out.emplace_back(t);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '\n') {
      // Blank line: paragraph break.
      std::size_t k = i + 1;
      while (k < n && (text[k] == ' ' || text[k] == '\t' || text[k] == '\r')) ++k;
      if (k < n && text[k] == '\n') {
        emit(text.substr(start, i - start));
        while (k < n && detail::is_space(text[k])) ++k;
        start = i = k;
        continue;
      }
      ++i;
      continue;
    }
    if (!detail::is_terminal(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && (detail::is_terminal(text[j]) || detail::is_closer(text[j]))) ++j;
    if (j < n && !detail::is_space(text[j])) {
      // "3.5", "SQuAD2.0", "e.g." mid-token
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < n && detail::is_space(text[k])) ++k;
    bool split = true;
    bool paragraph = std::count(text.begin() + j, text.begin() + k, '\n') >= 2;
    if (k < n && !paragraph) {
      if (c == '.') {
        std::size_t w = i;
        while (w > start && !detail::is_space(text[w - 1])) --w;
        if (detail::is_abbreviation(text.substr(w, i + 1 - w))) split = false;
      }
      char next = text[k];
      if (next >= 'a' && next <= 'z') split = false;
    }
    if (split) {
      emit(text.substr(start, j - start));
      start = k;
    }
    i = k > j ? k : j;
  }
  if (start < n) emit(text.substr(start));
  return out;
}

/// Lowercased alphanumeric runs with stopwords removed, in original order.
/// Hyphens and other punctuation separate tokens.
inline std::vector<std::string> normalize(std::string_view raw,
                                          const Stopwords& stopwords) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!detail::is_word_byte(raw[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string token;
    while (j < raw.size() && detail::is_word_byte(raw[j])) {
      token.push_back(detail::ascii_lower(raw[j]));
      ++j;
    }
    if (!stopwords.contains(token)) tokens.push_back(std::move(token));
    i = j;
  }
  return tokens;
}

inline std::string join_tokens(std::span<const std::string> tokens,
                               std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

/// Relative frequency of each contiguous n-gram; n must be 1 or 2.
inline NGramBag bag_of_ngrams(std::span<const std::string> tokens, int n) {
  if (n != 1 && n != 2) {
    throw Error(Errc::kInvalidArgument, "n-gram order must be 1 or 2");
  }
  NGramBag bag;
  if (tokens.size() < static_cast<std::size_t>(n)) return bag;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = n == 1 ? tokens[i] : tokens[i] + " " + tokens[i + 1];
    ++counts[key];
    ++total;
  }
  for (auto& [key, count] : counts) {
    bag.entries.emplace(key, static_cast<double>(count) / static_cast<double>(total));
  }
  return bag;
}

inline SentenceUnit make_sentence(std::size_t id, std::string raw,
                                  const Stopwords& stopwords) {
  SentenceUnit s;
  s.id = id;
  s.tokens = normalize(raw, stopwords);
  s.raw = std::move(raw);
  s.unigrams = bag_of_ngrams(s.tokens, 1);
  s.bigrams = bag_of_ngrams(s.tokens, 2);
  s.token_count = s.tokens.size();
  return s;
}

/// Segments and normalizes a block of text; ids run 0..n-1.
inline std::vector<SentenceUnit> process_text(std::string_view text,
                                              const Stopwords& stopwords) {
  std::vector<SentenceUnit> out;
  for (auto& raw : segment_sentences(text)) {
    out.push_back(make_sentence(out.size(), std::move(raw), stopwords));
  }
  return out;
}

}  // namespace scisumm
