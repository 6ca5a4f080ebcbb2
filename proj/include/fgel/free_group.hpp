// Copyright 2026 The fgel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgel/error.hpp"

namespace fgel {

/// Letters of the free group on s_1..s_r: code 2i is s_{i+1}, code 2i+1 is
/// its inverse. Generator indices are 0-based in code, 1-based in text.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

constexpr Letter generator_letter(int i) { return static_cast<Letter>(2 * i); }
constexpr Letter inverse_generator_letter(int i) { return static_cast<Letter>(2 * i + 1); }
constexpr int generator_of(Letter l) { return l / 2; }
constexpr bool is_inverse(Letter l) { return (l & 1) != 0; }
constexpr Letter invert(Letter l) { return static_cast<Letter>(l ^ 1); }

inline Word reduce(const Word& word) {
  Word out;
  out.reserve(word.size());
  for (Letter l : word) {
    if (!out.empty() && out.back() == invert(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline bool is_reduced(const Word& word) {
  for (std::size_t p = 1; p < word.size(); ++p)
    if (word[p] == invert(word[p - 1])) return false;
  return true;
}

inline Word multiply(const Word& left, const Word& right) {
  Word joined = left;
  joined.insert(joined.end(), right.begin(), right.end());
  return reduce(joined);
}

inline Word inverse(const Word& word) {
  Word out(word.rbegin(), word.rend());
  for (Letter& l : out) l = invert(l);
  return out;
}

/// Parses words such as "s1S2s1" (capital S = inverse) or "e"; the result is reduced.
inline Word parse_word(std::string_view text, int rank) {
  Word word;
  if (text == "e" || text.empty()) return word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (c != 's' && c != 'S') fail(ErrorKind::parse_error, "bad word '" + std::string(text) + "'");
    ++pos;
    std::size_t start = pos;
    int index = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') index = index * 10 + (text[pos++] - '0');
    if (pos == start || index < 1 || index > rank)
      fail(ErrorKind::parse_error, "bad generator in word '" + std::string(text) + "' for rank " + std::to_string(rank));
    word.push_back(c == 's' ? generator_letter(index - 1) : inverse_generator_letter(index - 1));
  }
  return reduce(word);
}

inline std::string format_word(const Word& word) {
  if (word.empty()) return "e";
  std::string out;
  for (Letter l : word) {
    out += is_inverse(l) ? 'S' : 's';
    out += std::to_string(generator_of(l) + 1);
  }
  return out;
}

/// |B(e,k)| = 1 + sum_{j=1..k} 2r(2r-1)^{j-1}.
inline std::uint64_t ball_size(int rank, int radius) {
  std::uint64_t total = 1;
  std::uint64_t layer = 2 * static_cast<std::uint64_t>(rank);
  for (int j = 1; j <= radius; ++j) {
    total += layer;
    layer *= 2 * static_cast<std::uint64_t>(rank) - 1;
  }
  return total;
}

/// Canonical order on words: by length, then lexicographically by letter code.
inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Finite connected subtree of the Cayley tree containing e.
///
/// The itinerary of a point x is the coloring g -> alpha(T_g x), so the pairs
/// that carry the edge statistics are (g, s g). A word g = l_1 l_2 ... l_m is
/// therefore attached to its parent l_2 ... l_m through the letter l_1, which
/// is the letter applied last when g acts. Positions are in canonical word
/// order, so every parent precedes its children and, for balls, B(e,m) is
/// a prefix of B(e,k) whenever m <= k.
class Subtree {
 public:
  static Subtree from_words(int rank, std::vector<Word> words) {
    Subtree tree;
    tree.rank_ = rank;
    for (Word& w : words) {
      if (!is_reduced(w)) fail(ErrorKind::shape_mismatch, "subtree word " + format_word(w) + " is not reduced");
      for (Letter l : w)
        if (generator_of(l) >= rank) fail(ErrorKind::shape_mismatch, "subtree word uses a generator beyond the rank");
    }
    std::sort(words.begin(), words.end(), word_less);
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.empty() || !words.front().empty())
      fail(ErrorKind::shape_mismatch, "subtree must contain the identity");
    tree.words_ = std::move(words);
    for (std::size_t p = 0; p < tree.words_.size(); ++p) tree.index_.emplace(tree.words_[p], p);
    tree.parent_.assign(tree.words_.size(), -1);
    tree.letter_.assign(tree.words_.size(), 0);
    for (std::size_t p = 1; p < tree.words_.size(); ++p) {
      const Word& w = tree.words_[p];
      Word parent(w.begin() + 1, w.end());
      auto it = tree.index_.find(parent);
      if (it == tree.index_.end())
        fail(ErrorKind::shape_mismatch, "subtree is not connected at word " + format_word(w));
      tree.parent_[p] = static_cast<int>(it->second);
      tree.letter_[p] = w.front();
    }
    return tree;
  }

  /// B(e,k).
  static Subtree ball(int rank, int radius) { return from_words(rank, ball_words(rank, radius)); }

  /// B(e,k) union B(e,k) s_i: the coordinates seen by the pair (alpha^k, alpha^k o T_{s_i}).
  static Subtree ball_with_shift(int rank, int radius, int generator) {
    std::vector<Word> words = ball_words(rank, radius);
    const Word shift{generator_letter(generator)};
    std::size_t base = words.size();
    for (std::size_t p = 0; p < base; ++p) words.push_back(multiply(words[p], shift));
    return from_words(rank, std::move(words));
  }

  static std::vector<Word> ball_words(int rank, int radius) {
    std::vector<Word> words{Word{}};
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= radius; ++len) {
      std::vector<Word> next;
      for (const Word& w : layer) {
        for (Letter l = 0; l < 2 * rank; ++l) {
          if (!w.empty() && w.front() == invert(l)) continue;
          Word child;
          child.reserve(w.size() + 1);
          child.push_back(l);
          child.insert(child.end(), w.begin(), w.end());
          next.push_back(std::move(child));
        }
      }
      words.insert(words.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    std::sort(words.begin(), words.end(), word_less);
    return words;
  }

  int rank() const { return rank_; }
  std::size_t size() const { return words_.size(); }
  const Word& word(std::size_t p) const { return words_[p]; }
  const std::vector<Word>& words() const { return words_; }
  /// -1 for the root.
  int parent(std::size_t p) const { return parent_[p]; }
  /// Letter l with word(p) = l * word(parent(p)).
  Letter edge_letter(std::size_t p) const { return letter_[p]; }

  std::optional<std::size_t> find(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t depth(std::size_t p) const { return words_[p].size(); }

 private:
  int rank_ = 1;
  std::vector<Word> words_;
  std::vector<int> parent_;
  std::vector<Letter> letter_;
  std::map<Word, std::size_t> index_;
};

}  // namespace fgel
