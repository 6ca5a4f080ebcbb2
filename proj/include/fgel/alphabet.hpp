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

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fgel/error.hpp"
#include "fgel/free_group.hpp"

namespace fgel {

/// A finite alphabet: a list of named symbols, a product of two alphabets
/// (symbol "a|b", index a * |B| + b), or the ball-indexed power A^{B(e,k)}
/// (symbol "[x_0,x_1,...]" listing the labels at the ball positions in
/// canonical word order; index sum_p x_p |A|^p, so position 0 = e is the
/// least significant digit).
class Alphabet {
 public:
  enum class Kind { atomic, product, ball };

  Alphabet() : Alphabet(singleton()) {}

  static Alphabet atomic(std::vector<std::string> names) {
    if (names.empty()) fail(ErrorKind::shape_mismatch, "alphabet must have at least one symbol");
    std::set<std::string> seen;
    for (const auto& name : names) {
      if (name.empty()) fail(ErrorKind::shape_mismatch, "empty symbol name");
      if (!seen.insert(name).second) fail(ErrorKind::shape_mismatch, "duplicate symbol '" + name + "'");
    }
    Alphabet a(Kind::atomic);
    a.size_ = names.size();
    auto lookup = std::make_shared<std::unordered_map<std::string, std::size_t>>();
    for (std::size_t i = 0; i < names.size(); ++i) lookup->emplace(names[i], i);
    a.names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    a.lookup_ = std::move(lookup);
    return a;
  }

  /// Symbols "0", "1", ..., "q-1".
  static Alphabet numbered(std::size_t q) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < q; ++i) names.push_back(std::to_string(i));
    return atomic(std::move(names));
  }

  static Alphabet singleton() { return atomic({"*"}); }

  static Alphabet product(const Alphabet& first, const Alphabet& second) {
    Alphabet a(Kind::product);
    a.first_ = std::make_shared<const Alphabet>(first);
    a.second_ = std::make_shared<const Alphabet>(second);
    unsigned __int128 size = static_cast<unsigned __int128>(first.size()) * second.size();
    if (size > (static_cast<unsigned __int128>(1) << 62)) fail(ErrorKind::budget_exceeded, "product alphabet too large");
    a.size_ = static_cast<std::size_t>(size);
    return a;
  }

  static Alphabet ball(const Alphabet& base, int rank, int radius) {
    if (rank < 1 || radius < 0) fail(ErrorKind::shape_mismatch, "ball alphabet needs rank >= 1 and radius >= 0");
    Alphabet a(Kind::ball);
    a.first_ = std::make_shared<const Alphabet>(base);
    a.rank_ = rank;
    a.radius_ = radius;
    a.positions_ = ball_size(rank, radius);
    unsigned __int128 size = 1;
    for (std::uint64_t p = 0; p < a.positions_; ++p) {
      size *= base.size();
      if (size > (static_cast<unsigned __int128>(1) << 62))
        fail(ErrorKind::budget_exceeded, "ball alphabet of radius " + std::to_string(radius) + " too large");
    }
    a.size_ = static_cast<std::size_t>(size);
    return a;
  }

  Kind kind() const { return kind_; }
  std::size_t size() const { return size_; }

  const Alphabet& first() const { return *first_; }
  const Alphabet& second() const { return *second_; }
  /// Base alphabet of a ball alphabet.
  const Alphabet& base() const { return *first_; }
  int rank() const { return rank_; }
  int radius() const { return radius_; }
  std::uint64_t positions() const { return positions_; }

  std::size_t pair_index(std::size_t a, std::size_t b) const { return a * second_->size() + b; }
  std::size_t first_of(std::size_t index) const { return index / second_->size(); }
  std::size_t second_of(std::size_t index) const { return index % second_->size(); }

  /// Label at ball position p of a ball-alphabet symbol.
  std::size_t digit(std::size_t index, std::uint64_t p) const {
    const std::size_t q = first_->size();
    for (std::uint64_t t = 0; t < p; ++t) index /= q;
    return index % q;
  }

  std::vector<std::size_t> digits(std::size_t index) const {
    std::vector<std::size_t> out(positions_);
    const std::size_t q = first_->size();
    for (auto& d : out) {
      d = index % q;
      index /= q;
    }
    return out;
  }

  std::size_t compose(const std::vector<std::size_t>& labels) const {
    std::size_t index = 0;
    const std::size_t q = first_->size();
    for (std::size_t p = labels.size(); p-- > 0;) index = index * q + labels[p];
    return index;
  }

  std::string name(std::size_t index) const {
    switch (kind_) {
      case Kind::atomic: return (*names_)[index];
      case Kind::product: return first_->name(first_of(index)) + "|" + second_->name(second_of(index));
      case Kind::ball: {
        std::string out = "[";
        auto ds = digits(index);
        for (std::size_t p = 0; p < ds.size(); ++p) {
          if (p) out += ",";
          out += first_->name(ds[p]);
        }
        return out + "]";
      }
    }
    return {};
  }

  std::optional<std::size_t> find(std::string_view name) const {
    switch (kind_) {
      case Kind::atomic: {
        auto it = lookup_->find(std::string(name));
        if (it == lookup_->end()) return std::nullopt;
        return it->second;
      }
      case Kind::product: {
        for (std::size_t cut = name.find('|'); cut != std::string_view::npos; cut = name.find('|', cut + 1)) {
          auto a = first_->find(name.substr(0, cut));
          auto b = second_->find(name.substr(cut + 1));
          if (a && b) return pair_index(*a, *b);
        }
        return std::nullopt;
      }
      case Kind::ball: {
        if (name.size() < 2 || name.front() != '[' || name.back() != ']') return std::nullopt;
        auto body = name.substr(1, name.size() - 2);
        std::vector<std::size_t> labels;
        std::size_t start = 0;
        while (true) {
          std::size_t comma = body.find(',', start);
          auto part = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
          auto d = first_->find(part);
          if (!d) return std::nullopt;
          labels.push_back(*d);
          if (comma == std::string_view::npos) break;
          start = comma + 1;
        }
        if (labels.size() != positions_) return std::nullopt;
        return compose(labels);
      }
    }
    return std::nullopt;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(name(i));
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    if (a.kind_ != b.kind_ || a.size_ != b.size_) return false;
    switch (a.kind_) {
      case Kind::atomic: return a.names_ == b.names_ || *a.names_ == *b.names_;
      case Kind::product: return *a.first_ == *b.first_ && *a.second_ == *b.second_;
      case Kind::ball: return a.rank_ == b.rank_ && a.radius_ == b.radius_ && *a.first_ == *b.first_;
    }
    return false;
  }

 private:
  explicit Alphabet(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<std::string>> names_;
  std::shared_ptr<const std::unordered_map<std::string, std::size_t>> lookup_;
  std::shared_ptr<const Alphabet> first_;
  std::shared_ptr<const Alphabet> second_;
  int rank_ = 0;
  int radius_ = 0;
  std::uint64_t positions_ = 0;
};

/// Alphabet of the refinement alpha^k: the base itself at k = 0, A^{B(e,k)} otherwise.
inline Alphabet ball_alphabet(const Alphabet& base, int rank, int radius) {
  return radius == 0 ? base : Alphabet::ball(base, rank, radius);
}

}  // namespace fgel
