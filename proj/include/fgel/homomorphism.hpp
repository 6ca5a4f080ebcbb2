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
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fgel/alphabet.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/weight.hpp"

namespace fgel {

/// sigma: G -> Sym(n), stored as the images of s_1..s_r (0-based) and their inverses.
class Homomorphism {
 public:
  using Perm = std::vector<std::uint32_t>;

  static Homomorphism from_perms(std::vector<Perm> perms) {
    if (perms.empty()) fail(ErrorKind::shape_mismatch, "homomorphism needs at least one generator");
    Homomorphism h;
    h.n_ = perms.front().size();
    if (h.n_ == 0) fail(ErrorKind::shape_mismatch, "homomorphism needs n >= 1");
    for (std::size_t i = 0; i < perms.size(); ++i) {
      const Perm& p = perms[i];
      if (p.size() != h.n_) fail(ErrorKind::shape_mismatch, "permutation " + std::to_string(i + 1) + " has wrong length");
      Perm inv(h.n_, static_cast<std::uint32_t>(h.n_));
      for (std::size_t j = 0; j < h.n_; ++j) {
        if (p[j] >= h.n_ || inv[p[j]] != h.n_)
          fail(ErrorKind::shape_mismatch, "permutation " + std::to_string(i + 1) + " is not a bijection");
        inv[p[j]] = static_cast<std::uint32_t>(j);
      }
      h.inverse_.push_back(std::move(inv));
    }
    h.perms_ = std::move(perms);
    return h;
  }

  static Homomorphism identity(std::size_t n, int rank) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0u);
    return from_perms(std::vector<Perm>(rank, id));
  }

  std::size_t n() const { return n_; }
  int rank() const { return static_cast<int>(perms_.size()); }
  const Perm& perm(int i) const { return perms_[i]; }
  const Perm& inverse_perm(int i) const { return inverse_[i]; }

  std::uint32_t apply(Letter l, std::uint32_t j) const {
    return is_inverse(l) ? inverse_[generator_of(l)][j] : perms_[generator_of(l)][j];
  }

  /// sigma(g) j for g = l_1 ... l_m, i.e. sigma(l_1)(...sigma(l_m)(j)).
  std::uint32_t apply(const Word& g, std::uint32_t j) const {
    for (auto it = g.rbegin(); it != g.rend(); ++it) j = apply(*it, j);
    return j;
  }

  void set_perm(int i, Perm p) {
    Perm inv(n_);
    for (std::size_t j = 0; j < n_; ++j) inv[p[j]] = static_cast<std::uint32_t>(j);
    perms_[i] = std::move(p);
    inverse_[i] = std::move(inv);
  }

  friend bool operator==(const Homomorphism& a, const Homomorphism& b) { return a.perms_ == b.perms_; }

 private:
  std::size_t n_ = 0;
  std::vector<Perm> perms_;
  std::vector<Perm> inverse_;
};

/// x in A^n over any alphabet (atomic, product or ball-indexed).
struct Labeling {
  Alphabet alphabet;
  std::vector<std::size_t> symbols;

  std::size_t n() const { return symbols.size(); }

  /// n p_x(a).
  std::vector<std::int64_t> frequencies() const {
    std::vector<std::int64_t> out(alphabet.size());
    for (std::size_t s : symbols) ++out[s];
    return out;
  }

  friend bool operator==(const Labeling& a, const Labeling& b) {
    return a.alphabet == b.alphabet && a.symbols == b.symbols;
  }
};

inline Labeling make_labeling(Alphabet alphabet, std::vector<std::size_t> symbols) {
  for (std::size_t s : symbols)
    if (s >= alphabet.size()) fail(ErrorKind::shape_mismatch, "label outside the alphabet");
  return Labeling{std::move(alphabet), std::move(symbols)};
}

/// W_{sigma,x}: counts_i(a,a') = #{j : x_j = a, x_{sigma(s_i) j} = a'}.
inline DenominatorNWeight empirical_weight(const Homomorphism& sigma, const Labeling& x) {
  if (sigma.n() != x.n()) fail(ErrorKind::shape_mismatch, "homomorphism and labeling disagree on n");
  const std::size_t n = x.n();
  std::vector<std::vector<DenominatorNWeight::Count>> counts;
  std::vector<std::pair<std::size_t, std::size_t>> pairs(n);
  for (int i = 0; i < sigma.rank(); ++i) {
    const auto& p = sigma.perm(i);
    for (std::size_t j = 0; j < n; ++j) pairs[j] = {x.symbols[j], x.symbols[p[j]]};
    std::sort(pairs.begin(), pairs.end());
    std::vector<DenominatorNWeight::Count> list;
    for (std::size_t j = 0; j < n;) {
      std::size_t t = j;
      while (t < n && pairs[t] == pairs[j]) ++t;
      list.push_back({pairs[j].first, pairs[j].second, static_cast<std::int64_t>(t - j)});
      j = t;
    }
    counts.push_back(std::move(list));
  }
  return DenominatorNWeight::from_counts(sigma.rank(), x.alphabet, static_cast<std::int64_t>(n), counts);
}

/// Integer contingency counts only, without building a validated weight.
/// Entry [i][a * q + a'] = #{j : x_j = a, x_{sigma(s_i) j} = a'}.
inline std::vector<std::vector<std::int64_t>> contingency_counts(const Homomorphism& sigma,
                                                                 const std::vector<std::size_t>& labels, std::size_t q) {
  std::vector<std::vector<std::int64_t>> out(sigma.rank(), std::vector<std::int64_t>(q * q));
  for (int i = 0; i < sigma.rank(); ++i) {
    const auto& p = sigma.perm(i);
    for (std::size_t j = 0; j < labels.size(); ++j) ++out[i][labels[j] * q + labels[p[j]]];
  }
  return out;
}

}  // namespace fgel
