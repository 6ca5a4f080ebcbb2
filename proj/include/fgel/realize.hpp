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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgel/alphabet.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/rational.hpp"
#include "fgel/rng.hpp"
#include "fgel/weight.hpp"

namespace fgel {

namespace detail {

inline std::int64_t floor_count(const Rational& q, std::int64_t n) { return floor_scaled(q, n).convert_to<std::int64_t>(); }

/// Index of the largest entry >= 1 among `candidates` (ties go to the
/// earliest), or nullopt.
template <class Get>
std::optional<std::size_t> largest_positive(std::size_t count, Get&& get) {
  std::optional<std::size_t> best;
  std::int64_t best_value = 0;
  for (std::size_t c = 0; c < count; ++c) {
    std::int64_t v = get(c);
    if (v >= 1 && v > best_value) {
      best = c;
      best_value = v;
    }
  }
  return best;
}

}  // namespace detail

/// Rounds an A x B weight to denominator n while matching a prescribed
/// denominator-n B-marginal exactly: vertex measure, then the B half-marginal
/// sum_a W((a,b),(a',b');i), then the edge measure, each stage floor-rounded
/// off a distinguished row/column and back-filled, negative entries repaired
/// by +-1/n moves that keep the previously fixed marginals. The distinguished
/// symbols a_0, b_0 are the first of each alphabet. Repairs take the first
/// negative entry in lexicographic order and the largest available partner.
inline DenominatorNWeight round_with_marginal(const Weight& w, const DenominatorNWeight& marginal, std::int64_t n) {
  const Alphabet& ab = w.alphabet();
  if (ab.kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "round_with_marginal needs an A x B weight");
  if (marginal.n() != n)
    fail(ErrorKind::marginal_not_denominator_n, "marginal has denominator " + std::to_string(marginal.n()) + ", not " + std::to_string(n));
  if (!(marginal.alphabet() == ab.second()) || marginal.rank() != w.rank())
    fail(ErrorKind::shape_mismatch, "marginal alphabet or rank does not match the weight");
  const int r = w.rank();
  const std::size_t na = ab.first().size();
  const std::size_t nb = ab.second().size();
  const std::size_t a0 = 0, b0 = 0;
  auto at = [&](std::size_t a, std::size_t b) { return ab.pair_index(a, b); };

  // Vertex measure, vtx[a][b] in units of 1/n.
  std::vector<std::vector<std::int64_t>> vtx(na, std::vector<std::int64_t>(nb));
  for (std::size_t b = 0; b < nb; ++b) {
    std::int64_t rest = marginal.vertex_counts()[b];
    for (std::size_t a = 0; a < na; ++a) {
      if (a == a0) continue;
      vtx[a][b] = detail::floor_count(w.vertex()[at(a, b)], n);
      rest -= vtx[a][b];
    }
    vtx[a0][b] = rest;
  }
  for (std::size_t b = 0; b < nb; ++b) {
    while (vtx[a0][b] < 0) {
      auto plus = detail::largest_positive(na, [&](std::size_t a) { return a == a0 ? 0 : vtx[a][b]; });
      if (!plus) fail(ErrorKind::infeasible_repair, "vertex column b=" + ab.second().name(b) + " has no positive entry");
      ++vtx[a0][b];
      --vtx[*plus][b];
    }
  }

  std::vector<std::vector<DenominatorNWeight::Count>> counts(r);
  for (int i = 0; i < r; ++i) {
    const auto exact = w.dense_edge(i);
    std::vector<std::vector<std::int64_t>> target_b(nb, std::vector<std::int64_t>(nb));
    for (const auto& c : marginal.counts(i)) target_b[c.from][c.to] = c.count;

    // Half-marginal half[b][a'][b'] with exact reference sum_a W((a,b),(a',b');i).
    auto hidx = [&](std::size_t b, std::size_t a2, std::size_t b2) { return (b * na + a2) * nb + b2; };
    std::vector<std::int64_t> half(nb * na * nb);
    for (std::size_t b = 0; b < nb; ++b) {
      if (b == b0) continue;
      for (std::size_t b2 = 0; b2 < nb; ++b2) {
        std::int64_t rest = target_b[b][b2];
        for (std::size_t a2 = 0; a2 < na; ++a2) {
          if (a2 == a0) continue;
          Rational ref = 0;
          for (std::size_t a = 0; a < na; ++a) ref += exact[at(a, b)][at(a2, b2)];
          half[hidx(b, a2, b2)] = detail::floor_count(ref, n);
          rest -= half[hidx(b, a2, b2)];
        }
        half[hidx(b, a0, b2)] = rest;
      }
    }
    for (std::size_t a2 = 0; a2 < na; ++a2) {
      for (std::size_t b2 = 0; b2 < nb; ++b2) {
        std::int64_t rest = vtx[a2][b2];
        for (std::size_t b = 0; b < nb; ++b)
          if (b != b0) rest -= half[hidx(b, a2, b2)];
        half[hidx(b0, a2, b2)] = rest;
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t a2 = 0; a2 < na; ++a2) {
        for (std::size_t b2 = 0; b2 < nb; ++b2) {
          while (half[hidx(b, a2, b2)] < 0) {
            auto a_plus = detail::largest_positive(na, [&](std::size_t x) { return half[hidx(b, x, b2)]; });
            auto b_plus = detail::largest_positive(nb, [&](std::size_t y) { return half[hidx(y, a2, b2)]; });
            if (!a_plus || !b_plus)
              fail(ErrorKind::infeasible_repair, "half-marginal entry (" + ab.second().name(b) + ", " + ab.name(at(a2, b2)) +
                                                     ") of generator " + std::to_string(i + 1) + " cannot be repaired");
            --half[hidx(b, *a_plus, b2)];
            --half[hidx(*b_plus, a2, b2)];
            ++half[hidx(b, a2, b2)];
            ++half[hidx(*b_plus, *a_plus, b2)];
          }
        }
      }
    }

    // Edge measure edge[(a,b)][(a',b')].
    const std::size_t q = ab.size();
    const std::size_t corner = at(a0, b0);
    std::vector<std::int64_t> edge(q * q);
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t y = 0; y < q; ++y) {
        if (y == corner) continue;
        std::int64_t rest = half[hidx(b, ab.first_of(y), ab.second_of(y))];
        for (std::size_t a = 0; a < na; ++a) {
          if (a == a0) continue;
          edge[at(a, b) * q + y] = detail::floor_count(exact[at(a, b)][y], n);
          rest -= edge[at(a, b) * q + y];
        }
        edge[at(a0, b) * q + y] = rest;
      }
    }
    for (std::size_t x = 0; x < q; ++x) {
      std::int64_t rest = vtx[ab.first_of(x)][ab.second_of(x)];
      for (std::size_t y = 0; y < q; ++y)
        if (y != corner) rest -= edge[x * q + y];
      edge[x * q + corner] = rest;
    }
    for (std::size_t x = 0; x < q; ++x) {
      const std::size_t b = ab.second_of(x);
      for (std::size_t y = 0; y < q; ++y) {
        while (edge[x * q + y] < 0) {
          auto y_plus = detail::largest_positive(q, [&](std::size_t z) { return edge[x * q + z]; });
          auto a_plus = detail::largest_positive(na, [&](std::size_t a) { return edge[at(a, b) * q + y]; });
          if (!y_plus || !a_plus)
            fail(ErrorKind::infeasible_repair, "edge entry (" + ab.name(x) + ", " + ab.name(y) + ") of generator " +
                                                   std::to_string(i + 1) + " cannot be repaired");
          const std::size_t x_plus = at(*a_plus, b);
          ++edge[x * q + y];
          ++edge[x_plus * q + *y_plus];
          --edge[x * q + *y_plus];
          --edge[x_plus * q + y];
        }
      }
    }
    for (std::size_t x = 0; x < q; ++x)
      for (std::size_t y = 0; y < q; ++y)
        if (edge[x * q + y] != 0) counts[i].push_back({x, y, edge[x * q + y]});
  }
  return DenominatorNWeight::from_counts(r, ab, n, counts);
}

/// Denominator-n approximation of an A-weight: the marginal-preserving
/// rounding with a one-point second alphabet.
inline DenominatorNWeight round_denominator_n(const Weight& w, std::int64_t n) {
  if (n < 1) fail(ErrorKind::shape_mismatch, "n must be >= 1");
  const Alphabet one = Alphabet::singleton();
  const Alphabet lifted = Alphabet::product(w.alphabet(), one);
  std::vector<std::size_t> up(w.size());
  for (std::size_t a = 0; a < w.size(); ++a) up[a] = lifted.pair_index(a, 0);
  Weight wide = pushforward_weight(w, up, lifted);
  std::vector<std::vector<DenominatorNWeight::Count>> trivial(w.rank(), {{0, 0, n}});
  DenominatorNWeight marginal = DenominatorNWeight::from_counts(w.rank(), one, n, trivial);
  DenominatorNWeight rounded = round_with_marginal(wide, marginal, n);
  std::vector<std::vector<DenominatorNWeight::Count>> counts(w.rank());
  for (int i = 0; i < w.rank(); ++i)
    for (const auto& c : rounded.counts(i)) counts[i].push_back({lifted.first_of(c.from), lifted.first_of(c.to), c.count});
  return DenominatorNWeight::from_counts(w.rank(), w.alphabet(), n, counts);
}

/// A permutation p of [n] with #{j : labels[j] = b, labels[p[j]] = b'} = table[b][b']
/// (table flattened row-major over q classes). With a stream, p is uniform over
/// all such permutations: both class orders are shuffled, class b is cut into
/// consecutive chunks by target class, class b' by source class, and the k-th
/// element of chunk (b,b') on one side goes to the k-th on the other.
/// Without a stream the identity orders are used.
inline Homomorphism::Perm contingency_permutation(const std::vector<std::size_t>& labels, std::size_t q,
                                                  const std::vector<std::int64_t>& table, RandomStream* rng) {
  std::vector<std::vector<std::uint32_t>> members(q);
  for (std::size_t j = 0; j < labels.size(); ++j) members[labels[j]].push_back(static_cast<std::uint32_t>(j));
  std::vector<std::vector<std::uint32_t>> sources = members;
  std::vector<std::vector<std::uint32_t>> targets = std::move(members);
  if (rng) {
    for (auto& s : sources) shuffle(std::span<std::uint32_t>(s), *rng);
    for (auto& t : targets) shuffle(std::span<std::uint32_t>(t), *rng);
  }
  for (std::size_t b = 0; b < q; ++b) {
    std::int64_t out = 0, in = 0;
    for (std::size_t c = 0; c < q; ++c) {
      out += table[b * q + c];
      in += table[c * q + b];
    }
    if (out != static_cast<std::int64_t>(sources[b].size()) || in != static_cast<std::int64_t>(targets[b].size()))
      fail(ErrorKind::frequency_mismatch, "class sizes disagree with the contingency table at class " + std::to_string(b));
  }
  Homomorphism::Perm perm(labels.size());
  // target_offset[b'][b]: where chunk (b,b') starts inside target class b'.
  std::vector<std::int64_t> target_offset(q * q);
  for (std::size_t c = 0; c < q; ++c) {
    std::int64_t offset = 0;
    for (std::size_t b = 0; b < q; ++b) {
      target_offset[c * q + b] = offset;
      offset += table[b * q + c];
    }
  }
  for (std::size_t b = 0; b < q; ++b) {
    std::int64_t offset = 0;
    for (std::size_t c = 0; c < q; ++c) {
      const std::int64_t size = table[b * q + c];
      for (std::int64_t k = 0; k < size; ++k)
        perm[sources[b][offset + k]] = targets[c][target_offset[c * q + b] + k];
      offset += size;
    }
  }
  return perm;
}

struct Realization {
  Homomorphism sigma;
  Labeling labels;
};

/// (sigma, x) with W_{sigma,x} = W. Labels are laid out by class counts (and
/// shuffled when a stream is given); each generator is a contingency permutation.
inline Realization realize_weight(const DenominatorNWeight& w, RandomStream* rng = nullptr) {
  const std::size_t q = w.alphabet().size();
  std::vector<std::size_t> labels;
  labels.reserve(static_cast<std::size_t>(w.n()));
  for (std::size_t a = 0; a < q; ++a)
    for (std::int64_t k = 0; k < w.vertex_counts()[a]; ++k) labels.push_back(a);
  if (rng) shuffle(std::span<std::size_t>(labels), *rng);
  // Ball alphabets can be huge; work on the symbols actually present.
  std::vector<std::size_t> present;
  for (std::size_t a = 0; a < q; ++a)
    if (w.vertex_counts()[a] > 0) present.push_back(a);
  std::vector<std::size_t> local(q, 0);
  for (std::size_t t = 0; t < present.size(); ++t) local[present[t]] = t;
  const std::size_t m = present.size();
  std::vector<std::size_t> compact(labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) compact[j] = local[labels[j]];
  std::vector<Homomorphism::Perm> perms;
  for (int i = 0; i < w.rank(); ++i) {
    std::vector<std::int64_t> table(m * m);
    for (const auto& c : w.counts(i)) table[local[c.from] * m + local[c.to]] = c.count;
    perms.push_back(contingency_permutation(compact, m, table, rng));
  }
  return {Homomorphism::from_perms(std::move(perms)), Labeling{w.alphabet(), std::move(labels)}};
}

/// x^k: entry j is the ball labeling g -> x[sigma(g) j] over B(e,k), encoded
/// in the ball alphabet (the base alphabet itself at k = 0).
inline Labeling ball_refine(const Homomorphism& sigma, const Labeling& x, int radius) {
  if (sigma.n() != x.n()) fail(ErrorKind::shape_mismatch, "homomorphism and labeling disagree on n");
  if (radius < 0) fail(ErrorKind::shape_mismatch, "radius must be >= 0");
  if (radius == 0) return x;
  Alphabet target = Alphabet::ball(x.alphabet, sigma.rank(), radius);
  Subtree ball = Subtree::ball(sigma.rank(), radius);
  const std::size_t n = x.n();
  const std::size_t q = x.alphabet.size();
  std::vector<std::uint32_t> point(n), next(n);
  std::vector<std::vector<std::uint32_t>> points(ball.size(), std::vector<std::uint32_t>(n));
  std::iota(points[0].begin(), points[0].end(), 0u);
  for (std::size_t p = 1; p < ball.size(); ++p) {
    const auto& above = points[ball.parent(p)];
    const Letter l = ball.edge_letter(p);
    for (std::size_t j = 0; j < n; ++j) points[p][j] = sigma.apply(l, above[j]);
  }
  std::vector<std::size_t> symbols(n, 0);
  for (std::size_t p = ball.size(); p-- > 0;)
    for (std::size_t j = 0; j < n; ++j) symbols[j] = symbols[j] * q + x.symbols[points[p][j]];
  return Labeling{std::move(target), std::move(symbols)};
}

/// Ball radius of a labeling produced by ball_refine (0 for a base labeling).
inline int labeling_radius(const Labeling& x) { return x.alphabet.kind() == Alphabet::Kind::ball ? x.alphabet.radius() : 0; }

/// pi_e X.
inline Labeling center_labels(const Labeling& x) {
  if (x.alphabet.kind() != Alphabet::Kind::ball) return x;
  const std::size_t q = x.alphabet.base().size();
  std::vector<std::size_t> out(x.n());
  for (std::size_t j = 0; j < x.n(); ++j) out[j] = x.symbols[j] % q;
  return Labeling{x.alphabet.base(), std::move(out)};
}

/// Returns pi_e X after checking X = (pi_e X)^k under sigma; throws
/// Inconsistent naming the first offending point and word otherwise.
inline Labeling check_ball_consistency(const Homomorphism& sigma, const Labeling& x) {
  Labeling center = center_labels(x);
  const int radius = labeling_radius(x);
  if (radius == 0) return center;
  if (x.alphabet.rank() != sigma.rank()) fail(ErrorKind::shape_mismatch, "ball alphabet rank differs from the homomorphism");
  Labeling again = ball_refine(sigma, center, radius);
  Subtree ball = Subtree::ball(sigma.rank(), radius);
  for (std::size_t j = 0; j < x.n(); ++j) {
    if (again.symbols[j] == x.symbols[j]) continue;
    for (std::size_t p = 0; p < ball.size(); ++p)
      if (x.alphabet.digit(again.symbols[j], p) != x.alphabet.digit(x.symbols[j], p))
        fail(ErrorKind::inconsistent, "point " + std::to_string(j + 1) + " disagrees at word " + format_word(ball.word(p)));
  }
  return center;
}

}  // namespace fgel
