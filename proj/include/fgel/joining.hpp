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
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fgel/entropy.hpp"
#include "fgel/error.hpp"
#include "fgel/markov.hpp"
#include "fgel/rational.hpp"
#include "fgel/rng.hpp"
#include "fgel/weight.hpp"

namespace fgel {

struct JoiningOptions {
  std::uint64_t iterations = 2000;
  std::uint64_t restarts = 8;
  std::uint64_t seed = 0;
  /// Moves live on the grid 1/resolution.
  std::int64_t resolution = 4096;
};

struct JoiningResult {
  Weight best;
  double value;
  double product_value;
  std::optional<double> diagonal_value;
  /// F(b^K) for the B-marginal, subtracted from F of each candidate.
  double marginal_reference;
};

namespace detail {

/// Integer basis of the null space of an exact rational matrix (rows x cols).
inline std::vector<std::vector<BigInt>> null_space(std::vector<std::vector<Rational>> rows, std::size_t cols) {
  std::vector<int> pivot_of_col(cols, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pick = rank;
    while (pick < rows.size() && rows[pick][c] == 0) ++pick;
    if (pick == rows.size()) continue;
    std::swap(rows[rank], rows[pick]);
    Rational lead = rows[rank][c];
    for (auto& v : rows[rank]) v /= lead;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k)
        if (rows[rank][k] != 0) rows[r][k] -= f * rows[rank][k];
    }
    pivot_of_col[c] = static_cast<int>(rank);
    ++rank;
  }
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<Rational> v(cols);
    v[f] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) v[c] = -rows[pivot_of_col[c]][f];
    BigInt scale = 1;
    for (const auto& x : v) scale = big_lcm(scale, boost::multiprecision::denominator(x));
    std::vector<BigInt> ints(cols);
    BigInt g = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      Rational s = v[c] * Rational(scale);
      ints[c] = boost::multiprecision::numerator(s);
      g = big_gcd(g, ints[c]);
    }
    if (g > 1)
      for (auto& x : ints) x /= g;
    basis.push_back(std::move(ints));
  }
  return basis;
}

/// F of a flattened A x B weight (r blocks of Q x Q entries), in doubles.
inline double flat_F(const std::vector<Rational>& w, int rank, std::size_t q) {
  std::vector<double> vertex(q, 0.0);
  long double f = 0;
  for (int i = 0; i < rank; ++i) {
    std::vector<double> block(q * q);
    for (std::size_t k = 0; k < q * q; ++k) block[k] = to_double(w[i * q * q + k]);
    if (i == 0)
      for (std::size_t x = 0; x < q; ++x)
        for (std::size_t y = 0; y < q; ++y) vertex[x] += block[x * q + y];
    f += entropy(std::span<const double>(block));
  }
  f += (1 - 2 * static_cast<long double>(rank)) * entropy(std::span<const double>(vertex));
  return static_cast<double>(f);
}

inline Weight unflatten(const std::vector<Rational>& w, int rank, const Alphabet& ab) {
  const std::size_t q = ab.size();
  std::vector<EdgeMeasure> edges(rank);
  for (int i = 0; i < rank; ++i)
    for (std::size_t x = 0; x < q; ++x)
      for (std::size_t y = 0; y < q; ++y)
        if (w[i * q * q + x * q + y] != 0) edges[i].push_back({x, y, w[i * q * q + x * q + y]});
  return Weight::validate(rank, ab, std::move(edges));
}

}  // namespace detail

/// Hill-climbs F(W) - F(b^K) over A x B weights with pi_A W = W_A and
/// pi_B W = W_B, starting from the product coupling, the diagonal coupling
/// when the two weights coincide, and random feasible points. The result is
/// a lower bound on the supremum over joinings, never a certified maximum.
inline JoiningResult joining_search(const MarkovMeasure& ma, const MarkovMeasure& mb, int depth,
                                    const JoiningOptions& options = {}) {
  if (ma.rank() != mb.rank()) fail(ErrorKind::shape_mismatch, "measures differ in rank");
  const int r = ma.rank();
  const Alphabet ab = Alphabet::product(ma.alphabet(), mb.alphabet());
  const std::size_t na = ma.size(), nb = mb.size(), q = ab.size();
  const std::size_t block = q * q;
  const std::size_t cols = r * block;
  auto var = [&](int i, std::size_t x, std::size_t y) { return i * block + x * q + y; };

  // Homogeneous constraints: both projections and the common vertex marginal.
  std::vector<std::vector<Rational>> rows;
  for (int i = 0; i < r; ++i) {
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t a2 = 0; a2 < na; ++a2) {
        std::vector<Rational> row(cols);
        for (std::size_t b = 0; b < nb; ++b)
          for (std::size_t b2 = 0; b2 < nb; ++b2) row[var(i, ab.pair_index(a, b), ab.pair_index(a2, b2))] = 1;
        rows.push_back(std::move(row));
      }
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t b2 = 0; b2 < nb; ++b2) {
        std::vector<Rational> row(cols);
        for (std::size_t a = 0; a < na; ++a)
          for (std::size_t a2 = 0; a2 < na; ++a2) row[var(i, ab.pair_index(a, b), ab.pair_index(a2, b2))] = 1;
        rows.push_back(std::move(row));
      }
    for (std::size_t x = 0; x < q; ++x) {
      std::vector<Rational> out_row(cols), in_row(cols);
      for (std::size_t y = 0; y < q; ++y) {
        out_row[var(i, x, y)] += 1;
        out_row[var(0, x, y)] -= 1;
        in_row[var(i, y, x)] += 1;
        in_row[var(0, x, y)] -= 1;
      }
      if (i > 0) rows.push_back(std::move(out_row));
      rows.push_back(std::move(in_row));
    }
  }
  const auto basis = detail::null_space(std::move(rows), cols);

  EntropyOptions entropy_options;
  const double reference = F_of_observable(mb, Observable::coordinate(depth), entropy_options);
  auto objective = [&](const std::vector<Rational>& w) { return detail::flat_F(w, r, q) - reference; };

  std::vector<Rational> product(cols);
  for (int i = 0; i < r; ++i)
    for (const auto& ea : ma.weight().edge(i))
      for (const auto& eb : mb.weight().edge(i))
        product[var(i, ab.pair_index(ea.from, eb.from), ab.pair_index(ea.to, eb.to))] = ea.mass * eb.mass;
  std::vector<std::vector<Rational>> seeds{product};
  std::optional<double> diagonal_value;
  if (ma.alphabet().size() == mb.alphabet().size() && ma.weight().rank() == mb.weight().rank()) {
    bool same = true;
    for (int i = 0; i < r && same; ++i) same = ma.weight().dense_edge(i) == mb.weight().dense_edge(i);
    if (same) {
      std::vector<Rational> diagonal(cols);
      for (int i = 0; i < r; ++i)
        for (const auto& e : ma.weight().edge(i)) diagonal[var(i, ab.pair_index(e.from, e.from), ab.pair_index(e.to, e.to))] = e.mass;
      diagonal_value = objective(diagonal);
      seeds.push_back(std::move(diagonal));
    }
  }
  const double product_value = objective(product);

  RandomStream rng(options.seed, 0x6a6f696eULL);
  auto max_step = [&](const std::vector<Rational>& w, const std::vector<BigInt>& d, int sign) {
    std::optional<Rational> best;
    for (std::size_t k = 0; k < cols; ++k) {
      BigInt dk = sign * d[k];
      if (dk >= 0) continue;
      Rational t = w[k] / Rational(-dk);
      if (!best || t < *best) best = t;
    }
    return best;
  };
  auto moved = [&](const std::vector<Rational>& w, const std::vector<BigInt>& d, const Rational& t) {
    std::vector<Rational> out = w;
    for (std::size_t k = 0; k < cols; ++k)
      if (d[k] != 0) out[k] += t * Rational(d[k]);
    return out;
  };
  // Random feasible start: a few grid-rounded steps along random basis directions.
  for (std::uint64_t s = 0; s < options.restarts && !basis.empty(); ++s) {
    std::vector<Rational> w = seeds[s % seeds.size()];
    for (int walk = 0; walk < 8; ++walk) {
      const auto& d = basis[rng.below(basis.size())];
      int sign = rng.below(2) ? 1 : -1;
      auto limit = max_step(w, d, sign);
      if (!limit) continue;
      Rational t = Rational(floor_scaled(*limit * Rational(static_cast<std::int64_t>(rng.below(1000))), options.resolution),
                            BigInt(options.resolution) * 1000);
      if (t > 0) w = moved(w, d, Rational(sign) * t);
    }
    seeds.push_back(std::move(w));
  }

  std::vector<Rational> best = product;
  double best_value = product_value;
  std::uint64_t budget = options.iterations;
  for (auto& start : seeds) {
    std::vector<Rational> w = start;
    double value = objective(w);
    bool improved = true;
    while (improved && budget > 0) {
      improved = false;
      for (const auto& d : basis) {
        for (int sign : {1, -1}) {
          if (budget == 0) break;
          --budget;
          auto limit = max_step(w, d, sign);
          for (std::int64_t grid = 256; grid >= 1; grid /= 2) {
            Rational t(BigInt(grid), BigInt(options.resolution));
            if (limit && t > *limit) continue;
            auto candidate = moved(w, d, Rational(sign) * t);
            double v = objective(candidate);
            if (v > value + 1e-13) {
              w = std::move(candidate);
              value = v;
              improved = true;
              break;
            }
          }
        }
      }
    }
    if (value > best_value) {
      best_value = value;
      best = w;
    }
  }
  if (diagonal_value && *diagonal_value > best_value) {
    best_value = *diagonal_value;
    best = seeds[1];
  }
  return {detail::unflatten(best, r, ab), best_value, product_value, diagonal_value, reference};
}

}  // namespace fgel
