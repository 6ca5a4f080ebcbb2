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
#include <map>
#include <vector>

#include "fgel/fgel.hpp"

namespace fgel::testing {

/// Random permutation-and-labeling statistics: always a valid denominator-n weight.
inline DenominatorNWeight random_denominator_weight(std::size_t q, int rank, std::int64_t n, RandomStream& rng) {
  Homomorphism sigma = uniform_hom(static_cast<std::size_t>(n), rank, rng);
  std::vector<std::size_t> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = rng.below(q);
  return empirical_weight(sigma, Labeling{Alphabet::numbered(q), labels});
}

inline DenominatorNWeight random_denominator_weight(const Alphabet& alphabet, int rank, std::int64_t n, RandomStream& rng) {
  DenominatorNWeight w = random_denominator_weight(alphabet.size(), rank, n, rng);
  std::vector<std::vector<DenominatorNWeight::Count>> counts;
  for (int i = 0; i < rank; ++i) counts.push_back(w.counts(i));
  return DenominatorNWeight::from_counts(rank, alphabet, n, counts);
}

/// Convex combination of a few random denominator-n weights with random rational coefficients.
inline Weight random_weight(const Alphabet& alphabet, int rank, RandomStream& rng, int parts = 3) {
  const std::size_t q = alphabet.size();
  std::vector<std::vector<std::vector<Rational>>> dense(rank, std::vector<std::vector<Rational>>(q, std::vector<Rational>(q)));
  std::vector<std::int64_t> coeff(parts);
  std::int64_t total = 0;
  for (auto& c : coeff) total += (c = 1 + static_cast<std::int64_t>(rng.below(9)));
  for (int k = 0; k < parts; ++k) {
    std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(11));
    DenominatorNWeight w = random_denominator_weight(alphabet, rank, n, rng);
    for (int i = 0; i < rank; ++i)
      for (const auto& c : w.counts(i)) dense[i][c.from][c.to] += make_rational(coeff[k] * c.count, total * n);
  }
  return Weight::from_dense(rank, alphabet, dense);
}

/// Random weight with every entry positive: a random weight mixed with the uniform one.
inline Weight random_full_weight(const Alphabet& alphabet, int rank, RandomStream& rng) {
  Weight w = random_weight(alphabet, rank, rng);
  const std::size_t q = alphabet.size();
  std::int64_t t = 1 + static_cast<std::int64_t>(rng.below(5));
  std::vector<std::vector<std::vector<Rational>>> dense;
  for (int i = 0; i < rank; ++i) {
    auto d = w.dense_edge(i);
    for (auto& row : d)
      for (auto& v : row) v = v * make_rational(10 - t, 10) + make_rational(t, 10 * static_cast<std::int64_t>(q * q));
    dense.push_back(std::move(d));
  }
  return Weight::from_dense(rank, alphabet, dense);
}

inline Weight uniform_weight(const Alphabet& alphabet, int rank) {
  const std::size_t q = alphabet.size();
  std::vector<std::vector<std::vector<Rational>>> dense(
      rank, std::vector<std::vector<Rational>>(q, std::vector<Rational>(q, make_rational(1, static_cast<std::int64_t>(q * q)))));
  return Weight::from_dense(rank, alphabet, dense);
}

inline Weight two_cycle_weight() {
  return Weight::from_dense(1, Alphabet::numbered(2),
                            {{{make_rational(0), make_rational(1, 2)}, {make_rational(1, 2), make_rational(0)}}});
}

/// Joint weight on A x B coupling two weights independently.
inline Weight product_weight(const Weight& a, const Weight& b) {
  Alphabet ab = Alphabet::product(a.alphabet(), b.alphabet());
  std::vector<EdgeMeasure> edges(a.rank());
  for (int i = 0; i < a.rank(); ++i)
    for (const auto& ea : a.edge(i))
      for (const auto& eb : b.edge(i))
        edges[i].push_back({ab.pair_index(ea.from, eb.from), ab.pair_index(ea.to, eb.to), ea.mass * eb.mass});
  return Weight::validate(a.rank(), ab, std::move(edges));
}

/// Joint weight on A x A supported on the diagonal.
inline Weight diagonal_weight(const Weight& a) {
  Alphabet ab = Alphabet::product(a.alphabet(), a.alphabet());
  std::vector<EdgeMeasure> edges(a.rank());
  for (int i = 0; i < a.rank(); ++i)
    for (const auto& e : a.edge(i)) edges[i].push_back({ab.pair_index(e.from, e.from), ab.pair_index(e.to, e.to), e.mass});
  return Weight::validate(a.rank(), ab, std::move(edges));
}

/// Random joint Markov weight on A x B with full support.
inline Weight random_joint_weight(std::size_t na, std::size_t nb, int rank, RandomStream& rng) {
  Alphabet ab = Alphabet::product(Alphabet::numbered(na), Alphabet::numbered(nb));
  return random_full_weight(ab, rank, rng);
}

/// Brute-force entropy of the law of observed configurations: materialize all
/// atoms of the subtree and group them by what the views reveal.
inline double brute_viewed_entropy(const MarkovMeasure& m, const Subtree& tree, const std::vector<View>& views) {
  const std::size_t q = m.size();
  const Alphabet& ab = m.alphabet();
  std::map<std::vector<std::size_t>, Rational> law;
  for (const auto& atom : subtree_marginal(m, tree, Budgets{std::uint64_t{1} << 22})) {
    std::uint64_t rest = atom.index;
    std::vector<std::size_t> seen(tree.size());
    for (std::size_t p = 0; p < tree.size(); ++p) {
      std::size_t s = rest % q;
      rest /= q;
      switch (views[p]) {
        case View::full: seen[p] = s; break;
        case View::first: seen[p] = ab.first_of(s); break;
        case View::second: seen[p] = ab.second_of(s); break;
        case View::hidden: seen[p] = 0; break;
      }
    }
    law[seen] += atom.mass;
  }
  std::vector<Rational> masses;
  for (auto& [k, v] : law) masses.push_back(v);
  return entropy(masses);
}

/// Average over the enumerated fiber {sigma : W_{sigma,y} = pi_B W} of
/// #{x : W_{sigma,(x,y)} = W}, by literal enumeration of Hom(G, Sym(n)) and A^n.
inline Rational planted_fiber_average(const DenominatorNWeight& joint, const Labeling& y) {
  const Alphabet& ab = joint.alphabet();
  const std::size_t n = y.n();
  const std::size_t qa = ab.first().size();
  DenominatorNWeight second = DenominatorNWeight::from_weight(project_second(joint.weight()), joint.n());
  BigInt fiber = 0, hits = 0;
  for_each_homomorphism(n, joint.rank(), [&](const Homomorphism& sigma) {
    if (!(empirical_weight(sigma, y) == second)) return;
    ++fiber;
    std::vector<std::size_t> x(n, 0);
    while (true) {
      std::vector<std::size_t> labels(n);
      for (std::size_t j = 0; j < n; ++j) labels[j] = ab.pair_index(x[j], y.symbols[j]);
      if (empirical_weight(sigma, Labeling{ab, labels}) == joint) ++hits;
      std::size_t j = 0;
      while (j < n && x[j] + 1 == qa) x[j++] = 0;
      if (j == n) break;
      ++x[j];
    }
  });
  if (fiber == 0) fail(ErrorKind::empty_fiber, "oracle found an empty fiber");
  return Rational(hits, fiber);
}

}  // namespace fgel::testing
