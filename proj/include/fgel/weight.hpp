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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fgel/alphabet.hpp"
#include "fgel/error.hpp"
#include "fgel/rational.hpp"

namespace fgel {

struct EdgeEntry {
  std::size_t from;
  std::size_t to;
  Rational mass;
};

/// One edge measure, sparse: entries sorted by (from, to), all masses > 0.
using EdgeMeasure = std::vector<EdgeEntry>;

/// An A-weight: r probability measures on A x A sharing one vertex marginal.
/// Instances only exist in validated form, and are immutable.
class Weight {
 public:
  /// Checks nonnegativity, normalization and the weight axiom
  /// sum_{a'} W(a,a';i) = sum_{a'} W(a',a;j) for all i, j, a.
  static Weight validate(int rank, Alphabet alphabet, std::vector<EdgeMeasure> edges) {
    if (rank < 1) fail(ErrorKind::shape_mismatch, "rank must be >= 1");
    if (static_cast<int>(edges.size()) != rank)
      fail(ErrorKind::shape_mismatch, "expected " + std::to_string(rank) + " edge measures, got " + std::to_string(edges.size()));
    const std::size_t q = alphabet.size();
    Weight w;
    w.rank_ = rank;
    w.alphabet_ = std::move(alphabet);
    std::vector<Rational> reference_rows;
    for (int i = 0; i < rank; ++i) {
      EdgeMeasure& edge = edges[i];
      for (const auto& e : edge) {
        if (e.from >= q || e.to >= q) fail(ErrorKind::shape_mismatch, "edge entry index out of range");
        if (e.mass < 0)
          fail(ErrorKind::axiom_violation, "negative entry at generator " + std::to_string(i + 1) + " (" +
                                               w.alphabet_.name(e.from) + ", " + w.alphabet_.name(e.to) + ")");
      }
      std::sort(edge.begin(), edge.end(), [](const EdgeEntry& a, const EdgeEntry& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
      });
      EdgeMeasure merged;
      merged.reserve(edge.size());
      for (auto& e : edge) {
        if (!merged.empty() && merged.back().from == e.from && merged.back().to == e.to) {
          merged.back().mass += e.mass;
        } else {
          merged.push_back(std::move(e));
        }
      }
      std::erase_if(merged, [](const EdgeEntry& e) { return e.mass == 0; });
      Rational total = 0;
      for (const auto& e : merged) total += e.mass;
      if (total != 1)
        fail(ErrorKind::not_normalized, "edge measure of generator " + std::to_string(i + 1) + " sums to " + to_string(total));
      std::vector<Rational> rows(q), cols(q);
      for (const auto& e : merged) {
        rows[e.from] += e.mass;
        cols[e.to] += e.mass;
      }
      if (i == 0) reference_rows = rows;
      for (std::size_t a = 0; a < q; ++a) {
        if (rows[a] != reference_rows[a])
          fail(ErrorKind::axiom_violation, "row sum of generator " + std::to_string(i + 1) + " at symbol '" +
                                               w.alphabet_.name(a) + "' is " + to_string(rows[a]) +
                                               " but row sum of generator 1 is " + to_string(reference_rows[a]) +
                                               " (i=" + std::to_string(i + 1) + ", j=1, a=" + w.alphabet_.name(a) + ")");
        if (cols[a] != reference_rows[a])
          fail(ErrorKind::axiom_violation, "column sum of generator " + std::to_string(i + 1) + " at symbol '" +
                                               w.alphabet_.name(a) + "' is " + to_string(cols[a]) +
                                               " but row sum of generator 1 is " + to_string(reference_rows[a]) +
                                               " (i=" + std::to_string(i + 1) + ", j=1, a=" + w.alphabet_.name(a) + ")");
      }
      w.edges_.push_back(std::move(merged));
    }
    w.vertex_ = std::move(reference_rows);
    return w;
  }

  static Weight from_dense(int rank, Alphabet alphabet, const std::vector<std::vector<std::vector<Rational>>>& matrices) {
    const std::size_t q = alphabet.size();
    std::vector<EdgeMeasure> edges;
    for (const auto& matrix : matrices) {
      if (matrix.size() != q) fail(ErrorKind::shape_mismatch, "edge matrix has wrong number of rows");
      EdgeMeasure edge;
      for (std::size_t a = 0; a < q; ++a) {
        if (matrix[a].size() != q) fail(ErrorKind::shape_mismatch, "edge matrix has wrong number of columns");
        for (std::size_t b = 0; b < q; ++b)
          if (matrix[a][b] != 0) edge.push_back({a, b, matrix[a][b]});
      }
      edges.push_back(std::move(edge));
    }
    return validate(rank, std::move(alphabet), std::move(edges));
  }

  int rank() const { return rank_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  const std::vector<Rational>& vertex() const { return vertex_; }
  const EdgeMeasure& edge(int i) const { return edges_[i]; }

  Rational mass(int i, std::size_t from, std::size_t to) const {
    const auto& edge = edges_[i];
    auto it = std::lower_bound(edge.begin(), edge.end(), std::make_pair(from, to),
                               [](const EdgeEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                                 return e.from != key.first ? e.from < key.first : e.to < key.second;
                               });
    if (it != edge.end() && it->from == from && it->to == to) return it->mass;
    return 0;
  }

  std::vector<std::vector<Rational>> dense_edge(int i) const {
    std::vector<std::vector<Rational>> out(size(), std::vector<Rational>(size()));
    for (const auto& e : edges_[i]) out[e.from][e.to] = e.mass;
    return out;
  }

  friend bool operator==(const Weight& a, const Weight& b) {
    if (a.rank_ != b.rank_ || !(a.alphabet_ == b.alphabet_)) return false;
    for (int i = 0; i < a.rank_; ++i) {
      const auto& x = a.edges_[i];
      const auto& y = b.edges_[i];
      if (x.size() != y.size()) return false;
      for (std::size_t t = 0; t < x.size(); ++t)
        if (x[t].from != y[t].from || x[t].to != y[t].to || x[t].mass != y[t].mass) return false;
    }
    return true;
  }

 private:
  Weight() = default;

  int rank_ = 1;
  Alphabet alphabet_;
  std::vector<EdgeMeasure> edges_;
  std::vector<Rational> vertex_;
};

namespace detail {

inline bool entry_less(const EdgeEntry& a, const EdgeEntry& b) {
  return a.from != b.from ? a.from < b.from : a.to < b.to;
}

/// sum |x - y| over all pairs, for two probability measures given as sorted
/// entry lists. When one support is much smaller it is walked alone and the
/// other side looked up: the entries off the small support contribute
/// 1 - (mass of the large side on it).
inline Rational l1_distance(const EdgeMeasure& x, const EdgeMeasure& y) {
  const EdgeMeasure& small = x.size() <= y.size() ? x : y;
  const EdgeMeasure& large = x.size() <= y.size() ? y : x;
  Rational total = 0;
  if (small.size() * 16 < large.size()) {
    Rational covered = 0;
    for (const auto& e : small) {
      auto it = std::lower_bound(large.begin(), large.end(), e, entry_less);
      if (it != large.end() && it->from == e.from && it->to == e.to) {
        total += boost::multiprecision::abs(e.mass - it->mass);
        covered += it->mass;
      } else {
        total += e.mass;
      }
    }
    return total + (1 - covered);
  }
  std::size_t s = 0, t = 0;
  while (s < x.size() || t < y.size()) {
    if (t == y.size() || (s < x.size() && entry_less(x[s], y[t]))) {
      total += x[s++].mass;
    } else if (s == x.size() || entry_less(y[t], x[s])) {
      total += y[t++].mass;
    } else {
      total += boost::multiprecision::abs(x[s].mass - y[t].mass);
      ++s;
      ++t;
    }
  }
  return total;
}

}  // namespace detail

/// d(W1,W2) = 1/2 sum_i sum_{a,a'} |W1(a,a';i) - W2(a,a';i)|, exact.
inline Rational weight_distance(const Weight& w1, const Weight& w2) {
  if (w1.rank() != w2.rank() || !(w1.alphabet() == w2.alphabet()))
    fail(ErrorKind::shape_mismatch, "weights differ in rank or alphabet");
  Rational total = 0;
  for (int i = 0; i < w1.rank(); ++i) total += detail::l1_distance(w1.edge(i), w2.edge(i));
  return total / 2;
}

/// Shannon entropy in nats, 0 log 0 = 0.
inline double entropy(std::span<const double> p) {
  long double h = 0;
  for (double v : p)
    if (v > 0) h -= static_cast<long double>(v) * std::log(static_cast<long double>(v));
  return static_cast<double>(h);
}

inline double entropy(const std::vector<Rational>& p) {
  std::vector<double> d;
  d.reserve(p.size());
  for (const auto& v : p) d.push_back(to_double(v));
  return entropy(std::span<const double>(d));
}

inline double entropy(const EdgeMeasure& edge) {
  std::vector<double> d;
  d.reserve(edge.size());
  for (const auto& e : edge) d.push_back(to_double(e.mass));
  return entropy(std::span<const double>(d));
}

/// Entropy in nats of the two-point distribution (p, 1-p).
inline double binary_entropy(double p) {
  double q = 1 - p;
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (q > 0) h -= q * std::log(q);
  return h;
}

/// F(W) = (1-2r) H(W(.)) + sum_i H(W(.,.;i)).
inline double F_of_weight(const Weight& w) {
  long double f = (1 - 2 * static_cast<long double>(w.rank())) * entropy(w.vertex());
  for (int i = 0; i < w.rank(); ++i) f += entropy(w.edge(i));
  return static_cast<double>(f);
}

/// pi W for a symbol map pi: A -> B given as an index table of length |A|.
inline Weight pushforward_weight(const Weight& w, const std::vector<std::size_t>& map, const Alphabet& target) {
  if (map.size() != w.size()) fail(ErrorKind::shape_mismatch, "symbol map is not total on the alphabet");
  for (std::size_t b : map)
    if (b >= target.size()) fail(ErrorKind::shape_mismatch, "symbol map leaves the target alphabet");
  std::vector<EdgeMeasure> edges;
  for (int i = 0; i < w.rank(); ++i) {
    EdgeMeasure edge;
    edge.reserve(w.edge(i).size());
    for (const auto& e : w.edge(i)) edge.push_back({map[e.from], map[e.to], e.mass});
    edges.push_back(std::move(edge));
  }
  return Weight::validate(w.rank(), target, std::move(edges));
}

/// pi_A on an A x B weight.
inline Weight project_first(const Weight& w) {
  const Alphabet& ab = w.alphabet();
  if (ab.kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "project_first needs a product alphabet");
  std::vector<std::size_t> map(ab.size());
  for (std::size_t x = 0; x < ab.size(); ++x) map[x] = ab.first_of(x);
  return pushforward_weight(w, map, ab.first());
}

/// pi_B on an A x B weight.
inline Weight project_second(const Weight& w) {
  const Alphabet& ab = w.alphabet();
  if (ab.kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "project_second needs a product alphabet");
  std::vector<std::size_t> map(ab.size());
  for (std::size_t x = 0; x < ab.size(); ++x) map[x] = ab.second_of(x);
  return pushforward_weight(w, map, ab.second());
}

/// pi_m on an A^{B(e,k)} weight, m <= k; m = 0 gives pi_e onto the base alphabet.
inline Weight project_ball(const Weight& w, int radius) {
  const Alphabet& ball = w.alphabet();
  if (ball.kind() != Alphabet::Kind::ball) fail(ErrorKind::shape_mismatch, "project_ball needs a ball alphabet");
  if (radius > ball.radius()) fail(ErrorKind::shape_mismatch, "cannot project to a larger ball");
  Alphabet target = radius == 0 ? ball.base() : Alphabet::ball(ball.base(), ball.rank(), radius);
  std::size_t modulus = target.size();
  std::vector<std::size_t> map(ball.size());
  for (std::size_t x = 0; x < ball.size(); ++x) map[x] = x % modulus;
  return pushforward_weight(w, map, target);
}

/// pi_{m,m'} on an A^{B(e,k)} x B^{B(e,k')} weight.
inline Weight project_balls(const Weight& w, int first_radius, int second_radius) {
  const Alphabet& ab = w.alphabet();
  if (ab.kind() != Alphabet::Kind::product || ab.first().kind() != Alphabet::Kind::ball ||
      ab.second().kind() != Alphabet::Kind::ball)
    fail(ErrorKind::shape_mismatch, "project_balls needs a product of ball alphabets");
  auto shrink = [](const Alphabet& ball, int radius) {
    return radius == 0 ? ball.base() : Alphabet::ball(ball.base(), ball.rank(), radius);
  };
  Alphabet first = shrink(ab.first(), first_radius);
  Alphabet second = shrink(ab.second(), second_radius);
  Alphabet target = Alphabet::product(first, second);
  std::vector<std::size_t> map(ab.size());
  for (std::size_t x = 0; x < ab.size(); ++x)
    map[x] = target.pair_index(ab.first_of(x) % first.size(), ab.second_of(x) % second.size());
  return pushforward_weight(w, map, target);
}

/// A weight all of whose entries are multiples of 1/n, together with the
/// integer counts n W(a,a';i).
class DenominatorNWeight {
 public:
  struct Count {
    std::size_t from;
    std::size_t to;
    std::int64_t count;
    friend bool operator==(const Count&, const Count&) = default;
  };

  static DenominatorNWeight from_weight(Weight w, std::int64_t n) {
    if (n < 1) fail(ErrorKind::shape_mismatch, "denominator must be positive");
    DenominatorNWeight d;
    d.n_ = n;
    for (int i = 0; i < w.rank(); ++i) {
      std::vector<Count> counts;
      for (const auto& e : w.edge(i)) {
        Rational scaled = e.mass * n;
        if (boost::multiprecision::denominator(scaled) != 1)
          fail(ErrorKind::not_denominator_n, "entry (" + w.alphabet().name(e.from) + ", " + w.alphabet().name(e.to) +
                                                 ") of generator " + std::to_string(i + 1) + " is not a multiple of 1/" +
                                                 std::to_string(n));
        counts.push_back({e.from, e.to, boost::multiprecision::numerator(scaled).convert_to<std::int64_t>()});
      }
      d.counts_.push_back(std::move(counts));
    }
    d.vertex_counts_.reserve(w.size());
    for (const auto& v : w.vertex()) d.vertex_counts_.push_back(boost::multiprecision::numerator(v * n).convert_to<std::int64_t>());
    d.weight_ = std::move(w);
    return d;
  }

  static DenominatorNWeight from_counts(int rank, Alphabet alphabet, std::int64_t n, const std::vector<std::vector<Count>>& counts) {
    if (n < 1) fail(ErrorKind::shape_mismatch, "denominator must be positive");
    std::vector<EdgeMeasure> edges;
    for (const auto& list : counts) {
      EdgeMeasure edge;
      edge.reserve(list.size());
      for (const auto& c : list) edge.push_back({c.from, c.to, make_rational(c.count, n)});
      edges.push_back(std::move(edge));
    }
    return from_weight(Weight::validate(rank, std::move(alphabet), std::move(edges)), n);
  }

  const Weight& weight() const { return weight_; }
  std::int64_t n() const { return n_; }
  int rank() const { return weight_.rank(); }
  const Alphabet& alphabet() const { return weight_.alphabet(); }
  const std::vector<std::int64_t>& vertex_counts() const { return vertex_counts_; }
  const std::vector<Count>& counts(int i) const { return counts_[i]; }

  friend bool operator==(const DenominatorNWeight& a, const DenominatorNWeight& b) {
    return a.n_ == b.n_ && a.weight_ == b.weight_;
  }

 private:
  DenominatorNWeight() = default;

  Weight weight_ = Weight::validate(1, Alphabet::singleton(), {EdgeMeasure{{0, 0, Rational(1)}}});
  std::int64_t n_ = 1;
  std::vector<std::vector<Count>> counts_;
  std::vector<std::int64_t> vertex_counts_;
};

}  // namespace fgel
