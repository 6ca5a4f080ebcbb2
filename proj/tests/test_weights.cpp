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


#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace fgel {
namespace {

using testing::random_weight;
using testing::uniform_weight;

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

using Dense = std::vector<std::vector<Rational>>;

TEST(Weights, ValidateExamples) {
  const Alphabet bin = Alphabet::numbered(2);
  Weight w = Weight::from_dense(1, bin, {Dense{{R(0), R(1, 2)}, {R(1, 2), R(0)}}});
  EXPECT_EQ(w.vertex()[0], R(1, 2));
  EXPECT_EQ(w.vertex()[1], R(1, 2));

  Weight v = Weight::from_dense(2, bin, {Dense{{R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4)}}, Dense{{R(1, 2), R(0)}, {R(0), R(1, 2)}}});
  EXPECT_EQ(v.vertex()[0], R(1, 2));

  try {
    Weight::from_dense(2, bin, {Dense{{R(1), R(0)}, {R(0), R(0)}}, Dense{{R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4)}}});
    FAIL() << "expected AxiomViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::axiom_violation);
    EXPECT_NE(std::string(e.what()).find("i=2"), std::string::npos);
  }
}

TEST(Weights, ValidateRejectsNegativeAndUnnormalized) {
  const Alphabet bin = Alphabet::numbered(2);
  try {
    Weight::from_dense(1, bin, {Dense{{R(1, 2), R(1, 2)}, {R(1, 2), R(-1, 2)}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::axiom_violation);
  }
  try {
    Weight::from_dense(1, bin, {Dense{{R(1, 4), R(1, 4)}, {R(1, 4), R(0)}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_normalized);
  }
  EXPECT_THROW(Weight::from_dense(1, bin, {Dense{{R(1)}}}), Error);
}

TEST(Weights, DistanceExamples) {
  const Alphabet bin = Alphabet::numbered(2);
  Weight a = Weight::from_dense(1, bin, {Dense{{R(1, 2), R(0)}, {R(0), R(1, 2)}}});
  Weight b = Weight::from_dense(1, bin, {Dense{{R(0), R(1, 2)}, {R(1, 2), R(0)}}});
  EXPECT_EQ(weight_distance(a, a), R(0));
  EXPECT_EQ(weight_distance(a, b), R(1));

  // Rank 2, generator 1 changed by 1/8 on four entries (a marginal-preserving
  // move); the second generator is shared.
  Dense shared{{R(1, 2), R(0)}, {R(0), R(1, 2)}};
  Weight c = Weight::from_dense(2, bin, {Dense{{R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4)}}, shared});
  Weight d = Weight::from_dense(2, bin, {Dense{{R(1, 8), R(3, 8)}, {R(3, 8), R(1, 8)}}, shared});
  // Oracle: half the l1 norm of the dense difference.
  Rational oracle = 0;
  for (int i = 0; i < 2; ++i)
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) oracle += boost::multiprecision::abs(c.mass(i, x, y) - d.mass(i, x, y));
  oracle /= 2;
  EXPECT_EQ(weight_distance(c, d), oracle);
  EXPECT_EQ(weight_distance(c, d), R(1, 4));

  EXPECT_THROW(weight_distance(a, c), Error);
}

TEST(Weights, DistanceSparseAgainstDense) {
  RandomStream rng(5);
  const Alphabet alphabet = Alphabet::numbered(8);
  for (int t = 0; t < 20; ++t) {
    Weight sparse = testing::random_denominator_weight(alphabet, 2, 3, rng).weight();
    Weight full = testing::random_full_weight(alphabet, 2, rng);
    Rational oracle = 0;
    for (int i = 0; i < 2; ++i)
      for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y) oracle += boost::multiprecision::abs(sparse.mass(i, x, y) - full.mass(i, x, y));
    EXPECT_EQ(weight_distance(sparse, full), oracle / 2);
    EXPECT_EQ(weight_distance(full, sparse), oracle / 2);
  }
}

TEST(Weights, FExamples) {
  Weight one = Weight::from_dense(2, Alphabet::singleton(), {Dense{{R(1)}}, Dense{{R(1)}}});
  EXPECT_DOUBLE_EQ(F_of_weight(one), 0.0);
  EXPECT_NEAR(F_of_weight(uniform_weight(Alphabet::numbered(2), 2)), std::log(2.0), 1e-15);
  EXPECT_NEAR(F_of_weight(testing::two_cycle_weight()), 0.0, 1e-15);
}

TEST(Weights, PushforwardExamples) {
  RandomStream rng(1);
  const Alphabet ab = Alphabet::product(Alphabet::numbered(2), Alphabet::numbered(3));
  Weight w = random_weight(ab, 2, rng);
  std::vector<std::size_t> identity(ab.size());
  for (std::size_t x = 0; x < ab.size(); ++x) identity[x] = x;
  EXPECT_EQ(pushforward_weight(w, identity, ab), w);

  Weight collapsed = pushforward_weight(w, std::vector<std::size_t>(ab.size(), 0), Alphabet::singleton());
  EXPECT_EQ(collapsed.mass(0, 0, 0), R(1));
  EXPECT_EQ(collapsed.mass(1, 0, 0), R(1));

  Weight second = project_second(w);
  for (int i = 0; i < 2; ++i)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t b2 = 0; b2 < 3; ++b2) {
        Rational sum = 0;
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t a2 = 0; a2 < 2; ++a2) sum += w.mass(i, ab.pair_index(a, b), ab.pair_index(a2, b2));
        EXPECT_EQ(second.mass(i, b, b2), sum);
      }
  Weight first = project_first(w);
  for (std::size_t a = 0; a < 2; ++a) {
    Rational sum = 0;
    for (std::size_t b = 0; b < 3; ++b) sum += w.vertex()[ab.pair_index(a, b)];
    EXPECT_EQ(first.vertex()[a], sum);
  }
}

TEST(Weights, PushforwardPreservesAxiom) {
  RandomStream rng(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t q = 1 + rng.below(4);
    const std::size_t target = 1 + rng.below(3);
    const int r = 1 + static_cast<int>(rng.below(3));
    Weight w = random_weight(Alphabet::numbered(q), r, rng, 2);
    std::vector<std::size_t> map(q);
    for (auto& m : map) m = rng.below(target);
    Weight pushed = pushforward_weight(w, map, Alphabet::numbered(target));
    for (std::size_t b = 0; b < target; ++b) {
      Rational sum = 0;
      for (std::size_t a = 0; a < q; ++a)
        if (map[a] == b) sum += w.vertex()[a];
      ASSERT_EQ(pushed.vertex()[b], sum);
    }
  }
}

TEST(Weights, DistanceIsPseudometric) {
  RandomStream rng(3);
  const Alphabet alphabet = Alphabet::numbered(3);
  for (int t = 0; t < 200; ++t) {
    const int r = 1 + static_cast<int>(rng.below(2));
    Weight a = random_weight(alphabet, r, rng), b = random_weight(alphabet, r, rng), c = random_weight(alphabet, r, rng);
    EXPECT_EQ(weight_distance(a, a), R(0));
    EXPECT_EQ(weight_distance(a, b), weight_distance(b, a));
    EXPECT_LE(weight_distance(a, c), weight_distance(a, b) + weight_distance(b, c));
    EXPECT_LE(weight_distance(a, b), R(r));
  }
}

TEST(Weights, FContinuityBound) {
  RandomStream rng(4);
  for (int t = 0; t < 500; ++t) {
    const std::size_t q = 2 + rng.below(3);
    const int r = 1 + static_cast<int>(rng.below(3));
    const Alphabet alphabet = Alphabet::numbered(q);
    Weight a = random_weight(alphabet, r, rng), c = random_weight(alphabet, r, rng);
    // b = (1-s) a + s c lies within distance s * d(a,c) of a.
    const Rational s = make_rational(1 + static_cast<std::int64_t>(rng.below(20)), 40);
    std::vector<Dense> mixed;
    for (int i = 0; i < r; ++i) {
      Dense da = a.dense_edge(i), dc = c.dense_edge(i);
      for (std::size_t x = 0; x < q; ++x)
        for (std::size_t y = 0; y < q; ++y) da[x][y] = (1 - s) * da[x][y] + s * dc[x][y];
      mixed.push_back(std::move(da));
    }
    Weight b = Weight::from_dense(r, alphabet, mixed);
    const double eps = to_double(weight_distance(a, b));
    if (eps > 1) continue;
    const double bound = 4 * r * (binary_entropy(eps) + eps * std::log2(static_cast<double>(q)));
    EXPECT_LE(std::abs(F_of_weight(a) - F_of_weight(b)), bound + 1e-12) << "eps=" << eps;
  }
}

TEST(Weights, DenominatorN) {
  Weight w = testing::two_cycle_weight();
  DenominatorNWeight d = DenominatorNWeight::from_weight(w, 2);
  EXPECT_EQ(d.counts(0).size(), 2u);
  EXPECT_EQ(d.vertex_counts(), (std::vector<std::int64_t>{1, 1}));
  try {
    DenominatorNWeight::from_weight(w, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_denominator_n);
  }
}

TEST(Alphabets, ProductAndBallIndexing) {
  Alphabet a = Alphabet::atomic({"x", "y"});
  Alphabet b = Alphabet::numbered(3);
  Alphabet ab = Alphabet::product(a, b);
  EXPECT_EQ(ab.size(), 6u);
  EXPECT_EQ(ab.name(ab.pair_index(1, 2)), "y|2");
  EXPECT_EQ(*ab.find("y|2"), ab.pair_index(1, 2));
  Alphabet ball = Alphabet::ball(a, 2, 1);
  EXPECT_EQ(ball.size(), 32u);
  std::vector<std::size_t> labels{1, 0, 0, 1, 1};
  std::size_t idx = ball.compose(labels);
  EXPECT_EQ(ball.digits(idx), labels);
  EXPECT_EQ(ball.name(idx), "[y,x,x,y,y]");
  EXPECT_EQ(*ball.find("[y,x,x,y,y]"), idx);
  EXPECT_THROW(Alphabet::atomic({"a", "a"}), Error);
  EXPECT_THROW(Alphabet::ball(Alphabet::numbered(2), 3, 6), Error);
}

}  // namespace
}  // namespace fgel
