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

#include "support.hpp"

namespace fgel {
namespace {

using testing::random_denominator_weight;
using testing::random_weight;

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

using Dense = std::vector<std::vector<Rational>>;

/// Checks the postconditions of round_with_marginal: denominator n (by type),
/// exact B-marginal and the distance bound.
void expect_rounding_ok(const Weight& w, const DenominatorNWeight& marginal, std::int64_t n, const Rational& delta) {
  DenominatorNWeight out = round_with_marginal(w, marginal, n);
  ASSERT_EQ(out.n(), n);
  EXPECT_EQ(project_second(out.weight()), marginal.weight());
  const auto size = static_cast<std::int64_t>(w.size());
  const Rational bound = 265 * w.rank() * (delta + make_rational(size * size, n));
  EXPECT_LE(weight_distance(out.weight(), w), bound);
}

TEST(Rounding, ExactInputIsFixed) {
  RandomStream rng(31);
  const Alphabet ab = Alphabet::product(Alphabet::numbered(2), Alphabet::numbered(3));
  for (int t = 0; t < 20; ++t) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(20));
    DenominatorNWeight w = random_denominator_weight(ab, 1 + static_cast<int>(rng.below(3)), n, rng);
    DenominatorNWeight marginal = DenominatorNWeight::from_weight(project_second(w.weight()), n);
    DenominatorNWeight out = round_with_marginal(w.weight(), marginal, n);
    EXPECT_EQ(out, w);
    EXPECT_EQ(round_denominator_n(w.weight(), n).weight(), w.weight());
  }
}

TEST(Rounding, RandomInstancesWithinBound) {
  RandomStream rng(32);
  for (int t = 0; t < 300; ++t) {
    const std::size_t na = 1 + rng.below(3), nb = 1 + rng.below(3);
    const int r = 1 + static_cast<int>(rng.below(3));
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(40));
    Weight w = random_weight(Alphabet::product(Alphabet::numbered(na), Alphabet::numbered(nb)), r, rng);
    // A nearby marginal from rounding the B-projection, or an unrelated one.
    DenominatorNWeight marginal = rng.below(2) ? round_denominator_n(project_second(w), n)
                                               : random_denominator_weight(Alphabet::numbered(nb), r, n, rng);
    const Rational delta = weight_distance(project_second(w), marginal.weight());
    expect_rounding_ok(w, marginal, n, delta);
  }
}

TEST(Rounding, SmallBinaryExample) {
  RandomStream rng(33);
  for (int t = 0; t < 200; ++t) {
    Weight w = random_weight(Alphabet::product(Alphabet::numbered(2), Alphabet::numbered(2)), 1, rng);
    DenominatorNWeight marginal = round_denominator_n(project_second(w), 4);
    const Rational delta = weight_distance(project_second(w), marginal.weight());
    expect_rounding_ok(w, marginal, 4, delta);
  }
}

TEST(Rounding, DenominatorNExamples) {
  Weight uniform = testing::uniform_weight(Alphabet::numbered(2), 2);
  DenominatorNWeight u8 = round_denominator_n(uniform, 8);
  for (int i = 0; i < 2; ++i)
    for (const auto& c : u8.counts(i)) EXPECT_EQ(c.count, 2);

  Weight w = Weight::from_dense(1, Alphabet::numbered(2), {Dense{{R(1, 3), R(1, 3)}, {R(1, 3), R(0)}}});
  DenominatorNWeight d5 = round_denominator_n(w, 5);
  EXPECT_EQ(d5.n(), 5);
  EXPECT_LE(weight_distance(d5.weight(), w), make_rational(265 * 4, 5));
}

TEST(Rounding, PlainRoundingBound) {
  RandomStream rng(34);
  for (int t = 0; t < 300; ++t) {
    const std::size_t q = 1 + rng.below(4);
    const int r = 1 + static_cast<int>(rng.below(3));
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(60));
    Weight w = random_weight(Alphabet::numbered(q), r, rng);
    DenominatorNWeight d = round_denominator_n(w, n);
    EXPECT_LE(weight_distance(d.weight(), w), make_rational(265 * r * static_cast<std::int64_t>(q * q), n));
  }
}

TEST(Rounding, RejectsBadMarginal) {
  RandomStream rng(35);
  Weight w = random_weight(Alphabet::product(Alphabet::numbered(2), Alphabet::numbered(2)), 1, rng);
  DenominatorNWeight marginal = round_denominator_n(project_second(w), 6);
  try {
    round_with_marginal(w, marginal, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::marginal_not_denominator_n);
  }
}

TEST(Realize, SwapExample) {
  DenominatorNWeight w = DenominatorNWeight::from_counts(1, Alphabet::numbered(2), 2, {{{0, 1, 1}, {1, 0, 1}}});
  Realization out = realize_weight(w);
  EXPECT_EQ(out.sigma.perm(0), (Homomorphism::Perm{1, 0}));
  auto freq = out.labels.frequencies();
  EXPECT_EQ(freq, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(empirical_weight(out.sigma, out.labels), w);
}

TEST(Realize, SingletonAlphabet) {
  DenominatorNWeight w = DenominatorNWeight::from_counts(2, Alphabet::singleton(), 5, {{{0, 0, 5}}, {{0, 0, 5}}});
  RandomStream rng(36);
  Realization out = realize_weight(w, &rng);
  EXPECT_EQ(out.labels.symbols, std::vector<std::size_t>(5, 0));
  EXPECT_EQ(empirical_weight(out.sigma, out.labels), w);
}

TEST(Realize, RoundTripDeterministicAndRandom) {
  RandomStream rng(37);
  for (int t = 0; t < 300; ++t) {
    const std::size_t q = 1 + rng.below(4);
    const int r = 1 + static_cast<int>(rng.below(3));
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(60));
    DenominatorNWeight w = random_denominator_weight(q, r, n, rng);
    EXPECT_EQ(empirical_weight(realize_weight(w).sigma, realize_weight(w).labels), w);
    RandomStream local = rng.split(t);
    Realization out = realize_weight(w, &local);
    EXPECT_EQ(empirical_weight(out.sigma, out.labels), w);
  }
}

TEST(Realize, ContingencyMismatchIsReported) {
  try {
    contingency_permutation({0, 0, 1}, 2, {1, 0, 1, 1}, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::frequency_mismatch);
  }
}

TEST(BallRefine, Examples) {
  Homomorphism cycle = Homomorphism::from_perms({{1, 2, 0}});
  Labeling x = make_labeling(Alphabet::numbered(2), {0, 1, 0});
  EXPECT_EQ(ball_refine(cycle, x, 0), x);
  Labeling x1 = ball_refine(cycle, x, 1);
  // Positions (e, s, S) of point 1 read x at points (1, 2, 3).
  EXPECT_EQ(x1.alphabet.digits(x1.symbols[0]), (std::vector<std::size_t>{0, 1, 0}));
  // Point 2: (x[2], x[3], x[1]).
  EXPECT_EQ(x1.alphabet.digits(x1.symbols[1]), (std::vector<std::size_t>{1, 0, 0}));

  Homomorphism id = Homomorphism::identity(4, 2);
  Labeling y = make_labeling(Alphabet::numbered(3), {2, 0, 1, 2});
  Labeling y2 = ball_refine(id, y, 2);
  for (std::size_t j = 0; j < 4; ++j)
    EXPECT_EQ(y2.alphabet.digits(y2.symbols[j]), std::vector<std::size_t>(ball_size(2, 2), y.symbols[j]));
}

TEST(BallRefine, MatchesActionWordByWord) {
  RandomStream rng(38);
  Homomorphism sigma = uniform_hom(7, 2, rng);
  Labeling x = make_labeling(Alphabet::numbered(2), {0, 1, 1, 0, 1, 0, 0});
  Labeling x2 = ball_refine(sigma, x, 2);
  Subtree ball = Subtree::ball(2, 2);
  for (std::uint32_t j = 0; j < 7; ++j)
    for (std::size_t p = 0; p < ball.size(); ++p) EXPECT_EQ(x2.alphabet.digit(x2.symbols[j], p), x.symbols[sigma.apply(ball.word(p), j)]);
}

TEST(BallConsistency, RoundTripAndCorruption) {
  RandomStream rng(39);
  Homomorphism sigma = uniform_hom(9, 2, rng);
  std::vector<std::size_t> raw(9);
  for (auto& s : raw) s = rng.below(2);
  Labeling x = make_labeling(Alphabet::numbered(2), raw);
  Labeling big = ball_refine(sigma, x, 1);
  EXPECT_EQ(check_ball_consistency(sigma, big), x);

  Labeling bad = big;
  const std::size_t flip_position = 3;
  auto digits = bad.alphabet.digits(bad.symbols[4]);
  digits[flip_position] ^= 1;
  bad.symbols[4] = bad.alphabet.compose(digits);
  try {
    check_ball_consistency(sigma, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::inconsistent);
    const std::string what = e.what();
    EXPECT_NE(what.find("point 5"), std::string::npos) << what;
    EXPECT_NE(what.find(format_word(Subtree::ball(2, 1).word(flip_position))), std::string::npos) << what;
  }
}

TEST(BallConsistency, RealizedBallWeightIsConsistent) {
  // Any (sigma, Y) reproducing the statistics of some (sigma0, y0^k) is a genuine refinement.
  RandomStream rng(40);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + static_cast<int>(rng.below(2));
    const int k = 1 + static_cast<int>(rng.below(r == 1 ? 2 : 1));
    const std::size_t n = 4 + rng.below(30);
    Homomorphism sigma0 = uniform_hom(n, r, rng);
    std::vector<std::size_t> raw(n);
    for (auto& s : raw) s = rng.below(2);
    Labeling y0k = ball_refine(sigma0, make_labeling(Alphabet::numbered(2), raw), k);
    DenominatorNWeight target = empirical_weight(sigma0, y0k);
    RandomStream local = rng.split(t);
    Realization out = realize_weight(target, &local);
    EXPECT_EQ(empirical_weight(out.sigma, out.labels), target);
    Labeling center;
    EXPECT_NO_THROW(center = check_ball_consistency(out.sigma, out.labels));
    EXPECT_EQ(ball_refine(out.sigma, center, k), out.labels);
  }
}

TEST(BallApproximation, CenterRefinementStaysClose) {
  // d(W_{sigma,X}, W_{sigma,(pi_e X)^k}) <= 2r|B(e,k)| d(W_{sigma,X}, ball weight).
  RandomStream rng(41);
  for (int t = 0; t < 60; ++t) {
    const int r = 1 + static_cast<int>(rng.below(2));
    const int k = 1;
    const std::size_t n = 6 + rng.below(30);
    MarkovMeasure m(testing::random_full_weight(Alphabet::numbered(2), r, rng));
    Weight bw = ball_weight(m, k);
    Homomorphism sigma = uniform_hom(n, r, rng);
    std::vector<std::size_t> raw(n);
    for (auto& s : raw) s = rng.below(2);
    Labeling X = ball_refine(sigma, make_labeling(Alphabet::numbered(2), raw), k);
    const std::size_t flips = rng.below(4);
    for (std::size_t f = 0; f < flips; ++f) X.symbols[rng.below(n)] = rng.below(X.alphabet.size());
    const Rational eps = weight_distance(empirical_weight(sigma, X).weight(), bw);
    const Rational lhs =
        weight_distance(empirical_weight(sigma, X).weight(), empirical_weight(sigma, ball_refine(sigma, center_labels(X), k)).weight());
    EXPECT_LE(lhs, 2 * r * static_cast<std::int64_t>(ball_size(r, k)) * eps);
  }
}

TEST(Nonvacuity, RoundRealizeConverges) {
  RandomStream rng(42);
  MarkovMeasure m(testing::random_full_weight(Alphabet::numbered(2), 2, rng));
  for (std::int64_t n : {50, 100, 200}) {
    DenominatorNWeight rounded = round_denominator_n(m.weight(), n);
    RandomStream local = rng.split(static_cast<std::uint64_t>(n));
    Realization out = realize_weight(rounded, &local);
    const Rational d = weight_distance(empirical_weight(out.sigma, out.labels).weight(), m.weight());
    EXPECT_EQ(d, weight_distance(rounded.weight(), m.weight()));
    EXPECT_LE(d, make_rational(265 * 2 * 4, n));
  }
}

}  // namespace
}  // namespace fgel
