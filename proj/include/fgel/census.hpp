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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgel/budget.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/markov.hpp"
#include "fgel/rational.hpp"
#include "fgel/realize.hpp"
#include "fgel/sampler.hpp"
#include "fgel/weight.hpp"

namespace fgel {

struct Estimate {
  double mean = 0;
  double sd = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t trials = 0;
};

/// Exact counts and/or a Monte-Carlo estimate; growth is (1/n) log of the positive quantity.
struct CountReport {
  std::optional<BigInt> exact;
  std::optional<Rational> exact_ratio;
  std::optional<Estimate> estimate;
  std::optional<double> growth_rate;
};

/// Mean, sample standard deviation and the normal 95% interval.
inline Estimate summarize(const std::vector<double>& values) {
  Estimate e;
  e.trials = values.size();
  if (values.empty()) return e;
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / values.size();
  long double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  e.mean = static_cast<double>(mean);
  e.sd = values.size() > 1 ? static_cast<double>(std::sqrt(sq / (values.size() - 1))) : 0.0;
  const double half = 1.96 * e.sd / std::sqrt(static_cast<double>(values.size()));
  e.ci_low = e.mean - half;
  e.ci_high = e.mean + half;
  return e;
}

/// W_{sigma, x^k} as a denominator-n weight over A^{B(e,k)} (over A at k = 0).
inline DenominatorNWeight empirical_weight(const Homomorphism& sigma, const Labeling& x, int radius) {
  return empirical_weight(sigma, ball_refine(sigma, x, radius));
}

/// d(W_{sigma,x^k}, W_{alpha^k}). The ball weight is materialized when it fits
/// the atom budget and evaluated lazily otherwise.
inline Rational dstar_empirical(const Homomorphism& sigma, const Labeling& x, const MarkovMeasure& m, int radius,
                                const Budgets& budgets = {}) {
  if (!(x.alphabet == m.alphabet())) fail(ErrorKind::shape_mismatch, "labeling and measure use different alphabets");
  DenominatorNWeight empirical = empirical_weight(sigma, x, radius);
  long double atoms = std::pow(static_cast<long double>(m.size()),
                               static_cast<long double>(Subtree::ball_with_shift(m.rank(), radius, 0).size()));
  if (atoms <= static_cast<long double>(budgets.atoms))
    return weight_distance(empirical.weight(), ball_weight(m, radius, budgets));
  return weight_distance(empirical.weight(), LazyBallWeight(m, radius));
}

/// The same d*_k computed on the union subtrees directly: for each generator,
/// the total variation between the empirical law of g -> x[sigma(g) j] on
/// B(e,k) union B(e,k) s_i and the measure's marginal there.
inline Rational dstar_union_subtree(const Homomorphism& sigma, const Labeling& x, const MarkovMeasure& m, int radius) {
  const std::size_t n = x.n();
  const std::size_t q = m.size();
  Rational total = 0;
  for (int i = 0; i < m.rank(); ++i) {
    Subtree tree = Subtree::ball_with_shift(m.rank(), radius, i);
    std::map<std::vector<std::size_t>, std::int64_t> seen;
    for (std::uint32_t j = 0; j < n; ++j) {
      std::vector<std::size_t> labels(tree.size());
      for (std::size_t p = 0; p < tree.size(); ++p) labels[p] = x.symbols[sigma.apply(tree.word(p), j)];
      ++seen[labels];
    }
    Rational covered = 0;
    for (const auto& [labels, count] : seen) {
      for (std::size_t l : labels)
        if (l >= q) fail(ErrorKind::shape_mismatch, "label outside the measure's alphabet");
      Rational mass = atom_mass(m, tree, labels);
      total += boost::multiprecision::abs(make_rational(count, static_cast<std::int64_t>(n)) - mass);
      covered += mass;
    }
    total += 1 - covered;
  }
  return total / 2;
}

namespace detail {

/// Incremental tracker of sum_{i,a,a'} |c_i(a,a') D - n w~_i(a,a')| where
/// w~ = D W is integral, for labelings that change one point at a time.
class IntegerDistanceTracker {
 public:
  IntegerDistanceTracker(const Weight& w, std::int64_t n, const BigInt& scale)
      : q_(w.size()), rank_(w.rank()), n_(n), scale_(static_cast<__int128>(scale.convert_to<std::int64_t>())) {
    counts_.assign(rank_, std::vector<std::int64_t>(q_ * q_, 0));
    target_.assign(rank_, std::vector<__int128>(q_ * q_, 0));
    for (int i = 0; i < rank_; ++i)
      for (const auto& e : w.edge(i)) {
        Rational t = e.mass * Rational(scale);
        target_[i][e.from * q_ + e.to] = static_cast<__int128>(boost::multiprecision::numerator(t).convert_to<std::int64_t>()) * n_;
      }
    sum_ = 0;
    for (int i = 0; i < rank_; ++i)
      for (const auto& t : target_[i]) sum_ += t;
  }

  __int128 sum() const { return sum_; }

  void add(int i, std::size_t a, std::size_t b, std::int64_t delta) {
    auto& c = counts_[i][a * q_ + b];
    const __int128 target = target_[i][a * q_ + b];
    sum_ -= magnitude(static_cast<__int128>(c) * scale_ - target);
    c += delta;
    sum_ += magnitude(static_cast<__int128>(c) * scale_ - target);
  }

 private:
  static __int128 magnitude(__int128 v) { return v < 0 ? -v : v; }

  std::size_t q_;
  int rank_;
  std::int64_t n_;
  __int128 scale_;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::vector<__int128>> target_;
  __int128 sum_;
};

inline BigInt common_denominator(const Weight& w) {
  BigInt d = 1;
  for (int i = 0; i < w.rank(); ++i)
    for (const auto& e : w.edge(i)) d = big_lcm(d, boost::multiprecision::denominator(e.mass));
  return d;
}

}  // namespace detail

/// |Omega*_k(sigma, alpha, eps)|: labelings x in A^n with d*_k < eps. With a
/// planted y the measure is a joint on A x B and the pair labeling (x, y) is
/// tested instead.
inline CountReport enumerate_good_models(const Homomorphism& sigma, const MarkovMeasure& m, int radius,
                                         const Rational& epsilon, const std::optional<Labeling>& planted = std::nullopt,
                                         const Budgets& budgets = {}) {
  const std::size_t n = sigma.n();
  const Alphabet& target = m.alphabet();
  const Alphabet& free_alphabet = planted ? target.first() : target;
  if (planted) {
    if (target.kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "planted counting needs a joint measure");
    if (!(planted->alphabet == target.second()) || planted->n() != n)
      fail(ErrorKind::shape_mismatch, "planted labeling does not match the measure's second alphabet");
  }
  const std::size_t qa = free_alphabet.size();
  long double labelings = std::pow(static_cast<long double>(qa), static_cast<long double>(n));
  if (labelings > static_cast<long double>(budgets.enumeration))
    fail(ErrorKind::budget_exceeded, std::to_string(qa) + "^" + std::to_string(n) + " labelings exceed the enumeration budget");
  if (m.rank() != sigma.rank()) fail(ErrorKind::shape_mismatch, "measure and homomorphism differ in rank");

  std::vector<std::size_t> x(n, 0);
  auto symbol = [&](std::size_t j) { return planted ? target.pair_index(x[j], planted->symbols[j]) : x[j]; };
  BigInt count = 0;

  const BigInt scale = detail::common_denominator(m.weight());
  const BigInt p = boost::multiprecision::numerator(epsilon);
  const BigInt qe = boost::multiprecision::denominator(epsilon);
  // Worst case of q_eps * sum and of 2 n D p must stay well inside 127 bits.
  const bool fast = radius == 0 && scale < (BigInt(1) << 40) && p < (BigInt(1) << 20) && qe < (BigInt(1) << 20) &&
                    n < (std::size_t{1} << 20);
  if (fast) {
    detail::IntegerDistanceTracker tracker(m.weight(), static_cast<std::int64_t>(n), scale);
    for (int i = 0; i < sigma.rank(); ++i)
      for (std::uint32_t j = 0; j < n; ++j) tracker.add(i, symbol(j), symbol(sigma.perm(i)[j]), 1);
    const __int128 eps_num = static_cast<__int128>(p.convert_to<std::int64_t>());
    const __int128 eps_den = static_cast<__int128>(qe.convert_to<std::int64_t>());
    const __int128 bound = 2 * static_cast<__int128>(n) * static_cast<__int128>(scale.convert_to<std::int64_t>()) * eps_num;
    // Relabeling j touches the pairs starting at j and at sigma_i^{-1}(j).
    std::uint64_t good = 0;
    std::vector<std::uint32_t> touched;
    auto relabel = [&](std::size_t j, std::size_t value) {
      for (int i = 0; i < sigma.rank(); ++i) {
        touched.clear();
        touched.push_back(static_cast<std::uint32_t>(j));
        std::uint32_t back = sigma.inverse_perm(i)[j];
        if (back != j) touched.push_back(back);
        for (auto s : touched) tracker.add(i, symbol(s), symbol(sigma.perm(i)[s]), -1);
      }
      x[j] = value;
      for (int i = 0; i < sigma.rank(); ++i) {
        touched.clear();
        touched.push_back(static_cast<std::uint32_t>(j));
        std::uint32_t back = sigma.inverse_perm(i)[j];
        if (back != j) touched.push_back(back);
        for (auto s : touched) tracker.add(i, symbol(s), symbol(sigma.perm(i)[s]), 1);
      }
    };
    while (true) {
      if (eps_den * tracker.sum() < bound) ++good;
      std::size_t j = 0;
      while (j < n && x[j] + 1 == qa) {
        relabel(j, 0);
        ++j;
      }
      if (j == n) break;
      relabel(j, x[j] + 1);
    }
    count = good;
  } else {
    std::optional<Weight> materialized;
    std::optional<LazyBallWeight> lazy;
    long double atoms = std::pow(static_cast<long double>(m.size()),
                                 static_cast<long double>(Subtree::ball_with_shift(m.rank(), radius, 0).size()));
    if (atoms <= static_cast<long double>(budgets.atoms)) materialized = ball_weight(m, radius, budgets);
    else lazy.emplace(m, radius);
    std::vector<std::size_t> labels(n);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) labels[j] = symbol(j);
      Labeling joint{target, labels};
      DenominatorNWeight w = empirical_weight(sigma, joint, radius);
      Rational d = materialized ? weight_distance(w.weight(), *materialized) : weight_distance(w.weight(), *lazy);
      if (d < epsilon) ++count;
      std::size_t j = 0;
      while (j < n && x[j] + 1 == qa) x[j++] = 0;
      if (j == n) break;
      ++x[j];
    }
  }
  CountReport report;
  report.exact = count;
  if (count > 0) report.growth_rate = std::log(count.convert_to<double>()) / static_cast<double>(n);
  return report;
}

/// Z_n(W) = n! prod_b (nW(b))!^{2r-1} / prod_{i,b,b'} (nW(b,b';i))!, exact.
inline BigInt z_n(const DenominatorNWeight& w) {
  const std::int64_t n = w.n();
  const int r = w.rank();
  BigInt top = factorial(static_cast<std::uint64_t>(n));
  for (std::int64_t c : w.vertex_counts()) {
    BigInt f = factorial(static_cast<std::uint64_t>(c));
    for (int e = 0; e < 2 * r - 1; ++e) top *= f;
  }
  BigInt bottom = 1;
  for (int i = 0; i < r; ++i)
    for (const auto& c : w.counts(i)) bottom *= factorial(static_cast<std::uint64_t>(c.count));
  BigInt quotient = top / bottom;
  if (quotient * bottom != top) fail(ErrorKind::non_integer_result, "Z_n numerator is not divisible by the denominator");
  return quotient;
}

/// Literal count of pairs (sigma, y) with W_{sigma,y} = W.
inline BigInt z_n_bruteforce(const DenominatorNWeight& w, const Budgets& budgets = {}) {
  const std::size_t n = static_cast<std::size_t>(w.n());
  const std::size_t q = w.alphabet().size();
  const int r = w.rank();
  long double work = static_cast<long double>(homomorphism_count(n, r)) *
                     std::pow(static_cast<long double>(q), static_cast<long double>(n));
  if (work > static_cast<long double>(budgets.enumeration))
    fail(ErrorKind::budget_exceeded, "brute-force Z_n exceeds the enumeration budget");
  std::vector<std::vector<std::int64_t>> want(r, std::vector<std::int64_t>(q * q, 0));
  for (int i = 0; i < r; ++i)
    for (const auto& c : w.counts(i)) want[i][c.from * q + c.to] = c.count;
  std::uint64_t total = 0;
  for_each_homomorphism(n, r, [&](const Homomorphism& sigma) {
    std::vector<std::size_t> y(n, 0);
    while (true) {
      if (contingency_counts(sigma, y, q) == want) ++total;
      std::size_t j = 0;
      while (j < n && y[j] + 1 == q) y[j++] = 0;
      if (j == n) break;
      ++y[j];
    }
  });
  return BigInt(total);
}

struct ZBoundsReport {
  bool pass;
  /// log Z - F n - r log n! - ((1-r)/2) log n.
  double log_ratio;
  /// log_ratio + r|B|^2 log(3 sqrt n), must be >= 0.
  double lower_slack;
  /// r|B|^2 log(3 sqrt n) - log_ratio, must be >= 0.
  double upper_slack;
};

/// Both sides of (3 sqrt n)^{-r|B|^2} <= Z / (e^{Fn} (n!)^r n^{(1-r)/2}) <= (3 sqrt n)^{r|B|^2}, in log space.
inline ZBoundsReport zbounds_check(const DenominatorNWeight& w) {
  const std::int64_t n = w.n();
  const int r = w.rank();
  const long double q = static_cast<long double>(w.alphabet().size());
  long double log_z = log_factorial(static_cast<std::uint64_t>(n));
  for (std::int64_t c : w.vertex_counts()) log_z += (2 * r - 1) * log_factorial(static_cast<std::uint64_t>(c));
  for (int i = 0; i < r; ++i)
    for (const auto& c : w.counts(i)) log_z -= log_factorial(static_cast<std::uint64_t>(c.count));
  const long double ln = std::log(static_cast<long double>(n));
  const long double ratio = log_z - static_cast<long double>(F_of_weight(w.weight())) * n -
                            r * log_factorial(static_cast<std::uint64_t>(n)) - (1 - r) / 2.0L * ln;
  const long double allowance = r * q * q * std::log(3 * std::sqrt(static_cast<long double>(n)));
  ZBoundsReport report;
  report.log_ratio = static_cast<double>(ratio);
  report.lower_slack = static_cast<double>(ratio + allowance);
  report.upper_slack = static_cast<double>(allowance - ratio);
  report.pass = report.lower_slack >= 0 && report.upper_slack >= 0;
  return report;
}

/// Z_n(W_AB) / Z_n(pi_B W_AB): the expected number of x with W_{sigma,(x,y)} = W_AB
/// for sigma drawn from SBM(y, pi_B W_AB).
inline Rational expected_planted_count_exact(const DenominatorNWeight& joint) {
  if (joint.alphabet().kind() != Alphabet::Kind::product)
    fail(ErrorKind::shape_mismatch, "planted count needs an A x B weight");
  DenominatorNWeight second = DenominatorNWeight::from_weight(project_second(joint.weight()), joint.n());
  BigInt below = z_n(second);
  if (below == 0) fail(ErrorKind::empty_fiber, "the B-marginal has an empty fiber");
  return Rational(z_n(joint), below);
}

}  // namespace fgel
