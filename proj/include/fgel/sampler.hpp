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
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgel/budget.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/realize.hpp"
#include "fgel/rng.hpp"
#include "fgel/weight.hpp"

namespace fgel {

/// r independent uniform permutations of [n].
inline Homomorphism uniform_hom(std::size_t n, int rank, RandomStream& rng) {
  std::vector<Homomorphism::Perm> perms;
  for (int i = 0; i < rank; ++i) {
    Homomorphism::Perm p(n);
    std::iota(p.begin(), p.end(), 0u);
    shuffle(std::span<std::uint32_t>(p), rng);
    perms.push_back(std::move(p));
  }
  return Homomorphism::from_perms(std::move(perms));
}

/// Uniform sigma with W_{sigma,y} = W: one uniform contingency permutation per generator.
inline Homomorphism sbm_sample_k0(const Labeling& y, const DenominatorNWeight& w, RandomStream& rng) {
  if (!(y.alphabet == w.alphabet())) fail(ErrorKind::shape_mismatch, "labeling and weight use different alphabets");
  if (static_cast<std::int64_t>(y.n()) != w.n())
    fail(ErrorKind::frequency_mismatch, "labeling has " + std::to_string(y.n()) + " points, weight has denominator " + std::to_string(w.n()));
  if (y.frequencies() != w.vertex_counts())
    fail(ErrorKind::frequency_mismatch, "letter frequencies of y differ from the vertex measure of W");
  const std::size_t q = w.alphabet().size();
  std::vector<Homomorphism::Perm> perms;
  for (int i = 0; i < w.rank(); ++i) {
    std::vector<std::int64_t> table(q * q);
    for (const auto& c : w.counts(i)) table[c.from * q + c.to] = c.count;
    perms.push_back(contingency_permutation(y.symbols, q, table, &rng));
  }
  return Homomorphism::from_perms(std::move(perms));
}

/// SBM(y, W): uniform over {sigma : W_{sigma, y^k} = target}.
struct SBMSpec {
  Labeling y;
  int radius = 0;
  DenominatorNWeight target;
  std::optional<Homomorphism> witness;

  /// SBM(sigma0, y0, k): the target is W_{sigma0, y0^k}, which also certifies a nonempty fiber.
  static SBMSpec from_witness(const Homomorphism& sigma0, const Labeling& y0, int radius) {
    return {y0, radius, empirical_weight(sigma0, ball_refine(sigma0, y0, radius)), sigma0};
  }
};

/// True iff W_{sigma, y^k} equals the target counts exactly.
inline bool matches_target(const Homomorphism& sigma, const SBMSpec& spec) {
  Labeling refined = ball_refine(sigma, spec.y, spec.radius);
  const std::size_t n = sigma.n();
  std::vector<std::pair<std::size_t, std::size_t>> pairs(n);
  for (int i = 0; i < sigma.rank(); ++i) {
    const auto& p = sigma.perm(i);
    for (std::size_t j = 0; j < n; ++j) pairs[j] = {refined.symbols[j], refined.symbols[p[j]]};
    std::sort(pairs.begin(), pairs.end());
    const auto& want = spec.target.counts(i);
    std::size_t slot = 0;
    for (std::size_t j = 0; j < n;) {
      std::size_t t = j;
      while (t < n && pairs[t] == pairs[j]) ++t;
      if (slot >= want.size() || want[slot].from != pairs[j].first || want[slot].to != pairs[j].second ||
          want[slot].count != static_cast<std::int64_t>(t - j))
        return false;
      ++slot;
      j = t;
    }
    if (slot != want.size()) return false;
  }
  return true;
}

/// (n!)^r, saturating at UINT64_MAX.
inline std::uint64_t homomorphism_count(std::size_t n, int rank) {
  long double total = 1;
  for (int i = 0; i < rank; ++i)
    for (std::size_t k = 2; k <= n; ++k) total *= static_cast<long double>(k);
  return total >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(total);
}

/// All permutations of [n] in lexicographic order.
inline std::vector<Homomorphism::Perm> all_permutations(std::size_t n) {
  std::vector<Homomorphism::Perm> out;
  Homomorphism::Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Calls fn(sigma) for every homomorphism G -> Sym(n), in lexicographic order
/// of the permutation tuple.
template <class Fn>
void for_each_homomorphism(std::size_t n, int rank, Fn&& fn) {
  const auto perms = all_permutations(n);
  std::vector<std::size_t> pick(rank, 0);
  while (true) {
    std::vector<Homomorphism::Perm> tuple;
    tuple.reserve(rank);
    for (int i = 0; i < rank; ++i) tuple.push_back(perms[pick[i]]);
    fn(Homomorphism::from_perms(std::move(tuple)));
    int i = rank - 1;
    while (i >= 0 && ++pick[i] == perms.size()) pick[i--] = 0;
    if (i < 0) break;
  }
}

/// Every sigma in the fiber of the spec, by filtering all of Hom(G, Sym(n)).
inline std::vector<Homomorphism> enumerate_fiber(const SBMSpec& spec, const Budgets& budgets = {}) {
  const std::size_t n = spec.y.n();
  const int rank = spec.target.rank();
  if (homomorphism_count(n, rank) > budgets.enumeration)
    fail(ErrorKind::budget_exceeded, "(n!)^r exceeds the enumeration budget");
  std::vector<Homomorphism> fiber;
  for_each_homomorphism(n, rank, [&](Homomorphism sigma) {
    if (matches_target(sigma, spec)) fiber.push_back(std::move(sigma));
  });
  if (fiber.empty()) fail(ErrorKind::empty_fiber, "no homomorphism reproduces the target statistics");
  return fiber;
}

enum class SbmMethod { automatic, enumerate, reject, mcmc };

struct McmcOptions {
  std::uint64_t burn_in = 1000;
  std::uint64_t stride = 10;
};

/// Transposition walk on the fiber. Proposals sigma(s_i) <- tau o sigma(s_i)
/// are kept iff the statistics are unchanged. Heuristic: connectivity of the
/// fiber under these moves is not established.
class McmcChain {
 public:
  McmcChain(SBMSpec spec, Homomorphism start, McmcOptions options = {})
      : spec_(std::move(spec)), state_(std::move(start)), options_(options) {
    if (!matches_target(state_, spec_)) fail(ErrorKind::inconsistent, "chain start is not in the fiber");
  }

  const Homomorphism& state() const { return state_; }
  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t proposed() const { return proposed_; }

  void step(RandomStream& rng) {
    const std::size_t n = state_.n();
    ++proposed_;
    if (n < 2) return;
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(state_.rank())));
    const auto u = static_cast<std::uint32_t>(rng.below(n));
    auto v = static_cast<std::uint32_t>(rng.below(n - 1));
    if (v >= u) ++v;
    Homomorphism::Perm p = state_.perm(i);
    for (auto& image : p) {
      if (image == u) image = v;
      else if (image == v) image = u;
    }
    Homomorphism::Perm old = state_.perm(i);
    state_.set_perm(i, std::move(p));
    if (matches_target(state_, spec_)) {
      ++accepted_;
    } else {
      state_.set_perm(i, std::move(old));
    }
  }

  /// Advances by the stride (burn-in before the first draw) and returns the state.
  const Homomorphism& next(RandomStream& rng) {
    std::uint64_t steps = started_ ? options_.stride : options_.burn_in;
    started_ = true;
    for (std::uint64_t s = 0; s < steps; ++s) step(rng);
    if (!matches_target(state_, spec_)) fail(ErrorKind::inconsistent, "chain left the fiber");
    return state_;
  }

 private:
  SBMSpec spec_;
  Homomorphism state_;
  McmcOptions options_;
  std::uint64_t accepted_ = 0;
  std::uint64_t proposed_ = 0;
  bool started_ = false;
};

/// Sampler for one SBM spec; the enumerated fiber is cached across draws.
class SbmSampler {
 public:
  explicit SbmSampler(SBMSpec spec, Budgets budgets = {}, McmcOptions mcmc = {})
      : spec_(std::move(spec)), budgets_(budgets), mcmc_(mcmc) {
    if (spec_.radius > 0) {
      level0_ = std::make_shared<DenominatorNWeight>(
          DenominatorNWeight::from_weight(project_ball(spec_.target.weight(), 0), spec_.target.n()));
    }
  }

  const SBMSpec& spec() const { return spec_; }

  SbmMethod resolve(SbmMethod method) const {
    if (method != SbmMethod::automatic) return method;
    if (spec_.radius == 0) return SbmMethod::reject;
    if (homomorphism_count(spec_.y.n(), spec_.target.rank()) <= budgets_.enumeration) return SbmMethod::enumerate;
    return SbmMethod::reject;
  }

  Homomorphism sample(RandomStream& rng, SbmMethod method = SbmMethod::automatic) {
    method = resolve(method);
    if (spec_.radius == 0 && method != SbmMethod::mcmc && method != SbmMethod::enumerate)
      return checked(sbm_sample_k0(spec_.y, spec_.target, rng));
    switch (method) {
      case SbmMethod::enumerate: {
        if (!fiber_) fiber_ = std::make_shared<std::vector<Homomorphism>>(enumerate_fiber(spec_, budgets_));
        return checked((*fiber_)[rng.below(fiber_->size())]);
      }
      case SbmMethod::reject: {
        for (std::uint64_t t = 0; t < budgets_.reject_tries; ++t) {
          Homomorphism sigma = sbm_sample_k0(spec_.y, *level0_, rng);
          if (matches_target(sigma, spec_)) return sigma;
        }
        fail(ErrorKind::reject_budget_exceeded,
             "no accepted proposal in " + std::to_string(budgets_.reject_tries) + " tries");
      }
      case SbmMethod::mcmc: {
        if (!chain_) {
          if (!spec_.witness) fail(ErrorKind::empty_fiber, "mcmc needs a witness homomorphism to start from");
          chain_ = std::make_shared<McmcChain>(spec_, *spec_.witness, mcmc_);
        }
        return chain_->next(rng);
      }
      case SbmMethod::automatic: break;
    }
    fail(ErrorKind::shape_mismatch, "unknown sampling method");
  }

 private:
  Homomorphism checked(Homomorphism sigma) const {
    if (!matches_target(sigma, spec_)) fail(ErrorKind::inconsistent, "sample violates the SBM constraint");
    return sigma;
  }

  SBMSpec spec_;
  Budgets budgets_;
  McmcOptions mcmc_;
  std::shared_ptr<DenominatorNWeight> level0_;
  std::shared_ptr<std::vector<Homomorphism>> fiber_;
  std::shared_ptr<McmcChain> chain_;
};

inline Homomorphism sbm_sample(const SBMSpec& spec, RandomStream& rng, SbmMethod method = SbmMethod::automatic,
                               const Budgets& budgets = {}) {
  SbmSampler sampler(spec, budgets);
  return sampler.sample(rng, method);
}

struct SoficReport {
  bool sofic;
  double fraction;
  std::size_t free_points;
};

/// (D, delta)-soficity: more than (1-delta) n points moved by every sigma(g), g in D \ {e}.
inline SoficReport is_sofic(const Homomorphism& sigma, const std::vector<Word>& words, double delta) {
  std::vector<Word> moving;
  for (const Word& w : words) {
    Word r = reduce(w);
    if (!r.empty()) moving.push_back(std::move(r));
  }
  std::size_t free_points = 0;
  for (std::uint32_t j = 0; j < sigma.n(); ++j) {
    bool moved = true;
    for (const Word& g : moving) {
      if (sigma.apply(g, j) == j) {
        moved = false;
        break;
      }
    }
    if (moved) ++free_points;
  }
  const double n = static_cast<double>(sigma.n());
  return {static_cast<double>(free_points) > (1 - delta) * n, static_cast<double>(free_points) / n, free_points};
}

}  // namespace fgel
