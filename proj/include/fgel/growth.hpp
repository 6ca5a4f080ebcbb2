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
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fgel/budget.hpp"
#include "fgel/census.hpp"
#include "fgel/entropy.hpp"
#include "fgel/markov.hpp"
#include "fgel/parallel.hpp"
#include "fgel/realize.hpp"
#include "fgel/rng.hpp"
#include "fgel/sampler.hpp"

namespace fgel {

enum class GrowthSampler { uniform, sbm };

inline const char* to_string(GrowthSampler s) { return s == GrowthSampler::uniform ? "uniform" : "sbm"; }

struct GrowthConfig {
  /// Target measure. For the SBM sampler it is a joint measure on A x B whose
  /// B-marginal is planted.
  MarkovMeasure measure;
  GrowthSampler sampler = GrowthSampler::uniform;
  int radius = 0;
  Rational epsilon = make_rational(1, 10);
  std::vector<std::int64_t> n_grid{6, 8, 10, 12};
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
  /// Depth of the f_rel bracket reported next to joint experiments.
  int reference_depth = 1;
  SbmMethod sbm_method = SbmMethod::automatic;
  Budgets budgets{};
  unsigned threads = 0;
};

struct GrowthRow {
  std::int64_t n = 0;
  int radius = 0;
  /// Planting level m_n (0 for the uniform sampler).
  int level = 0;
  Rational epsilon;
  Estimate estimate;
  std::optional<double> growth_rate;
  double reference_value = 0;
  std::string reference_kind;
  std::string sampler;
  std::uint64_t seed = 0;
};

/// m_n = max(0, floor(log log n)), lowered until the planted ball weight fits the atom budget.
inline int planting_level(std::int64_t n, int rank, std::size_t base_size, const Budgets& budgets) {
  int level = 0;
  if (n >= 3) level = std::max(0, static_cast<int>(std::floor(std::log(std::log(static_cast<double>(n))))));
  while (level > 0) {
    long double atoms = std::pow(static_cast<long double>(base_size), static_cast<long double>(ball_size(rank, level)));
    if (atoms <= static_cast<long double>(budgets.atoms)) break;
    --level;
  }
  return level;
}

/// Planted pair (sigma_n, y_n): the B-marginal rounded to denominator n and realized deterministically.
inline Realization planted_pair(const MarkovMeasure& joint, std::int64_t n) {
  Weight second = project_second(joint.weight());
  return realize_weight(round_denominator_n(second, n));
}

/// Monte-Carlo estimate of E|Omega| per n, with log-of-mean growth rates.
inline std::vector<GrowthRow> growth_rate_experiment(const GrowthConfig& config) {
  const MarkovMeasure& m = config.measure;
  std::vector<GrowthRow> rows;
  std::vector<std::pair<std::string, double>> references;
  if (config.sampler == GrowthSampler::uniform) {
    references.push_back({"f_markov", F_of_weight(m.weight())});
  } else {
    EntropyOptions options;
    options.budgets = config.budgets;
    Bracket b = f_rel_bracket(m, config.reference_depth, options);
    references.push_back({"f_bracket_low", b.lower});
    references.push_back({"f_bracket_high", b.upper});
  }
  for (std::int64_t n : config.n_grid) {
    if (n < 1) fail(ErrorKind::shape_mismatch, "grid values of n must be positive");
    std::vector<double> counts(config.trials);
    const RandomStream root(config.seed, static_cast<std::uint64_t>(n));
    int level = 0;
    if (config.sampler == GrowthSampler::uniform) {
      parallel_for(
          config.trials,
          [&](std::size_t t) {
            RandomStream rng = root.split(t);
            Homomorphism sigma = uniform_hom(static_cast<std::size_t>(n), m.rank(), rng);
            CountReport c = enumerate_good_models(sigma, m, config.radius, config.epsilon, std::nullopt, config.budgets);
            counts[t] = c.exact->convert_to<double>();
          },
          config.threads);
    } else {
      if (m.alphabet().kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "SBM growth needs a joint measure");
      level = planting_level(n, m.rank(), m.alphabet().second().size(), config.budgets);
      Realization planted = planted_pair(m, n);
      SBMSpec spec = SBMSpec::from_witness(planted.sigma, planted.labels, level);
      parallel_for(
          config.trials,
          [&](std::size_t t) {
            RandomStream rng = root.split(t);
            SbmSampler sampler(spec, config.budgets);
            Homomorphism sigma = sampler.sample(rng, config.sbm_method);
            CountReport c = enumerate_good_models(sigma, m, config.radius, config.epsilon, planted.labels, config.budgets);
            counts[t] = c.exact->convert_to<double>();
          },
          config.threads);
    }
    Estimate e = summarize(counts);
    for (const auto& [kind, value] : references) {
      GrowthRow row;
      row.n = n;
      row.radius = config.radius;
      row.level = level;
      row.epsilon = config.epsilon;
      row.estimate = e;
      if (e.mean > 0) row.growth_rate = std::log(e.mean) / static_cast<double>(n);
      row.reference_value = value;
      row.reference_kind = kind;
      row.sampler = to_string(config.sampler);
      row.seed = config.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

/// CSV with columns n,k,epsilon,trials,mean_count,ci_low,ci_high,growth_rate,
/// reference_value,reference_kind,sampler,seed. growth_rate is empty when the mean is 0.
inline std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::ostringstream out;
  out << "n,k,epsilon,trials,mean_count,ci_low,ci_high,growth_rate,reference_value,reference_kind,sampler,seed\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.radius << ',' << format_number(to_double(row.epsilon)) << ',' << row.estimate.trials << ','
        << format_number(row.estimate.mean) << ',' << format_number(row.estimate.ci_low) << ','
        << format_number(row.estimate.ci_high) << ',' << (row.growth_rate ? format_number(*row.growth_rate) : "") << ','
        << format_number(row.reference_value) << ',' << row.reference_kind << ',' << row.sampler << ',' << row.seed << '\n';
  }
  return out.str();
}

}  // namespace fgel
