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


// fgel command-line front end.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgel/fgel.hpp"
#include "fgel/io.hpp"

namespace {

using fgel::io::Json;

enum Exit : int { kOk = 0, kFailed = 1, kValidation = 2, kBudget = 3, kUsage = 64, kMalformed = 65 };

struct Globals {
  std::uint64_t seed = 0;
  std::string output;
  std::string format;
  std::uint64_t budget_atoms = fgel::Budgets{}.atoms;
  std::uint64_t budget_enum = fgel::Budgets{}.enumeration;
  unsigned threads = 0;

  fgel::Budgets budgets() const {
    fgel::Budgets b;
    b.atoms = budget_atoms;
    b.enumeration = budget_enum;
    return b;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + g.output + "'");
  out << text;
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

/// Scalar results print bare unless JSON is requested.
void emit_scalar(const Globals& g, const std::string& key, const Json& value, const std::string& plain) {
  if (g.format == "json") {
    emit_json(g, Json{{key, value}});
  } else {
    emit(g, plain + "\n");
  }
}

std::string number(double v) { return fgel::format_number(v); }

Json estimate_json(const fgel::Estimate& e) {
  return {{"mean", e.mean}, {"sd", e.sd}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"trials", e.trials}};
}

/// "6..12", "6..12:2" or "6,8,10,12".
std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 1) throw UsageError("bad --n grid '" + text + "'");
    return static_cast<std::int64_t>(v);
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    std::string rest = text.substr(dots + 2);
    std::int64_t step = 1;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
      step = to_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const std::int64_t lo = to_int(text.substr(0, dots)), hi = to_int(rest);
    if (hi < lo) throw UsageError("empty --n range '" + text + "'");
    for (std::int64_t n = lo; n <= hi; n += step) out.push_back(n);
    return out;
  }
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) out.push_back(to_int(part));
  if (out.empty()) throw UsageError("empty --n grid");
  return out;
}

fgel::SbmMethod parse_method(const std::string& name) {
  if (name == "auto") return fgel::SbmMethod::automatic;
  if (name == "enumerate") return fgel::SbmMethod::enumerate;
  if (name == "reject") return fgel::SbmMethod::reject;
  return fgel::SbmMethod::mcmc;
}

const char* method_name(fgel::SbmMethod m) {
  switch (m) {
    case fgel::SbmMethod::automatic: return "auto";
    case fgel::SbmMethod::enumerate: return "enumerate";
    case fgel::SbmMethod::reject: return "reject";
    case fgel::SbmMethod::mcmc: return "mcmc";
  }
  return "auto";
}

/// SBM spec file: {"labels": {"symbols": [...]}, "alphabet": [...], "radius": k,
/// "target": denominator weight (optional), "witness": homomorphism (optional)}.
fgel::SBMSpec sbm_spec_from_json(const Json& j) {
  const int radius = j.value("radius", 0);
  std::optional<fgel::Homomorphism> witness;
  if (j.contains("witness")) witness = fgel::io::homomorphism_from_json(j.at("witness"));
  std::optional<fgel::DenominatorNWeight> target;
  if (j.contains("target")) target = fgel::io::denominator_weight_from_json(j.at("target"));
  fgel::Alphabet alphabet;
  if (j.contains("alphabet")) {
    alphabet = fgel::io::alphabet_from_names(j.at("alphabet").get<std::vector<std::string>>());
  } else if (target) {
    alphabet = radius == 0 ? target->alphabet() : target->alphabet().base();
  } else {
    fgel::fail(fgel::ErrorKind::parse_error, "SBM spec needs \"alphabet\" or \"target\"");
  }
  fgel::Labeling y = fgel::io::labeling_from_json(j.at("labels"), alphabet);
  if (!target) {
    if (!witness) fgel::fail(fgel::ErrorKind::parse_error, "SBM spec needs \"target\" or \"witness\"");
    return fgel::SBMSpec::from_witness(*witness, y, radius);
  }
  return {y, radius, *target, witness};
}

// Self-contained exact checks against independent routes.
int selftest(const Globals& g) {
  fgel::RandomStream rng(g.seed, 0x5e1f);
  auto random_pair = [&](std::size_t n, int rank, std::size_t q) {
    fgel::Homomorphism sigma = fgel::uniform_hom(n, rank, rng);
    std::vector<std::size_t> labels(n);
    for (auto& s : labels) s = rng.below(q);
    return std::pair{sigma, fgel::make_labeling(fgel::Alphabet::numbered(q), labels)};
  };
  struct Check {
    std::string name;
    int total;
    std::function<bool(int)> run;
  };
  const std::vector<Check> checks{
      {"z_n against brute force", 30,
       [&](int t) {
         auto [sigma, x] = random_pair(2 + rng.below(3), 1 + t % 2, 2);
         fgel::DenominatorNWeight w = fgel::empirical_weight(sigma, x);
         return fgel::z_n(w) == fgel::z_n_bruteforce(w, g.budgets());
       }},
      {"realization round trip", 100,
       [&](int t) {
         auto [sigma, x] = random_pair(1 + rng.below(60), 1 + t % 3, 1 + rng.below(4));
         fgel::DenominatorNWeight w = fgel::empirical_weight(sigma, x);
         fgel::RandomStream local = rng.split(static_cast<std::uint64_t>(t));
         fgel::Realization real = fgel::realize_weight(w, t % 2 ? &local : nullptr);
         return fgel::empirical_weight(real.sigma, real.labels) == w;
       }},
      {"rounding keeps the prescribed marginal", 100,
       [&](int t) {
         const int rank = 1 + t % 2;
         auto [sigma, x] = random_pair(2 + rng.below(30), rank, 4);
         const fgel::Alphabet ab = fgel::Alphabet::product(fgel::Alphabet::numbered(2), fgel::Alphabet::numbered(2));
         fgel::Weight w = fgel::empirical_weight(sigma, fgel::Labeling{ab, x.symbols}).weight();
         const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(40));
         fgel::DenominatorNWeight marginal = fgel::round_denominator_n(fgel::project_second(w), n);
         fgel::DenominatorNWeight rounded = fgel::round_with_marginal(w, marginal, n);
         return fgel::project_second(rounded.weight()) == marginal.weight();
       }},
      {"d* routes agree", 30,
       [&](int t) {
         auto [sigma0, x0] = random_pair(12, 2, 2);
         for (std::size_t j = 0; j < 2; ++j) x0.symbols[j] = j;
         fgel::MarkovMeasure m(fgel::empirical_weight(sigma0, x0).weight());
         auto [sigma, x] = random_pair(3 + rng.below(20), 2, 2);
         const int k = t % 2;
         return fgel::dstar_empirical(sigma, x, m, k) == fgel::dstar_union_subtree(sigma, x, m, k);
       }},
  };
  bool all = true;
  std::ostringstream out;
  for (const auto& check : checks) {
    int passed = 0;
    for (int t = 0; t < check.total; ++t) passed += check.run(t);
    const bool ok = passed == check.total;
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << check.name << " (" << passed << "/" << check.total << ")\n";
  }
  emit(g, out.str());
  return all ? kOk : kFailed;
}

int exit_code_for(const fgel::Error& e) {
  switch (e.kind()) {
    case fgel::ErrorKind::parse_error: return kMalformed;
    case fgel::ErrorKind::budget_exceeded:
    case fgel::ErrorKind::reject_budget_exceeded: return kBudget;
    default: return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact weight calculus and sofic counting experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step")->capture_default_str();
  app.add_option("--output,-o", g.output, "Write results to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--budget-atoms", g.budget_atoms, "Atom budget for materialized marginals")->capture_default_str();
  app.add_option("--budget-enum", g.budget_enum, "Budget for exhaustive enumeration")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)");
  app.fallthrough();

  std::function<int()> action;
  auto load = [](const std::string& path) { return fgel::io::read_json_file(path); };

  std::string weight_path, marginal_path, measure_path, measure_b_path, hom_path, labels_path, spec_path;
  std::int64_t n = 0;
  int rank = 1, radius = 0, depth = 1, count = 1;
  std::string eps_text = "1/10", method_text = "auto", sampler_text = "uniform", grid_text = "6,8,10,12";
  std::uint64_t trials = 2000, iterations = 2000, restarts = 8, burn_in = 1000, stride = 10;
  std::vector<std::string> words;
  int ball_radius = -1;
  double delta = 0.2;
  bool shuffle = false;
  int reference_depth = 1;

  auto* validate = app.add_subcommand("validate", "Check a weight (and its denominator n when given)");
  validate->add_option("--weight", weight_path)->required();
  validate->callback([&] {
    action = [&] {
      Json j = load(weight_path);
      fgel::Weight w = fgel::io::weight_from_json(j);
      Json out{{"valid", true}, {"rank", w.rank()}, {"alphabet_size", w.alphabet().size()}};
      if (j.contains("n")) out["n"] = fgel::io::denominator_weight_from_json(j).n();
      if (g.format == "json") {
        emit_json(g, out);
      } else {
        emit(g, "valid\n");
      }
      return kOk;
    };
  });

  auto* fw = app.add_subcommand("fw", "F of a weight");
  fw->add_option("--weight", weight_path)->required();
  fw->callback([&] {
    action = [&] {
      const double f = fgel::F_of_weight(fgel::io::weight_from_json(load(weight_path)));
      emit_scalar(g, "F", f, number(f));
      return kOk;
    };
  });

  auto* round = app.add_subcommand("round", "Nearby denominator-n weight");
  round->add_option("--weight", weight_path)->required();
  round->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  round->callback([&] {
    action = [&] {
      auto w = fgel::round_denominator_n(fgel::io::weight_from_json(load(weight_path)), n);
      emit_json(g, fgel::io::denominator_weight_to_json(w));
      return kOk;
    };
  });

  auto* round_marginal = app.add_subcommand("round-marginal", "Round a joint weight keeping a prescribed B-marginal");
  round_marginal->add_option("--weight", weight_path, "Joint weight on A x B")->required();
  round_marginal->add_option("--marginal", marginal_path, "Denominator-n weight on B")->required();
  round_marginal->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  round_marginal->callback([&] {
    action = [&] {
      fgel::Weight w = fgel::io::weight_from_json(load(weight_path));
      auto marginal = fgel::io::denominator_weight_from_json(load(marginal_path));
      auto rounded = fgel::round_with_marginal(w, marginal, n);
      Json out = fgel::io::denominator_weight_to_json(rounded);
      out["distance"] = fgel::to_string(fgel::weight_distance(rounded.weight(), w));
      emit_json(g, out);
      return kOk;
    };
  });

  auto* realize = app.add_subcommand("realize", "Homomorphism and labeling with a given denominator-n weight");
  realize->add_option("--weight", weight_path)->required();
  realize->add_flag("--shuffle", shuffle, "Randomize the label layout using --seed");
  realize->callback([&] {
    action = [&] {
      auto w = fgel::io::denominator_weight_from_json(load(weight_path));
      fgel::RandomStream rng(g.seed);
      auto real = fgel::realize_weight(w, shuffle ? &rng : nullptr);
      emit_json(g, {{"sigma", fgel::io::homomorphism_to_json(real.sigma)},
                    {"labels", fgel::io::labeling_to_json(real.labels)}});
      return kOk;
    };
  });

  auto* sample_uniform = app.add_subcommand("sample-uniform", "Uniform homomorphisms into Sym(n)");
  sample_uniform->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  sample_uniform->add_option("--rank", rank)->required()->check(CLI::PositiveNumber);
  sample_uniform->add_option("--count", count)->capture_default_str()->check(CLI::PositiveNumber);
  sample_uniform->callback([&] {
    action = [&] {
      fgel::RandomStream rng(g.seed);
      Json out = Json::array();
      for (int t = 0; t < count; ++t) {
        fgel::RandomStream local = rng.split(static_cast<std::uint64_t>(t));
        out.push_back(fgel::io::homomorphism_to_json(fgel::uniform_hom(static_cast<std::size_t>(n), rank, local)));
      }
      emit_json(g, count == 1 ? out[0] : out);
      return kOk;
    };
  });

  auto* sample_sbm = app.add_subcommand("sample-sbm", "Samples from a stochastic block model fiber");
  sample_sbm->add_option("--spec", spec_path)->required();
  sample_sbm->add_option("--method", method_text)
      ->check(CLI::IsMember({"auto", "enumerate", "reject", "mcmc"}))
      ->capture_default_str();
  sample_sbm->add_option("--count", count)->capture_default_str()->check(CLI::PositiveNumber);
  sample_sbm->add_option("--burn-in", burn_in)->capture_default_str();
  sample_sbm->add_option("--stride", stride)->capture_default_str();
  sample_sbm->callback([&] {
    action = [&] {
      fgel::SbmSampler sampler(sbm_spec_from_json(load(spec_path)), g.budgets(), fgel::McmcOptions{burn_in, stride});
      const fgel::SbmMethod method = sampler.resolve(parse_method(method_text));
      fgel::RandomStream rng(g.seed);
      Json samples = Json::array();
      for (int t = 0; t < count; ++t) samples.push_back(fgel::io::homomorphism_to_json(sampler.sample(rng, method)));
      emit_json(g, {{"method", method_name(method)}, {"heuristic", method == fgel::SbmMethod::mcmc}, {"samples", samples}});
      return kOk;
    };
  });

  auto* sofic = app.add_subcommand("sofic", "(D, delta)-soficity of a homomorphism");
  sofic->add_option("--hom", hom_path)->required();
  sofic->add_option("--word", words, "Element of D, e.g. s1S2 (repeatable)");
  sofic->add_option("--ball", ball_radius, "Use D = B(e,R) minus e");
  sofic->add_option("--delta", delta)->capture_default_str();
  sofic->callback([&] {
    action = [&] {
      fgel::Homomorphism sigma = fgel::io::homomorphism_from_json(load(hom_path));
      std::vector<fgel::Word> d;
      for (const auto& w : words) d.push_back(fgel::parse_word(w, sigma.rank()));
      if (ball_radius >= 0)
        for (auto& w : fgel::Subtree::ball_words(sigma.rank(), ball_radius)) d.push_back(std::move(w));
      if (d.empty()) throw UsageError("sofic needs --word or --ball");
      auto rep = fgel::is_sofic(sigma, d, delta);
      emit_json(g, {{"sofic", rep.sofic}, {"fraction", rep.fraction}, {"free_points", rep.free_points}});
      return kOk;
    };
  });

  auto* zn = app.add_subcommand("zn", "Exact number of pairs (sigma, y) with a given denominator-n weight");
  zn->add_option("--weight", weight_path)->required();
  zn->callback([&] {
    action = [&] {
      const std::string z = fgel::z_n(fgel::io::denominator_weight_from_json(load(weight_path))).str();
      emit_scalar(g, "z_n", z, z);
      return kOk;
    };
  });

  auto* zbounds = app.add_subcommand("zbounds", "Two-sided bounds on z_n");
  zbounds->add_option("--weight", weight_path)->required();
  zbounds->callback([&] {
    action = [&] {
      auto rep = fgel::zbounds_check(fgel::io::denominator_weight_from_json(load(weight_path)));
      emit_json(g, {{"pass", rep.pass},
                    {"log_ratio", rep.log_ratio},
                    {"lower_slack", rep.lower_slack},
                    {"upper_slack", rep.upper_slack}});
      return kOk;
    };
  });

  auto* expected = app.add_subcommand("expected-count", "Exact expected planted count for a joint denominator-n weight");
  expected->add_option("--weight", weight_path)->required();
  expected->callback([&] {
    action = [&] {
      const fgel::Rational q = fgel::expected_planted_count_exact(fgel::io::denominator_weight_from_json(load(weight_path)));
      emit_scalar(g, "expected_count", fgel::to_string(q), fgel::to_string(q));
      return kOk;
    };
  });

  auto* good = app.add_subcommand("good-models", "Count labelings within eps of a Markov measure");
  good->add_option("--hom", hom_path)->required();
  good->add_option("--measure", measure_path)->required();
  good->add_option("--radius,-k", radius)->capture_default_str();
  good->add_option("--eps", eps_text)->capture_default_str();
  good->add_option("--planted", labels_path, "Labeling of B; the measure is then a joint measure");
  good->callback([&] {
    action = [&] {
      fgel::Homomorphism sigma = fgel::io::homomorphism_from_json(load(hom_path));
      fgel::MarkovMeasure m = fgel::io::markov_from_json(load(measure_path));
      std::optional<fgel::Labeling> planted;
      if (!labels_path.empty()) {
        if (m.alphabet().kind() != fgel::Alphabet::Kind::product)
          fgel::fail(fgel::ErrorKind::shape_mismatch, "--planted needs a joint measure");
        planted = fgel::io::labeling_from_json(load(labels_path), m.alphabet().second());
      }
      auto rep = fgel::enumerate_good_models(sigma, m, radius, fgel::parse_rational(eps_text), planted, g.budgets());
      Json out{{"count", rep.exact ? rep.exact->str() : std::string()}};
      if (rep.growth_rate) out["growth_rate"] = *rep.growth_rate;
      emit_json(g, out);
      return kOk;
    };
  });

  auto* growth = app.add_subcommand("growth", "Monte-Carlo growth of good-model counts");
  growth->add_option("--measure", measure_path)->required();
  growth->add_option("--n", grid_text, "Grid: 6..12, 6..12:2 or 6,8,10,12")->capture_default_str();
  growth->add_option("--eps", eps_text)->capture_default_str();
  growth->add_option("--trials", trials)->capture_default_str();
  growth->add_option("--radius,-k", radius)->capture_default_str();
  growth->add_option("--sampler", sampler_text)->check(CLI::IsMember({"uniform", "sbm"}))->capture_default_str();
  growth->add_option("--method", method_text)
      ->check(CLI::IsMember({"auto", "enumerate", "reject", "mcmc"}))
      ->capture_default_str();
  growth->add_option("--reference-depth", reference_depth)->capture_default_str();
  growth->callback([&] {
    action = [&] {
      fgel::GrowthConfig config{fgel::io::markov_from_json(load(measure_path))};
      config.sampler = sampler_text == "sbm" ? fgel::GrowthSampler::sbm : fgel::GrowthSampler::uniform;
      config.radius = radius;
      config.epsilon = fgel::parse_rational(eps_text);
      config.n_grid = parse_grid(grid_text);
      config.trials = trials;
      config.seed = g.seed;
      config.reference_depth = reference_depth;
      config.sbm_method = parse_method(method_text);
      config.budgets = g.budgets();
      config.threads = g.threads;
      auto rows = fgel::growth_rate_experiment(config);
      if (g.format != "json") {
        emit(g, fgel::growth_csv(rows));
        return kOk;
      }
      Json out = Json::array();
      for (const auto& row : rows) {
        Json r{{"n", row.n},
               {"k", row.radius},
               {"level", row.level},
               {"epsilon", fgel::to_string(row.epsilon)},
               {"estimate", estimate_json(row.estimate)},
               {"reference_value", row.reference_value},
               {"reference_kind", row.reference_kind},
               {"sampler", row.sampler},
               {"seed", row.seed}};
        if (row.growth_rate) r["growth_rate"] = *row.growth_rate;
        out.push_back(std::move(r));
      }
      emit_json(g, out);
      return kOk;
    };
  });

  auto* join = app.add_subcommand("join-search", "Search Markov joinings for a lower bound");
  join->add_option("--measure-a", measure_path)->required();
  join->add_option("--measure-b", measure_b_path)->required();
  join->add_option("--depth", depth)->capture_default_str();
  join->add_option("--iterations", iterations)->capture_default_str();
  join->add_option("--restarts", restarts)->capture_default_str();
  join->callback([&] {
    action = [&] {
      fgel::MarkovMeasure a = fgel::io::markov_from_json(load(measure_path));
      fgel::MarkovMeasure b = fgel::io::markov_from_json(load(measure_b_path));
      fgel::JoiningOptions options;
      options.iterations = iterations;
      options.restarts = restarts;
      options.seed = g.seed;
      auto res = fgel::joining_search(a, b, depth, options);
      Json out{{"value", res.value},
               {"product_value", res.product_value},
               {"marginal_reference", res.marginal_reference},
               {"best", fgel::io::markov_to_json(fgel::MarkovMeasure(res.best))}};
      if (res.diagonal_value) out["diagonal_value"] = *res.diagonal_value;
      emit_json(g, out);
      return kOk;
    };
  });

  auto* self = app.add_subcommand("selftest", "Run the built-in exact oracle checks");
  self->callback([&] { action = [&] { return selftest(g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const fgel::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const Json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return kMalformed;
  }
}
