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
#include <string>
#include <utility>
#include <vector>

#include "fgel/alphabet.hpp"
#include "fgel/budget.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/markov.hpp"
#include "fgel/parallel.hpp"
#include "fgel/weight.hpp"

namespace fgel {

/// What a node of a subtree reveals: its whole symbol, one coordinate of a
/// product symbol, or nothing.
enum class View : std::uint8_t { full, first, second, hidden };

/// Coordinate observables of a (possibly joint) Markov measure.
///   coordinate(k)  alpha^k for the identity map
///   first(k)       a^k, the A-coordinate on a product alphabet
///   second(k)      b^k, the B-coordinate
///   pair(k1, k2)   a^{k1} b^{k2}
struct Observable {
  enum class Kind { coordinate, first, second, pair };
  Kind kind = Kind::coordinate;
  int first_radius = 0;
  int second_radius = 0;

  static Observable coordinate(int k = 0) { return {Kind::coordinate, k, k}; }
  static Observable first(int k = 0) { return {Kind::first, k, 0}; }
  static Observable second(int k = 0) { return {Kind::second, 0, k}; }
  static Observable pair(int k1, int k2) { return {Kind::pair, k1, k2}; }

  int radius() const {
    switch (kind) {
      case Kind::coordinate:
      case Kind::first: return first_radius;
      case Kind::second: return second_radius;
      case Kind::pair: return std::max(first_radius, second_radius);
    }
    return 0;
  }

  /// View of word g, given whether g lies within the first / second radius.
  View view(bool in_first, bool in_second) const {
    switch (kind) {
      case Kind::coordinate: return in_first ? View::full : View::hidden;
      case Kind::first: return in_first ? View::first : View::hidden;
      case Kind::second: return in_second ? View::second : View::hidden;
      case Kind::pair:
        if (in_first && in_second) return View::full;
        if (in_first) return View::first;
        if (in_second) return View::second;
        return View::hidden;
    }
    return View::hidden;
  }
};

struct EntropyOptions {
  /// Evaluate the fully observed part around e in closed form and enumerate
  /// only the coarsened remainder. Off means plain enumeration everywhere.
  bool decompose = true;
  Budgets budgets{};
  unsigned threads = 0;
};

namespace detail {

/// Observed classes of a view: class c with hidden choice h is symbol[c * hidden + h].
struct ClassTable {
  std::size_t classes = 0;
  std::size_t hidden = 0;
  std::vector<std::size_t> symbol;
};

inline ClassTable make_class_table(const Alphabet& alphabet, View view) {
  ClassTable t;
  const std::size_t q = alphabet.size();
  if (view == View::full) {
    t.classes = q;
    t.hidden = 1;
    for (std::size_t s = 0; s < q; ++s) t.symbol.push_back(s);
    return t;
  }
  if (view == View::hidden) {
    t.classes = 1;
    t.hidden = q;
    for (std::size_t s = 0; s < q; ++s) t.symbol.push_back(s);
    return t;
  }
  if (alphabet.kind() != Alphabet::Kind::product)
    fail(ErrorKind::shape_mismatch, "coordinate observables need a product alphabet");
  const std::size_t na = alphabet.first().size();
  const std::size_t nb = alphabet.second().size();
  if (view == View::first) {
    t.classes = na;
    t.hidden = nb;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b) t.symbol.push_back(alphabet.pair_index(a, b));
  } else {
    t.classes = nb;
    t.hidden = na;
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t a = 0; a < na; ++a) t.symbol.push_back(alphabet.pair_index(a, b));
  }
  return t;
}

/// A rooted tree of viewed nodes in depth-first preorder. The root's law is
/// `prior` over full symbols.
struct Plan {
  std::vector<int> parent;
  std::vector<Letter> letter;
  std::vector<const ClassTable*> table;
};

/// Enumerates observed configurations of a plan and returns
/// -sum P log P over them. Hidden symbols of the current ancestor chain are
/// carried in a dense table whose last axis belongs to the deepest node.
class Enumerator {
 public:
  Enumerator(const MarkovMeasure& m, const Plan& plan, std::vector<double> prior)
      : m_(m), plan_(plan), prior_(std::move(prior)) {
    const std::size_t n = plan_.parent.size();
    chosen_.assign(n, 0);
    // Per-step buffers sized for the largest chain product.
    std::vector<std::size_t> span(n, 1);
    std::size_t biggest = 1;
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t above = plan_.parent[t] < 0 ? 1 : span[plan_.parent[t]];
      span[t] = above * plan_.table[t]->hidden;
      biggest = std::max(biggest, span[t]);
    }
    span_ = std::move(span);
    table_.assign(n, std::vector<double>(biggest));
    base_.assign(n, std::vector<double>(biggest));
  }

  std::size_t size() const { return plan_.parent.size(); }

  /// Entropy contribution of all configurations whose first `fixed.size()`
  /// classes equal `fixed`.
  long double run(const std::vector<std::size_t>& fixed) {
    fixed_ = &fixed;
    total_ = 0;
    visit(0);
    return total_;
  }

 private:
  // Table after step t covers the chain root .. node t; its size is span_[t].
  void visit(std::size_t t) {
    const std::size_t n = size();
    if (t == n) {
      long double p = 0;
      const auto& last = table_[n - 1];
      for (std::size_t s = 0; s < span_[n - 1]; ++s) p += last[s];
      if (p > 0) total_ -= p * std::log(p);
      return;
    }
    const ClassTable& tab = *plan_.table[t];
    const int parent = plan_.parent[t];
    std::vector<double>& base = base_[t];
    std::size_t base_size = 1;
    if (parent >= 0) {
      // Sum out hidden axes of chain nodes deeper than the parent.
      base_size = span_[parent];
      const auto& prev = table_[t - 1];
      const std::size_t stride = span_[t - 1] / base_size;
      for (std::size_t s = 0; s < base_size; ++s) {
        double acc = 0;
        for (std::size_t u = 0; u < stride; ++u) acc += prev[s * stride + u];
        base[s] = acc;
      }
    }
    std::size_t first = 0, last = tab.classes;
    if (t < fixed_->size()) {
      first = (*fixed_)[t];
      last = first + 1;
    }
    std::vector<double>& out = table_[t];
    const std::size_t h = tab.hidden;
    for (std::size_t c = first; c < last; ++c) {
      bool any = false;
      if (parent < 0) {
        for (std::size_t x = 0; x < h; ++x) {
          out[x] = prior_[tab.symbol[c * h + x]];
          any = any || out[x] > 0;
        }
      } else {
        const ClassTable& ptab = *plan_.table[parent];
        const std::size_t ph = ptab.hidden;
        const std::size_t pc = chosen_[parent];
        const Letter l = plan_.letter[t];
        for (std::size_t s = 0; s < base_size; ++s) {
          const double b = base[s];
          const std::size_t psym = ptab.symbol[pc * ph + s % ph];
          for (std::size_t x = 0; x < h; ++x) {
            double v = b == 0 ? 0.0 : b * m_.transition_double(l, psym, tab.symbol[c * h + x]);
            out[s * h + x] = v;
            any = any || v > 0;
          }
        }
      }
      if (!any) continue;
      chosen_[t] = c;
      visit(t + 1);
    }
  }

  const MarkovMeasure& m_;
  const Plan& plan_;
  std::vector<double> prior_;
  std::vector<std::size_t> span_;
  std::vector<std::size_t> chosen_;
  std::vector<std::vector<double>> table_;
  std::vector<std::vector<double>> base_;
  const std::vector<std::size_t>* fixed_ = nullptr;
  long double total_ = 0;
};

/// Builds a preorder plan for the subtree of `tree` hanging at `root`.
inline Plan make_plan(const Subtree& tree, std::size_t root, const std::vector<std::vector<std::size_t>>& children,
                      const std::vector<const ClassTable*>& tables) {
  Plan plan;
  std::vector<std::pair<std::size_t, int>> stack{{root, -1}};
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    stack.pop_back();
    int self = static_cast<int>(plan.parent.size());
    plan.parent.push_back(parent);
    plan.letter.push_back(tree.edge_letter(v));
    plan.table.push_back(tables[v]);
    const auto& kids = children[v];
    for (std::size_t c = kids.size(); c-- > 0;) stack.push_back({kids[c], self});
  }
  return plan;
}

/// Full enumeration of one plan, split over worker threads by prefixes of
/// the first few nodes' classes. Per-prefix results are summed in order.
inline long double enumerate_plan(const MarkovMeasure& m, const Plan& plan, const std::vector<double>& prior,
                                  const EntropyOptions& options) {
  const std::size_t n = plan.parent.size();
  long double configurations = 1;
  for (const auto* t : plan.table) configurations *= static_cast<long double>(t->classes);
  if (configurations > static_cast<long double>(options.budgets.streaming_atoms))
    fail(ErrorKind::budget_exceeded, "observable entropy needs " + std::to_string(static_cast<double>(configurations)) +
                                         " configurations, over the budget of " +
                                         std::to_string(options.budgets.streaming_atoms));
  std::size_t split = 0;
  std::size_t tasks = 1;
  const std::size_t wanted = configurations > 4096 ? 64 * worker_count() : 1;
  while (split < n && tasks < wanted) tasks *= plan.table[split++]->classes;
  std::vector<long double> partial(tasks, 0);
  parallel_for(
      tasks,
      [&](std::size_t task) {
        std::vector<std::size_t> fixed(split);
        std::size_t rest = task;
        for (std::size_t t = split; t-- > 0;) {
          fixed[t] = rest % plan.table[t]->classes;
          rest /= plan.table[t]->classes;
        }
        Enumerator e(m, plan, prior);
        partial[task] = e.run(fixed);
      },
      tasks == 1 ? 1 : options.threads);
  long double total = 0;
  for (long double p : partial) total += p;
  return total;
}

/// Entropy of the viewed configuration on a subtree of the Cayley tree.
inline double viewed_entropy(const MarkovMeasure& m, const Subtree& tree, const std::vector<View>& views,
                             const EntropyOptions& options) {
  const std::size_t n = tree.size();
  std::vector<ClassTable> tables;
  tables.reserve(4);
  for (View v : {View::full, View::first, View::second, View::hidden}) {
    if ((v == View::first || v == View::second) && m.alphabet().kind() != Alphabet::Kind::product) {
      tables.push_back({});
      continue;
    }
    tables.push_back(make_class_table(m.alphabet(), v));
  }
  std::vector<const ClassTable*> node_table(n);
  for (std::size_t p = 0; p < n; ++p) {
    if ((views[p] == View::first || views[p] == View::second) && m.alphabet().kind() != Alphabet::Kind::product)
      fail(ErrorKind::shape_mismatch, "coordinate observables need a product alphabet");
    node_table[p] = &tables[static_cast<int>(views[p])];
  }
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t p = 1; p < n; ++p) children[tree.parent(p)].push_back(p);

  if (!options.decompose || views[0] != View::full) {
    Plan plan = make_plan(tree, 0, children, node_table);
    return static_cast<double>(enumerate_plan(m, plan, m.vertex_double(), options));
  }

  // Fully viewed region around e: H(vertex) plus H(child | parent) per edge.
  // Everything hanging off it is conditionally independent given the
  // attachment symbol, whose law is the vertex measure.
  const double h_vertex = entropy(m.weight().vertex());
  std::vector<double> h_edge;
  for (int i = 0; i < m.rank(); ++i) h_edge.push_back(entropy(m.weight().edge(i)));
  std::vector<char> inside(n, 0);
  inside[0] = 1;
  long double total = h_vertex;
  for (std::size_t p = 1; p < n; ++p) {
    if (views[p] == View::full && inside[tree.parent(p)]) {
      inside[p] = 1;
      total += h_edge[generator_of(tree.edge_letter(p))] - h_vertex;
    }
  }
  const std::size_t q = m.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (inside[p] || !inside[tree.parent(p)]) continue;
    Plan plan = make_plan(tree, p, children, node_table);
    for (std::size_t s = 0; s < q; ++s) {
      const double w = m.vertex_double()[s];
      if (w == 0) continue;
      std::vector<double> prior(q);
      for (std::size_t c = 0; c < q; ++c) prior[c] = m.transition_double(tree.edge_letter(p), s, c);
      total += w * enumerate_plan(m, plan, prior, options);
    }
  }
  return static_cast<double>(total);
}

inline bool within_shifted(const Word& g, int radius, int generator) {
  if (static_cast<int>(g.size()) <= radius) return true;
  Word back = multiply(g, Word{inverse_generator_letter(generator)});
  return static_cast<int>(back.size()) <= radius;
}

}  // namespace detail

/// H(obs_* mu): Shannon entropy of the observable's law on B(e,K).
inline double entropy_of_observable(const MarkovMeasure& m, const Observable& obs, const EntropyOptions& options = {}) {
  Subtree tree = Subtree::ball(m.rank(), obs.radius());
  std::vector<View> views;
  for (const Word& g : tree.words()) {
    int len = static_cast<int>(g.size());
    views.push_back(obs.view(len <= obs.first_radius, len <= obs.second_radius));
  }
  return detail::viewed_entropy(m, tree, views, options);
}

/// H of the pair statistics (obs, obs o T_{s_i}) on B(e,K) union B(e,K) s_i.
inline double edge_entropy_of_observable(const MarkovMeasure& m, const Observable& obs, int generator,
                                         const EntropyOptions& options = {}) {
  Subtree tree = Subtree::ball_with_shift(m.rank(), obs.radius(), generator);
  std::vector<View> views;
  for (const Word& g : tree.words())
    views.push_back(obs.view(detail::within_shifted(g, obs.first_radius, generator),
                             detail::within_shifted(g, obs.second_radius, generator)));
  return detail::viewed_entropy(m, tree, views, options);
}

/// F_mu(T, obs) = (1-2r) H(obs) + sum_i H(obs^{e,s_i}).
inline double F_of_observable(const MarkovMeasure& m, const Observable& obs, const EntropyOptions& options = {}) {
  long double f = (1 - 2 * static_cast<long double>(m.rank())) * entropy_of_observable(m, obs, options);
  for (int i = 0; i < m.rank(); ++i) f += edge_entropy_of_observable(m, obs, i, options);
  return static_cast<double>(f);
}

/// F(ball_weight(M,k)) by streaming enumeration, without materializing the ball weight.
inline double ball_F_streaming(const MarkovMeasure& m, int radius, EntropyOptions options = {}) {
  options.decompose = false;
  return F_of_observable(m, Observable::coordinate(radius), options);
}

/// F_mu(T, a^{k1} | b^{k2}) = F(a^{k1} b^{k2}) - F(b^{k2}) on a joint measure over A x B.
inline double F_rel(const MarkovMeasure& joint, int k1, int k2, const EntropyOptions& options = {}) {
  if (joint.alphabet().kind() != Alphabet::Kind::product)
    fail(ErrorKind::shape_mismatch, "F_rel needs a measure on a product alphabet");
  return F_of_observable(joint, Observable::pair(k1, k2), options) -
         F_of_observable(joint, Observable::second(k2), options);
}

struct Bracket {
  double lower;
  double upper;
};

/// (F(a^K | b^K), F(a^1 | b^K)): F decreases in the first radius and increases
/// in the second, so these bracket what depth K can say about f(a | b).
inline Bracket f_rel_bracket(const MarkovMeasure& joint, int depth, const EntropyOptions& options = {}) {
  if (depth < 0) fail(ErrorKind::shape_mismatch, "bracket depth must be >= 0");
  return {F_rel(joint, depth, depth, options), F_rel(joint, std::min(1, depth), depth, options)};
}

/// H(a | b) at a single site.
inline double conditional_entropy(const MarkovMeasure& joint) {
  const Alphabet& ab = joint.alphabet();
  if (ab.kind() != Alphabet::Kind::product) fail(ErrorKind::shape_mismatch, "conditional entropy needs a product alphabet");
  std::vector<Rational> second(ab.second().size());
  for (std::size_t x = 0; x < ab.size(); ++x) second[ab.second_of(x)] += joint.weight().vertex()[x];
  return entropy(joint.weight().vertex()) - entropy(second);
}

}  // namespace fgel
