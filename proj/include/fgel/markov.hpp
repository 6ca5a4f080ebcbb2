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
#include <string>
#include <utility>
#include <vector>

#include "fgel/alphabet.hpp"
#include "fgel/budget.hpp"
#include "fgel/error.hpp"
#include "fgel/free_group.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/rational.hpp"
#include "fgel/weight.hpp"

namespace fgel {

/// Shift-invariant Markov measure on A^G with one-step statistics W.
///
/// Across a tree edge g -> l g the child's law given the parent is
/// W(p,c;i)/W(p) for l = s_i and W(c,p;i)/W(p) for l = s_i^{-1}.
class MarkovMeasure {
 public:
  explicit MarkovMeasure(Weight weight) : weight_(std::move(weight)) {
    const std::size_t q = weight_.size();
    const int letters = 2 * weight_.rank();
    exact_.assign(letters, std::vector<Rational>(q * q));
    approx_.assign(letters, std::vector<double>(q * q, 0.0));
    for (int i = 0; i < weight_.rank(); ++i) {
      for (const auto& e : weight_.edge(i)) {
        Rational forward = e.mass / weight_.vertex()[e.from];
        Rational backward = e.mass / weight_.vertex()[e.to];
        exact_[generator_letter(i)][e.from * q + e.to] = forward;
        exact_[inverse_generator_letter(i)][e.to * q + e.from] = backward;
        approx_[generator_letter(i)][e.from * q + e.to] = to_double(forward);
        approx_[inverse_generator_letter(i)][e.to * q + e.from] = to_double(backward);
      }
    }
    for (const auto& v : weight_.vertex()) vertex_.push_back(to_double(v));
  }

  const Weight& weight() const { return weight_; }
  int rank() const { return weight_.rank(); }
  const Alphabet& alphabet() const { return weight_.alphabet(); }
  std::size_t size() const { return weight_.size(); }

  /// P(child = c | parent = p) across an edge with letter l.
  const Rational& transition(Letter l, std::size_t p, std::size_t c) const { return exact_[l][p * size() + c]; }
  double transition_double(Letter l, std::size_t p, std::size_t c) const { return approx_[l][p * size() + c]; }
  const std::vector<double>& vertex_double() const { return vertex_; }

 private:
  Weight weight_;
  std::vector<std::vector<Rational>> exact_;
  std::vector<std::vector<double>> approx_;
  std::vector<double> vertex_;
};

/// Exact mass of one labeling of a subtree (labels indexed by subtree position).
inline Rational atom_mass(const MarkovMeasure& m, const Subtree& tree, const std::vector<std::size_t>& labels) {
  Rational mass = m.weight().vertex()[labels[0]];
  for (std::size_t p = 1; p < tree.size() && mass != 0; ++p)
    mass *= m.transition(tree.edge_letter(p), labels[tree.parent(p)], labels[p]);
  return mass;
}

namespace detail {

inline void require_atoms(std::size_t q, std::size_t positions, std::uint64_t budget, const char* what) {
  long double atoms = 1;
  for (std::size_t p = 0; p < positions; ++p) atoms *= static_cast<long double>(q);
  if (atoms > static_cast<long double>(budget))
    fail(ErrorKind::budget_exceeded, std::string(what) + " needs " + std::to_string(q) + "^" + std::to_string(positions) +
                                         " atoms, over the budget of " + std::to_string(budget));
}

}  // namespace detail

/// One atom of a subtree marginal: labeling index sum_p label_p q^p and its mass.
struct SubtreeAtom {
  std::uint64_t index;
  Rational mass;
};

/// alpha^H_* mu for a finite connected subtree H containing e. Zero atoms are
/// omitted; the rest come out sorted by index.
inline std::vector<SubtreeAtom> subtree_marginal(const MarkovMeasure& m, const Subtree& tree, const Budgets& budgets = {}) {
  const std::size_t q = m.size();
  const std::size_t n = tree.size();
  detail::require_atoms(q, n, budgets.atoms, "subtree marginal");
  std::vector<std::uint64_t> place(n, 1);
  for (std::size_t p = 1; p < n; ++p) place[p] = place[p - 1] * q;
  std::vector<SubtreeAtom> out;
  std::vector<std::size_t> labels(n);
  std::vector<Rational> prefix(n);
  // Depth-first over positions; parents precede children in canonical order.
  auto visit = [&](auto&& self, std::size_t p, std::uint64_t index) -> void {
    for (std::size_t c = 0; c < q; ++c) {
      Rational mass = p == 0 ? m.weight().vertex()[c]
                             : prefix[p - 1] * m.transition(tree.edge_letter(p), labels[tree.parent(p)], c);
      if (mass == 0) continue;
      labels[p] = c;
      if (p + 1 == n) {
        out.push_back({index + c * place[p], std::move(mass)});
      } else {
        prefix[p] = std::move(mass);
        self(self, p + 1, index + c * place[p]);
      }
    }
  };
  visit(visit, 0, 0);
  std::sort(out.begin(), out.end(), [](const SubtreeAtom& a, const SubtreeAtom& b) { return a.index < b.index; });
  return out;
}

/// Positions of B(e,k) and of B(e,k) s_i inside the union subtree U_i.
struct ShiftedBall {
  Subtree ball;
  Subtree joint;
  std::vector<std::size_t> here;
  std::vector<std::size_t> shifted;

  static ShiftedBall make(int rank, int radius, int generator) {
    ShiftedBall s{Subtree::ball(rank, radius), Subtree::ball_with_shift(rank, radius, generator), {}, {}};
    const Word shift{generator_letter(generator)};
    for (const Word& w : s.ball.words()) {
      s.here.push_back(*s.joint.find(w));
      s.shifted.push_back(*s.joint.find(multiply(w, shift)));
    }
    return s;
  }
};

/// (alpha^k)_* pair statistics of a Markov measure as a weight over A^{B(e,k)}.
inline Weight ball_weight(const MarkovMeasure& m, int radius, const Budgets& budgets = {}) {
  const std::size_t q = m.size();
  Alphabet target = ball_alphabet(m.alphabet(), m.rank(), radius);
  std::vector<EdgeMeasure> edges;
  for (int i = 0; i < m.rank(); ++i) {
    ShiftedBall s = ShiftedBall::make(m.rank(), radius, i);
    auto atoms = subtree_marginal(m, s.joint, budgets);
    EdgeMeasure edge;
    edge.reserve(atoms.size());
    std::vector<std::size_t> labels(s.joint.size());
    for (auto& atom : atoms) {
      std::uint64_t rest = atom.index;
      for (auto& l : labels) {
        l = rest % q;
        rest /= q;
      }
      std::size_t from = 0, to = 0;
      for (std::size_t p = s.here.size(); p-- > 0;) {
        from = from * q + labels[s.here[p]];
        to = to * q + labels[s.shifted[p]];
      }
      edge.push_back({from, to, std::move(atom.mass)});
    }
    edges.push_back(std::move(edge));
  }
  return Weight::validate(m.rank(), std::move(target), std::move(edges));
}

/// Ball weight evaluated entry by entry, for radii whose full table is too
/// large to materialize.
class LazyBallWeight {
 public:
  LazyBallWeight(const MarkovMeasure& m, int radius) : measure_(&m), radius_(radius) {
    for (int i = 0; i < m.rank(); ++i) shifted_.push_back(ShiftedBall::make(m.rank(), radius, i));
    alphabet_ = ball_alphabet(m.alphabet(), m.rank(), radius);
  }

  int rank() const { return measure_->rank(); }
  int radius() const { return radius_; }
  const Alphabet& alphabet() const { return alphabet_; }

  Rational vertex_mass(std::size_t symbol) const {
    const std::size_t q = measure_->size();
    const Subtree& ball = shifted_[0].ball;
    std::vector<std::size_t> labels(ball.size());
    for (auto& l : labels) {
      l = symbol % q;
      symbol /= q;
    }
    return atom_mass(*measure_, ball, labels);
  }

  /// Zero when the two ball labelings disagree on the overlap of B(e,k) and B(e,k) s_i.
  Rational mass(int i, std::size_t from, std::size_t to) const {
    const std::size_t q = measure_->size();
    const ShiftedBall& s = shifted_[i];
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> labels(s.joint.size(), unset);
    for (std::size_t p = 0; p < s.here.size(); ++p) {
      labels[s.here[p]] = from % q;
      from /= q;
    }
    for (std::size_t p = 0; p < s.shifted.size(); ++p) {
      std::size_t l = to % q;
      to /= q;
      std::size_t& slot = labels[s.shifted[p]];
      if (slot != unset && slot != l) return 0;
      slot = l;
    }
    return atom_mass(*measure_, s.joint, labels);
  }

 private:
  const MarkovMeasure* measure_;
  int radius_;
  std::vector<ShiftedBall> shifted_;
  Alphabet alphabet_;
};

/// d(W, lazy): entries outside supp W contribute their total mass, which is
/// 1 - (mass of the lazy weight on supp W) per generator.
inline Rational weight_distance(const Weight& w, const LazyBallWeight& lazy) {
  if (w.rank() != lazy.rank() || !(w.alphabet() == lazy.alphabet()))
    fail(ErrorKind::shape_mismatch, "weights differ in rank or alphabet");
  Rational total = 0;
  for (int i = 0; i < w.rank(); ++i) {
    Rational covered = 0;
    for (const auto& e : w.edge(i)) {
      Rational m = lazy.mass(i, e.from, e.to);
      total += boost::multiprecision::abs(e.mass - m);
      covered += m;
    }
    total += 1 - covered;
  }
  return total / 2;
}

}  // namespace fgel
