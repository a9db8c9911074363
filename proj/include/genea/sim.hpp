#pragma once

// Simulation of the critical binary branching process, truncated at the
// observation level t. The canonical sampler walks the alternating
// exponential contour steps and converts to a tree; a direct agent-style
// simulation (lifetimes and birth times) is kept as a cross-check oracle.

#include <algorithm>
#include <cstdint>

#include "genea/contour.hpp"
#include "genea/rng.hpp"
#include "genea/tree.hpp"

namespace genea {

// Unconditioned tree truncated at level t.
template <RandomSource S>
PlanarTree simulate_tree_below(double t, S& rng) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  return tree_from_contour(sample_contour_truncated(t, rng), t);
}

// Full (untruncated) tree; finite a.s. but with heavy-tailed size.
template <RandomSource S>
PlanarTree sample_full_tree(S& rng) {
  return tree_from_contour(sample_contour(rng));
}

namespace detail {

// One individual born at `depth`, horizon t. Draw order: lifetime, then
// birth gaps until past min(lifetime, t - depth), then offspring subtrees
// in birth order.
template <RandomSource S>
TreeNode simulate_individual(double depth, double t, S& rng) {
  const double lifetime = rng.exponential();
  const double window = std::min(lifetime, t - depth);
  std::vector<double> births;
  double at = rng.exponential();
  while (at < window) {
    births.push_back(at);
    at += rng.exponential();
  }
  std::vector<TreeNode> offspring;
  offspring.reserve(births.size());
  for (double b : births) offspring.push_back(simulate_individual(depth + b, t, rng));

  TreeNode tip;
  tip.length = window - (births.empty() ? 0.0 : births.back());
  tip.leaf = lifetime >= t - depth ? LeafKind::Extant : LeafKind::Extinct;
  TreeNode node = std::move(tip);
  for (std::size_t j = births.size(); j-- > 0;) {
    TreeNode parent;
    parent.length = births[j] - (j == 0 ? 0.0 : births[j - 1]);
    parent.children.push_back(std::move(node));
    parent.children.push_back(std::move(offspring[j]));
    node = std::move(parent);
  }
  return node;
}

}  // namespace detail

// Agent-style simulation: each individual lives an Exponential(1) lifetime
// and gives birth at unit-rate Poisson times; the parent continues in the
// left child, the offspring is the right child. Cross-check oracle for
// simulate_tree_below.
template <RandomSource S>
PlanarTree simulate_tree_below_direct(double t, S& rng) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  PlanarTree tree;
  tree.horizon = t;
  tree.root = detail::simulate_individual(0.0, t, rng);
  return tree;
}

enum class ConditionMethod { Rejection, ExcursionConcat };

// Tree conditioned to have exactly n extant individuals at level t.
PlanarTree condition_on_count(double t, int n, ConditionMethod method, RandomStream& rng,
                              std::uint64_t max_attempts = kDefaultMaxAttempts);

// Whether a full tree, with each individual marked independently with
// probability p, carries at least one mark. Streams the contour and stops
// at the first mark, so it stays cheap even though the full tree itself
// has heavy-tailed size.
template <RandomSource S>
bool full_tree_has_mark(double p, S& rng) {
  if (p < 0.0 || p > 1.0) throw ParameterError("mark probability outside [0,1]");
  double h = 0.0;
  for (;;) {
    h += rng.exponential();
    if (sample_bernoulli(rng, p)) return true;  // mark on this leaf
    const double fall = rng.exponential();
    if (fall >= h) return false;
    h -= fall;
  }
}

}  // namespace genea
