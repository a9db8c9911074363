#pragma once

// Shared test fixtures: scripted random sources for forced-draw cases, a
// dyadic-edge random tree generator (float sums over the 2^-12 grid are
// exact, so bijection round trips can be compared bit-for-bit), a Simpson
// quadrature oracle, and the worked two-leaf tree.

#include <functional>
#include <vector>

#include "doctest.h"
#include "genea/rng.hpp"
#include "genea/tree.hpp"

namespace genea::test {

struct ScriptedSource {
  std::vector<double> exps;
  std::vector<double> uniforms;
  std::size_t ei = 0;
  std::size_t ui = 0;

  double exponential() {
    REQUIRE(ei < exps.size());
    return exps[ei++];
  }
  double uniform_open01() {
    REQUIRE(ui < uniforms.size());
    return uniforms[ui++];
  }
};

inline TreeNode dyadic_node(RandomStream& rng, int depth) {
  TreeNode n;
  n.length = static_cast<double>(1 + (rng.next_u64() % 4096)) * 0x1p-12;
  if (depth > 0 && rng.uniform_open01() < 0.45) {
    n.children.push_back(dyadic_node(rng, depth - 1));
    n.children.push_back(dyadic_node(rng, depth - 1));
  }
  return n;
}

inline PlanarTree dyadic_tree(RandomStream& rng, int depth = 9) {
  PlanarTree tree;
  tree.root = dyadic_node(rng, depth);
  return tree;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Two extant leaves at level 1 branching at 0.5; the right lineage carries
// an extinct grandchild of length 0.1 attached at depth 0.8.
inline PlanarTree worked_tree(bool marked = true) {
  TreeNode left_leaf;
  left_leaf.length = 0.5;
  left_leaf.leaf = LeafKind::Extant;

  TreeNode grand_extant;
  grand_extant.length = 0.2;
  grand_extant.leaf = LeafKind::Extant;
  TreeNode grand_extinct;
  grand_extinct.length = 0.1;
  grand_extinct.leaf = LeafKind::Extinct;
  grand_extinct.marked = marked;

  TreeNode right;
  right.length = 0.3;
  right.children.push_back(grand_extant);
  right.children.push_back(grand_extinct);

  PlanarTree tree;
  tree.horizon = 1.0;
  tree.root.length = 0.5;
  tree.root.children.push_back(left_leaf);
  tree.root.children.push_back(right);
  return tree;
}

}  // namespace genea::test
