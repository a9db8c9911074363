#include "genea/tree.hpp"

#include <algorithm>
#include <cmath>

namespace genea {

namespace {

void count_leaves(const TreeNode& node, int& extant, int& total, int& marks) {
  if (node.is_leaf()) {
    ++total;
    if (node.leaf == LeafKind::Extant) ++extant;
    if (node.marked) ++marks;
    return;
  }
  for (const TreeNode& child : node.children) count_leaves(child, extant, total, marks);
}

double max_leaf_depth(const TreeNode& node, double base) {
  const double d = base + node.length;
  if (node.is_leaf()) return d;
  return std::max(max_leaf_depth(node.children[0], d), max_leaf_depth(node.children[1], d));
}

// Appends the LCA depths (distance below t) of consecutive extant-leaf pairs
// of the subtree, in planar order; returns the subtree's extant count.
int collect_lca(const TreeNode& node, double base, double t, std::vector<double>& out) {
  const double d = base + node.length;
  if (node.is_leaf()) return node.leaf == LeafKind::Extant ? 1 : 0;
  const int left = collect_lca(node.children[0], d, t, out);
  if (left > 0) {
    out.push_back(t - d);  // pair straddling this branch point
    const int right = collect_lca(node.children[1], d, t, out);
    if (right == 0) out.pop_back();
    return left + right;
  }
  return collect_lca(node.children[1], d, t, out);
}

int collect_marked_lca(const TreeNode& node, double base, std::vector<double>& leaf_depths,
                       std::vector<double>& lca_depths) {
  const double d = base + node.length;
  if (node.is_leaf()) {
    if (!node.marked) return 0;
    leaf_depths.push_back(d);
    return 1;
  }
  const int left = collect_marked_lca(node.children[0], d, leaf_depths, lca_depths);
  if (left > 0) {
    lca_depths.push_back(d);
    const int right = collect_marked_lca(node.children[1], d, leaf_depths, lca_depths);
    if (right == 0) lca_depths.pop_back();
    return left + right;
  }
  return collect_marked_lca(node.children[1], d, leaf_depths, lca_depths);
}

void mark_leaves(TreeNode& node, double p, RandomStream& rng) {
  if (node.is_leaf()) {
    node.marked = node.leaf == LeafKind::Extinct && sample_bernoulli(rng, p);
    return;
  }
  for (TreeNode& child : node.children) mark_leaves(child, p, rng);
}

TreeNode truncate_node(const TreeNode& node, double base, double t) {
  if (base + node.length >= t) {
    TreeNode cut;
    cut.length = t - base;
    cut.leaf = LeafKind::Extant;
    return cut;
  }
  if (node.is_leaf()) return node;
  const double d = base + node.length;
  TreeNode out;
  out.length = node.length;
  out.children.reserve(2);
  out.children.push_back(truncate_node(node.children[0], d, t));
  out.children.push_back(truncate_node(node.children[1], d, t));
  return out;
}

// Cartesian construction over LCA depths: the subtree spanning leaves
// [lo, hi] hangs from `base`, branching first at the shallowest LCA in the
// range (earliest one on exact ties).
TreeNode build_profile(std::span<const double> leaves, std::span<const double> lcas,
                       std::size_t lo, std::size_t hi, double base, double horizon) {
  if (lo == hi) {
    TreeNode leaf;
    leaf.length = leaves[lo] - base;
    leaf.leaf = std::isfinite(horizon) && std::abs(leaves[lo] - horizon) <= kDepthTol
                    ? LeafKind::Extant
                    : LeafKind::Extinct;
    if (!(leaf.length > 0.0)) throw FormatError("depth profile: nonpositive leaf edge");
    return leaf;
  }
  std::size_t k = lo;
  for (std::size_t j = lo + 1; j < hi; ++j) {
    if (lcas[j] < lcas[k]) k = j;
  }
  const double d = lcas[k];
  if (!(d > base)) throw FormatError("depth profile: branch point not above its parent");
  TreeNode node;
  node.length = d - base;
  node.children.reserve(2);
  node.children.push_back(build_profile(leaves, lcas, lo, k, d, horizon));
  node.children.push_back(build_profile(leaves, lcas, k + 1, hi, d, horizon));
  return node;
}

void validate_node(const TreeNode& node, double base, double horizon) {
  if (!(node.length > 0.0)) throw FormatError("tree: edge length must be > 0");
  const double d = base + node.length;
  if (node.is_leaf()) {
    if (node.marked && node.leaf != LeafKind::Extinct)
      throw FormatError("tree: marks are allowed on extinct leaves only");
    if (node.leaf == LeafKind::Extant) {
      if (!std::isfinite(horizon) || std::abs(d - horizon) > kDepthTol)
        throw FormatError("tree: extant leaf not at the horizon");
    } else if (std::isfinite(horizon) && !(d < horizon)) {
      throw FormatError("tree: extinct leaf at or above the horizon");
    }
    return;
  }
  if (node.children.size() != 2) throw FormatError("tree: branch points must be binary");
  if (node.marked) throw FormatError("tree: marks are allowed on leaves only");
  if (std::isfinite(horizon) && !(d < horizon))
    throw FormatError("tree: branch point at or above the horizon");
  validate_node(node.children[0], d, horizon);
  validate_node(node.children[1], d, horizon);
}

bool nodes_equal(const TreeNode& a, const TreeNode& b, double tol) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (tol == 0.0 ? a.length != b.length : std::abs(a.length - b.length) > tol) return false;
  if (a.is_leaf()) return a.leaf == b.leaf && a.marked == b.marked;
  return nodes_equal(a.children[0], b.children[0], tol) &&
         nodes_equal(a.children[1], b.children[1], tol);
}

}  // namespace

int extant_count(const PlanarTree& tree) {
  int extant = 0, total = 0, marks = 0;
  count_leaves(tree.root, extant, total, marks);
  return extant;
}

int leaf_count(const PlanarTree& tree) {
  int extant = 0, total = 0, marks = 0;
  count_leaves(tree.root, extant, total, marks);
  return total;
}

int mark_count(const PlanarTree& tree) {
  int extant = 0, total = 0, marks = 0;
  count_leaves(tree.root, extant, total, marks);
  return marks;
}

bool has_any_mark(const PlanarTree& tree) { return mark_count(tree) > 0; }

double tree_height(const PlanarTree& tree) { return max_leaf_depth(tree.root, 0.0); }

std::vector<double> lca_branch_depths(const PlanarTree& tree) {
  std::vector<double> out;
  const int n = collect_lca(tree.root, 0.0, tree.horizon, out);
  if (n == 0) throw DomainError("lca_branch_depths: tree has no extant leaf");
  return out;
}

PlanarTree mark_extinct(const PlanarTree& tree, double p, RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("mark probability outside [0,1]");
  PlanarTree out = tree;
  mark_leaves(out.root, p, rng);
  return out;
}

PlanarTree truncate_at_level(const PlanarTree& tree, double t) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  PlanarTree out;
  out.horizon = t;
  out.root = truncate_node(tree.root, 0.0, t);
  return out;
}

PlanarTree mark_induced_subtree(const PlanarTree& tree) {
  std::vector<double> leaves, lcas;
  if (collect_marked_lca(tree.root, 0.0, leaves, lcas) == 0)
    throw DomainError("mark_induced_subtree: tree has no mark");
  PlanarTree out = tree_from_depth_profile(leaves, lcas,
                                           std::numeric_limits<double>::infinity());
  // every leaf of the reduced tree is a marked individual
  struct {
    void operator()(TreeNode& n) const {
      if (n.is_leaf()) {
        n.marked = true;
        return;
      }
      for (TreeNode& c : n.children) (*this)(c);
    }
  } set_marks;
  set_marks(out.root);
  return out;
}

PlanarTree tree_from_depth_profile(std::span<const double> leaf_depths,
                                   std::span<const double> lca_depths, double horizon) {
  if (leaf_depths.empty()) throw FormatError("depth profile: no leaves");
  if (lca_depths.size() + 1 != leaf_depths.size())
    throw FormatError("depth profile: need exactly one LCA depth between consecutive leaves");
  PlanarTree tree;
  tree.horizon = horizon;
  tree.root = build_profile(leaf_depths, lca_depths, 0, leaf_depths.size() - 1, 0.0, horizon);
  return tree;
}

void validate_tree(const PlanarTree& tree) {
  if (std::isfinite(tree.horizon) && !(tree.horizon > 0.0))
    throw FormatError("tree: horizon must be > 0");
  validate_node(tree.root, 0.0, tree.horizon);
}

bool trees_equal(const PlanarTree& a, const PlanarTree& b, double tol) {
  const bool fin_a = std::isfinite(a.horizon), fin_b = std::isfinite(b.horizon);
  if (fin_a != fin_b) return false;
  if (fin_a && std::abs(a.horizon - b.horizon) > tol) return false;
  return nodes_equal(a.root, b.root, tol);
}

}  // namespace genea
