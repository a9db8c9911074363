#pragma once

// Rooted planar binary trees with edge lengths. A tree records the horizon t
// it was truncated at; leaves cut exactly at the horizon are extant, all
// other leaves are extinct and may carry a sampling mark.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "genea/errors.hpp"
#include "genea/rng.hpp"

namespace genea {

// Absolute tolerance for depth comparisons against the horizon.
inline constexpr double kDepthTol = 1e-9;

enum class LeafKind { Extinct, Extant };

struct TreeNode {
  double length = 0.0;              // edge length to the next event
  std::vector<TreeNode> children;   // empty (leaf) or exactly two: left = parent
                                    // continuation, right = new offspring
  LeafKind leaf = LeafKind::Extinct;
  bool marked = false;              // extinct leaves only

  bool is_leaf() const { return children.empty(); }
};

struct PlanarTree {
  // Truncation level t; +infinity for trees that were never truncated.
  double horizon = std::numeric_limits<double>::infinity();
  TreeNode root;
};

int extant_count(const PlanarTree& tree);
int leaf_count(const PlanarTree& tree);
int mark_count(const PlanarTree& tree);
bool has_any_mark(const PlanarTree& tree);
double tree_height(const PlanarTree& tree);

// Distances below the horizon of the most-recent-common-ancestor levels of
// consecutive extant leaves in planar depth-first order. This is computed
// purely tree-side and serves as the independent oracle for the contour
// extraction. Throws DomainError if the tree has no extant leaf.
std::vector<double> lca_branch_depths(const PlanarTree& tree);

// Copy with each extinct leaf independently marked with probability p,
// drawn in depth-first leaf order. Extant leaves are never marked.
PlanarTree mark_extinct(const PlanarTree& tree, double p, RandomStream& rng);

// Cut every lineage at level t; an edge reaching t becomes an extant leaf
// whose length is stored as exactly t minus the branch depth below it.
PlanarTree truncate_at_level(const PlanarTree& tree, double t);

// Smallest subtree spanning the root and all marked leaves, with pass-through
// vertices smoothed away. Throws DomainError when the tree has no mark.
PlanarTree mark_induced_subtree(const PlanarTree& tree);

// Unique planar tree with the given leaf depths and consecutive-leaf LCA
// depths (one fewer than the leaves). Leaves within kDepthTol of the horizon
// come out extant. Throws FormatError on an inconsistent profile.
PlanarTree tree_from_depth_profile(std::span<const double> leaf_depths,
                                   std::span<const double> lca_depths,
                                   double horizon);

// Structural invariants: positive lengths, binary branching, extant leaves
// exactly at the horizon, marks only on extinct leaves.
void validate_tree(const PlanarTree& tree);

bool trees_equal(const PlanarTree& a, const PlanarTree& b, double tol);

std::string to_json_string(const PlanarTree& tree);
PlanarTree tree_from_json_string(const std::string& text);

}  // namespace genea
