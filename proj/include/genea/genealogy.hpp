#pragma once

// Point-process extractions from conditioned trees: the genealogical
// point-process (branch indices with depths below the observation level),
// and the historical point-process that decorates every branch point with
// the left/right sets of subtrees hanging off the main genealogy.

#include <span>
#include <string>
#include <vector>

#include "genea/contour.hpp"
#include "genea/rng.hpp"
#include "genea/tree.hpp"

namespace genea {

struct GenealogyPoint {
  int index;     // branch index in depth-first order, 1..n-1
  double depth;  // distance below the observation level, in (0, t)
};

struct GenealogyPP {
  double t = 0.0;
  std::vector<GenealogyPoint> points;
};

// The n-1 branch depths of the genealogy of extant individuals, extracted
// from the contour: depth i is t minus the infimum of the i-th below-t
// excursion. Throws DomainError when the tree has no extant leaf.
GenealogyPP genealogy_pp(const PlanarTree& tree);

// Same extraction directly on a truncated contour, for tight Monte Carlo
// loops that never materialize the tree.
std::vector<double> genealogy_depths_from_contour(const ContourPath& path, double t);

// Unique n-leaf tree with all leaves at level t whose consecutive-leaf LCA
// depths reproduce the point-process. Inverse of genealogy_pp up to the
// genealogical subtree.
PlanarTree reconstruct_genealogy_tree(const GenealogyPP& pp);

// n-1 i.i.d. depths drawn from the exact branch-depth law by inversion.
GenealogyPP sample_genealogy_exact(double t, int n, RandomStream& rng);

struct Attachment {
  double attach_depth;  // distance below t; strictly less than the owning depth
  double height;        // subtree height, strictly less than attach_depth
  PlanarTree subtree;   // carries the marks of the source tree
};

struct HistoricalEntry {
  int index;  // 0 and n are the boundary entries, at depth exactly t
  double depth;
  std::vector<Attachment> left;
  std::vector<Attachment> right;
};

struct HistoricalPP {
  double t = 0.0;
  std::vector<HistoricalEntry> entries;  // indices 0..n in order
};

// Historical decomposition of a marked tree. Each below-t excursion is split
// at its minimum; the left sets come from the forward part and the right
// sets from the time-reversed part, via the infimum decomposition. Boundary
// entries 0 and n hold the sets of the ascent (reversed) and the descent.
// keep_unmarked=true stores every subtree; false drops subtrees without a
// mark. Requires at least one extant leaf.
HistoricalPP historical_pp(const PlanarTree& tree, bool keep_unmarked = false);

// Attachment statistics without materializing subtrees, for replicate loops.
// leaf_marks holds one flag per local maximum of the path, in path order
// (extant maxima must be false).
struct AttachmentStat {
  double attach_depth;
  double height;
  bool marked;  // the hanging subtree contains at least one marked leaf
};

struct ProfileEntry {
  int index;
  double depth;
  std::vector<AttachmentStat> left;
  std::vector<AttachmentStat> right;
};

struct HistoricalProfile {
  double t = 0.0;
  std::vector<ProfileEntry> entries;
};

HistoricalProfile historical_profile(const ContourPath& path, double t,
                                     const std::vector<bool>& leaf_marks);

std::string to_csv(const GenealogyPP& pp);
std::string to_json_string(const HistoricalPP& pp);

}  // namespace genea
