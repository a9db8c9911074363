#pragma once

// Contour paths: the unit-speed depth-first traversal profile of a planar
// tree, as an alternating sequence of +1/-1 slope segments. The tree and its
// contour are in bijection; level crossings and below-level excursions of
// the contour carry the genealogical structure.

#include <cstdint>
#include <optional>
#include <vector>

#include "genea/errors.hpp"
#include "genea/rng.hpp"
#include "genea/tree.hpp"

namespace genea {

enum class Dir { Up, Down };

struct Segment {
  Dir dir;
  double length;
};

struct ContourPath {
  std::vector<Segment> segments;  // directions strictly alternate
  double start_height = 0.0;
  // Complete paths start at 0 with a rise and return to 0. Fragments are
  // excursion pieces; they may start with a fall and end off the axis.
  bool fragment = false;

  bool empty() const { return segments.empty(); }
  double end_height() const;
  double max_height() const;
  double min_height() const;
  double total_u() const;

  // Appends a segment, merging into the previous one when directions match.
  void append(Dir dir, double length);
};

// Time reversal: segment order flipped, rises and falls exchanged.
ContourPath reversed(const ContourPath& path);

// Throws FormatError unless the path starts at 0 with a rise, alternates,
// stays strictly positive in the interior and returns to 0 (within tol).
void validate_complete(const ContourPath& path);

// --- tree <-> contour bijection -------------------------------------------

// Depth-first contour of the tree; consecutive same-direction edge
// traversals are merged into one segment.
ContourPath contour_from_tree(const PlanarTree& tree);

// Inverse of contour_from_tree: local maxima become leaves (extant when the
// height is within kDepthTol of the horizon), local minima branch points.
PlanarTree tree_from_contour(const ContourPath& path,
                             double horizon = std::numeric_limits<double>::infinity());

// --- level crossings and decompositions ------------------------------------

struct Crossings {
  std::vector<double> up;    // u-coordinates of up-crossings of the level
  std::vector<double> down;  // u-coordinates of down-crossings
};

// A local maximum exactly at the level (a truncated extant leaf) counts as
// an up-crossing immediately followed by a down-crossing at the same u.
Crossings crossings(const ContourPath& path, double level);

double min_height_on(const ContourPath& path, double u_lo, double u_hi);
std::vector<double> local_max_heights(const ContourPath& path);

// Pieces of a path relative to a level it touches but never exceeds:
// the ascent before the first touch, the below-level excursions between
// consecutive touches, and the descent after the last touch. Concatenating
// the pieces in order reproduces the path exactly.
struct ExcursionDecomposition {
  ContourPath ascent;
  std::vector<ContourPath> excursions;
  ContourPath descent;
  std::vector<double> up_u;
  std::vector<double> down_u;
};

ExcursionDecomposition decompose_at_level(const ContourPath& path, double level);

enum class Orientation { Forward, Reversed };

struct LevelExcursion {
  double level;           // constancy level of the running infimum
  ContourPath excursion;  // heights relative to the level; complete path
};

// Decomposition of a fragment that starts at its maximum: successive strict
// minima of the running infimum, each paired with the excursion of
// (fragment - infimum) above that level. Orientation::Reversed runs the
// fragment backward first. Float-induced ties of the minimum keep path order.
std::vector<LevelExcursion> infimum_decomposition(const ContourPath& fragment,
                                                  Orientation orientation = Orientation::Forward);

// --- samplers ---------------------------------------------------------------

inline constexpr std::uint64_t kDefaultMaxAttempts = 10'000'000;

// Contour of the unconditioned branching tree: alternating Exponential(1)
// rises and falls, stopped one step before the running sum goes negative;
// the final fall is clipped to the running sum.
template <RandomSource S>
ContourPath sample_contour(S& rng) {
  ContourPath path;
  double h = 0.0;
  for (;;) {
    const double rise = rng.exponential();
    h += rise;
    path.append(Dir::Up, rise);
    const double fall = rng.exponential();
    if (fall >= h) {
      path.append(Dir::Down, h);
      return path;
    }
    path.append(Dir::Down, fall);
    h -= fall;
  }
}

// Same walk with every rise cut at level t. Each cut is a local maximum at
// exactly t (a touch); by memorylessness the fall resuming from t keeps the
// Exponential(1) law, so this is the contour of the tree truncated at t.
template <RandomSource S>
ContourPath sample_contour_truncated(double t, S& rng) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  ContourPath path;
  double h = 0.0;
  for (;;) {
    const double rise = rng.exponential();
    if (h + rise >= t) {
      path.append(Dir::Up, t - h);
      h = t;
    } else {
      path.append(Dir::Up, rise);
      h += rise;
    }
    const double fall = rng.exponential();
    if (fall >= h) {
      path.append(Dir::Down, h);
      return path;
    }
    path.append(Dir::Down, fall);
    h -= fall;
  }
}

// Pre-first-touch piece of the truncated contour, conditioned (by rejection)
// on the path reaching level t before dying. The returned fragment starts at
// 0 and ends exactly at height t. Acceptance probability is 1/(1+t).
template <RandomSource S>
ContourPath sample_ascent_to_level(double t, S& rng,
                                   std::uint64_t max_attempts = kDefaultMaxAttempts) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    ContourPath path;
    path.fragment = true;
    double h = 0.0;
    for (;;) {
      const double rise = rng.exponential();
      if (h + rise >= t) {
        path.append(Dir::Up, t - h);
        return path;
      }
      path.append(Dir::Up, rise);
      h += rise;
      const double fall = rng.exponential();
      if (fall >= h) break;  // died below t: reject
      path.append(Dir::Down, fall);
      h -= fall;
    }
  }
  throw ResourceError("ascent rejection cap exceeded", max_attempts);
}

// Unconditioned contour conditioned by rejection to stay below t. Acceptance
// probability is t/(1+t); the sup of the sample is the depth below t of the
// excursion it becomes once reflected about t.
template <RandomSource S>
ContourPath sample_excursion_below(double t, S& rng,
                                   std::uint64_t max_attempts = kDefaultMaxAttempts) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    ContourPath path;
    double h = 0.0;
    bool below = true;
    for (;;) {
      const double rise = rng.exponential();
      h += rise;
      if (h >= t) {
        below = false;
        break;
      }
      path.append(Dir::Up, rise);
      const double fall = rng.exponential();
      if (fall >= h) {
        path.append(Dir::Down, h);
        break;
      }
      path.append(Dir::Down, fall);
      h -= fall;
    }
    if (below) return path;
  }
  throw ResourceError("below-level excursion rejection cap exceeded", max_attempts);
}

// Contour of the tree conditioned to have n extant individuals at level t:
// an ascent reaching t, n-1 independent below-t excursions reflected about
// t, and a time-reversed ascent copy as the descent.
ContourPath sample_conditioned_contour(double t, int n, RandomStream& rng,
                                       std::uint64_t max_attempts = kDefaultMaxAttempts);

// Rows: direction (U/D), length, cumulative_u, height_after.
std::string to_csv(const ContourPath& path);

}  // namespace genea
