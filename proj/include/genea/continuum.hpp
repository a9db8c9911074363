#pragma once

// Direct samplers for the continuum limits of the genealogical and
// historical point-processes. The limiting intensities have infinite total
// mass near depth 0 and height 0, so every sampler takes an explicit
// truncation: delta for main-point depths, kappa_min for subtree heights;
// all sampled laws are exact conditional on the truncation.

#include <string>
#include <utility>
#include <vector>

#include "genea/rng.hpp"
#include "genea/tree.hpp"

namespace genea {

struct ContinuumPoint {
  double ell;    // position in [0,1]
  double depth;  // distance below the level, in [delta, t)
};

struct ContinuumGenealogyPP {
  double t = 0.0;
  double delta = 0.0;
  std::vector<ContinuumPoint> points;  // sorted by ell
};

// Poisson point-process on [0,1] x [delta, t) with intensity d ell d tau/tau^2:
// Poisson(1/delta - 1/t) many points, ell uniform, depth by inversion of the
// truncated 1/tau^2 law.
ContinuumGenealogyPP sample_pi(double t, double delta, RandomStream& rng);

// One first set of the recursive spine law for a tree of height h: pairs
// (attach level above the spine root, subtree height), Poisson with density
// (1/sqrt(p)) 1{0<tau<h} 1{kappa_min<kappa<h-tau} / kappa^2, sampled exactly
// by Poisson thinning of the enclosing rectangle.
std::vector<std::pair<double, double>> sample_first_set(double h, double p, double kappa_min,
                                                        RandomStream& rng);

// Recursive spine construction of the mark-induced tree of height h: first
// sets drawn independently for the left and right side of the spine, each
// attached subtree recursing with its own height. Heights at or below
// kappa_min come out as bare spines. Every leaf is a marked extinct leaf.
PlanarTree sample_lambda_tree(double h, double p, double kappa_min, RandomStream& rng);

struct ContinuumAttachment {
  double attach_depth;  // distance below the level, in (height, t_ell)
  double height;        // in (kappa_min, attach_depth)
  PlanarTree subtree;
};

struct ContinuumEntry {
  double ell;
  double depth;
  std::vector<ContinuumAttachment> left;
  std::vector<ContinuumAttachment> right;
};

struct ContinuumHistoricalPP {
  double t = 0.0;
  double p = 0.0;
  double delta = 0.0;
  double kappa_min = 0.0;
  std::vector<ContinuumEntry> entries;
};

// Left/right attachment sets for one main point at depth t_ell: independent
// Poisson processes with density 1{0<tau<t_ell} 1{kappa_min<h<tau} / h^2,
// each point carrying a sample_lambda_tree(h) subtree.
void sample_xi_sets(double t_ell, double p, double kappa_min, RandomStream& rng,
                    std::vector<ContinuumAttachment>& left,
                    std::vector<ContinuumAttachment>& right);

// Continuum historical point-process: main points from sample_pi, and for
// each main point independent left/right sets from sample_xi_sets.
ContinuumHistoricalPP sample_xi(double t, double p, double delta, double kappa_min,
                                RandomStream& rng);

std::string to_csv(const ContinuumGenealogyPP& pp);
std::string to_json_string(const ContinuumHistoricalPP& pp);

}  // namespace genea
