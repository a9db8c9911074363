#pragma once

// Closed-form laws of the critical branching process at criticality: branch
// depths below a level, population size, contour height, the total-progeny
// generating function, and the point-process intensity densities. Everything
// here is a pure function; quantiles are inverted analytically.

#include <functional>

#include "genea/errors.hpp"

namespace genea {

// Continuous scalar law with closed-form evaluators.
struct ScalarLaw {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  double support_lo = 0.0;
  double support_hi = 0.0;
};

// Law of a branch depth below the observation level t: the height of an
// unconditioned tree given that it stays below t.
//   pdf(tau) = ((1+t)/t) / (1+tau)^2          on (0, t)
//   cdf(tau) = ((1+t)/t) * tau / (1+tau)
//   quantile(u) = u t / (1 + t - u t)
class BranchDepthLaw {
 public:
  explicit BranchDepthLaw(double t);
  double pdf(double tau) const;
  double cdf(double tau) const;
  double quantile(double u) const;
  double t() const { return t_; }
  ScalarLaw as_scalar_law() const;

 private:
  double t_;
};

// Population size at time t of the unconditioned process:
//   P[N = 0] = t/(1+t),  P[N = k] = t^{k-1}/(1+t)^{k+1}  for k >= 1.
class PopulationLaw {
 public:
  explicit PopulationLaw(double t);
  double pmf(int k) const;
  double cdf(int k) const;
  double mean() const { return 1.0; }  // criticality
  double t() const { return t_; }

 private:
  double t_;
};

// Population size conditioned on survival: geometric on {1, 2, ...} with
// success probability 1/(1+t), pmf(k) = t^{k-1}/(1+t)^k.
class ExtantCountLaw {
 public:
  explicit ExtantCountLaw(double t);
  double pmf(int k) const;
  double cdf(int k) const;
  int quantile(double u) const;
  double t() const { return t_; }

 private:
  double t_;
};

// P[height of the contour exceeds tau] = 1/(1+tau).
double height_survival(double tau);

// Generating function of the total progeny: E[x^N_tot] = 1 - sqrt(1-x).
double progeny_pgf(double x);

// Chance that a fully sampled tree carries at least one mark under
// independent Bernoulli(p) marking: 1 - progeny_pgf(1-p) = sqrt(p).
double mark_prob(double p);

namespace intensity {

// Continuum genealogical intensity density: 1/tau^2 on [0,1] x (0, t).
double pi_density(double ell, double tau);

// Lebesgue density of the rescaled discrete genealogical intensity at
// population size n and horizon t_n (n branch indices per unit of the
// rescaled index axis): n^2/(1+n tau)^2 * (1+t_n)/t_n. Converges to
// 1/tau^2 pointwise as n grows with t_n = n t.
double rescaled_discrete_density(double tau, int n, double t_n);

// Discrete attachment profile at a branch of depth t_i: attach depth tau in
// (0, t_i), subtree height h in (0, tau), value (1/(1+h)^2) * (1+tau)/tau.
// For every tau the h-marginal integrates to 1, so this is the conditional
// height density of an attachment at depth tau.
double subtree_discrete(double tau, double h, double t_i);

// Attachments arrive along the branch at rate tau/(1+tau): a unit-rate birth
// stream thinned by the chance tau/(1+tau) that the offshoot dies inside its
// window. The per-side count at a branch of depth t_i is therefore
// Poisson with mean t_i - ln(1+t_i).
double subtree_discrete_attach_rate(double tau);
double subtree_discrete_count_mass(double t_i);

// Continuum attachment-set density at a main point of depth t_ell:
// 1/h^2 on {0 < h < tau < t_ell}.
double subtree_continuum(double tau, double h, double t_ell);

// First-set densities of the recursive spine law of a tree of height h
// given its height; tau is the attach level measured from the spine root,
// kappa the attached subtree height, kappa < h - tau. The 1/sqrt(p) factor
// is exposed exactly as the recursion states it.
double first_set_discrete(double tau, double kappa, double h, double p);
double first_set_continuum(double tau, double kappa, double h, double p);

// Mass helpers (closed forms of the integrated intensities).
double pi_mass_above(double delta, double t);  // 1/delta - 1/t
double pi_depth_quantile(double u, double delta, double t);
double pi_truncated_depth_cdf(double tau, double delta, double t);

// Integral of subtree_continuum over {h > kappa_min}:
// (t_ell - kappa_min)/kappa_min - ln(t_ell/kappa_min), 0 when t_ell <= kappa_min.
double subtree_continuum_mass(double t_ell, double kappa_min);

// Integral of first_set_continuum over {kappa > kappa_min}:
// (1/sqrt(p)) [ (h - kappa_min)/kappa_min - ln(h/kappa_min) ], 0 when h <= kappa_min.
double first_set_continuum_mass(double h, double p, double kappa_min);

}  // namespace intensity

}  // namespace genea
