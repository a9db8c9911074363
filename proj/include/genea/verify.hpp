#pragma once

// Statistical verification machinery: Kolmogorov-Smirnov and chi-square
// goodness of fit with asymptotic p-values, Poisson/binomial count fits,
// law-by-law Monte Carlo checks, and the two rescaled-convergence
// experiments comparing discrete extractions to the continuum samplers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "genea/laws.hpp"
#include "genea/rng.hpp"

namespace genea {

// --- distribution tails ------------------------------------------------------

// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double lambda);
// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, int df);
// Upper tail of the standard normal.
double normal_sf(double z);

// --- test statistics ---------------------------------------------------------

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_p_value(double d, std::size_t n);
double ks_critical_value(double alpha, std::size_t n);

struct TwoSampleKS {
  double d;
  double p;
};
TwoSampleKS two_sample_ks(std::vector<double> a, std::vector<double> b);

// --- reports -----------------------------------------------------------------

struct LawReport {
  std::string name;
  std::string kind;  // ks | two_sample_ks | chi_square | poisson_count | z3
  std::size_t sample_size = 0;
  double statistic = 0.0;
  double p_value = 0.0;
  double alpha = 0.0;
  bool pass = false;  // p_value > alpha
  std::uint64_t seed = 0;
  std::string params;
};

LawReport ks_test(const std::string& name, std::vector<double> samples,
                  const std::function<double(double)>& cdf, double alpha);
LawReport two_sample_ks_test(const std::string& name, std::vector<double> a,
                             std::vector<double> b, double alpha);
// Pre-binned chi-square; every expected count must be >= 5.
LawReport chi_square_test(const std::string& name, const std::vector<double>& observed,
                          const std::vector<double>& expected, double alpha);
// Count fits with automatic bin pooling to expected >= 5.
LawReport poisson_count_test(const std::string& name, const std::vector<int>& counts,
                             double mean, double alpha);
LawReport binomial_count_test(const std::string& name, const std::vector<int>& counts,
                              int trials, double q, double alpha);
// Counts with per-observation Poisson means, pooled over mean bins.
LawReport poisson_given_mean_test(const std::string& name, const std::vector<int>& counts,
                                  const std::vector<double>& means, double alpha);
// Bundle of z-scores checked against the 3-standard-error rule.
LawReport z3_test(const std::string& name, const std::vector<double>& z_scores,
                  std::size_t sample_size);

enum class GofKind { KS, ChiSquare, PoissonCount };

// Uniform entry point: KS against the reference cdf, or chi-square over 20
// equiprobable reference cells. PoissonCount requires integer-valued samples
// and reads the mean from the reference.
LawReport goodness_of_fit(const std::vector<double>& samples, const ScalarLaw& reference,
                          GofKind kind, double alpha);

// --- replicate fan-out -------------------------------------------------------

// Runs body(0..count-1) across threads; results must go into index-addressed
// slots so the outcome is independent of scheduling. threads = 0 uses the
// hardware count, GENEA_THREADS overrides that.
void parallel_replicates(std::int64_t count, unsigned threads,
                         const std::function<void(std::int64_t)>& body);
unsigned resolve_threads(unsigned requested);

// --- law-by-law Monte Carlo targets -----------------------------------------

std::vector<LawReport> verify_lemma1(std::uint64_t seed, std::size_t steps = 100000);
std::vector<LawReport> verify_eq5(std::uint64_t seed, std::size_t trees = 100000, double t = 1.0,
                                  unsigned threads = 0);
std::vector<LawReport> verify_eq6(std::uint64_t seed, std::size_t samples = 100000,
                                  unsigned threads = 0);
std::vector<LawReport> verify_lemma3(std::uint64_t seed, std::size_t trees = 10000, double t = 1.0,
                                     int n = 10, std::size_t cross_trees = 2000, int cross_n = 5,
                                     unsigned threads = 0);
std::vector<LawReport> verify_lemma4(std::uint64_t seed, std::size_t draws = 10000, double t = 1.0,
                                     double delta = 0.1, unsigned threads = 0);
std::vector<LawReport> verify_lemma6_count(std::uint64_t seed, std::size_t trees = 10000,
                                           double t = 1.0, int n = 5, unsigned threads = 0);
std::vector<LawReport> verify_markprob(std::uint64_t seed, std::size_t trees = 100000,
                                       double p = 0.04, unsigned threads = 0);
// First-set law of the spine recursion: product-transform uniformity over a
// 10x10 grid plus the truncated-mass check.
std::vector<LawReport> verify_first_set_shape(std::uint64_t seed, std::size_t calls = 7500,
                                              double h = 1.0, double p = 0.25,
                                              double kappa_min = 0.1, unsigned threads = 0);
// Feeds goodness_of_fit samples drawn from its own reference; the resulting
// p-values must be uniform.
std::vector<LawReport> verify_calibration(std::uint64_t seed, std::size_t runs = 100,
                                          std::size_t samples_per_run = 2000);

// --- convergence experiments -------------------------------------------------

struct ConvergenceConfig {
  double t = 1.0;
  double delta = 0.2;
  std::vector<int> n_grid = {25, 100, 400};
  int replicates = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  // depth source: conditioned tree simulation, or the exact i.i.d. law
  bool exact_sampler = false;
  // compare against exact finite-n laws instead of the continuum limit
  bool finite_n_reference = false;
  // historical extension
  double p = 2.0;
  double kappa_min = 0.1;
  int xi_reference_draws = 4000;
  std::size_t max_pool = 25000;  // cap per side for two-sample comparisons
  int bootstrap = 100;
};

struct Theorem5Point {
  int n = 0;
  std::size_t pooled = 0;  // depth samples surviving the delta cut
  double depth_d = 0.0, depth_p = 0.0, depth_se = 0.0;
  double count_stat = 0.0, count_p = 0.0;
  double index_d = 0.0, index_p = 0.0;
};

struct Theorem5Report {
  ConvergenceConfig config;
  std::vector<Theorem5Point> points;
  bool depth_monotone = false;  // non-increasing within 2 bootstrap SE
  bool final_depth_ok = false;  // last KS distance < 0.05
  bool final_count_ok = false;  // last count fit p > 0.001
  double final_depth_d = 0.0;
  bool pass = false;
};

Theorem5Report theorem5_experiment(const ConvergenceConfig& config);

struct Theorem9Point {
  int n = 0;
  std::size_t entries = 0;      // delta-surviving main entries
  std::size_t scatter = 0;      // attachments above kappa_min (before capping)
  double attach_d = 0.0, attach_p = 0.0;
  double height_d = 0.0, height_p = 0.0;
  double counts_p = 0.0;        // two-sample fit of per-side attachment counts
  double occupied_frac = 0.0, occupied_z = 0.0;
  double marked_frac = 0.0, marked_frac_se = 0.0;
  double norm_c = 0.0, norm_lo = 0.0, norm_hi = 0.0;  // marked-count normalization, 95% CI
};

struct Theorem9Report {
  ConvergenceConfig config;
  double xi_occupied_frac = 0.0;
  std::size_t xi_entries = 0;
  std::size_t xi_scatter = 0;
  std::vector<Theorem9Point> points;
  bool attach_ok = false;    // final attach marginal two-sample KS p > 0.01
  bool height_ok = false;    // final height marginal two-sample KS p > 0.01
  bool occupied_ok = false;  // final occupied fraction within 3 SE of xi
  bool marked_frac_converged = false;
  double sqrt_p = 0.0, inv_sqrt_p = 0.0;  // candidate normalization constants
  bool pass = false;
};

Theorem9Report theorem9_experiment(const ConvergenceConfig& config);

std::string to_json_string(const LawReport& report);
std::string to_json_string(const std::vector<LawReport>& reports);
std::string to_json_string(const Theorem5Report& report);
std::string to_json_string(const Theorem9Report& report);
std::string to_csv(const Theorem5Report& report);
std::string to_csv(const Theorem9Report& report);

}  // namespace genea
