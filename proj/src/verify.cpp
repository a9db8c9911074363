#include "genea/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "genea/continuum.hpp"
#include "genea/genealogy.hpp"
#include "genea/sim.hpp"

namespace genea {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Order-insensitive accumulation for replicate reductions.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double mean_of(const std::vector<double>& xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return xs.empty() ? 0.0 : s.sum / static_cast<double>(xs.size());
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

LawReport make_report(std::string name, std::string kind, std::size_t n, double stat, double p,
                      double alpha) {
  LawReport r;
  r.name = std::move(name);
  r.kind = std::move(kind);
  r.sample_size = n;
  r.statistic = stat;
  r.p_value = p;
  r.alpha = alpha;
  r.pass = p > alpha;
  return r;
}

// Chi-square fit of integer counts against a pmf, pooling cells left to
// right until every expected count reaches 5; the pmf tail beyond the last
// cell is folded into the final one.
LawReport count_histogram_test(const std::string& name, const std::vector<int>& counts,
                               const std::function<double(int)>& pmf, double alpha) {
  if (counts.empty()) throw ParameterError("count test: no samples");
  int max_count = 0;
  for (int c : counts) {
    if (c < 0) throw ParameterError("count test: negative count");
    max_count = std::max(max_count, c);
  }
  const double n = static_cast<double>(counts.size());
  std::vector<double> observed_by_k(static_cast<std::size_t>(max_count) + 1, 0.0);
  for (int c : counts) observed_by_k[static_cast<std::size_t>(c)] += 1.0;

  double pmf_sum = 0.0;
  std::vector<double> expected_by_k(observed_by_k.size());
  for (std::size_t k = 0; k < expected_by_k.size(); ++k) {
    const double q = pmf(static_cast<int>(k));
    expected_by_k[k] = n * q;
    pmf_sum += q;
  }
  const double tail = n * std::max(0.0, 1.0 - pmf_sum);

  std::vector<double> observed, expected;
  double acc_obs = 0.0, acc_exp = 0.0;
  for (std::size_t k = 0; k < observed_by_k.size(); ++k) {
    acc_obs += observed_by_k[k];
    acc_exp += expected_by_k[k];
    if (acc_exp >= 5.0) {
      observed.push_back(acc_obs);
      expected.push_back(acc_exp);
      acc_obs = acc_exp = 0.0;
    }
  }
  acc_exp += tail;
  if (observed.empty()) throw ParameterError("count test: too few samples for a binned fit");
  observed.back() += acc_obs;
  expected.back() += acc_exp;
  if (observed.size() < 2) throw ParameterError("count test: fewer than two usable bins");

  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const int df = static_cast<int>(observed.size()) - 1;
  LawReport r = make_report(name, "chi_square", counts.size(), stat, chi_square_sf(stat, df), alpha);
  r.params = "df=" + std::to_string(df);
  return r;
}

unsigned env_threads() {
  if (const char* env = std::getenv("GENEA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;
}

}  // namespace

// --- distribution tails ------------------------------------------------------

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    const double y = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    const double cdf =
        std::sqrt(2.0 * kPi) / lambda * (y + std::pow(y, 9.0) + std::pow(y, 25.0) + std::pow(y, 49.0));
    return std::min(1.0, std::max(0.0, 1.0 - cdf));
  }
  double sum = 0.0;
  for (int k = 1; k <= 256; ++k) {
    const double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw ParameterError("chi-square degrees of freedom must be >= 1");
  if (x <= 0.0) return 1.0;
  const double a = df / 2.0;
  const double xx = x / 2.0;
  const double p = xx < a + 1.0 ? 1.0 - gamma_p_series(a, xx) : gamma_q_continued_fraction(a, xx);
  return std::min(1.0, std::max(0.0, p));
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// --- test statistics ---------------------------------------------------------

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("KS: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_p_value(double d, std::size_t n) {
  return kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
}

double ks_critical_value(double alpha, std::size_t n) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ParameterError("alpha outside (0,1)");
  double lo = 1e-8, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

TwoSampleKS two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("two-sample KS: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_sf(std::sqrt(ne) * d)};
}

// --- report builders ---------------------------------------------------------

LawReport ks_test(const std::string& name, std::vector<double> samples,
                  const std::function<double(double)>& cdf, double alpha) {
  if (samples.size() < 10) throw ParameterError("KS: need at least 10 samples");
  const std::size_t n = samples.size();
  const double d = ks_statistic(std::move(samples), cdf);
  return make_report(name, "ks", n, d, ks_p_value(d, n), alpha);
}

LawReport two_sample_ks_test(const std::string& name, std::vector<double> a,
                             std::vector<double> b, double alpha) {
  if (a.size() < 10 || b.size() < 10) throw ParameterError("two-sample KS: need at least 10 samples");
  const std::size_t n = a.size() + b.size();
  const TwoSampleKS r = two_sample_ks(std::move(a), std::move(b));
  return make_report(name, "two_sample_ks", n, r.d, r.p, alpha);
}

LawReport chi_square_test(const std::string& name, const std::vector<double>& observed,
                          const std::vector<double>& expected, double alpha) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw ParameterError("chi-square: need matching bins, at least two");
  double n = 0.0, stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 5.0) throw ParameterError("chi-square: expected bin count below 5");
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
    n += observed[i];
  }
  const int df = static_cast<int>(observed.size()) - 1;
  LawReport r = make_report(name, "chi_square", static_cast<std::size_t>(n), stat,
                            chi_square_sf(stat, df), alpha);
  r.params = "df=" + std::to_string(df);
  return r;
}

LawReport poisson_count_test(const std::string& name, const std::vector<int>& counts, double mean,
                             double alpha) {
  if (!(mean > 0.0)) throw ParameterError("poisson count test: mean must be > 0");
  std::vector<double> pmf_cache{std::exp(-mean)};
  auto pmf = [&pmf_cache, mean](int k) {
    while (static_cast<std::size_t>(k) >= pmf_cache.size())
      pmf_cache.push_back(pmf_cache.back() * mean / static_cast<double>(pmf_cache.size()));
    return pmf_cache[static_cast<std::size_t>(k)];
  };
  LawReport r = count_histogram_test(name, counts, pmf, alpha);
  r.kind = "poisson_count";
  return r;
}

LawReport binomial_count_test(const std::string& name, const std::vector<int>& counts, int trials,
                              double q, double alpha) {
  if (trials < 1 || !(q > 0.0) || !(q < 1.0))
    throw ParameterError("binomial count test: bad parameters");
  std::vector<double> pmf_cache{std::pow(1.0 - q, trials)};
  auto pmf = [&pmf_cache, trials, q](int k) {
    while (static_cast<std::size_t>(k) >= pmf_cache.size()) {
      const double kk = static_cast<double>(pmf_cache.size());
      if (kk > trials) {
        pmf_cache.push_back(0.0);
        continue;
      }
      pmf_cache.push_back(pmf_cache.back() * (trials - kk + 1.0) / kk * q / (1.0 - q));
    }
    return pmf_cache[static_cast<std::size_t>(k)];
  };
  LawReport r = count_histogram_test(name, counts, pmf, alpha);
  r.kind = "binomial_count";
  return r;
}

LawReport poisson_given_mean_test(const std::string& name, const std::vector<int>& counts,
                                  const std::vector<double>& means, double alpha) {
  if (counts.size() != means.size() || counts.empty())
    throw ParameterError("poisson-given-mean test: need one mean per count");
  // four bins at the mean quartiles
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&sorted](double q) {
    return sorted[std::min(sorted.size() - 1,
                           static_cast<std::size_t>(q * static_cast<double>(sorted.size())))];
  };
  const std::array<double, 3> edges = {quantile(0.25), quantile(0.5), quantile(0.75)};

  double stat = 0.0;
  int df = 0;
  for (int bin = 0; bin < 4; ++bin) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < means.size(); ++i) {
      const int b = means[i] < edges[0] ? 0 : means[i] < edges[1] ? 1 : means[i] < edges[2] ? 2 : 3;
      if (b == bin) members.push_back(i);
    }
    if (members.empty()) continue;
    int max_count = 0;
    for (std::size_t i : members) max_count = std::max(max_count, counts[i]);
    std::vector<double> observed(static_cast<std::size_t>(max_count) + 1, 0.0);
    std::vector<double> expected(observed.size(), 0.0);
    double tail = 0.0;
    for (std::size_t i : members) {
      observed[static_cast<std::size_t>(counts[i])] += 1.0;
      double pk = std::exp(-means[i]);
      double acc = 0.0;
      for (int k = 0; k <= max_count; ++k) {
        expected[static_cast<std::size_t>(k)] += pk;
        acc += pk;
        pk *= means[i] / static_cast<double>(k + 1);
      }
      tail += 1.0 - acc;
    }
    // pool cells to expected >= 5
    std::vector<double> obs_pooled, exp_pooled;
    double ao = 0.0, ae = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
      ao += observed[k];
      ae += expected[k];
      if (ae >= 5.0) {
        obs_pooled.push_back(ao);
        exp_pooled.push_back(ae);
        ao = ae = 0.0;
      }
    }
    ae += tail;
    if (obs_pooled.empty()) continue;
    obs_pooled.back() += ao;
    exp_pooled.back() += ae;
    if (obs_pooled.size() < 2) continue;
    for (std::size_t k = 0; k < obs_pooled.size(); ++k) {
      const double d = obs_pooled[k] - exp_pooled[k];
      stat += d * d / exp_pooled[k];
    }
    df += static_cast<int>(obs_pooled.size()) - 1;
  }
  if (df < 1) throw ParameterError("poisson-given-mean test: no usable bins");
  LawReport r = make_report(name, "chi_square", counts.size(), stat, chi_square_sf(stat, df), alpha);
  r.params = "df=" + std::to_string(df);
  return r;
}

LawReport z3_test(const std::string& name, const std::vector<double>& z_scores,
                  std::size_t sample_size) {
  if (z_scores.empty()) throw ParameterError("z test: no scores");
  double worst = 0.0;
  for (double z : z_scores) worst = std::max(worst, std::abs(z));
  const double alpha = 2.0 * normal_sf(3.0) * (1.0 - 1e-9);
  LawReport r = make_report(name, "z3", sample_size, worst, 2.0 * normal_sf(worst), alpha);
  std::ostringstream os;
  os << "max_abs_z=" << worst << " checks=" << z_scores.size();
  r.params = os.str();
  return r;
}

LawReport goodness_of_fit(const std::vector<double>& samples, const ScalarLaw& reference,
                          GofKind kind, double alpha) {
  if (samples.empty()) throw ParameterError("goodness_of_fit: no samples");
  if (!reference.cdf) throw ParameterError("goodness_of_fit: reference has no cdf");
  switch (kind) {
    case GofKind::KS:
      return ks_test("goodness_of_fit", samples, reference.cdf, alpha);
    case GofKind::ChiSquare: {
      if (samples.size() < 100) throw ParameterError("chi-square: need at least 100 samples");
      if (!reference.quantile) throw ParameterError("chi-square: reference has no quantile");
      constexpr int kCells = 20;
      std::vector<double> observed(kCells, 0.0);
      std::vector<double> expected(kCells, static_cast<double>(samples.size()) / kCells);
      for (double x : samples) {
        const double u = reference.cdf(x);
        const int cell = std::min(kCells - 1, std::max(0, static_cast<int>(u * kCells)));
        observed[static_cast<std::size_t>(cell)] += 1.0;
      }
      return chi_square_test("goodness_of_fit", observed, expected, alpha);
    }
    case GofKind::PoissonCount: {
      std::vector<int> counts;
      counts.reserve(samples.size());
      for (double x : samples) {
        const int k = static_cast<int>(std::llround(x));
        if (std::abs(x - k) > 1e-9 || k < 0)
          throw ParameterError("poisson count: samples must be nonnegative integers");
        counts.push_back(k);
      }
      // reference pdf evaluated at integers is the pmf
      if (!reference.pdf) throw ParameterError("poisson count: reference has no pmf");
      auto pmf = [&reference](int k) { return reference.pdf(static_cast<double>(k)); };
      return count_histogram_test("goodness_of_fit", counts, pmf, alpha);
    }
  }
  throw ParameterError("goodness_of_fit: unknown kind");
}

// --- replicate fan-out -------------------------------------------------------

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const unsigned env = env_threads()) return env;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_replicates(std::int64_t count, unsigned threads,
                         const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  const unsigned workers =
      std::min<std::uint64_t>(resolve_threads(threads), static_cast<std::uint64_t>(count));
  if (workers <= 1) {
    for (std::int64_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= count) return;
      try {
        body(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// --- law-by-law targets ------------------------------------------------------

namespace {

// Records every exponential draw the wrapped stream hands out, so the
// collected values are exactly the i.i.d. steps of the contour walk (the
// clipped final fall of a path is never a draw). Stops the caller once the
// target count is reached.
struct RecordingSource {
  RandomStream& rng;
  std::vector<double>& out;
  std::size_t limit;
  struct Done {};
  double exponential() {
    if (out.size() >= limit) throw Done{};
    const double v = rng.exponential();
    out.push_back(v);
    return v;
  }
  double uniform_open01() { return rng.uniform_open01(); }
};

std::string seed_params(std::uint64_t seed, const std::string& extra) {
  std::ostringstream os;
  os << "seed=" << seed;
  if (!extra.empty()) os << " " << extra;
  return os.str();
}

}  // namespace

std::vector<LawReport> verify_lemma1(std::uint64_t seed, std::size_t steps) {
  RandomStream rng(seed);
  std::vector<double> draws;
  draws.reserve(steps);
  RecordingSource rec{rng, draws, steps};
  while (draws.size() < steps) {
    try {
      sample_contour(rec);
    } catch (const RecordingSource::Done&) {
      break;
    }
  }
  LawReport r = ks_test("contour-steps-exponential", std::move(draws),
                        [](double x) { return 1.0 - std::exp(-x); }, 0.01);
  r.seed = seed;
  r.params = seed_params(seed, "");
  return {r};
}

std::vector<LawReport> verify_eq5(std::uint64_t seed, std::size_t trees, double t,
                                  unsigned threads) {
  RandomStream root(seed);
  std::vector<int> counts(trees);
  parallel_replicates(static_cast<std::int64_t>(trees), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    counts[static_cast<std::size_t>(r)] = extant_count(simulate_tree_below(t, sub));
  });
  const PopulationLaw law(t);
  constexpr int kTop = 10;
  std::vector<double> observed(kTop + 2, 0.0);
  for (int c : counts) observed[static_cast<std::size_t>(std::min(c, kTop + 1))] += 1.0;
  std::vector<double> expected;
  expected.reserve(kTop + 2);
  for (int k = 0; k <= kTop; ++k) expected.push_back(static_cast<double>(trees) * law.pmf(k));
  expected.push_back(static_cast<double>(trees) * (1.0 - law.cdf(kTop)));
  const bool thin_bins =
      *std::min_element(expected.begin(), expected.end()) < 5.0;
  // small runs cannot afford the canonical {0..10, >=11} bins; pool instead
  LawReport r = thin_bins
                    ? count_histogram_test("population-size-law", counts,
                                           [&law](int k) { return law.pmf(k); }, 0.001)
                    : chi_square_test("population-size-law", observed, expected, 0.001);
  r.seed = seed;
  r.params = seed_params(seed, "t=" + std::to_string(t));
  return {r};
}

std::vector<LawReport> verify_eq6(std::uint64_t seed, std::size_t samples, unsigned threads) {
  constexpr std::array<double, 3> kLevels = {0.5, 1.0, 2.0};
  RandomStream root(seed);
  std::vector<std::array<bool, 3>> hits(samples);
  parallel_replicates(static_cast<std::int64_t>(samples), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const ContourPath path = sample_contour_truncated(kLevels.back(), sub);
    const double m = path.max_height();
    hits[static_cast<std::size_t>(r)] = {m > kLevels[0], m > kLevels[1],
                                         m >= kLevels[2] - kDepthTol};
  });
  std::vector<double> zs;
  for (std::size_t j = 0; j < kLevels.size(); ++j) {
    double f = 0.0;
    for (const auto& h : hits) f += h[j] ? 1.0 : 0.0;
    f /= static_cast<double>(samples);
    const double q = height_survival(kLevels[j]);
    zs.push_back((f - q) / std::sqrt(q * (1.0 - q) / static_cast<double>(samples)));
  }
  LawReport r = z3_test("height-survival", zs, samples);
  r.seed = seed;
  r.params = seed_params(seed, "levels=0.5,1,2 " + r.params);
  return {r};
}

std::vector<LawReport> verify_lemma3(std::uint64_t seed, std::size_t trees, double t, int n,
                                     std::size_t cross_trees, int cross_n, unsigned threads) {
  RandomStream root(seed);
  std::vector<std::vector<double>> slots(trees);
  parallel_replicates(static_cast<std::int64_t>(trees), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const ContourPath path = sample_conditioned_contour(t, n, sub);
    slots[static_cast<std::size_t>(r)] = genealogy_depths_from_contour(path, t);
  });
  std::vector<double> pooled;
  pooled.reserve(trees * static_cast<std::size_t>(n - 1));
  for (auto& s : slots) pooled.insert(pooled.end(), s.begin(), s.end());
  const BranchDepthLaw law(t);
  LawReport ks = ks_test("branch-depth-law", std::move(pooled),
                         [law](double x) { return law.cdf(x); }, 0.01);
  ks.seed = seed;
  ks.params = seed_params(seed, "t=" + std::to_string(t) + " n=" + std::to_string(n));

  // cross-method check: excursion concatenation against plain rejection
  std::vector<std::vector<double>> ec(cross_trees), rej(cross_trees);
  parallel_replicates(static_cast<std::int64_t>(cross_trees), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(1'000'000 + static_cast<std::uint64_t>(r));
    PlanarTree a = condition_on_count(t, cross_n, ConditionMethod::ExcursionConcat, sub);
    PlanarTree b = condition_on_count(t, cross_n, ConditionMethod::Rejection, sub);
    std::vector<double> da, db;
    for (const GenealogyPoint& pt : genealogy_pp(a).points) da.push_back(pt.depth);
    for (const GenealogyPoint& pt : genealogy_pp(b).points) db.push_back(pt.depth);
    ec[static_cast<std::size_t>(r)] = std::move(da);
    rej[static_cast<std::size_t>(r)] = std::move(db);
  });
  std::vector<double> ec_pool, rej_pool;
  for (auto& s : ec) ec_pool.insert(ec_pool.end(), s.begin(), s.end());
  for (auto& s : rej) rej_pool.insert(rej_pool.end(), s.begin(), s.end());
  LawReport cross =
      two_sample_ks_test("conditioning-cross-method", std::move(ec_pool), std::move(rej_pool), 0.01);
  cross.seed = seed;
  cross.params = seed_params(seed, "t=" + std::to_string(t) + " n=" + std::to_string(cross_n));
  return {ks, cross};
}

std::vector<LawReport> verify_lemma4(std::uint64_t seed, std::size_t draws, double t, double delta,
                                     unsigned threads) {
  RandomStream root(seed);
  struct Slot {
    int count = 0;
    std::vector<double> depths, ells;
  };
  std::vector<Slot> slots(draws);
  parallel_replicates(static_cast<std::int64_t>(draws), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const ContinuumGenealogyPP pp = sample_pi(t, delta, sub);
    Slot& s = slots[static_cast<std::size_t>(r)];
    s.count = static_cast<int>(pp.points.size());
    for (const ContinuumPoint& pt : pp.points) {
      s.depths.push_back(pt.depth);
      s.ells.push_back(pt.ell);
    }
  });
  std::vector<int> counts;
  std::vector<double> depths, ells;
  for (auto& s : slots) {
    counts.push_back(s.count);
    depths.insert(depths.end(), s.depths.begin(), s.depths.end());
    ells.insert(ells.end(), s.ells.begin(), s.ells.end());
  }
  const std::string params =
      seed_params(seed, "t=" + std::to_string(t) + " delta=" + std::to_string(delta));
  LawReport count_fit =
      poisson_count_test("continuum-point-count", counts, intensity::pi_mass_above(delta, t), 0.001);
  LawReport depth_fit = ks_test(
      "continuum-depth-law", std::move(depths),
      [t, delta](double x) { return intensity::pi_truncated_depth_cdf(x, delta, t); }, 0.01);
  LawReport ell_fit = ks_test("continuum-index-uniform", std::move(ells),
                              [](double x) { return std::min(1.0, std::max(0.0, x)); }, 0.01);
  for (LawReport* r : {&count_fit, &depth_fit, &ell_fit}) {
    r->seed = seed;
    r->params = params;
  }
  return {count_fit, depth_fit, ell_fit};
}

std::vector<LawReport> verify_lemma6_count(std::uint64_t seed, std::size_t trees, double t, int n,
                                           unsigned threads) {
  RandomStream root(seed);
  struct Slot {
    std::vector<int> counts;
    std::vector<double> means;
  };
  std::vector<Slot> slots(trees);
  parallel_replicates(static_cast<std::int64_t>(trees), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const PlanarTree tree = condition_on_count(t, n, ConditionMethod::ExcursionConcat, sub);
    const HistoricalPP hist = historical_pp(tree, /*keep_unmarked=*/true);
    Slot& s = slots[static_cast<std::size_t>(r)];
    for (const HistoricalEntry& e : hist.entries) {
      if (e.index == 0 || e.index == n) continue;
      s.counts.push_back(static_cast<int>(e.left.size()));
      s.means.push_back(e.depth);
    }
  });
  std::vector<int> counts;
  std::vector<double> depths;
  for (auto& s : slots) {
    counts.insert(counts.end(), s.counts.begin(), s.counts.end());
    depths.insert(depths.end(), s.means.begin(), s.means.end());
  }
  // the decomposition attaches offshoots at rate tau/(1+tau), so the count
  // at a branch of depth t_i is Poisson(t_i - ln(1+t_i)); the unit-rate
  // Poisson(t_i) reading is refuted by the process and reported only
  std::vector<double> means, unit_means;
  means.reserve(depths.size());
  for (double d : depths) {
    means.push_back(intensity::subtree_discrete_count_mass(d));
    unit_means.push_back(d);
  }
  LawReport r = poisson_given_mean_test("left-set-count-poisson", counts, means, 0.001);
  const LawReport unit_rate =
      poisson_given_mean_test("left-set-count-unit-rate", counts, unit_means, 0.001);
  r.seed = seed;
  std::ostringstream os;
  os << "t=" << t << " n=" << n << " unit_rate_reference_p=" << unit_rate.p_value;
  r.params = seed_params(seed, os.str());
  return {r};
}

std::vector<LawReport> verify_markprob(std::uint64_t seed, std::size_t trees, double p,
                                       unsigned threads) {
  RandomStream root(seed);
  std::vector<char> marked(trees);
  parallel_replicates(static_cast<std::int64_t>(trees), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    marked[static_cast<std::size_t>(r)] = full_tree_has_mark(p, sub) ? 1 : 0;
  });
  double f = 0.0;
  for (char m : marked) f += m;
  f /= static_cast<double>(trees);
  const double q = mark_prob(p);
  const double z = (f - q) / std::sqrt(q * (1.0 - q) / static_cast<double>(trees));
  LawReport r = z3_test("mark-probability-sqrt", {z}, trees);
  r.seed = seed;
  std::ostringstream os;
  os << "p=" << p << " observed=" << f << " expected=" << q;
  r.params = seed_params(seed, os.str());
  return {r};
}

std::vector<LawReport> verify_first_set_shape(std::uint64_t seed, std::size_t calls, double h,
                                              double p, double kappa_min, unsigned threads) {
  RandomStream root(seed);
  std::vector<std::vector<std::pair<double, double>>> slots(calls);
  parallel_replicates(static_cast<std::int64_t>(calls), threads, [&](std::int64_t r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    slots[static_cast<std::size_t>(r)] = sample_first_set(h, p, kappa_min, sub);
  });
  // product transform: the height marginal has density (h-k)/k^2 on
  // (kappa_min, h) and the level is uniform given the height, so the pair
  // (F_height(kappa), tau/(h-kappa)) is uniform on the unit square.
  const double total_mass = h * (1.0 / kappa_min - 1.0 / h) - std::log(h / kappa_min);
  auto height_cdf = [h, kappa_min, total_mass](double x) {
    return (h * (1.0 / kappa_min - 1.0 / x) - std::log(x / kappa_min)) / total_mass;
  };
  constexpr int kGrid = 10;
  std::vector<double> observed(kGrid * kGrid, 0.0);
  std::size_t points = 0;
  KahanSum count_sum;
  for (const auto& s : slots) {
    count_sum.add(static_cast<double>(s.size()));
    for (const auto& [tau, kappa] : s) {
      const double u1 = height_cdf(kappa);
      const double u2 = tau / (h - kappa);
      const int i = std::min(kGrid - 1, static_cast<int>(u1 * kGrid));
      const int j = std::min(kGrid - 1, static_cast<int>(u2 * kGrid));
      observed[static_cast<std::size_t>(i * kGrid + j)] += 1.0;
      ++points;
    }
  }
  std::vector<double> expected(kGrid * kGrid,
                               static_cast<double>(points) / (kGrid * kGrid));
  LawReport shape = chi_square_test("first-set-shape-grid", observed, expected, 0.001);
  shape.seed = seed;

  const double mass = intensity::first_set_continuum_mass(h, p, kappa_min);
  const double mean = count_sum.sum / static_cast<double>(calls);
  const double z = (mean - mass) / std::sqrt(mass / static_cast<double>(calls));
  LawReport mass_check = z3_test("first-set-truncated-mass", {z}, calls);
  mass_check.seed = seed;
  std::ostringstream os;
  os << "h=" << h << " p=" << p << " kappa_min=" << kappa_min << " observed_mean=" << mean
     << " expected=" << mass;
  mass_check.params = seed_params(seed, os.str());
  return {shape, mass_check};
}

std::vector<LawReport> verify_calibration(std::uint64_t seed, std::size_t runs,
                                          std::size_t samples_per_run) {
  RandomStream root(seed);
  const BranchDepthLaw law(1.0);
  const ScalarLaw ref = law.as_scalar_law();
  std::vector<double> p_values;
  p_values.reserve(runs);
  for (std::size_t run = 0; run < runs; ++run) {
    RandomStream sub = root.substream(run);
    std::vector<double> samples;
    samples.reserve(samples_per_run);
    for (std::size_t i = 0; i < samples_per_run; ++i)
      samples.push_back(law.quantile(sub.uniform_open01()));
    p_values.push_back(goodness_of_fit(samples, ref, GofKind::KS, 0.01).p_value);
  }
  LawReport meta = ks_test("calibration-p-uniform", std::move(p_values),
                           [](double x) { return std::min(1.0, std::max(0.0, x)); }, 0.001);
  meta.seed = seed;
  meta.params = seed_params(seed, "runs=" + std::to_string(runs) + " samples_per_run=" +
                                      std::to_string(samples_per_run));
  return {meta};
}

// --- convergence experiments -------------------------------------------------

namespace {

double bootstrap_ks_se(const std::vector<std::vector<double>>& per_replicate,
                       const std::function<double(double)>& cdf, int rounds, RandomStream& rng) {
  const std::size_t reps = per_replicate.size();
  if (reps == 0 || rounds <= 1) return 0.0;
  std::vector<double> ds;
  ds.reserve(static_cast<std::size_t>(rounds));
  for (int b = 0; b < rounds; ++b) {
    std::vector<double> pooled;
    for (std::size_t i = 0; i < reps; ++i) {
      const std::size_t pick = std::min(
          reps - 1, static_cast<std::size_t>(rng.uniform_open01() * static_cast<double>(reps)));
      const auto& src = per_replicate[pick];
      pooled.insert(pooled.end(), src.begin(), src.end());
    }
    if (pooled.size() < 10) return 0.0;
    ds.push_back(ks_statistic(std::move(pooled), cdf));
  }
  const double m = mean_of(ds);
  double var = 0.0;
  for (double d : ds) var += (d - m) * (d - m);
  return std::sqrt(var / static_cast<double>(ds.size() - 1));
}

std::vector<double> capped(const std::vector<double>& pool, std::size_t cap) {
  if (pool.size() <= cap) return pool;
  std::vector<double> out;
  out.reserve(cap);
  const double stride = static_cast<double>(pool.size()) / static_cast<double>(cap);
  for (std::size_t i = 0; i < cap; ++i)
    out.push_back(pool[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
  return out;
}

LawReport two_sample_count_test(const std::vector<int>& a, const std::vector<int>& b) {
  int max_count = 0;
  for (int c : a) max_count = std::max(max_count, c);
  for (int c : b) max_count = std::max(max_count, c);
  std::vector<double> ha(static_cast<std::size_t>(max_count) + 1, 0.0), hb = ha;
  for (int c : a) ha[static_cast<std::size_t>(c)] += 1.0;
  for (int c : b) hb[static_cast<std::size_t>(c)] += 1.0;
  // pool cells until both expected rows reach 5
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double total = na + nb;
  std::vector<std::pair<double, double>> cells;
  double ca = 0.0, cb = 0.0;
  for (std::size_t k = 0; k < ha.size(); ++k) {
    ca += ha[k];
    cb += hb[k];
    const double col = ca + cb;
    if (na * col / total >= 5.0 && nb * col / total >= 5.0) {
      cells.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (cells.empty()) throw ParameterError("two-sample count test: too few observations");
  cells.back().first += ca;
  cells.back().second += cb;
  double stat = 0.0;
  for (const auto& [oa, ob] : cells) {
    const double col = oa + ob;
    const double ea = na * col / total;
    const double eb = nb * col / total;
    stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  const int df = static_cast<int>(cells.size()) - 1;
  if (df < 1) {
    LawReport r = make_report("two-sample-counts", "chi_square", a.size() + b.size(), 0.0, 1.0, 0.01);
    return r;
  }
  return make_report("two-sample-counts", "chi_square", a.size() + b.size(), stat,
                     chi_square_sf(stat, df), 0.01);
}

}  // namespace

Theorem5Report theorem5_experiment(const ConvergenceConfig& config) {
  if (config.n_grid.empty()) throw ParameterError("theorem5: empty n grid");
  for (std::size_t i = 1; i < config.n_grid.size(); ++i)
    if (config.n_grid[i] <= config.n_grid[i - 1])
      throw ParameterError("theorem5: n grid must be strictly increasing");
  if (!(config.delta > 0.0) || !(config.delta < config.t))
    throw ParameterError("theorem5: delta must lie in (0, t)");

  RandomStream root(config.seed);
  Theorem5Report report;
  report.config = config;

  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const int n = config.n_grid[gi];
    const double t_n = static_cast<double>(n) * config.t;
    const BranchDepthLaw depth_law(t_n);
    const double q_keep = 1.0 - depth_law.cdf(std::min(static_cast<double>(n) * config.delta, t_n));

    struct Slot {
      std::vector<double> depths, ells;
      int count = 0;
    };
    std::vector<Slot> slots(reps);
    const std::uint64_t base = static_cast<std::uint64_t>(gi) * reps;
    parallel_replicates(static_cast<std::int64_t>(reps), config.threads, [&](std::int64_t r) {
      RandomStream sub = root.substream(base + static_cast<std::uint64_t>(r));
      Slot& s = slots[static_cast<std::size_t>(r)];
      std::vector<double> raw;
      if (config.exact_sampler) {
        raw.reserve(static_cast<std::size_t>(n) - 1);
        for (int i = 1; i < n; ++i) raw.push_back(depth_law.quantile(sub.uniform_open01()));
      } else {
        raw = genealogy_depths_from_contour(sample_conditioned_contour(t_n, n, sub), t_n);
      }
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const double tau = raw[i] / static_cast<double>(n);
        if (tau >= config.delta) {
          s.depths.push_back(tau);
          // indices live on the lattice {1/n,...,(n-1)/n}; jittering each one
          // across its gap makes the null exactly continuous-uniform, so the
          // KS machinery applies at finite n too
          const double jitter = sub.uniform_open01();
          s.ells.push_back((static_cast<double>(i + 1) - jitter) / static_cast<double>(n));
        }
      }
      s.count = static_cast<int>(s.depths.size());
    });

    std::vector<double> pooled_depths, pooled_ells;
    std::vector<int> counts;
    std::vector<std::vector<double>> per_replicate(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      pooled_depths.insert(pooled_depths.end(), slots[r].depths.begin(), slots[r].depths.end());
      pooled_ells.insert(pooled_ells.end(), slots[r].ells.begin(), slots[r].ells.end());
      counts.push_back(slots[r].count);
      per_replicate[r] = std::move(slots[r].depths);
    }

    std::function<double(double)> depth_cdf;
    if (config.finite_n_reference) {
      const double f_delta = depth_law.cdf(static_cast<double>(n) * config.delta);
      depth_cdf = [depth_law, n, f_delta](double tau) {
        return (depth_law.cdf(std::min(tau * n, depth_law.t())) - f_delta) / (1.0 - f_delta);
      };
    } else {
      const double t = config.t, delta = config.delta;
      depth_cdf = [t, delta](double tau) {
        return intensity::pi_truncated_depth_cdf(std::min(tau, t), delta, t);
      };
    }
    std::function<double(double)> index_cdf;
    if (config.finite_n_reference) {
      // jittered lattice indices are uniform on (0, (n-1)/n]
      index_cdf = [n](double x) {
        return std::min(1.0, std::max(0.0, x * static_cast<double>(n) /
                                               static_cast<double>(n - 1)));
      };
    } else {
      index_cdf = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    }

    Theorem5Point pt;
    pt.n = n;
    pt.pooled = pooled_depths.size();
    pt.depth_d = ks_statistic(pooled_depths, depth_cdf);
    pt.depth_p = ks_p_value(pt.depth_d, pooled_depths.size());
    RandomStream boot = root.substream((1ULL << 33) + gi);
    pt.depth_se = bootstrap_ks_se(per_replicate, depth_cdf, config.bootstrap, boot);

    LawReport count_fit =
        config.finite_n_reference
            ? binomial_count_test("count", counts, n - 1, q_keep, 0.001)
            : poisson_count_test("count", counts,
                                 intensity::pi_mass_above(config.delta, config.t), 0.001);
    pt.count_stat = count_fit.statistic;
    pt.count_p = count_fit.p_value;

    pt.index_d = ks_statistic(pooled_ells, index_cdf);
    pt.index_p = ks_p_value(pt.index_d, pooled_ells.size());
    report.points.push_back(pt);
  }

  report.depth_monotone = true;
  for (std::size_t i = 1; i < report.points.size(); ++i) {
    const auto& prev = report.points[i - 1];
    const auto& cur = report.points[i];
    const double allowance =
        2.0 * std::sqrt(prev.depth_se * prev.depth_se + cur.depth_se * cur.depth_se);
    if (cur.depth_d > prev.depth_d + allowance) report.depth_monotone = false;
  }
  report.final_depth_d = report.points.back().depth_d;
  report.final_depth_ok = report.final_depth_d < 0.05;
  report.final_count_ok = report.points.back().count_p > 0.001;
  report.pass = report.depth_monotone && report.final_depth_ok && report.final_count_ok;
  return report;
}

Theorem9Report theorem9_experiment(const ConvergenceConfig& config) {
  if (config.n_grid.empty()) throw ParameterError("theorem9: empty n grid");
  if (!(config.p > 0.0)) throw ParameterError("theorem9: p must be > 0");
  if (!(config.kappa_min > 0.0) || !(config.kappa_min < config.t))
    throw ParameterError("theorem9: kappa_min must lie in (0, t)");

  RandomStream root(config.seed);
  Theorem9Report report;
  report.config = config;
  report.sqrt_p = std::sqrt(config.p);
  report.inv_sqrt_p = 1.0 / std::sqrt(config.p);

  // continuum reference pools
  std::vector<double> xi_attach, xi_height;
  std::vector<int> xi_counts;
  std::size_t xi_entries = 0, xi_occupied = 0;
  {
    RandomStream xi_rng = root.substream(1ULL << 32);
    for (int d = 0; d < config.xi_reference_draws; ++d) {
      const ContinuumHistoricalPP xi =
          sample_xi(config.t, config.p, config.delta, config.kappa_min, xi_rng);
      for (const ContinuumEntry& e : xi.entries) {
        ++xi_entries;
        if (!e.left.empty() || !e.right.empty()) ++xi_occupied;
        xi_counts.push_back(static_cast<int>(e.left.size()));
        xi_counts.push_back(static_cast<int>(e.right.size()));
        for (const auto* side : {&e.left, &e.right}) {
          for (const ContinuumAttachment& att : *side) {
            xi_attach.push_back(att.attach_depth);
            xi_height.push_back(att.height);
          }
        }
      }
    }
  }
  if (xi_entries == 0) throw ParameterError("theorem9: continuum reference produced no entries");
  report.xi_entries = xi_entries;
  report.xi_scatter = xi_attach.size();
  report.xi_occupied_frac = static_cast<double>(xi_occupied) / static_cast<double>(xi_entries);

  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const int n = config.n_grid[gi];
    const double t_n = static_cast<double>(n) * config.t;
    const double p_n = config.p / static_cast<double>(n);
    if (p_n > 1.0) throw ParameterError("theorem9: p/n must be a probability");

    struct Slot {
      std::vector<double> attach, height;
      std::vector<int> counts;
      int entries = 0, occupied = 0, marked_entries = 0;
      double marked_atts = 0.0, norm_mass = 0.0;
    };
    std::vector<Slot> slots(reps);
    const std::uint64_t base = (1ULL << 34) + static_cast<std::uint64_t>(gi) * reps;
    parallel_replicates(static_cast<std::int64_t>(reps), config.threads, [&](std::int64_t r) {
      RandomStream sub = root.substream(base + static_cast<std::uint64_t>(r));
      const ContourPath path = sample_conditioned_contour(t_n, n, sub);
      const std::vector<double> maxima = local_max_heights(path);
      std::vector<bool> marks(maxima.size());
      for (std::size_t i = 0; i < maxima.size(); ++i)
        marks[i] = maxima[i] < t_n - kDepthTol && sample_bernoulli(sub, p_n);
      const HistoricalProfile profile = historical_profile(path, t_n, marks);
      Slot& s = slots[static_cast<std::size_t>(r)];
      for (const ProfileEntry& e : profile.entries) {
        if (e.index == 0 || e.index == n) continue;
        const double depth = e.depth / static_cast<double>(n);
        if (depth < config.delta) continue;
        ++s.entries;
        bool occupied = false, marked_any = false;
        for (const auto* side : {&e.left, &e.right}) {
          int kept = 0;
          for (const AttachmentStat& att : *side) {
            marked_any = marked_any || att.marked;
            const double h = att.height / static_cast<double>(n);
            if (h <= config.kappa_min) continue;
            ++kept;
            s.attach.push_back(att.attach_depth / static_cast<double>(n));
            s.height.push_back(h);
            if (att.marked) s.marked_atts += 1.0;
          }
          s.counts.push_back(kept);
          occupied = occupied || kept > 0;
        }
        if (occupied) ++s.occupied;
        if (marked_any) ++s.marked_entries;
        s.norm_mass += 2.0 * intensity::subtree_continuum_mass(depth, config.kappa_min);
      }
    });

    std::vector<double> attach_pool, height_pool;
    std::vector<int> count_pool;
    std::size_t entries = 0, occupied = 0;
    double marked_total = 0.0, mass_total = 0.0;
    std::vector<double> rep_marked_frac;
    for (const Slot& s : slots) {
      attach_pool.insert(attach_pool.end(), s.attach.begin(), s.attach.end());
      height_pool.insert(height_pool.end(), s.height.begin(), s.height.end());
      count_pool.insert(count_pool.end(), s.counts.begin(), s.counts.end());
      entries += static_cast<std::size_t>(s.entries);
      occupied += static_cast<std::size_t>(s.occupied);
      marked_total += s.marked_atts;
      mass_total += s.norm_mass;
      if (s.entries > 0)
        rep_marked_frac.push_back(static_cast<double>(s.marked_entries) /
                                  static_cast<double>(s.entries));
    }

    Theorem9Point pt;
    pt.n = n;
    pt.entries = entries;
    pt.scatter = attach_pool.size();

    const TwoSampleKS attach_ks =
        two_sample_ks(capped(attach_pool, config.max_pool), capped(xi_attach, config.max_pool));
    pt.attach_d = attach_ks.d;
    pt.attach_p = attach_ks.p;
    const TwoSampleKS height_ks =
        two_sample_ks(capped(height_pool, config.max_pool), capped(xi_height, config.max_pool));
    pt.height_d = height_ks.d;
    pt.height_p = height_ks.p;
    pt.counts_p = two_sample_count_test(count_pool, xi_counts).p_value;

    pt.occupied_frac = static_cast<double>(occupied) / static_cast<double>(entries);
    {
      const double p1 = pt.occupied_frac, p2 = report.xi_occupied_frac;
      const double n1 = static_cast<double>(entries), n2 = static_cast<double>(xi_entries);
      const double pp = (p1 * n1 + p2 * n2) / (n1 + n2);
      pt.occupied_z = (p1 - p2) / std::sqrt(pp * (1.0 - pp) * (1.0 / n1 + 1.0 / n2));
    }

    pt.marked_frac = mean_of(rep_marked_frac);
    {
      double var = 0.0;
      for (double f : rep_marked_frac) var += (f - pt.marked_frac) * (f - pt.marked_frac);
      const double m = static_cast<double>(rep_marked_frac.size());
      pt.marked_frac_se = m > 1.0 ? std::sqrt(var / (m - 1.0) / m) : 0.0;
    }

    // fitted normalization of the marked-attachment intensity against the
    // untruncated shape mass; candidates sqrt(p) and 1/sqrt(p) are reported,
    // neither is asserted
    pt.norm_c = mass_total > 0.0 ? marked_total / mass_total : 0.0;
    {
      RandomStream boot = root.substream((1ULL << 35) + gi);
      std::vector<double> cs;
      for (int b = 0; b < config.bootstrap; ++b) {
        double mk = 0.0, ms = 0.0;
        for (std::size_t i = 0; i < reps; ++i) {
          const std::size_t pick = std::min(
              reps - 1, static_cast<std::size_t>(boot.uniform_open01() * static_cast<double>(reps)));
          mk += slots[pick].marked_atts;
          ms += slots[pick].norm_mass;
        }
        if (ms > 0.0) cs.push_back(mk / ms);
      }
      const double m = mean_of(cs);
      double var = 0.0;
      for (double c : cs) var += (c - m) * (c - m);
      const double sd = cs.size() > 1 ? std::sqrt(var / static_cast<double>(cs.size() - 1)) : 0.0;
      pt.norm_lo = pt.norm_c - 1.96 * sd;
      pt.norm_hi = pt.norm_c + 1.96 * sd;
    }
    report.points.push_back(pt);
  }

  const Theorem9Point& last = report.points.back();
  report.attach_ok = last.attach_p > 0.01;
  report.height_ok = last.height_p > 0.01;
  report.occupied_ok = std::abs(last.occupied_z) <= 3.0;
  report.marked_frac_converged = true;
  if (report.points.size() >= 3) {
    const auto& a = report.points[report.points.size() - 3];
    const auto& b = report.points[report.points.size() - 2];
    const auto& c = report.points.back();
    const double d12 = std::abs(b.marked_frac - a.marked_frac);
    const double d23 = std::abs(c.marked_frac - b.marked_frac);
    const double allowance = 2.0 * (std::sqrt(a.marked_frac_se * a.marked_frac_se +
                                              b.marked_frac_se * b.marked_frac_se) +
                                    std::sqrt(b.marked_frac_se * b.marked_frac_se +
                                              c.marked_frac_se * c.marked_frac_se));
    report.marked_frac_converged = d23 <= d12 + allowance;
  }
  report.pass =
      report.attach_ok && report.height_ok && report.occupied_ok && report.marked_frac_converged;
  return report;
}

}  // namespace genea
