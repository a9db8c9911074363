#include "genea/continuum.hpp"

#include <algorithm>
#include <cmath>

#include "genea/laws.hpp"

namespace genea {

namespace {

void require_truncations(double p, double kappa_min) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("sampling rate p must be finite and > 0");
  if (!(kappa_min > 0.0)) throw ParameterError("kappa_min must be > 0");
}

// Height with density proportional to 1/h^2 on (lo, hi), by inversion.
double sample_inverse_square(double lo, double hi, RandomStream& rng) {
  const double u = rng.uniform_open01();
  return 1.0 / (1.0 / lo - u * (1.0 / lo - 1.0 / hi));
}

struct Attach {
  double level;  // height of the branch point on the spine, from the root
  bool on_left;
  TreeNode subtree;
};

TreeNode lambda_node(double h, double p, double kappa_min, RandomStream& rng) {
  std::vector<Attach> attaches;
  for (int side = 0; side < 2; ++side) {
    for (const auto& [tau, kappa] : sample_first_set(h, p, kappa_min, rng))
      attaches.push_back({tau, side == 0, lambda_node(kappa, p, kappa_min, rng)});
  }
  std::stable_sort(attaches.begin(), attaches.end(),
                   [](const Attach& a, const Attach& b) { return a.level < b.level; });

  TreeNode tip;
  tip.length = h - (attaches.empty() ? 0.0 : attaches.back().level);
  tip.leaf = LeafKind::Extinct;
  tip.marked = true;
  TreeNode node = std::move(tip);
  for (std::size_t j = attaches.size(); j-- > 0;) {
    TreeNode branch;
    branch.length = attaches[j].level - (j == 0 ? 0.0 : attaches[j - 1].level);
    if (attaches[j].on_left) {
      branch.children.push_back(std::move(attaches[j].subtree));
      branch.children.push_back(std::move(node));
    } else {
      branch.children.push_back(std::move(node));
      branch.children.push_back(std::move(attaches[j].subtree));
    }
    node = std::move(branch);
  }
  return node;
}

}  // namespace

ContinuumGenealogyPP sample_pi(double t, double delta, RandomStream& rng) {
  const double mass = intensity::pi_mass_above(delta, t);  // validates 0 < delta < t
  ContinuumGenealogyPP pp;
  pp.t = t;
  pp.delta = delta;
  const std::uint64_t n = sample_poisson(rng, mass);
  pp.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double ell = rng.uniform_open01();
    pp.points.push_back({ell, intensity::pi_depth_quantile(rng.uniform_open01(), delta, t)});
  }
  std::sort(pp.points.begin(), pp.points.end(),
            [](const ContinuumPoint& a, const ContinuumPoint& b) { return a.ell < b.ell; });
  return pp;
}

std::vector<std::pair<double, double>> sample_first_set(double h, double p, double kappa_min,
                                                        RandomStream& rng) {
  if (!(h > 0.0)) throw ParameterError("spine height must be > 0");
  require_truncations(p, kappa_min);
  std::vector<std::pair<double, double>> points;
  if (h <= kappa_min) return points;
  // Poisson thinning of the rectangle (0,h) x (kappa_min,h) with density
  // (1/sqrt(p))/kappa^2, kept where kappa < h - tau.
  const double rect_mass = h * (1.0 / kappa_min - 1.0 / h) / std::sqrt(p);
  const std::uint64_t n = sample_poisson(rng, rect_mass);
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double kappa = sample_inverse_square(kappa_min, h, rng);
    const double tau = sample_uniform(rng, 0.0, h);
    if (kappa < h - tau) points.emplace_back(tau, kappa);
  }
  return points;
}

PlanarTree sample_lambda_tree(double h, double p, double kappa_min, RandomStream& rng) {
  if (!(h > 0.0)) throw ParameterError("spine height must be > 0");
  require_truncations(p, kappa_min);
  PlanarTree tree;
  tree.root = lambda_node(h, p, kappa_min, rng);
  return tree;
}

void sample_xi_sets(double t_ell, double p, double kappa_min, RandomStream& rng,
                    std::vector<ContinuumAttachment>& left,
                    std::vector<ContinuumAttachment>& right) {
  if (!(t_ell > 0.0)) throw ParameterError("main depth must be > 0");
  require_truncations(p, kappa_min);
  for (int side = 0; side < 2; ++side) {
    std::vector<ContinuumAttachment>& dst = side == 0 ? left : right;
    dst.clear();
    if (t_ell <= kappa_min) continue;
    // thinning of (0,t_ell) x (kappa_min,t_ell) with density 1/h^2, kept
    // where the subtree fits below its attach depth (h < tau)
    const double rect_mass = t_ell * (1.0 / kappa_min - 1.0 / t_ell);
    const std::uint64_t n = sample_poisson(rng, rect_mass);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double hgt = sample_inverse_square(kappa_min, t_ell, rng);
      const double tau = sample_uniform(rng, 0.0, t_ell);
      if (hgt < tau) dst.push_back({tau, hgt, sample_lambda_tree(hgt, p, kappa_min, rng)});
    }
    std::sort(dst.begin(), dst.end(), [](const ContinuumAttachment& a, const ContinuumAttachment& b) {
      return a.attach_depth < b.attach_depth;
    });
  }
}

ContinuumHistoricalPP sample_xi(double t, double p, double delta, double kappa_min,
                                RandomStream& rng) {
  require_truncations(p, kappa_min);
  const ContinuumGenealogyPP main = sample_pi(t, delta, rng);
  ContinuumHistoricalPP pp;
  pp.t = t;
  pp.p = p;
  pp.delta = delta;
  pp.kappa_min = kappa_min;
  pp.entries.reserve(main.points.size());
  for (const ContinuumPoint& pt : main.points) {
    ContinuumEntry entry;
    entry.ell = pt.ell;
    entry.depth = pt.depth;
    sample_xi_sets(pt.depth, p, kappa_min, rng, entry.left, entry.right);
    pp.entries.push_back(std::move(entry));
  }
  return pp;
}

}  // namespace genea
