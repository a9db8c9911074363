// Acceptance suite: every law and convergence check at full scale, one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "genea/continuum.hpp"
#include "genea/contour.hpp"
#include "genea/genealogy.hpp"
#include "genea/laws.hpp"
#include "genea/sim.hpp"
#include "genea/tree.hpp"
#include "genea/verify.hpp"

using namespace genea;

namespace {

int g_failures = 0;

void run_criterion(int id, const std::string& label,
                   const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %2d: %s (%s; %.1fs)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool all_pass(const std::vector<LawReport>& reports, std::string& detail) {
  bool pass = true;
  for (const LawReport& r : reports) {
    pass = pass && r.pass;
    if (!detail.empty()) detail += ", ";
    detail += r.name + " p=" + fmt("%.4g", r.p_value);
  }
  return pass;
}

bool multiset_equal(std::vector<double> a, std::vector<double> b, double tol) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

TreeNode dyadic_node(RandomStream& rng, int depth) {
  TreeNode n;
  n.length = static_cast<double>(1 + (rng.next_u64() % 4096)) * 0x1p-12;
  if (depth > 0 && rng.uniform_open01() < 0.45) {
    n.children.push_back(dyadic_node(rng, depth - 1));
    n.children.push_back(dyadic_node(rng, depth - 1));
  }
  return n;
}

bool trees_identical(const PlanarTree& a, const PlanarTree& b) { return trees_equal(a, b, 0.0); }

bool paths_identical(const ContourPath& a, const ContourPath& b) {
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i)
    if (a.segments[i].dir != b.segments[i].dir || a.segments[i].length != b.segments[i].length)
      return false;
  return true;
}

}  // namespace

int main() {
  run_criterion(1, "population-size law at t=1, 1e5 trees, chi-square p > 0.001",
                [](std::string& detail) { return all_pass(verify_eq5(101, 100000, 1.0), detail); });

  run_criterion(2, "height survival 1/(1+tau) at tau in {0.5,1,2}, 1e5 paths, 3 SE",
                [](std::string& detail) { return all_pass(verify_eq6(102, 100000), detail); });

  run_criterion(
      3, "branch-depth law, 1e4 conditioned trees KS p > 0.01, plus cross-method two-sample KS",
      [](std::string& detail) {
        return all_pass(verify_lemma3(103, 10000, 1.0, 10, 2000, 5), detail);
      });

  run_criterion(4, "genealogy extraction equals the LCA oracle on 1e3 trees (tol 1e-9)",
                [](std::string& detail) {
                  RandomStream root(104);
                  int bad = 0;
                  for (int i = 0; i < 1000; ++i) {
                    RandomStream rng = root.substream(static_cast<std::uint64_t>(i));
                    const double t = 0.5 + 1.5 * rng.uniform_open01();
                    const int n = 1 + static_cast<int>(rng.uniform_open01() * 12.0);
                    const PlanarTree tree =
                        condition_on_count(t, n, ConditionMethod::ExcursionConcat, rng);
                    std::vector<double> extracted;
                    for (const GenealogyPoint& pt : genealogy_pp(tree).points)
                      extracted.push_back(pt.depth);
                    if (!multiset_equal(extracted, lca_branch_depths(tree), 1e-9)) ++bad;
                  }
                  detail = fmt("%g disagreements of 1000", bad);
                  return bad == 0;
                });

  run_criterion(5, "tree-contour bijection exact on 1e3 random trees",
                [](std::string& detail) {
                  RandomStream rng(105);
                  int bad = 0;
                  for (int i = 0; i < 1000; ++i) {
                    PlanarTree tree;
                    tree.root = dyadic_node(rng, 9);
                    const ContourPath path = contour_from_tree(tree);
                    const PlanarTree back = tree_from_contour(path);
                    if (!trees_identical(tree, back) ||
                        !paths_identical(path, contour_from_tree(back)))
                      ++bad;
                    // truncated variant: cut at a dyadic level inside the tree
                    const double t = 0.25 + static_cast<double>(i % 8) * 0.125;
                    const PlanarTree cut = truncate_at_level(tree, t);
                    const PlanarTree cut_back = tree_from_contour(contour_from_tree(cut), t);
                    if (!trees_identical(cut, cut_back)) ++bad;
                  }
                  detail = fmt("%g round-trip failures of 2000", bad);
                  return bad == 0;
                });

  run_criterion(6, "continuum genealogical law: count, depth, index at t=1, delta=0.1",
                [](std::string& detail) {
                  return all_pass(verify_lemma4(106, 10000, 1.0, 0.1), detail);
                });

  run_criterion(
      7, "rescaled genealogy converges: n in {25,100,400}, depth KS shrinking, final D < 0.05",
      [](std::string& detail) {
        ConvergenceConfig config;
        config.t = 1.0;
        config.delta = 0.2;
        config.n_grid = {25, 100, 400};
        config.replicates = 2000;
        config.seed = 107;
        const Theorem5Report report = theorem5_experiment(config);
        detail = "D =";
        for (const Theorem5Point& pt : report.points) detail += fmt(" %.4f", pt.depth_d);
        detail += fmt("; final count p=%.4g", report.points.back().count_p);
        detail += report.depth_monotone ? "; monotone" : "; NOT monotone";
        return report.pass;
      });

  run_criterion(8, "mark probability sqrt(p): 1e5 full trees at p=0.04, 3 SE of 0.2",
                [](std::string& detail) {
                  return all_pass(verify_markprob(108, 100000, 0.04), detail);
                });

  run_criterion(
      9, "attachment counts follow the per-branch Poisson law: 1e4 trees, chi-square p > 0.001",
      [](std::string& detail) {
        const std::vector<LawReport> reports = verify_lemma6_count(109, 10000, 1.0, 5);
        const bool pass = all_pass(reports, detail);
        detail += "; " + reports[0].params;  // the unit-rate reading is reported alongside
        return pass;
      });

  run_criterion(
      10, "first-set law: 1e5 points, 10x10 grid chi-square p > 0.001, mean within 3 SE",
      [](std::string& detail) {
        return all_pass(verify_first_set_shape(110, 7500, 1.0, 0.25, 0.1), detail);
      });

  run_criterion(
      11, "historical shape converges to the continuum reference (normalization reported)",
      [](std::string& detail) {
        ConvergenceConfig config;
        config.t = 1.0;
        config.delta = 0.2;
        config.n_grid = {25, 100, 400};
        config.replicates = 2000;
        config.seed = 111;
        config.p = 2.0;  // p_n = 2/n
        config.kappa_min = 0.1;
        const Theorem9Report report = theorem9_experiment(config);
        const Theorem9Point& last = report.points.back();
        detail = fmt("final attach p=%.3g height p=%.3g occupied z=%.2f", last.attach_p,
                     last.height_p, last.occupied_z);
        detail += fmt("; norm c=%.3f in [%.3f,%.3f]", last.norm_c, last.norm_lo, last.norm_hi);
        detail += fmt(" vs sqrt(p)=%.3f, 1/sqrt(p)=%.3f (reported, not asserted)", report.sqrt_p,
                      report.inv_sqrt_p);
        const bool ci_finite = std::isfinite(last.norm_c) && last.norm_lo < last.norm_hi;
        return report.pass && ci_finite;
      });

  run_criterion(12, "goodness-of-fit calibration: p-values uniform over 100 self-runs",
                [](std::string& detail) {
                  return all_pass(verify_calibration(112, 100, 2000), detail);
                });

  if (g_failures == 0) {
    std::printf("acceptance: all 12 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
