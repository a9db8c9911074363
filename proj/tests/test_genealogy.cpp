#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "genea/genealogy.hpp"
#include "genea/laws.hpp"
#include "genea/sim.hpp"
#include "genea/verify.hpp"
#include "helpers.hpp"

using namespace genea;
using test::worked_tree;

namespace {

std::vector<double> depths_of(const GenealogyPP& pp) {
  std::vector<double> out;
  for (const GenealogyPoint& pt : pp.points) out.push_back(pt.depth);
  return out;
}

bool multiset_equal(std::vector<double> a, std::vector<double> b, double tol) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("worked tree genealogical point-process") {
  const GenealogyPP pp = genealogy_pp(worked_tree());
  CHECK(pp.t == doctest::Approx(1.0));
  REQUIRE(pp.points.size() == 1);
  CHECK(pp.points[0].index == 1);
  CHECK(pp.points[0].depth == doctest::Approx(0.5).epsilon(1e-12));

  RandomStream rng(3);
  const PlanarTree one = condition_on_count(1.0, 1, ConditionMethod::ExcursionConcat, rng);
  CHECK(genealogy_pp(one).points.empty());

  PlanarTree extinct_only;
  extinct_only.horizon = 1.0;
  extinct_only.root.length = 0.4;
  CHECK_THROWS_AS(genealogy_pp(extinct_only), DomainError);
}

TEST_CASE("genealogy depths agree with the LCA oracle") {
  RandomStream rng(89);
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.5 + 1.5 * rng.uniform_open01();
    const int n = 1 + static_cast<int>(rng.uniform_open01() * 10.0);
    const PlanarTree tree = condition_on_count(t, n, ConditionMethod::ExcursionConcat, rng);
    REQUIRE(multiset_equal(depths_of(genealogy_pp(tree)), lca_branch_depths(tree), 1e-9));
  }
}

TEST_CASE("point count is the extant count minus one") {
  RandomStream rng(97);
  for (int i = 0; i < 300; ++i) {
    const PlanarTree tree = simulate_tree_below(1.0, rng);
    if (extant_count(tree) == 0) continue;
    CHECK(static_cast<int>(genealogy_pp(tree).points.size()) == extant_count(tree) - 1);
  }
}

TEST_CASE("reconstruction inverts the point-process") {
  GenealogyPP empty;
  empty.t = 1.0;
  const PlanarTree single = reconstruct_genealogy_tree(empty);
  REQUIRE(single.root.is_leaf());
  CHECK(single.root.leaf == LeafKind::Extant);
  CHECK(single.root.length == doctest::Approx(1.0));

  GenealogyPP pair;
  pair.t = 1.0;
  pair.points.push_back({1, 0.5});
  const PlanarTree two = reconstruct_genealogy_tree(pair);
  PlanarTree expect;
  expect.horizon = 1.0;
  expect.root.length = 0.5;
  TreeNode leaf;
  leaf.length = 0.5;
  leaf.leaf = LeafKind::Extant;
  expect.root.children = {leaf, leaf};
  CHECK(trees_equal(two, expect, 1e-12));

  GenealogyPP bad;
  bad.t = 1.0;
  bad.points.push_back({1, 1.5});
  CHECK_THROWS_AS(reconstruct_genealogy_tree(bad), FormatError);
}

TEST_CASE("reconstruction is a fixed point of the extraction") {
  RandomStream rng(101);
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.5 + rng.uniform_open01();
    const int n = 2 + static_cast<int>(rng.uniform_open01() * 9.0);
    GenealogyPP pp;
    pp.t = t;
    for (int j = 1; j < n; ++j) pp.points.push_back({j, t * rng.uniform_open01()});
    const PlanarTree tree = reconstruct_genealogy_tree(pp);
    validate_tree(tree);
    CHECK(extant_count(tree) == n);
    // the LCA depths reproduce the input in order
    const std::vector<double> lca = lca_branch_depths(tree);
    REQUIRE(lca.size() == pp.points.size());
    for (std::size_t j = 0; j < lca.size(); ++j)
      CHECK(lca[j] == doctest::Approx(pp.points[j].depth).epsilon(1e-12));
    // and the contour extraction returns the exact same point-process
    const GenealogyPP back = genealogy_pp(tree);
    REQUIRE(back.points.size() == pp.points.size());
    for (std::size_t j = 0; j < back.points.size(); ++j) {
      CHECK(back.points[j].index == pp.points[j].index);
      CHECK(back.points[j].depth == doctest::Approx(pp.points[j].depth).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact sampler matches the simulated branch-depth law") {
  RandomStream rng(103);
  GenealogyPP pp = sample_genealogy_exact(1.0, 2000, rng);
  CHECK(pp.points.size() == 1999);
  for (const GenealogyPoint& pt : pp.points) {
    CHECK(pt.depth > 0.0);
    CHECK(pt.depth < 1.0);
  }
  std::vector<double> exact = depths_of(pp);
  std::vector<double> simulated;
  for (int i = 0; i < 250; ++i) {
    const PlanarTree tree = condition_on_count(1.0, 9, ConditionMethod::ExcursionConcat, rng);
    for (double d : depths_of(genealogy_pp(tree))) simulated.push_back(d);
  }
  const TwoSampleKS ks = two_sample_ks(std::move(exact), std::move(simulated));
  CHECK(ks.p > 0.01);
}

TEST_CASE("worked tree historical decomposition") {
  const HistoricalPP hist = historical_pp(worked_tree(), /*keep_unmarked=*/false);
  REQUIRE(hist.entries.size() == 3);

  const HistoricalEntry& e0 = hist.entries[0];
  CHECK(e0.index == 0);
  CHECK(e0.depth == doctest::Approx(1.0));
  CHECK(e0.left.empty());
  CHECK(e0.right.empty());

  const HistoricalEntry& e1 = hist.entries[1];
  CHECK(e1.index == 1);
  CHECK(e1.depth == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e1.left.empty());
  CHECK(e1.right.empty());

  const HistoricalEntry& e2 = hist.entries[2];
  CHECK(e2.index == 2);
  CHECK(e2.depth == doctest::Approx(1.0));
  CHECK(e2.right.empty());
  REQUIRE(e2.left.size() == 1);
  CHECK(e2.left[0].attach_depth == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(e2.left[0].height == doctest::Approx(0.1).epsilon(1e-9));
  REQUIRE(e2.left[0].subtree.root.is_leaf());
  CHECK(e2.left[0].subtree.root.length == doctest::Approx(0.1));
  CHECK(e2.left[0].subtree.root.marked);

  // without any mark nothing survives the projection
  const HistoricalPP bare = historical_pp(worked_tree(false), false);
  for (const HistoricalEntry& e : bare.entries) {
    CHECK(e.left.empty());
    CHECK(e.right.empty());
  }
  // keeping unmarked subtrees stores the grandchild anyway
  const HistoricalPP full = historical_pp(worked_tree(false), true);
  CHECK(full.entries[2].left.size() == 1);
  CHECK_FALSE(full.entries[2].left[0].subtree.root.marked);
}

TEST_CASE("historical decomposition conserves marks and bounds") {
  RandomStream rng(107);
  for (int i = 0; i < 100; ++i) {
    const PlanarTree tree =
        mark_extinct(condition_on_count(1.0, 5, ConditionMethod::ExcursionConcat, rng), 0.5, rng);
    const HistoricalPP hist = historical_pp(tree, /*keep_unmarked=*/true);
    int stored_marks = 0;
    for (const HistoricalEntry& e : hist.entries) {
      for (const auto* side : {&e.left, &e.right}) {
        for (const Attachment& att : *side) {
          CHECK(att.attach_depth < e.depth + 1e-12);
          CHECK(att.height < att.attach_depth + 1e-12);
          CHECK(att.height == doctest::Approx(tree_height(att.subtree)).epsilon(1e-9));
          stored_marks += mark_count(att.subtree);
          validate_tree(att.subtree);
        }
      }
    }
    CHECK(stored_marks == mark_count(tree));

    // dropping unmarked subtrees keeps exactly the marked ones
    const HistoricalPP thin = historical_pp(tree, /*keep_unmarked=*/false);
    std::size_t marked_atts = 0;
    for (const HistoricalEntry& e : hist.entries)
      for (const auto* side : {&e.left, &e.right})
        for (const Attachment& att : *side) marked_atts += has_any_mark(att.subtree) ? 1 : 0;
    std::size_t thin_atts = 0;
    for (const HistoricalEntry& e : thin.entries)
      for (const auto* side : {&e.left, &e.right}) thin_atts += side->size();
    CHECK(thin_atts == marked_atts);
  }
}

TEST_CASE("historical profile agrees with the materialized decomposition") {
  RandomStream rng(109);
  for (int i = 0; i < 50; ++i) {
    const PlanarTree tree =
        mark_extinct(condition_on_count(1.0, 4, ConditionMethod::ExcursionConcat, rng), 0.4, rng);
    const ContourPath path = contour_from_tree(tree);
    std::vector<bool> marks;
    {
      // leaf marks in depth-first order are the local-max marks in path order
      struct Walk {
        std::vector<bool>& out;
        void operator()(const TreeNode& n) const {
          if (n.is_leaf()) {
            out.push_back(n.marked);
            return;
          }
          (*this)(n.children[0]);
          (*this)(n.children[1]);
        }
      };
      Walk{marks}(tree.root);
    }
    const HistoricalProfile profile = historical_profile(path, tree.horizon, marks);
    const HistoricalPP hist = historical_pp(tree, /*keep_unmarked=*/true);
    REQUIRE(profile.entries.size() == hist.entries.size());
    for (std::size_t e = 0; e < hist.entries.size(); ++e) {
      CHECK(profile.entries[e].index == hist.entries[e].index);
      CHECK(profile.entries[e].depth == doctest::Approx(hist.entries[e].depth).epsilon(1e-12));
      for (int side = 0; side < 2; ++side) {
        const auto& ps = side == 0 ? profile.entries[e].left : profile.entries[e].right;
        const auto& hs = side == 0 ? hist.entries[e].left : hist.entries[e].right;
        REQUIRE(ps.size() == hs.size());
        for (std::size_t k = 0; k < ps.size(); ++k) {
          CHECK(ps[k].attach_depth == doctest::Approx(hs[k].attach_depth).epsilon(1e-12));
          CHECK(ps[k].height == doctest::Approx(hs[k].height).epsilon(1e-12));
          CHECK(ps[k].marked == has_any_mark(hs[k].subtree));
        }
      }
    }
  }
}

namespace {

// Tree-side oracle for the attachment sets: walk the lineage halves of each
// consecutive extant pair from their common ancestor; offshoots hanging
// between the pair are the right children of left turns on the first path
// and the left children of right turns on the second.
struct PathStep {
  const TreeNode* node;
  bool went_left;
};

void extant_paths(const TreeNode& n, std::vector<std::vector<PathStep>>& paths,
                  std::vector<PathStep>& cur) {
  if (n.is_leaf()) {
    if (n.leaf == LeafKind::Extant) paths.push_back(cur);
    return;
  }
  cur.push_back({&n, true});
  extant_paths(n.children[0], paths, cur);
  cur.back().went_left = false;
  extant_paths(n.children[1], paths, cur);
  cur.pop_back();
}

}  // namespace

TEST_CASE("attachment counts match the lineage-walk oracle") {
  RandomStream root(211);
  for (int r = 0; r < 300; ++r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const PlanarTree tree = condition_on_count(1.0, 5, ConditionMethod::ExcursionConcat, sub);
    const HistoricalPP hist = historical_pp(tree, /*keep_unmarked=*/true);
    std::vector<std::vector<PathStep>> paths;
    std::vector<PathStep> cur;
    extant_paths(tree.root, paths, cur);
    REQUIRE(paths.size() == 5);
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
      std::size_t common = 0;
      while (common < paths[i].size() && common < paths[i + 1].size() &&
             paths[i][common].node == paths[i + 1][common].node)
        ++common;
      int left = 0, right = 0;
      for (std::size_t k = common; k < paths[i].size(); ++k)
        if (paths[i][k].went_left) ++left;
      for (std::size_t k = common; k < paths[i + 1].size(); ++k)
        if (!paths[i + 1][k].went_left) ++right;
      CHECK(static_cast<int>(hist.entries[i + 1].left.size()) == left);
      CHECK(static_cast<int>(hist.entries[i + 1].right.size()) == right);
    }
  }
}

TEST_CASE("attachment counts follow the thinned-birth Poisson law") {
  // offshoots arrive along a branch of depth t_i at rate tau/(1+tau), so the
  // per-side count is Poisson(t_i - ln(1+t_i)); the unit-rate reading
  // Poisson(t_i) is firmly rejected on the same sample
  RandomStream root(223);
  std::vector<int> counts;
  std::vector<double> means, unit_means;
  for (int r = 0; r < 4000; ++r) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(r));
    const PlanarTree tree = condition_on_count(1.0, 5, ConditionMethod::ExcursionConcat, sub);
    for (const HistoricalEntry& e : historical_pp(tree, true).entries) {
      if (e.index == 0 || e.index == 5) continue;
      counts.push_back(static_cast<int>(e.left.size()));
      means.push_back(intensity::subtree_discrete_count_mass(e.depth));
      unit_means.push_back(e.depth);
    }
  }
  CHECK(poisson_given_mean_test("thinned", counts, means, 0.001).pass);
  CHECK_FALSE(poisson_given_mean_test("unit-rate", counts, unit_means, 0.001).pass);
}

TEST_CASE("historical decomposition requires an extant individual") {
  PlanarTree extinct_only;
  extinct_only.horizon = 1.0;
  extinct_only.root.length = 0.4;
  CHECK_THROWS_AS(historical_pp(extinct_only, true), DomainError);
}

TEST_CASE("genealogy csv and historical json serialize") {
  const GenealogyPP pp = genealogy_pp(worked_tree());
  const std::string csv = to_csv(pp);
  CHECK(csv.find("index,depth") == 0);
  CHECK(csv.find("1,0.5") != std::string::npos);
  const std::string js = to_json_string(historical_pp(worked_tree(), false));
  CHECK(js.find("\"entries\"") != std::string::npos);
  CHECK(js.find("\"attach\"") != std::string::npos);
}
