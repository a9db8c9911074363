#include <cmath>
#include <cstdio>
#include <string>

#include "genea/continuum.hpp"
#include "genea/contour.hpp"
#include "genea/genealogy.hpp"
#include "genea/tree.hpp"
#include "genea/verify.hpp"

#include "json.hpp"

namespace genea {

namespace {

using json = nlohmann::ordered_json;

// 17 significant digits: round-trip safe for 64-bit floats.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json node_to_json(const TreeNode& node) {
  json j;
  j["length"] = node.length;
  if (node.is_leaf()) {
    j["leaf"] = node.leaf == LeafKind::Extant ? "extant" : "extinct";
    if (node.marked) j["marked"] = true;
  } else {
    j["children"] = json::array({node_to_json(node.children[0]), node_to_json(node.children[1])});
  }
  return j;
}

TreeNode node_from_json(const json& j) {
  TreeNode node;
  if (!j.is_object() || !j.contains("length") || !j["length"].is_number())
    throw FormatError("tree json: node needs a numeric length");
  node.length = j["length"].get<double>();
  if (j.contains("children")) {
    const json& kids = j["children"];
    if (!kids.is_array() || kids.size() != 2)
      throw FormatError("tree json: children must be a two-element array");
    node.children.push_back(node_from_json(kids[0]));
    node.children.push_back(node_from_json(kids[1]));
    return node;
  }
  if (!j.contains("leaf") || !j["leaf"].is_string())
    throw FormatError("tree json: leaf nodes need a leaf kind");
  const std::string kind = j["leaf"].get<std::string>();
  if (kind == "extant")
    node.leaf = LeafKind::Extant;
  else if (kind == "extinct")
    node.leaf = LeafKind::Extinct;
  else
    throw FormatError("tree json: leaf kind must be extant or extinct");
  if (j.contains("marked")) {
    if (!j["marked"].is_boolean()) throw FormatError("tree json: marked must be a boolean");
    node.marked = j["marked"].get<bool>();
  }
  return node;
}

json report_to_json(const LawReport& r) {
  json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  j["sample_size"] = r.sample_size;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["params"] = r.params;
  return j;
}

json config_to_json(const ConvergenceConfig& c) {
  json j;
  j["t"] = c.t;
  j["delta"] = c.delta;
  j["n_grid"] = c.n_grid;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["exact_sampler"] = c.exact_sampler;
  j["finite_n_reference"] = c.finite_n_reference;
  j["p"] = c.p;
  j["kappa_min"] = c.kappa_min;
  j["xi_reference_draws"] = c.xi_reference_draws;
  j["max_pool"] = c.max_pool;
  j["bootstrap"] = c.bootstrap;
  return j;
}

}  // namespace

std::string to_json_string(const PlanarTree& tree) {
  json j;
  if (std::isfinite(tree.horizon))
    j["t"] = tree.horizon;
  else
    j["t"] = nullptr;
  j["root"] = node_to_json(tree.root);
  return j.dump();
}

PlanarTree tree_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("tree json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("t") || !j.contains("root"))
    throw FormatError("tree json: expected an object with t and root");
  PlanarTree tree;
  if (j["t"].is_null())
    tree.horizon = std::numeric_limits<double>::infinity();
  else if (j["t"].is_number())
    tree.horizon = j["t"].get<double>();
  else
    throw FormatError("tree json: t must be a number or null");
  tree.root = node_from_json(j["root"]);
  validate_tree(tree);
  return tree;
}

std::string to_csv(const ContourPath& path) {
  std::string out = "direction,length,cumulative_u,height_after\n";
  double u = 0.0, h = path.start_height;
  for (const Segment& s : path.segments) {
    u += s.length;
    h += s.dir == Dir::Up ? s.length : -s.length;
    out += s.dir == Dir::Up ? "U," : "D,";
    out += num(s.length) + "," + num(u) + "," + num(h) + "\n";
  }
  return out;
}

std::string to_csv(const GenealogyPP& pp) {
  std::string out = "index,depth\n";
  for (const GenealogyPoint& pt : pp.points)
    out += std::to_string(pt.index) + "," + num(pt.depth) + "\n";
  return out;
}

std::string to_json_string(const HistoricalPP& pp) {
  json j;
  j["t"] = pp.t;
  json entries = json::array();
  for (const HistoricalEntry& e : pp.entries) {
    json je;
    je["l"] = e.index;
    je["depth"] = e.depth;
    for (const char* side : {"left", "right"}) {
      const auto& atts = side[0] == 'l' ? e.left : e.right;
      json ja = json::array();
      for (const Attachment& a : atts) {
        json item;
        item["attach"] = a.attach_depth;
        item["height"] = a.height;
        item["subtree"] = node_to_json(a.subtree.root);
        ja.push_back(std::move(item));
      }
      je[side] = std::move(ja);
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j.dump();
}

std::string to_csv(const ContinuumGenealogyPP& pp) {
  std::string out = "ell,depth\n";
  for (const ContinuumPoint& pt : pp.points) out += num(pt.ell) + "," + num(pt.depth) + "\n";
  return out;
}

std::string to_json_string(const ContinuumHistoricalPP& pp) {
  json j;
  j["t"] = pp.t;
  j["p"] = pp.p;
  j["delta"] = pp.delta;
  j["kappa_min"] = pp.kappa_min;
  json entries = json::array();
  for (const ContinuumEntry& e : pp.entries) {
    json je;
    je["ell"] = e.ell;
    je["depth"] = e.depth;
    for (const char* side : {"left", "right"}) {
      const auto& atts = side[0] == 'l' ? e.left : e.right;
      json ja = json::array();
      for (const ContinuumAttachment& a : atts) {
        json item;
        item["attach"] = a.attach_depth;
        item["height"] = a.height;
        item["subtree"] = node_to_json(a.subtree.root);
        ja.push_back(std::move(item));
      }
      je[side] = std::move(ja);
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j.dump();
}

std::string to_json_string(const LawReport& report) { return report_to_json(report).dump(); }

std::string to_json_string(const std::vector<LawReport>& reports) {
  json j;
  bool pass = true;
  json arr = json::array();
  for (const LawReport& r : reports) {
    pass = pass && r.pass;
    arr.push_back(report_to_json(r));
  }
  j["pass"] = pass;
  j["reports"] = std::move(arr);
  return j.dump();
}

std::string to_json_string(const Theorem5Report& report) {
  json j;
  j["kind"] = "theorem5";
  j["config"] = config_to_json(report.config);
  json pts = json::array();
  for (const Theorem5Point& p : report.points) {
    json jp;
    jp["n"] = p.n;
    jp["pooled"] = p.pooled;
    jp["depth_ks_d"] = p.depth_d;
    jp["depth_ks_p"] = p.depth_p;
    jp["depth_ks_se"] = p.depth_se;
    jp["count_chi2"] = p.count_stat;
    jp["count_p"] = p.count_p;
    jp["index_ks_d"] = p.index_d;
    jp["index_ks_p"] = p.index_p;
    pts.push_back(std::move(jp));
  }
  j["points"] = std::move(pts);
  j["depth_monotone"] = report.depth_monotone;
  j["final_depth_d"] = report.final_depth_d;
  j["final_depth_ok"] = report.final_depth_ok;
  j["final_count_ok"] = report.final_count_ok;
  j["pass"] = report.pass;
  return j.dump();
}

std::string to_json_string(const Theorem9Report& report) {
  json j;
  j["kind"] = "theorem9";
  j["config"] = config_to_json(report.config);
  j["xi_entries"] = report.xi_entries;
  j["xi_scatter"] = report.xi_scatter;
  j["xi_occupied_frac"] = report.xi_occupied_frac;
  json pts = json::array();
  for (const Theorem9Point& p : report.points) {
    json jp;
    jp["n"] = p.n;
    jp["entries"] = p.entries;
    jp["scatter"] = p.scatter;
    jp["attach_ks_d"] = p.attach_d;
    jp["attach_ks_p"] = p.attach_p;
    jp["height_ks_d"] = p.height_d;
    jp["height_ks_p"] = p.height_p;
    jp["counts_p"] = p.counts_p;
    jp["occupied_frac"] = p.occupied_frac;
    jp["occupied_z"] = p.occupied_z;
    jp["marked_frac"] = p.marked_frac;
    jp["marked_frac_se"] = p.marked_frac_se;
    jp["norm_c"] = p.norm_c;
    jp["norm_ci"] = json::array({p.norm_lo, p.norm_hi});
    pts.push_back(std::move(jp));
  }
  j["points"] = std::move(pts);
  j["normalization_candidates"] = {{"sqrt_p", report.sqrt_p}, {"inv_sqrt_p", report.inv_sqrt_p}};
  j["attach_ok"] = report.attach_ok;
  j["height_ok"] = report.height_ok;
  j["occupied_ok"] = report.occupied_ok;
  j["marked_frac_converged"] = report.marked_frac_converged;
  j["pass"] = report.pass;
  return j.dump();
}

std::string to_csv(const Theorem5Report& report) {
  std::string out = "n,pooled,depth_ks_d,depth_ks_p,depth_ks_se,count_chi2,count_p,index_ks_d,index_ks_p\n";
  for (const Theorem5Point& p : report.points) {
    out += std::to_string(p.n) + "," + std::to_string(p.pooled) + "," + num(p.depth_d) + "," +
           num(p.depth_p) + "," + num(p.depth_se) + "," + num(p.count_stat) + "," +
           num(p.count_p) + "," + num(p.index_d) + "," + num(p.index_p) + "\n";
  }
  return out;
}

std::string to_csv(const Theorem9Report& report) {
  std::string out =
      "n,entries,scatter,attach_ks_d,attach_ks_p,height_ks_d,height_ks_p,counts_p,"
      "occupied_frac,occupied_z,marked_frac,marked_frac_se,norm_c,norm_lo,norm_hi\n";
  for (const Theorem9Point& p : report.points) {
    out += std::to_string(p.n) + "," + std::to_string(p.entries) + "," +
           std::to_string(p.scatter) + "," + num(p.attach_d) + "," + num(p.attach_p) + "," +
           num(p.height_d) + "," + num(p.height_p) + "," + num(p.counts_p) + "," +
           num(p.occupied_frac) + "," + num(p.occupied_z) + "," + num(p.marked_frac) + "," +
           num(p.marked_frac_se) + "," + num(p.norm_c) + "," + num(p.norm_lo) + "," +
           num(p.norm_hi) + "\n";
  }
  return out;
}

}  // namespace genea
