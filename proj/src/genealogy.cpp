#include "genea/genealogy.hpp"

#include <algorithm>
#include <cmath>

#include "genea/laws.hpp"

namespace genea {

namespace {

// Slope-alternating piece of a master path, annotated with the master-path
// ordinals of its interior local maxima (rise ends followed by a fall in the
// same piece), in piece order.
struct Frag {
  double start_h = 0.0;
  std::vector<Segment> segs;
  std::vector<int> max_ids;
};

Frag reversed_frag(Frag f) {
  Frag out;
  out.start_h = f.start_h;
  for (const Segment& s : f.segs) out.start_h += s.dir == Dir::Up ? s.length : -s.length;
  out.segs.reserve(f.segs.size());
  for (auto it = f.segs.rbegin(); it != f.segs.rend(); ++it)
    out.segs.push_back({it->dir == Dir::Up ? Dir::Down : Dir::Up, it->length});
  out.max_ids.assign(f.max_ids.rbegin(), f.max_ids.rend());
  return out;
}

struct CoreAttachment {
  double level = 0.0;   // constancy level of the running infimum
  double height = 0.0;  // sup of the excursion above the level
  ContourPath excursion;
  std::vector<int> max_ids;
};

// Infimum decomposition of a fragment starting at its maximum; one entry per
// excursion of (fragment - running infimum) above a constancy level. If a
// float-induced tie puts two excursions at the same level, the earlier one
// comes first.
std::vector<CoreAttachment> scan_infimum(const Frag& f) {
  std::vector<CoreAttachment> out;
  double cur = f.start_h;
  std::size_t i = 0;
  std::size_t next_max = 0;
  while (i < f.segs.size()) {
    if (f.segs[i].dir == Dir::Down) {
      cur -= f.segs[i].length;
      ++i;
      continue;
    }
    CoreAttachment att;
    att.level = cur;
    double rel = 0.0;
    bool closed = false;
    while (i < f.segs.size()) {
      if (f.segs[i].dir == Dir::Up) {
        rel += f.segs[i].length;
        att.height = std::max(att.height, rel);
        att.excursion.append(Dir::Up, f.segs[i].length);
        att.max_ids.push_back(f.max_ids[next_max++]);
        ++i;
      } else if (f.segs[i].length >= rel) {
        att.excursion.append(Dir::Down, rel);
        cur -= f.segs[i].length - rel;
        ++i;
        closed = true;
        break;
      } else {
        rel -= f.segs[i].length;
        att.excursion.append(Dir::Down, f.segs[i].length);
        ++i;
      }
    }
    if (!closed) throw FormatError("historical decomposition: fragment ends inside an excursion");
    out.push_back(std::move(att));
  }
  return out;
}

struct CoreEntry {
  int index = 0;
  double depth = 0.0;
  std::vector<CoreAttachment> left;
  std::vector<CoreAttachment> right;
};

// Full historical decomposition at level t: boundary entries 0 and n from
// the ascent (reversed) and descent, and one entry per below-t excursion,
// split at its minimum into a forward and a time-reversed half.
std::vector<CoreEntry> core_decompose(const ContourPath& path, double t) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  if (path.max_height() > t + kDepthTol)
    throw DomainError("historical decomposition: path exceeds the level");

  // per-segment ordinal of the rise's local maximum, -1 for falls
  const std::size_t m = path.segments.size();
  std::vector<int> seg_max(m, -1);
  std::vector<std::size_t> touch_segs;     // rises ending at the level
  std::vector<double> touch_heights;       // cumulative height after each touch
  {
    double h = path.start_height;
    int ord = 0;
    for (std::size_t i = 0; i < m; ++i) {
      h += path.segments[i].dir == Dir::Up ? path.segments[i].length : -path.segments[i].length;
      if (path.segments[i].dir == Dir::Up) {
        seg_max[i] = ord++;
        if (std::abs(h - t) <= kDepthTol) {
          touch_segs.push_back(i);
          touch_heights.push_back(h);
        }
      }
    }
  }
  if (touch_segs.empty())
    throw DomainError("historical decomposition: tree has no extant individual");
  const int n = static_cast<int>(touch_segs.size());

  // slice [first, last): interior maxima only (a trailing rise is a touch)
  auto slice = [&](std::size_t first, std::size_t last, double start_h) {
    Frag f;
    f.start_h = start_h;
    f.segs.assign(path.segments.begin() + static_cast<std::ptrdiff_t>(first),
                  path.segments.begin() + static_cast<std::ptrdiff_t>(last));
    for (std::size_t i = first; i < last; ++i)
      if (seg_max[i] >= 0 && i + 1 < last) f.max_ids.push_back(seg_max[i]);
    return f;
  };
  std::vector<CoreEntry> entries(static_cast<std::size_t>(n) + 1);
  entries[0].index = 0;
  entries[0].depth = t;
  entries[0].right = scan_infimum(reversed_frag(slice(0, touch_segs[0] + 1, path.start_height)));
  entries[n].index = n;
  entries[n].depth = t;
  entries[n].left = scan_infimum(slice(touch_segs.back() + 1, m, touch_heights.back()));

  for (int i = 1; i < n; ++i) {
    const std::size_t first = touch_segs[i - 1] + 1;
    const std::size_t last = touch_segs[i] + 1;
    // locate the excursion minimum (a fall end) within [first, last)
    const double h = touch_heights[static_cast<std::size_t>(i) - 1];
    double best = h;
    std::size_t best_end = first;
    {
      double hh = h;
      for (std::size_t j = first; j < last; ++j) {
        hh += path.segments[j].dir == Dir::Up ? path.segments[j].length : -path.segments[j].length;
        if (path.segments[j].dir == Dir::Down && hh < best) {
          best = hh;
          best_end = j + 1;
        }
      }
    }
    CoreEntry& e = entries[static_cast<std::size_t>(i)];
    e.index = i;
    e.depth = t - best;
    e.left = scan_infimum(slice(first, best_end, h));
    e.right = scan_infimum(reversed_frag(slice(best_end, last, best)));
  }
  return entries;
}

struct LeafInfo {
  LeafKind kind;
  bool marked;
};

void collect_leaves(const TreeNode& node, std::vector<LeafInfo>& out) {
  if (node.is_leaf()) {
    out.push_back({node.leaf, node.marked});
    return;
  }
  collect_leaves(node.children[0], out);
  collect_leaves(node.children[1], out);
}

void apply_marks(TreeNode& node, const std::vector<bool>& marks, std::size_t& next) {
  if (node.is_leaf()) {
    node.marked = marks[next++];
    return;
  }
  apply_marks(node.children[0], marks, next);
  apply_marks(node.children[1], marks, next);
}

}  // namespace

GenealogyPP genealogy_pp(const PlanarTree& tree) {
  GenealogyPP pp;
  pp.t = tree.horizon;
  const ContourPath path = contour_from_tree(tree);
  std::vector<double> depths = genealogy_depths_from_contour(path, tree.horizon);
  pp.points.reserve(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i)
    pp.points.push_back({static_cast<int>(i) + 1, depths[i]});
  return pp;
}

std::vector<double> genealogy_depths_from_contour(const ContourPath& path, double t) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  // single sweep: between a down-crossing of the level and the next
  // up-crossing, every interior minimum sits at a fall-to-rise turn
  enum class State { Ascent, Gap, Above };
  State state = State::Ascent;
  double gap_min = std::numeric_limits<double>::infinity();
  std::size_t touches = 0;
  std::vector<double> depths;
  double h = path.start_height;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const Segment& s = path.segments[i];
    if (s.dir == Dir::Up) {
      if (state == State::Gap) gap_min = std::min(gap_min, h);
      const double top = h + s.length;
      if (std::abs(top - t) <= kDepthTol) {
        ++touches;
        if (state == State::Gap) depths.push_back(t - gap_min);
        state = State::Gap;
        gap_min = std::numeric_limits<double>::infinity();
      } else if (h < t && top > t) {
        ++touches;
        if (state == State::Gap) depths.push_back(t - gap_min);
        state = State::Above;
      }
      h = top;
    } else {
      const double bottom = h - s.length;
      if (h > t + kDepthTol && bottom < t) {
        state = State::Gap;
        gap_min = std::numeric_limits<double>::infinity();
      }
      h = bottom;
    }
  }
  if (touches == 0) throw DomainError("genealogy: tree has no extant individual");
  return depths;
}

PlanarTree reconstruct_genealogy_tree(const GenealogyPP& pp) {
  if (!(pp.t > 0.0)) throw FormatError("genealogy: horizon must be > 0");
  std::vector<double> lcas;
  lcas.reserve(pp.points.size());
  for (const GenealogyPoint& pt : pp.points) {
    if (!(pt.depth > 0.0) || !(pt.depth < pp.t))
      throw FormatError("genealogy: branch depth outside (0, t)");
    lcas.push_back(pp.t - pt.depth);
  }
  const std::vector<double> leaves(pp.points.size() + 1, pp.t);
  return tree_from_depth_profile(leaves, lcas, pp.t);
}

GenealogyPP sample_genealogy_exact(double t, int n, RandomStream& rng) {
  if (n < 1) throw ParameterError("population size n must be >= 1");
  const BranchDepthLaw law(t);
  GenealogyPP pp;
  pp.t = t;
  pp.points.reserve(static_cast<std::size_t>(n) - 1);
  for (int i = 1; i < n; ++i) pp.points.push_back({i, law.quantile(rng.uniform_open01())});
  return pp;
}

HistoricalPP historical_pp(const PlanarTree& tree, bool keep_unmarked) {
  const ContourPath path = contour_from_tree(tree);
  std::vector<LeafInfo> leaves;
  collect_leaves(tree.root, leaves);

  HistoricalPP out;
  out.t = tree.horizon;
  auto build = [&](std::vector<CoreAttachment>& src, std::vector<Attachment>& dst) {
    for (CoreAttachment& att : src) {
      std::vector<bool> marks;
      marks.reserve(att.max_ids.size());
      bool any = false;
      for (int id : att.max_ids) {
        const bool m = leaves[static_cast<std::size_t>(id)].marked;
        marks.push_back(m);
        any = any || m;
      }
      if (!keep_unmarked && !any) continue;
      Attachment a;
      a.attach_depth = out.t - att.level;
      a.height = att.height;
      a.subtree.root = tree_from_contour(att.excursion).root;
      std::size_t next = 0;
      apply_marks(a.subtree.root, marks, next);
      dst.push_back(std::move(a));
    }
  };

  std::vector<CoreEntry> core = core_decompose(path, tree.horizon);
  out.entries.reserve(core.size());
  for (CoreEntry& e : core) {
    HistoricalEntry he;
    he.index = e.index;
    he.depth = e.depth;
    build(e.left, he.left);
    build(e.right, he.right);
    out.entries.push_back(std::move(he));
  }
  return out;
}

HistoricalProfile historical_profile(const ContourPath& path, double t,
                                     const std::vector<bool>& leaf_marks) {
  HistoricalProfile out;
  out.t = t;
  auto build = [&](const std::vector<CoreAttachment>& src, std::vector<AttachmentStat>& dst) {
    dst.reserve(src.size());
    for (const CoreAttachment& att : src) {
      bool any = false;
      for (int id : att.max_ids) any = any || leaf_marks[static_cast<std::size_t>(id)];
      dst.push_back({t - att.level, att.height, any});
    }
  };
  std::vector<CoreEntry> core = core_decompose(path, t);
  out.entries.reserve(core.size());
  for (const CoreEntry& e : core) {
    ProfileEntry pe;
    pe.index = e.index;
    pe.depth = e.depth;
    build(e.left, pe.left);
    build(e.right, pe.right);
    out.entries.push_back(std::move(pe));
  }
  return out;
}

}  // namespace genea
