#include "genea/contour.hpp"

#include <algorithm>
#include <cmath>

namespace genea {

double ContourPath::end_height() const {
  double h = start_height;
  for (const Segment& s : segments) h += s.dir == Dir::Up ? s.length : -s.length;
  return h;
}

double ContourPath::max_height() const {
  double h = start_height, m = start_height;
  for (const Segment& s : segments) {
    h += s.dir == Dir::Up ? s.length : -s.length;
    m = std::max(m, h);
  }
  return m;
}

double ContourPath::min_height() const {
  double h = start_height, m = start_height;
  for (const Segment& s : segments) {
    h += s.dir == Dir::Up ? s.length : -s.length;
    m = std::min(m, h);
  }
  return m;
}

double ContourPath::total_u() const {
  double u = 0.0;
  for (const Segment& s : segments) u += s.length;
  return u;
}

void ContourPath::append(Dir dir, double length) {
  if (!(length > 0.0)) throw FormatError("contour: segment length must be > 0");
  if (!segments.empty() && segments.back().dir == dir) {
    segments.back().length += length;
    return;
  }
  segments.push_back({dir, length});
}

ContourPath reversed(const ContourPath& path) {
  ContourPath out;
  out.start_height = path.end_height();
  out.fragment = path.fragment;
  out.segments.reserve(path.segments.size());
  for (auto it = path.segments.rbegin(); it != path.segments.rend(); ++it)
    out.segments.push_back({it->dir == Dir::Up ? Dir::Down : Dir::Up, it->length});
  return out;
}

void validate_complete(const ContourPath& path) {
  if (path.fragment) throw FormatError("contour: expected a complete path, got a fragment");
  if (path.segments.empty()) throw FormatError("contour: empty path");
  if (path.start_height != 0.0) throw FormatError("contour: complete path must start at 0");
  if (path.segments.front().dir != Dir::Up) throw FormatError("contour: path must start with a rise");
  if (path.segments.back().dir != Dir::Down) throw FormatError("contour: path must end with a fall");
  double h = 0.0;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const Segment& s = path.segments[i];
    if (!(s.length > 0.0)) throw FormatError("contour: segment length must be > 0");
    if (i > 0 && s.dir == path.segments[i - 1].dir)
      throw FormatError("contour: directions must alternate");
    h += s.dir == Dir::Up ? s.length : -s.length;
    if (i + 1 < path.segments.size() && !(h > 0.0))
      throw FormatError("contour: height must stay positive before the end");
  }
  if (std::abs(h) > kDepthTol) throw FormatError("contour: complete path must end at 0");
}

namespace {

void emit_node(const TreeNode& node, ContourPath& out) {
  out.append(Dir::Up, node.length);
  if (!node.is_leaf()) {
    emit_node(node.children[0], out);
    emit_node(node.children[1], out);
  }
  out.append(Dir::Down, node.length);
}

}  // namespace

ContourPath contour_from_tree(const PlanarTree& tree) {
  ContourPath out;
  emit_node(tree.root, out);
  return out;
}

PlanarTree tree_from_contour(const ContourPath& path, double horizon) {
  validate_complete(path);
  std::vector<double> maxima, minima;
  double h = 0.0;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    h += path.segments[i].dir == Dir::Up ? path.segments[i].length : -path.segments[i].length;
    if (path.segments[i].dir == Dir::Up)
      maxima.push_back(h);
    else if (i + 1 < path.segments.size())
      minima.push_back(h);
  }
  return tree_from_depth_profile(maxima, minima, horizon);
}

Crossings crossings(const ContourPath& path, double level) {
  if (!(level > 0.0)) throw ParameterError("crossing level must be > 0");
  Crossings out;
  double u = 0.0, h = path.start_height;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const Segment& s = path.segments[i];
    if (s.dir == Dir::Up) {
      const double top = h + s.length;
      if (std::abs(top - level) <= kDepthTol) {
        // local maximum at the level: a touch counts as an up-crossing
        // immediately followed by a down-crossing
        out.up.push_back(u + s.length);
        out.down.push_back(u + s.length);
      } else if (h < level && top > level) {
        out.up.push_back(u + (level - h));
      }
      h = top;
    } else {
      const double bottom = h - s.length;
      if (h > level + kDepthTol && bottom < level) out.down.push_back(u + (h - level));
      h = bottom;
    }
    u += s.length;
  }
  return out;
}

double min_height_on(const ContourPath& path, double u_lo, double u_hi) {
  double u = 0.0, h = path.start_height;
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& s : path.segments) {
    const double u1 = u + s.length;
    const double h1 = h + (s.dir == Dir::Up ? s.length : -s.length);
    const double a = std::max(u, u_lo), b = std::min(u1, u_hi);
    if (a < b) {
      const double slope = s.dir == Dir::Up ? 1.0 : -1.0;
      best = std::min(best, std::min(h + slope * (a - u), h + slope * (b - u)));
    }
    u = u1;
    h = h1;
  }
  return best;
}

std::vector<double> local_max_heights(const ContourPath& path) {
  std::vector<double> out;
  double h = path.start_height;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    h += path.segments[i].dir == Dir::Up ? path.segments[i].length : -path.segments[i].length;
    if (path.segments[i].dir == Dir::Up &&
        (i + 1 == path.segments.size() || path.segments[i + 1].dir == Dir::Down))
      out.push_back(h);
  }
  return out;
}

ExcursionDecomposition decompose_at_level(const ContourPath& path, double level) {
  if (path.max_height() > level + kDepthTol)
    throw DomainError("decompose_at_level: path exceeds the level");
  // indices of segments whose endpoint is a touch of the level
  std::vector<std::size_t> touch_after;
  {
    double h = path.start_height;
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
      h += path.segments[i].dir == Dir::Up ? path.segments[i].length : -path.segments[i].length;
      if (path.segments[i].dir == Dir::Up && std::abs(h - level) <= kDepthTol)
        touch_after.push_back(i);
    }
  }
  if (touch_after.empty()) throw DomainError("decompose_at_level: path never reaches the level");

  ExcursionDecomposition out;
  const Crossings cr = crossings(path, level);
  out.up_u = cr.up;
  out.down_u = cr.down;

  auto slice = [&](std::size_t first, std::size_t last, double start_h) {
    ContourPath piece;
    piece.fragment = true;
    piece.start_height = start_h;
    piece.segments.assign(path.segments.begin() + static_cast<std::ptrdiff_t>(first),
                          path.segments.begin() + static_cast<std::ptrdiff_t>(last));
    return piece;
  };

  out.ascent = slice(0, touch_after.front() + 1, path.start_height);
  double h = out.ascent.end_height();
  for (std::size_t k = 0; k + 1 < touch_after.size(); ++k) {
    ContourPath exc = slice(touch_after[k] + 1, touch_after[k + 1] + 1, h);
    h = exc.end_height();
    out.excursions.push_back(std::move(exc));
  }
  out.descent = slice(touch_after.back() + 1, path.segments.size(), h);
  return out;
}

std::vector<LevelExcursion> infimum_decomposition(const ContourPath& fragment,
                                                  Orientation orientation) {
  const ContourPath f = orientation == Orientation::Reversed ? reversed(fragment) : fragment;
  if (f.max_height() > f.start_height + kDepthTol)
    throw DomainError("infimum_decomposition: fragment must start at its maximum");
  std::vector<LevelExcursion> out;
  double cur = f.start_height;
  std::size_t i = 0;
  const auto& segs = f.segments;
  while (i < segs.size()) {
    if (segs[i].dir == Dir::Down) {
      cur -= segs[i].length;
      ++i;
      continue;
    }
    // rise from a running minimum: excursion above the constancy level `cur`
    LevelExcursion entry;
    entry.level = cur;
    double rel = 0.0;
    bool closed = false;
    while (i < segs.size()) {
      if (segs[i].dir == Dir::Up) {
        rel += segs[i].length;
        entry.excursion.append(Dir::Up, segs[i].length);
        ++i;
      } else if (segs[i].length >= rel) {
        entry.excursion.append(Dir::Down, rel);
        const double leftover = segs[i].length - rel;
        cur -= leftover;
        ++i;
        closed = true;
        break;
      } else {
        rel -= segs[i].length;
        entry.excursion.append(Dir::Down, segs[i].length);
        ++i;
      }
    }
    if (!closed) throw FormatError("infimum_decomposition: fragment ends inside an excursion");
    out.push_back(std::move(entry));
  }
  return out;
}

ContourPath sample_conditioned_contour(double t, int n, RandomStream& rng,
                                       std::uint64_t max_attempts) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  if (n < 1) throw ParameterError("population size n must be >= 1");
  ContourPath path = sample_ascent_to_level(t, rng, max_attempts);
  path.fragment = false;
  for (int k = 1; k < n; ++k) {
    // a below-t excursion is an independent contour conditioned to stay
    // below t, reflected about the level
    const ContourPath exc = sample_excursion_below(t, rng, max_attempts);
    for (const Segment& s : exc.segments)
      path.append(s.dir == Dir::Up ? Dir::Down : Dir::Up, s.length);
  }
  const ContourPath descent = sample_ascent_to_level(t, rng, max_attempts);
  for (auto it = descent.segments.rbegin(); it != descent.segments.rend(); ++it)
    path.append(it->dir == Dir::Up ? Dir::Down : Dir::Up, it->length);
  return path;
}

}  // namespace genea
