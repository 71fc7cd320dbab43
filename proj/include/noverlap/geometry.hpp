#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noverlap/model.hpp"

namespace noverlap {

/// Absolute tolerance used by boundary and circumcircle checks.
inline constexpr double kGeomTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Overlap predicate
// ---------------------------------------------------------------------------

/// Strict rectangle overlap of two centered rectangles; touching is not overlap.
inline bool overlaps(Point u, Size su, Point v, Size sv) {
  return std::abs(v.x - u.x) < (sv.w + su.w) / 2.0 && std::abs(v.y - u.y) < (sv.h + su.h) / 2.0;
}

using IndexPair = std::pair<std::size_t, std::size_t>;

/// All overlapping unordered pairs (i < j), sorted. Sweep over x with the
/// widest node bounding the scan window.
inline std::vector<IndexPair> overlapping_pairs(std::span<const Point> pos,
                                                std::span<const Size> sizes) {
  const std::size_t n = pos.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pos[a].x < pos[b].x || (pos[a].x == pos[b].x && a < b);
  });
  double max_w = 0.0;
  for (const Size& s : sizes) max_w = std::max(max_w, s.w);

  std::vector<IndexPair> out;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    const double reach = (sizes[i].w + max_w) / 2.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = order[b];
      if (pos[j].x - pos[i].x >= reach) break;
      if (overlaps(pos[i], sizes[i], pos[j], sizes[j])) out.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t count_overlaps(std::span<const Point> pos, std::span<const Size> sizes) {
  return overlapping_pairs(pos, sizes).size();
}

inline std::size_t count_overlaps(const SizedGraph& graph, const Embedding& embedding) {
  const auto sizes = graph.sizes();
  return count_overlaps(embedding.positions(), sizes);
}

// ---------------------------------------------------------------------------
// Bounding box
// ---------------------------------------------------------------------------

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  Point center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
  double area() const { return width() * height(); }
};

/// Smallest axis-aligned box containing every node rectangle.
inline BoundingBox bounding_box(std::span<const Point> pos, std::span<const Size> sizes) {
  if (pos.empty()) throw ValidationError("bounding box of an empty graph");
  BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < pos.size(); ++i) {
    box.min_x = std::min(box.min_x, pos[i].x - sizes[i].w / 2.0);
    box.max_x = std::max(box.max_x, pos[i].x + sizes[i].w / 2.0);
    box.min_y = std::min(box.min_y, pos[i].y - sizes[i].h / 2.0);
    box.max_y = std::max(box.max_y, pos[i].y + sizes[i].h / 2.0);
  }
  return box;
}

inline BoundingBox bounding_box(const SizedGraph& graph, const Embedding& embedding) {
  const auto sizes = graph.sizes();
  return bounding_box(embedding.positions(), sizes);
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

namespace detail {

inline int sign_of(long double v) { return (v > 0) - (v < 0); }

}  // namespace detail

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. A double evaluation is trusted when it clears a forward error
/// bound; otherwise the determinant is recomputed in extended precision.
inline int orientation(Point a, Point b, Point c) {
  const double l = (b.x - a.x) * (c.y - a.y);
  const double r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  const double bound = 3.4e-16 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  const long double ax = a.x, ay = a.y;
  const long double d = (static_cast<long double>(b.x) - ax) * (static_cast<long double>(c.y) - ay) -
                        (static_cast<long double>(b.y) - ay) * (static_cast<long double>(c.x) - ax);
  return detail::sign_of(d);
}

/// Positive when d lies strictly inside the circumcircle of the
/// counter-clockwise triangle (a, b, c).
inline int incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double t1 = alift * (bdx * cdy - cdx * bdy);
  const double t2 = blift * (cdx * ady - adx * cdy);
  const double t3 = clift * (adx * bdy - bdx * ady);
  const double det = t1 + t2 + t3;
  const double permanent = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                           blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                           clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
  const double bound = 1.2e-15 * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  using L = long double;
  const L Adx = L(a.x) - L(d.x), Ady = L(a.y) - L(d.y);
  const L Bdx = L(b.x) - L(d.x), Bdy = L(b.y) - L(d.y);
  const L Cdx = L(c.x) - L(d.x), Cdy = L(c.y) - L(d.y);
  const L ext = (Adx * Adx + Ady * Ady) * (Bdx * Cdy - Cdx * Bdy) +
                (Bdx * Bdx + Bdy * Bdy) * (Cdx * Ady - Adx * Cdy) +
                (Cdx * Cdx + Cdy * Cdy) * (Adx * Bdy - Bdx * Ady);
  return detail::sign_of(ext);
}

// ---------------------------------------------------------------------------
// Convex hull of node corners
// ---------------------------------------------------------------------------

struct ConvexHull {
  std::vector<Point> vertices;  // counter-clockwise, no collinear triples
  Point centroid;
  double area = 0.0;
};

/// Hull of an arbitrary point set (monotone chain).
inline ConvexHull convex_hull_of_points(std::vector<Point> pts) {
  if (pts.empty()) throw ValidationError("convex hull of an empty point set");
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  ConvexHull hull;
  if (pts.size() < 3) {
    hull.vertices = pts;
  } else {
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
      h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
      while (k >= t && orientation(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
      h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    hull.vertices = std::move(h);
  }

  const auto& v = hull.vertices;
  double twice_area = 0.0, cx = 0.0, cy = 0.0;
  if (v.size() >= 3) {
    // Shift to the first vertex to limit cancellation.
    const Point o = v[0];
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point p = v[i] - o;
      const Point q = v[(i + 1) % v.size()] - o;
      const double cross = p.x * q.y - q.x * p.y;
      twice_area += cross;
      cx += (p.x + q.x) * cross;
      cy += (p.y + q.y) * cross;
    }
    hull.area = twice_area / 2.0;
    if (hull.area > 0.0) {
      hull.centroid = {o.x + cx / (3.0 * twice_area), o.y + cy / (3.0 * twice_area)};
      return hull;
    }
  }
  hull.area = std::max(hull.area, 0.0);
  Point mean;
  for (const Point& p : v) mean = mean + p;
  hull.centroid = mean * (1.0 / static_cast<double>(v.size()));
  return hull;
}

inline ConvexHull convex_hull(std::span<const Point> pos, std::span<const Size> sizes) {
  if (pos.empty()) throw ValidationError("convex hull of an empty graph");
  std::vector<Point> corners;
  corners.reserve(4 * pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double hw = sizes[i].w / 2.0, hh = sizes[i].h / 2.0;
    corners.push_back({pos[i].x - hw, pos[i].y - hh});
    corners.push_back({pos[i].x + hw, pos[i].y - hh});
    corners.push_back({pos[i].x + hw, pos[i].y + hh});
    corners.push_back({pos[i].x - hw, pos[i].y + hh});
  }
  return convex_hull_of_points(std::move(corners));
}

inline ConvexHull convex_hull(const SizedGraph& graph, const Embedding& embedding) {
  const auto sizes = graph.sizes();
  return convex_hull(embedding.positions(), sizes);
}

inline constexpr std::size_t kHullRays = 36;

/// Distance from the hull centroid to the boundary along rays at 0, 10, ...,
/// 350 degrees. Empty when the hull has no interior.
inline std::optional<std::array<double, kHullRays>> hull_ray_lengths(const ConvexHull& hull) {
  if (!(hull.area > 0.0) || hull.vertices.size() < 3) return std::nullopt;
  std::array<double, kHullRays> out{};
  const auto& v = hull.vertices;
  const Point c = hull.centroid;
  for (std::size_t k = 0; k < kHullRays; ++k) {
    const double theta = static_cast<double>(10 * k) * std::numbers::pi / 180.0;
    const Point d{std::cos(theta), std::sin(theta)};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point a = v[i] - c;
      const Point e = v[(i + 1) % v.size()] - v[i];
      // Solve t*d = a + s*e.
      const double denom = d.x * e.y - d.y * e.x;
      if (denom == 0.0) continue;
      const double t = (a.x * e.y - a.y * e.x) / denom;
      const double s = (a.x * d.y - a.y * d.x) / denom;
      if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
    }
    if (!std::isfinite(best)) return std::nullopt;
    out[k] = best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coincident-center jitter
// ---------------------------------------------------------------------------

inline bool has_coincident_centers(std::span<const Point> pos) {
  std::vector<Point> sorted(pos.begin(), pos.end());
  std::sort(sorted.begin(), sorted.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

/// Separates nodes that share a center: the i-th such node (dense index) moves
/// by eps*i*(cos(2*pi*i/n), sin(2*pi*i/n)), eps = 1e-6*max(w_bb, h_bb, 1).
/// Nodes with a unique center are left untouched.
inline std::vector<Point> jitter_coincident(std::span<const Point> pos, std::span<const Size> sizes) {
  std::vector<Point> out(pos.begin(), pos.end());
  if (!has_coincident_centers(out)) return out;
  const BoundingBox box = bounding_box(pos, sizes);
  double eps = 1e-6 * std::max({box.width(), box.height(), 1.0});
  const std::size_t n = out.size();
  for (int attempt = 0; attempt < 8 && has_coincident_centers(out); ++attempt) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out[a].x < out[b].x || (out[a].x == out[b].x && (out[a].y < out[b].y || (out[a].y == out[b].y && a < b)));
    });
    std::vector<bool> shared(n, false);
    for (std::size_t k = 1; k < n; ++k) {
      if (out[order[k]] == out[order[k - 1]]) shared[order[k]] = shared[order[k - 1]] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!shared[i]) continue;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      const double r = eps * static_cast<double>(i);
      out[i] = {out[i].x + r * std::cos(angle), out[i].y + r * std::sin(angle)};
    }
    eps *= 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Delaunay triangulation
// ---------------------------------------------------------------------------

struct Triangulation {
  std::vector<Edge> edges;                          // sorted, u < v
  std::vector<std::array<std::size_t, 3>> triangles;  // counter-clockwise
};

namespace detail {

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

struct DirectedEdgeHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.first) << 32) ^
                                      static_cast<std::uint64_t>(e.second) ^
                                      (static_cast<std::uint64_t>(e.first) >> 32));
  }
};

/// Incremental Bowyer-Watson with ghost triangles closing the hull. Triangle
/// (a, b, INF) stands for the unbounded region beyond hull edge a->b.
class DelaunayBuilder {
 public:
  explicit DelaunayBuilder(std::span<const Point> pts) : pts_(pts) {}

  Triangulation build() {
    const std::size_t n = pts_.size();
    Triangulation out;
    if (n < 2) return out;
    std::size_t third = kInfinite;
    for (std::size_t k = 2; k < n; ++k) {
      if (orientation(pts_[0], pts_[1], pts_[k]) != 0) {
        third = k;
        break;
      }
    }
    if (third == kInfinite) return collinear_path();

    std::size_t a = 0, b = 1, c = third;
    if (orientation(pts_[a], pts_[b], pts_[c]) < 0) std::swap(a, b);
    add({a, b, c});
    add({b, a, kInfinite});
    add({c, b, kInfinite});
    add({a, c, kInfinite});
    for (std::size_t p = 2; p < n; ++p) {
      if (p != third) insert(p);
    }

    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t]) continue;
      const auto& tri = tris_[t];
      if (tri[2] == kInfinite) continue;
      out.triangles.push_back(tri);
      for (int k = 0; k < 3; ++k) {
        const std::size_t u = tri[k], v = tri[(k + 1) % 3];
        out.edges.push_back({std::min(u, v), std::max(u, v)});
      }
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    std::sort(out.triangles.begin(), out.triangles.end());
    return out;
  }

 private:
  using Tri = std::array<std::size_t, 3>;

  Triangulation collinear_path() const {
    std::vector<std::size_t> order(pts_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Point pa = pts_[a], pb = pts_[b];
      return pa.x < pb.x || (pa.x == pb.x && (pa.y < pb.y || (pa.y == pb.y && a < b)));
    });
    Triangulation out;
    for (std::size_t k = 1; k < order.size(); ++k) {
      out.edges.push_back({std::min(order[k - 1], order[k]), std::max(order[k - 1], order[k])});
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
  }

  void add(Tri t) {
    const std::size_t id = tris_.size();
    tris_.push_back(t);
    alive_.push_back(true);
    for (int k = 0; k < 3; ++k) owner_[{t[k], t[(k + 1) % 3]}] = id;
  }

  void kill(std::size_t id) {
    alive_[id] = false;
    const Tri& t = tris_[id];
    for (int k = 0; k < 3; ++k) {
      const auto it = owner_.find({t[k], t[(k + 1) % 3]});
      if (it != owner_.end() && it->second == id) owner_.erase(it);
    }
  }

  bool conflicts(const Tri& t, std::size_t p) const {
    const Point q = pts_[p];
    if (t[2] != kInfinite) return incircle(pts_[t[0]], pts_[t[1]], pts_[t[2]], q) > 0;
    const Point a = pts_[t[0]], b = pts_[t[1]];
    const int o = orientation(a, b, q);
    if (o > 0) return true;
    if (o < 0) return false;
    // Collinear: conflict only when q falls strictly inside segment ab.
    const double dot = (q.x - a.x) * (b.x - a.x) + (q.y - a.y) * (b.y - a.y);
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    return dot > 0.0 && dot < len2;
  }

  void insert(std::size_t p) {
    std::size_t seed = kInfinite;
    for (std::size_t t = tris_.size(); t-- > 0;) {
      if (alive_[t] && conflicts(tris_[t], p)) {
        seed = t;
        break;
      }
    }
    if (seed == kInfinite) return;  // duplicate point; callers jitter beforehand

    std::vector<std::size_t> cavity{seed};
    std::unordered_map<std::size_t, bool> visited{{seed, true}};
    std::vector<std::pair<std::size_t, std::size_t>> boundary;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri t = tris_[cavity[k]];
      for (int e = 0; e < 3; ++e) {
        const std::size_t u = t[e], v = t[(e + 1) % 3];
        const auto twin = owner_.find({v, u});
        if (twin == owner_.end()) {
          boundary.emplace_back(u, v);
          continue;
        }
        const std::size_t nb = twin->second;
        const auto seen = visited.find(nb);
        if (seen != visited.end()) {
          if (!seen->second) boundary.emplace_back(u, v);
          continue;
        }
        const bool hit = conflicts(tris_[nb], p);
        visited[nb] = hit;
        if (hit) {
          cavity.push_back(nb);
        } else {
          boundary.emplace_back(u, v);
        }
      }
    }
    // An edge recorded as boundary may later turn out to be interior when its
    // neighbor joined the cavity through another path.
    std::vector<std::pair<std::size_t, std::size_t>> rim;
    for (const auto& [u, v] : boundary) {
      const auto twin = owner_.find({v, u});
      if (twin != owner_.end()) {
        const auto seen = visited.find(twin->second);
        if (seen != visited.end() && seen->second) continue;
      }
      rim.emplace_back(u, v);
    }
    for (std::size_t id : cavity) kill(id);
    for (const auto& [u, v] : rim) {
      if (u == kInfinite) {
        add({v, p, kInfinite});
      } else if (v == kInfinite) {
        add({p, u, kInfinite});
      } else {
        add({u, v, p});
      }
    }
  }

  std::span<const Point> pts_;
  std::vector<Tri> tris_;
  std::vector<bool> alive_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::size_t, DirectedEdgeHash> owner_;
};

}  // namespace detail

/// Delaunay triangulation of the given centers. Coincident centers are jittered
/// first. Collinear inputs degrade to the path through the sorted points.
inline Triangulation delaunay(std::span<const Point> pos, std::span<const Size> sizes) {
  if (pos.size() < 2) throw ValidationError("Delaunay triangulation needs at least 2 points");
  const std::vector<Point> pts = jitter_coincident(pos, sizes);
  return detail::DelaunayBuilder(pts).build();
}

inline Triangulation delaunay_edges(const SizedGraph& graph, const Embedding& embedding) {
  const auto sizes = graph.sizes();
  return delaunay(embedding.positions(), sizes);
}

// ---------------------------------------------------------------------------
// k nearest neighbours
// ---------------------------------------------------------------------------

/// For every node, the sorted indices of its k nearest other nodes by center
/// distance; equal distances resolve to the smaller index.
inline std::vector<std::vector<std::size_t>> knn_sets(std::span<const Point> pos, std::size_t k) {
  const std::size_t n = pos.size();
  if (k < 1 || k + 1 > n) {
    throw ValidationError("k = " + std::to_string(k) + " outside [1, n-1] for n = " + std::to_string(n));
  }
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t v = 0; v < n; ++v) {
    cand.clear();
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) cand.emplace_back(squared_norm(pos[u] - pos[v]), u);
    }
    std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1), cand.end());
    std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
    auto& set = out[v];
    set.reserve(k);
    for (std::size_t i = 0; i < k; ++i) set.push_back(cand[i].second);
    std::sort(set.begin(), set.end());
  }
  return out;
}

}  // namespace noverlap
