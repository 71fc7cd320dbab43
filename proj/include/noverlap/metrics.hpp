#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "noverlap/catalog.hpp"
#include "noverlap/geometry.hpp"
#include "noverlap/model.hpp"

namespace noverlap {

/// A metric value; empty means undefined (degenerate input), which is kept out
/// of every aggregate.
using MetricValue = std::optional<double>;

class MetricReport {
 public:
  MetricValue& operator[](Metric m) { return values_[static_cast<std::size_t>(m)]; }
  const MetricValue& operator[](Metric m) const { return values_[static_cast<std::size_t>(m)]; }

  MetricValue get(std::string_view abbreviation) const {
    const auto m = metric_from_abbreviation(abbreviation);
    if (!m) throw ValidationError("unknown metric \"" + std::string(abbreviation) + "\"");
    return (*this)[*m];
  }

  std::size_t undefined_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](const MetricValue& v) { return !v.has_value(); }));
  }

  const std::array<MetricValue, kMetricCount>& values() const { return values_; }

  friend bool operator==(const MetricReport&, const MetricReport&) = default;

 private:
  std::array<MetricValue, kMetricCount> values_{};
};

struct MetricOptions {
  /// Neighbourhood size for nm_knn; defaults to min(10, n-1).
  std::optional<std::size_t> knn_k;
};

// ---------------------------------------------------------------------------
// Orthogonal ordering
// ---------------------------------------------------------------------------

struct OrderingMetrics {
  double oo_o = 1;
  double oo_kt = 0;
  double oo_ni = 0;
  double oo_nni = 0;
};

namespace detail {

/// Whether the orthogonal ordering of u and v changed between the embeddings.
inline bool ordering_inverted(Point u, Point v, Point u2, Point v2) {
  return (u.x < v.x) != (u2.x < v2.x) || (u.y < v.y) != (u2.y < v2.y) ||
         (u.x == v.x) != (u2.x == v2.x) || (u.y == v.y) != (u2.y == v2.y);
}

/// Number of ordered pairs (u, v) with key[u] > key[v] and key2[u] < key2[v].
inline std::size_t count_axis_inversions(const std::vector<double>& key, const std::vector<double>& key2) {
  const std::size_t n = key.size();
  std::vector<double> ranks(key2);
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  std::vector<std::size_t> tree(ranks.size() + 1, 0);  // Fenwick tree over key2 ranks
  auto rank_of = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(ranks.begin(), ranks.end(), v) - ranks.begin()) + 1;
  };
  auto add = [&](std::size_t i) {
    for (; i < tree.size(); i += i & (~i + 1)) ++tree[i];
  };
  auto prefix = [&](std::size_t i) {
    std::size_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

  std::size_t inserted = 0, total = 0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && key[order[hi]] == key[order[lo]]) ++hi;
    // Every inserted v has key[v] < key[u] for u in this group.
    for (std::size_t g = lo; g < hi; ++g) total += inserted - prefix(rank_of(key2[order[g]]));
    for (std::size_t g = lo; g < hi; ++g) add(rank_of(key2[order[g]]));
    inserted += hi - lo;
    lo = hi;
  }
  return total;
}

}  // namespace detail

inline OrderingMetrics oo_metrics(const AdjustmentPair& pair) {
  const auto& a = pair.initial().positions();
  const auto& b = pair.adjusted().positions();
  const std::size_t n = a.size();
  OrderingMetrics out;
  if (n < 2) return out;

  std::size_t inverted = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (detail::ordering_inverted(a[u], a[v], b[u], b[v])) ++inverted;
    }
  }
  const double ordered_pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  out.oo_o = inverted == 0 ? 1.0 : 0.0;
  // inv(u, v) is symmetric, so each unordered inversion counts twice.
  out.oo_kt = 2.0 * static_cast<double>(inverted) / ordered_pairs;

  std::vector<double> x(n), y(n), x2(n), y2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a[i].x;
    y[i] = a[i].y;
    x2[i] = b[i].x;
    y2[i] = b[i].y;
  }
  const std::size_t ni = detail::count_axis_inversions(x, x2) + detail::count_axis_inversions(y, y2);
  out.oo_ni = static_cast<double>(ni);
  out.oo_nni = static_cast<double>(ni) / ordered_pairs;
  return out;
}

// ---------------------------------------------------------------------------
// Spread
// ---------------------------------------------------------------------------

struct SpreadMetrics {
  double sp_bb_l1ml = 1;
  double sp_bb_a = 1;
  double sp_bb_na = 0;
  MetricValue sp_ch_a;
};

/// Bounding-box spread ratios from initial (w, h) and adjusted (w2, h2) extents.
inline SpreadMetrics spread_from_boxes(double w, double h, double w2, double h2) {
  SpreadMetrics out;
  out.sp_bb_l1ml = std::max(w2, h2) / std::max(w, h);
  out.sp_bb_a = (w2 * h2) / (w * h);
  out.sp_bb_na = 1.0 - (w * h) / (w2 * h2);
  return out;
}

inline SpreadMetrics sp_metrics(const AdjustmentPair& pair) {
  const auto sizes = pair.graph().sizes();
  const BoundingBox bb = bounding_box(pair.initial().positions(), sizes);
  const BoundingBox bb2 = bounding_box(pair.adjusted().positions(), sizes);
  SpreadMetrics out = spread_from_boxes(bb.width(), bb.height(), bb2.width(), bb2.height());
  const ConvexHull ch = convex_hull(pair.initial().positions(), sizes);
  const ConvexHull ch2 = convex_hull(pair.adjusted().positions(), sizes);
  if (ch.area > 0.0 && ch2.area > 0.0) out.sp_ch_a = ch2.area / ch.area;
  return out;
}

// ---------------------------------------------------------------------------
// Global shape
// ---------------------------------------------------------------------------

struct ShapeMetrics {
  double gs_bb_ar = 1;
  double gs_bb_iar = 1;
  MetricValue gs_ch_sd;
};

inline ShapeMetrics shape_from_boxes(double w, double h, double w2, double h2) {
  ShapeMetrics out;
  const double widening = (w2 * h) / (h2 * w);
  const double heightening = (h2 * w) / (w2 * h);
  out.gs_bb_ar = w2 > h2 ? widening : heightening;
  out.gs_bb_iar = std::max(widening, heightening);
  return out;
}

/// Population standard deviation of the per-angle ratios of hull ray lengths.
inline MetricValue hull_ray_ratio_sd(const ConvexHull& ch, const ConvexHull& ch2) {
  const auto rays = hull_ray_lengths(ch);
  const auto rays2 = hull_ray_lengths(ch2);
  if (!rays || !rays2) return std::nullopt;
  std::array<double, kHullRays> d{};
  double mean = 0.0;
  for (std::size_t k = 0; k < kHullRays; ++k) {
    d[k] = (*rays2)[k] / (*rays)[k];
    mean += d[k];
  }
  mean /= static_cast<double>(kHullRays);
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(kHullRays));
}

inline ShapeMetrics gs_metrics(const AdjustmentPair& pair) {
  const auto sizes = pair.graph().sizes();
  const BoundingBox bb = bounding_box(pair.initial().positions(), sizes);
  const BoundingBox bb2 = bounding_box(pair.adjusted().positions(), sizes);
  ShapeMetrics out = shape_from_boxes(bb.width(), bb.height(), bb2.width(), bb2.height());
  out.gs_ch_sd = hull_ray_ratio_sd(convex_hull(pair.initial().positions(), sizes),
                                   convex_hull(pair.adjusted().positions(), sizes));
  return out;
}

// ---------------------------------------------------------------------------
// Node movement
// ---------------------------------------------------------------------------

/// A node counts as moved when its center travels farther than this.
inline constexpr double kMovedThreshold = 1e-9;

struct MovementMetrics {
  double nm_mn = 0;
  double nm_dm_me = 0;
  double nm_dm_ne = 0;
  double nm_dm_h = 0;
  double nm_dm_se = 0;
  double nm_dm_imse = 0;
  double nm_d = 0;
  MetricValue nm_knn;
};

inline std::size_t default_knn_k(std::size_t n) { return std::min<std::size_t>(10, n > 0 ? n - 1 : 0); }

/// Maps an initial position into the adjusted frame: align the box centers,
/// then stretch per axis about the shared center. An axis with zero initial
/// extent is not stretched.
inline Point shift_then_scale(Point v, const BoundingBox& bb, const BoundingBox& bb2) {
  const Point c = bb.center(), c2 = bb2.center();
  const Point p = v + (c2 - c);
  const double fx = bb.width() > 0.0 ? bb2.width() / bb.width() : 1.0;
  const double fy = bb.height() > 0.0 ? bb2.height() / bb.height() : 1.0;
  // Same as c2 + (p - c2) * f, but exact when f == 1.
  return {p.x + (p.x - c2.x) * (fx - 1.0), p.y + (p.y - c2.y) * (fy - 1.0)};
}

/// Mean squared residual after the best uniform scale and translation of the
/// initial layout onto the adjusted one (no rotation).
inline double similarity_displacement(std::span<const Point> a, std::span<const Point> b) {
  const std::size_t n = a.size();
  Point ma, mb;
  for (std::size_t i = 0; i < n; ++i) {
    ma = ma + a[i];
    mb = mb + b[i];
  }
  ma = ma * (1.0 / static_cast<double>(n));
  mb = mb * (1.0 / static_cast<double>(n));
  double cross = 0.0, spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = a[i] - ma, q = b[i] - mb;
    cross += p.x * q.x + p.y * q.y;
    spread += squared_norm(p);
  }
  const double s = spread > 0.0 ? cross / spread : 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) residual += squared_norm((b[i] - mb) - (a[i] - ma) * s);
  return residual / static_cast<double>(n);
}

inline MetricValue knn_preservation(std::span<const Point> a, std::span<const Point> b, std::size_t k) {
  const std::size_t n = a.size();
  if (k < 1 || k + 1 > n) return std::nullopt;
  const auto before = knn_sets(a, k);
  const auto after = knn_sets(b, k);
  double total = 0.0;
  std::vector<std::size_t> common;
  for (std::size_t v = 0; v < n; ++v) {
    common.clear();
    std::set_intersection(before[v].begin(), before[v].end(), after[v].begin(), after[v].end(),
                          std::back_inserter(common));
    const double miss = static_cast<double>(k - common.size());
    total += miss * miss;
  }
  return total;
}

inline MovementMetrics nm_metrics(const AdjustmentPair& pair, const MetricOptions& options = {}) {
  const auto& a = pair.initial().positions();
  const auto& b = pair.adjusted().positions();
  const std::size_t n = a.size();
  if (n == 0) throw ValidationError("node movement metrics need at least one node");
  const auto sizes = pair.graph().sizes();
  const BoundingBox bb2 = bounding_box(b, sizes);
  // imse aligns the boxes spanned by the centers, so that moving every center
  // by a translation or a scaling about the box center scores exactly 0.
  const std::vector<Size> points(n, Size{0.0, 0.0});
  const BoundingBox cb = bounding_box(a, points);
  const BoundingBox cb2 = bounding_box(b, points);

  MovementMetrics out;
  std::size_t moved = 0;
  double sum = 0.0, sum_sq = 0.0, sum_manhattan = 0.0, sum_imse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point d = b[i] - a[i];
    const double dist = norm(d);
    if (dist > kMovedThreshold) ++moved;
    sum += dist;
    sum_sq += squared_norm(d);
    sum_manhattan += std::abs(d.x) + std::abs(d.y);
    sum_imse += squared_norm(b[i] - shift_then_scale(a[i], cb, cb2));
  }
  const double nn = static_cast<double>(n);
  const double k_box = std::max(bb2.width(), bb2.height());
  out.nm_mn = static_cast<double>(moved) / nn;
  out.nm_dm_me = sum / nn;
  out.nm_dm_ne = sum / (k_box * std::sqrt(2.0) * nn);
  out.nm_dm_se = sum_sq;
  out.nm_dm_h = sum_manhattan;
  out.nm_dm_imse = sum_imse / nn;
  out.nm_d = similarity_displacement(a, b);
  out.nm_knn = knn_preservation(a, b, options.knn_k.value_or(default_knn_k(n)));
  return out;
}

// ---------------------------------------------------------------------------
// Edge length
// ---------------------------------------------------------------------------

struct EdgeLengthMetrics {
  MetricValue el_r;
  MetricValue el_rsdd;
};

inline EdgeLengthMetrics el_metrics(const AdjustmentPair& pair) {
  const auto& a = pair.initial().positions();
  const auto& b = pair.adjusted().positions();
  EdgeLengthMetrics out;

  const auto& edges = pair.graph().edges();
  if (!edges.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Edge& e : edges) {
      const double len = distance(b[e.u], b[e.v]);
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    if (lo > 0.0) out.el_r = hi / lo;
  }

  if (a.size() >= 2) {
    const auto sizes = pair.graph().sizes();
    const Triangulation dt = delaunay(a, sizes);
    std::vector<double> ratios;
    ratios.reserve(dt.edges.size());
    bool degenerate = false;
    for (const Edge& e : dt.edges) {
      const double before = distance(a[e.u], a[e.v]);
      if (!(before > 0.0)) {
        degenerate = true;
        break;
      }
      ratios.push_back(distance(b[e.u], b[e.v]) / before);
    }
    if (!degenerate && !ratios.empty()) {
      const double count = static_cast<double>(ratios.size());
      double mean = 0.0;
      for (double r : ratios) mean += r;
      mean /= count;
      double var = 0.0;
      for (double r : ratios) var += (r - mean) * (r - mean);
      if (mean > 0.0) out.el_rsdd = std::sqrt(var / count) / mean;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

inline MetricReport compute_metrics(const AdjustmentPair& pair, const MetricOptions& options = {}) {
  MetricReport r;
  const auto oo = oo_metrics(pair);
  r[Metric::oo_o] = oo.oo_o;
  r[Metric::oo_kt] = oo.oo_kt;
  r[Metric::oo_ni] = oo.oo_ni;
  r[Metric::oo_nni] = oo.oo_nni;

  const auto sp = sp_metrics(pair);
  r[Metric::sp_bb_l1ml] = sp.sp_bb_l1ml;
  r[Metric::sp_bb_a] = sp.sp_bb_a;
  r[Metric::sp_bb_na] = sp.sp_bb_na;
  r[Metric::sp_ch_a] = sp.sp_ch_a;

  const auto gs = gs_metrics(pair);
  r[Metric::gs_bb_ar] = gs.gs_bb_ar;
  r[Metric::gs_bb_iar] = gs.gs_bb_iar;
  r[Metric::gs_ch_sd] = gs.gs_ch_sd;

  const auto nm = nm_metrics(pair, options);
  r[Metric::nm_mn] = nm.nm_mn;
  r[Metric::nm_dm_me] = nm.nm_dm_me;
  r[Metric::nm_dm_ne] = nm.nm_dm_ne;
  r[Metric::nm_dm_h] = nm.nm_dm_h;
  r[Metric::nm_dm_se] = nm.nm_dm_se;
  r[Metric::nm_dm_imse] = nm.nm_dm_imse;
  r[Metric::nm_d] = nm.nm_d;
  r[Metric::nm_knn] = nm.nm_knn;

  const auto el = el_metrics(pair);
  r[Metric::el_r] = el.el_r;
  r[Metric::el_rsdd] = el.el_rsdd;
  return r;
}

}  // namespace noverlap
