#pragma once

// Test-only instance generators and brute-force oracles. Nothing here calls
// the library routine it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "noverlap/noverlap.hpp"

namespace testing_support {

using noverlap::Embedding;
using noverlap::Point;
using noverlap::Size;
using noverlap::SizedGraph;

struct Instance {
  SizedGraph graph;
  Embedding embedding;
};

/// n nodes with sizes in [1,4]x[1,3], centers uniform in a square of side
/// `spread`, each possible edge present with probability `p`.
inline Instance random_instance(std::uint64_t seed, std::size_t n, double spread, double p = 0.2) {
  std::mt19937_64 gen(seed * 7919 + n);
  std::uniform_real_distribution<double> w(1.0, 4.0), h(1.0, 3.0), c(0.0, spread), coin(0.0, 1.0);
  std::vector<noverlap::Node> nodes;
  std::vector<Point> pos;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "n%03zu", i);
    nodes.push_back({id, w(gen), h(gen)});
    pos.push_back({c(gen), c(gen)});
  }
  std::vector<noverlap::NamedEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(gen) < p) edges.emplace_back(nodes[i].id, nodes[j].id);
    }
  }
  SizedGraph g(nodes, edges, "rand" + std::to_string(seed));
  // ids were generated in sorted order, so positions line up with dense indices
  return {g, Embedding(pos)};
}

/// Random points in general position (no duplicates), for geometry oracles.
inline std::vector<Point> random_points(std::uint64_t seed, std::size_t n, double spread = 10.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> c(0.0, spread);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({c(gen), c(gen)});
  return out;
}

inline bool overlap_oracle(Point a, Size sa, Point b, Size sb) {
  return std::abs(a.x - b.x) * 2.0 < sa.w + sb.w && std::abs(a.y - b.y) * 2.0 < sa.h + sb.h;
}

inline std::size_t count_overlaps_oracle(const std::vector<Point>& pos, const std::vector<Size>& sizes) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) c += overlap_oracle(pos[i], sizes[i], pos[j], sizes[j]);
  }
  return c;
}

inline double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

/// Jarvis march; returns the hull counter-clockwise without collinear points.
inline std::vector<Point> gift_wrap(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull;
  std::size_t cur = 0;
  do {
    hull.push_back(pts[cur]);
    std::size_t nxt = (cur + 1) % pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double c = cross(pts[cur], pts[nxt], pts[i]);
      const double d_i = std::hypot(pts[i].x - pts[cur].x, pts[i].y - pts[cur].y);
      const double d_n = std::hypot(pts[nxt].x - pts[cur].x, pts[nxt].y - pts[cur].y);
      if (c < 0 || (c == 0 && d_i > d_n)) nxt = i;
    }
    cur = nxt;
  } while (cur != 0 && hull.size() <= pts.size());
  return hull;
}

inline double shoelace(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = poly[i], q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) / 2.0;
}

inline std::vector<Point> corners(const std::vector<Point>& pos, const std::vector<Size>& sizes) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double hw = sizes[i].w / 2.0, hh = sizes[i].h / 2.0;
    out.push_back({pos[i].x - hw, pos[i].y - hh});
    out.push_back({pos[i].x + hw, pos[i].y - hh});
    out.push_back({pos[i].x + hw, pos[i].y + hh});
    out.push_back({pos[i].x - hw, pos[i].y + hh});
  }
  return out;
}

struct Circle {
  Point c;
  double r2;
};

inline std::optional<Circle> circumcircle(Point a, Point b, Point c) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (std::abs(d) < 1e-12) return std::nullopt;
  const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
  const Point o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  return Circle{o, (a.x - o.x) * (a.x - o.x) + (a.y - o.y) * (a.y - o.y)};
}

/// O(n^4) Delaunay edges: a triangle belongs iff its circumcircle is empty.
/// Points must be in general position; two points give their single edge.
inline std::set<std::pair<std::size_t, std::size_t>> brute_delaunay(const std::vector<Point>& p) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  const std::size_t n = p.size();
  if (n == 2) return {{0, 1}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto cc = circumcircle(p[i], p[j], p[k]);
        if (!cc) continue;
        bool empty = true;
        for (std::size_t q = 0; q < n && empty; ++q) {
          if (q == i || q == j || q == k) continue;
          const double d2 = (p[q].x - cc->c.x) * (p[q].x - cc->c.x) + (p[q].y - cc->c.y) * (p[q].y - cc->c.y);
          if (d2 < cc->r2 * (1.0 - 1e-12)) empty = false;
        }
        if (empty) {
          edges.insert({i, j});
          edges.insert({i, k});
          edges.insert({j, k});
        }
      }
    }
  }
  return edges;
}

inline std::vector<std::vector<std::size_t>> knn_oracle(const std::vector<Point>& p, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t v = 0; v < p.size(); ++v) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t u = 0; u < p.size(); ++u) {
      if (u != v) d.push_back({(p[u].x - p[v].x) * (p[u].x - p[v].x) + (p[u].y - p[v].y) * (p[u].y - p[v].y), u});
    }
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < k; ++i) s.push_back(d[i].second);
    std::sort(s.begin(), s.end());
    out.push_back(s);
  }
  return out;
}

struct OrderingOracle {
  double oo_o, oo_kt, oo_ni, oo_nni;
};

/// Direct enumeration over ordered pairs.
inline OrderingOracle ordering_oracle(const std::vector<Point>& a, const std::vector<Point>& b) {
  const std::size_t n = a.size();
  if (n < 2) return {1, 0, 0, 0};
  auto iff = [](bool p, bool q) { return p == q; };
  std::size_t inverted = 0, ni = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool ok = iff(a[u].x < a[v].x, b[u].x < b[v].x) && iff(a[u].x > a[v].x, b[u].x > b[v].x) &&
                      iff(a[u].y < a[v].y, b[u].y < b[v].y) && iff(a[u].y > a[v].y, b[u].y > b[v].y);
      if (!ok) ++inverted;
      if (a[u].x > a[v].x && b[u].x < b[v].x) ++ni;
      if (a[u].y > a[v].y && b[u].y < b[v].y) ++ni;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  return {inverted == 0 ? 1.0 : 0.0, static_cast<double>(inverted) / pairs, static_cast<double>(ni),
          static_cast<double>(ni) / pairs};
}

struct MovementOracle {
  double mn, me, ne, se, h, imse, knn;
};

inline MovementOracle movement_oracle(const std::vector<Point>& a, const std::vector<Point>& b,
                                      const std::vector<Size>& sizes, std::size_t k) {
  const std::size_t n = a.size();
  auto box = [&](const std::vector<Point>& p, bool with_sizes) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      const double hw = with_sizes ? sizes[i].w / 2 : 0, hh = with_sizes ? sizes[i].h / 2 : 0;
      x0 = std::min(x0, p[i].x - hw);
      x1 = std::max(x1, p[i].x + hw);
      y0 = std::min(y0, p[i].y - hh);
      y1 = std::max(y1, p[i].y + hh);
    }
    return std::array<double, 4>{x0, y0, x1, y1};
  };
  const auto B2 = box(b, true);
  const auto C1 = box(a, false), C2 = box(b, false);
  MovementOracle o{};
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = b[i].x - a[i].x, dy = b[i].y - a[i].y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d > 1e-9) o.mn += 1;
    o.me += d;
    o.se += dx * dx + dy * dy;
    o.h += std::abs(dx) + std::abs(dy);
    const double w1 = C1[2] - C1[0], h1 = C1[3] - C1[1], w2 = C2[2] - C2[0], h2 = C2[3] - C2[1];
    const double cx1 = (C1[0] + C1[2]) / 2, cy1 = (C1[1] + C1[3]) / 2;
    const double cx2 = (C2[0] + C2[2]) / 2, cy2 = (C2[1] + C2[3]) / 2;
    const double fx = w1 > 0 ? w2 / w1 : 1.0, fy = h1 > 0 ? h2 / h1 : 1.0;
    const double qx = cx2 + (a[i].x - cx1) * fx, qy = cy2 + (a[i].y - cy1) * fy;
    o.imse += (b[i].x - qx) * (b[i].x - qx) + (b[i].y - qy) * (b[i].y - qy);
  }
  const double kbox = std::max(B2[2] - B2[0], B2[3] - B2[1]);
  o.ne = o.me / (kbox * std::sqrt(2.0) * static_cast<double>(n));
  o.mn /= static_cast<double>(n);
  o.me /= static_cast<double>(n);
  o.imse /= static_cast<double>(n);
  const auto na = knn_oracle(a, k), nb = knn_oracle(b, k);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> common;
    std::set_intersection(na[v].begin(), na[v].end(), nb[v].begin(), nb[v].end(), std::back_inserter(common));
    const double miss = static_cast<double>(k - common.size());
    o.knn += miss * miss;
  }
  return o;
}

struct EdgeOracle {
  std::optional<double> r, rsdd;
};

inline EdgeOracle edge_oracle(const SizedGraph& g, const std::vector<Point>& a, const std::vector<Point>& b) {
  EdgeOracle o;
  auto len = [](Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); };
  if (g.m() > 0) {
    double lo = 1e300, hi = 0;
    for (const auto& e : g.edges()) {
      lo = std::min(lo, len(b[e.u], b[e.v]));
      hi = std::max(hi, len(b[e.u], b[e.v]));
    }
    if (lo > 0) o.r = hi / lo;
  }
  std::vector<double> r;
  for (const auto& [u, v] : brute_delaunay(a)) r.push_back(len(b[u], b[v]) / len(a[u], a[v]));
  double mean = 0;
  for (double x : r) mean += x;
  mean /= static_cast<double>(r.size());
  double var = 0;
  for (double x : r) var += (x - mean) * (x - mean);
  var /= static_cast<double>(r.size());
  o.rsdd = std::sqrt(var) / mean;
  return o;
}

/// Smallest s (to `tol`) such that scaling centers about `c` by s is overlap-free.
inline double scaling_bisection(const std::vector<Point>& pos, const std::vector<Size>& sizes, Point c,
                                double tol = 1e-9) {
  auto clean = [&](double s) {
    std::vector<Point> q;
    for (const auto& p : pos) q.push_back({c.x + (p.x - c.x) * s, c.y + (p.y - c.y) * s});
    return count_overlaps_oracle(q, sizes) == 0;
  };
  if (clean(1.0)) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (!clean(hi)) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    (clean(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace testing_support
