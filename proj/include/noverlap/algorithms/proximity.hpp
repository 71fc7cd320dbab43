#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "noverlap/algorithms/common.hpp"
#include "noverlap/algorithms/fta.hpp"

// PRISM and GTREE both work on a proximity graph (the Delaunay triangulation of
// the current centers) and grow the edges whose endpoints overlap. Once no
// proximity edge is overlapped but some pair still is, the overlapping pairs
// themselves join the edge set.

namespace noverlap {
namespace detail {

struct ProximityEdge {
  std::size_t u;
  std::size_t v;
  double factor;  // >= 1; > 1 iff the endpoints overlap
};

/// max(1, min(needed x stretch, needed y stretch)); an axis with zero offset
/// can never separate the pair and contributes +inf.
inline double overlap_factor(Point pu, Size su, Point pv, Size sv) {
  const double inf = std::numeric_limits<double>::infinity();
  const double dx = std::abs(pv.x - pu.x), dy = std::abs(pv.y - pu.y);
  const double fx = dx > 0.0 ? (su.w + sv.w) / (2.0 * dx) : inf;
  const double fy = dy > 0.0 ? (su.h + sv.h) / (2.0 * dy) : inf;
  return std::max(1.0, std::min(fx, fy));
}

/// Delaunay edges of the current centers, plus every overlapping pair once
/// the triangulation alone no longer exposes an overlap.
inline std::vector<ProximityEdge> proximity_edges(std::span<const Point> pos, std::span<const Size> sizes,
                                                  bool& include_overlaps) {
  std::vector<ProximityEdge> edges;
  const Triangulation dt = delaunay(pos, sizes);
  bool any = false;
  for (const Edge& e : dt.edges) {
    const double f = overlap_factor(pos[e.u], sizes[e.u], pos[e.v], sizes[e.v]);
    any = any || f > 1.0;
    edges.push_back({e.u, e.v, f});
  }
  if (!any) include_overlaps = true;
  if (include_overlaps) {
    std::vector<Edge> known;
    known.reserve(dt.edges.size());
    for (const Edge& e : dt.edges) known.push_back(e);
    for (const auto& [u, v] : overlapping_pairs(pos, sizes)) {
      if (std::binary_search(known.begin(), known.end(), Edge{u, v})) continue;
      edges.push_back({u, v, overlap_factor(pos[u], sizes[u], pos[v], sizes[v])});
    }
  }
  return edges;
}

}  // namespace detail

inline constexpr double kPrismMaxFactor = 1.5;
inline constexpr int kPrismStressSweeps = 30;
/// Growth factors of overlapped tree edges are stretched slightly so that
/// nearly-touching pairs do not push each other back and forth forever.
inline constexpr double kGtreeOvershoot = 1.001;

/// Proximity stress: each round targets d_uv = min(factor, 1.5) * |u - v| on
/// the proximity edges and runs localized stress-majorization sweeps on
/// sum (1/d_uv^2)(|u' - v'| - d_uv)^2.
inline IterativeResult run_prism(std::span<const Point> initial, std::span<const Size> sizes,
                                 std::size_t max_iterations, std::span<const Size> done_sizes = {}) {
  if (done_sizes.empty()) done_sizes = sizes;
  IterativeResult out{{initial.begin(), initial.end()}, 0};
  auto& pos = out.positions;
  const std::size_t n = pos.size();
  bool include_overlaps = false;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);

  while (out.iterations < max_iterations && count_overlaps(pos, done_sizes) > 0) {
    ++out.iterations;
    const auto edges = detail::proximity_edges(pos, sizes, include_overlaps);
    for (auto& a : adj) a.clear();
    for (const auto& e : edges) {
      const double d = std::min(e.factor, kPrismMaxFactor) * distance(pos[e.u], pos[e.v]);
      adj[e.u].emplace_back(e.v, d);
      adj[e.v].emplace_back(e.u, d);
    }
    for (int sweep = 0; sweep < kPrismStressSweeps; ++sweep) {
      for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].empty()) continue;
        double wsum = 0.0;
        Point acc;
        for (const auto& [j, d] : adj[i]) {
          const Point diff = pos[i] - pos[j];
          const double len = norm(diff);
          if (!(d > 0.0) || !(len > 0.0)) continue;
          const double w = 1.0 / (d * d);
          acc = acc + (pos[j] + diff * (d / len)) * w;
          wsum += w;
        }
        if (wsum > 0.0) pos[i] = acc * (1.0 / wsum);
      }
    }
  }
  return out;
}

/// Growing tree: a maximum spanning tree of the proximity edges, prioritized
/// by how much each edge must grow, is walked from the node nearest the
/// bounding-box center; every too-short tree edge pushes the child's whole
/// subtree outward along the edge.
inline IterativeResult run_gtree(std::span<const Point> initial, std::span<const Size> sizes,
                                 std::size_t max_iterations, std::span<const Size> done_sizes = {}) {
  if (done_sizes.empty()) done_sizes = sizes;
  IterativeResult out{{initial.begin(), initial.end()}, 0};
  auto& pos = out.positions;
  const std::size_t n = pos.size();
  bool include_overlaps = false;

  while (out.iterations < max_iterations && count_overlaps(pos, done_sizes) > 0) {
    ++out.iterations;
    const auto edges = detail::proximity_edges(pos, sizes, include_overlaps);
    std::vector<double> target(edges.size());
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const double f = edges[k].factor > 1.0 ? edges[k].factor * kGtreeOvershoot : 1.0;
      target[k] = f * distance(pos[edges[k].u], pos[edges[k].v]);
      incident[edges[k].u].push_back(k);
      incident[edges[k].v].push_back(k);
    }

    const Point c = bounding_box(pos, sizes).center();
    std::size_t root = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (squared_norm(pos[i] - c) < squared_norm(pos[root] - c)) root = i;
    }

    // Prim, highest growth demand first; ties resolved by edge index.
    using Item = std::tuple<double, std::size_t, std::size_t>;  // priority, -edge, node
    auto cmp = [](const Item& a, const Item& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      return std::get<1>(a) > std::get<1>(b);
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    std::vector<char> in_tree(n, 0);
    std::vector<std::size_t> parent(n, n), parent_edge(n, edges.size());
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::size_t> preorder;
    auto grow_from = [&](std::size_t v) {
      for (std::size_t k : incident[v]) {
        const std::size_t w = edges[k].u == v ? edges[k].v : edges[k].u;
        if (in_tree[w]) continue;
        heap.emplace(target[k] - distance(pos[v], pos[w]), k, w);
      }
    };
    in_tree[root] = 1;
    grow_from(root);
    while (!heap.empty()) {
      const auto [prio, k, w] = heap.top();
      heap.pop();
      if (in_tree[w]) continue;
      in_tree[w] = 1;
      parent[w] = edges[k].u == w ? edges[k].v : edges[k].u;
      parent_edge[w] = k;
      children[parent[w]].push_back(w);
      grow_from(w);
    }

    // Relative vectors inside a subtree are unchanged by the ancestors' moves,
    // so every deficit is measured on the positions at the start of the round.
    std::vector<Point> shift(n);
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      auto& kids = children[p];
      std::sort(kids.begin(), kids.end());
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        const std::size_t ch = *it;
        const Point rel = pos[ch] - pos[p];
        const double len = norm(rel);
        const double want = target[parent_edge[ch]];
        Point own;
        if (len > 0.0 && len < want) own = rel * ((want - len) / len);
        shift[ch] = shift[p] + own;
        stack.push_back(ch);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (in_tree[i]) pos[i] = pos[i] + shift[i];
    }
  }
  return out;
}

}  // namespace noverlap
