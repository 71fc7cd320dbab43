#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "noverlap/model.hpp"
#include "noverlap/rng.hpp"

namespace noverlap {

enum class GraphModel { random, tree, small_world, scale_free };

inline constexpr std::array<GraphModel, 4> kAllModels{GraphModel::random, GraphModel::tree,
                                                      GraphModel::small_world, GraphModel::scale_free};

constexpr std::string_view model_name(GraphModel m) {
  switch (m) {
    case GraphModel::random: return "random";
    case GraphModel::tree: return "tree";
    case GraphModel::small_world: return "small_world";
    case GraphModel::scale_free: return "scale_free";
  }
  return "?";
}

inline std::optional<GraphModel> model_from_name(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  for (GraphModel m : kAllModels) {
    if (model_name(m) == key) return m;
  }
  return std::nullopt;
}

struct NodeSizeRule {
  enum class Kind { uniform, degree_proportional };
  Kind kind = Kind::uniform;
  /// uniform: (width, height). degree_proportional: (base, slope) giving
  /// width = base + slope * degree and height = width / 2.
  double a = 4.0;
  double b = 2.0;

  static NodeSizeRule uniform(double w, double h) { return {Kind::uniform, w, h}; }
  static NodeSizeRule degree_proportional(double base, double slope) { return {Kind::degree_proportional, base, slope}; }

  Size size_for(std::size_t degree) const {
    if (kind == Kind::uniform) return {a, b};
    const double w = a + b * static_cast<double>(degree);
    return {w, w / 2.0};
  }
};

struct CorpusSpec {
  std::vector<GraphModel> models;
  std::vector<std::size_t> sizes;
  std::size_t seeds_per_size = 1;
  NodeSizeRule node_size;

  std::size_t graph_count() const { return models.size() * sizes.size() * seeds_per_size; }

  void validate() const {
    if (models.empty()) throw ValidationError("corpus needs at least one model");
    if (sizes.empty()) throw ValidationError("corpus needs at least one size");
    if (seeds_per_size == 0) throw ValidationError("seeds_per_size must be positive");
    for (std::size_t n : sizes) {
      if (n < 2 || n > 100000) throw ValidationError("graph size " + std::to_string(n) + " outside [2, 100000]");
    }
    if (!(node_size.a > 0.0) || !(node_size.kind == NodeSizeRule::Kind::uniform ? node_size.b > 0.0 : node_size.b >= 0.0)) {
      throw ValidationError("node size rule must produce positive sizes");
    }
  }
};

/// `count` sizes in geometric progression from `lo` to `hi`, rounded.
inline std::vector<std::size_t> geometric_sizes(double lo, double hi, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    out.push_back(static_cast<std::size_t>(std::llround(lo * std::pow(hi / lo, t))));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Full-size synthetic corpus: 4 models x 21 sizes (10..1000) x 10 seeds = 840.
inline CorpusSpec paper_scale_spec() {
  return {{kAllModels.begin(), kAllModels.end()}, geometric_sizes(10, 1000, 21), 10, NodeSizeRule::uniform(4, 2)};
}

/// Laptop-size corpus: 4 models x {10, 18, 32, 56, 100, 178, 316} x 3 seeds = 84.
inline CorpusSpec desk_scale_spec() {
  return {{kAllModels.begin(), kAllModels.end()}, geometric_sizes(10, 316.2277660168379, 7), 3,
          NodeSizeRule::uniform(4, 2)};
}

inline std::string synthetic_graph_id(GraphModel model, std::size_t n, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_n%05zu_s%03llu", std::string(model_name(model)).c_str(), n,
                static_cast<unsigned long long>(seed));
  return buf;
}

namespace detail {

inline std::string node_label(std::size_t i, std::size_t n) {
  std::size_t digits = 4;
  for (std::size_t lim = 10000; lim < n; lim *= 10) ++digits;
  std::string s = std::to_string(i);
  return "v" + std::string(digits - std::min(digits, s.size()), '0') + s;
}

inline std::uint64_t model_salt(GraphModel m) {
  return 0x51ed2701ULL * (static_cast<std::uint64_t>(m) + 1);
}

using PairSet = std::unordered_set<std::uint64_t>;

inline std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

inline std::vector<std::pair<std::size_t, std::size_t>> erdos_renyi(std::size_t n, Rng& rng) {
  const std::size_t total = n * (n - 1) / 2;
  const std::size_t m = std::min(2 * n, total);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (2 * m > total) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    all.reserve(total);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) all.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
      std::swap(all[i], all[j]);
    }
    all.resize(m);
    return all;
  }
  PairSet seen;
  while (edges.size() < m) {
    const std::size_t a = static_cast<std::size_t>(rng.below(n));
    const std::size_t b = static_cast<std::size_t>(rng.below(n));
    if (a == b || !seen.insert(pair_key(a, b)).second) continue;
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return edges;
}

inline std::vector<std::pair<std::size_t, std::size_t>> random_tree(std::size_t n, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(static_cast<std::size_t>(rng.below(i)), i);
  return edges;
}

inline std::vector<std::pair<std::size_t, std::size_t>> watts_strogatz(std::size_t n, Rng& rng) {
  constexpr std::size_t kHalfNeighbours = 2;
  constexpr double kRewire = 0.1;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n < 2 * kHalfNeighbours + 1) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    }
    return edges;
  }
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t j = 1; j <= kHalfNeighbours; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t t = (i + j) % n;
      adj[i].insert(t);
      adj[t].insert(i);
    }
  }
  for (std::size_t j = 1; j <= kHalfNeighbours; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t old = (i + j) % n;
      if (!rng.bernoulli(kRewire)) continue;
      if (adj[i].size() + 1 >= n) continue;  // no free target
      std::size_t t;
      do {
        t = static_cast<std::size_t>(rng.below(n));
      } while (t == i || adj[i].count(t));
      adj[i].erase(old);
      adj[old].erase(i);
      adj[i].insert(t);
      adj[t].insert(i);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b : adj[a]) {
      if (a < b) edges.emplace_back(a, b);
    }
  }
  return edges;
}

inline std::vector<std::pair<std::size_t, std::size_t>> barabasi_albert(std::size_t n, Rng& rng) {
  constexpr std::size_t kAttach = 2;
  std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}};
  std::vector<std::size_t> endpoints{0, 1};  // node repeated once per incident edge
  for (std::size_t i = 2; i < n; ++i) {
    std::vector<std::size_t> targets;
    const std::size_t want = std::min(kAttach, i);
    while (targets.size() < want) {
      const std::size_t t = endpoints[static_cast<std::size_t>(rng.below(endpoints.size()))];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (std::size_t t : targets) {
      edges.emplace_back(t, i);
      endpoints.push_back(t);
      endpoints.push_back(i);
    }
  }
  return edges;
}

}  // namespace detail

/// Synthetic graph from one of the four models, deterministic in `seed`.
inline SizedGraph generate(GraphModel model, std::size_t n, std::uint64_t seed,
                           const NodeSizeRule& rule = NodeSizeRule::uniform(4, 2)) {
  if (n < 2) throw ValidationError("generated graphs need n >= 2, got " + std::to_string(n));
  Rng rng(seed ^ detail::model_salt(model) ^ (static_cast<std::uint64_t>(n) << 40));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  switch (model) {
    case GraphModel::random: edges = detail::erdos_renyi(n, rng); break;
    case GraphModel::tree: edges = detail::random_tree(n, rng); break;
    case GraphModel::small_world: edges = detail::watts_strogatz(n, rng); break;
    case GraphModel::scale_free: edges = detail::barabasi_albert(n, rng); break;
  }
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Size s = rule.size_for(degree[i]);
    nodes.push_back({detail::node_label(i, n), s.w, s.h});
  }
  std::vector<NamedEdge> named;
  named.reserve(edges.size());
  for (const auto& [a, b] : edges) named.emplace_back(nodes[a].id, nodes[b].id);
  return SizedGraph(std::move(nodes), named, synthetic_graph_id(model, n, seed));
}

// ---------------------------------------------------------------------------
// Baseline initial layout
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultLayoutIterations = 300;

namespace detail {

inline std::vector<std::vector<std::size_t>> connected_components(const SizedGraph& g) {
  const auto adj = g.adjacency();
  std::vector<std::vector<std::size_t>> comps;
  std::vector<char> seen(g.n(), 0);
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    comps.emplace_back();
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comps.back().push_back(v);
      for (std::size_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

/// Fruchterman-Reingold on one component; returns positions centered at 0.
inline std::vector<Point> fr_component(const SizedGraph& g, const std::vector<std::size_t>& comp, double ideal,
                                       std::uint64_t seed, std::size_t iterations) {
  const std::size_t k = comp.size();
  std::vector<Point> p(k);
  if (k == 1) return p;
  std::vector<std::size_t> local(g.n(), k);
  for (std::size_t i = 0; i < k; ++i) local[comp[i]] = i;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] < k && local[e.v] < k) edges.emplace_back(local[e.u], local[e.v]);
  }

  Rng rng(seed);
  const double radius = ideal * std::sqrt(static_cast<double>(k));
  for (auto& q : p) {
    const double r = radius * std::sqrt(rng.uniform());
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    q = {r * std::cos(a), r * std::sin(a)};
  }
  const double k2 = ideal * ideal;
  const double t0 = radius / 4.0;
  std::vector<Point> disp(k);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        Point d = p[i] - p[j];
        double len2 = squared_norm(d);
        if (len2 >= 4.0 * k2) continue;
        if (len2 == 0.0) {
          const double a = 2.0 * std::numbers::pi * static_cast<double>(i * 7919 + j) / 104729.0;
          d = {std::cos(a) * 1e-6 * ideal, std::sin(a) * 1e-6 * ideal};
          len2 = squared_norm(d);
        }
        const Point f = d * (k2 / len2);  // (k^2 / len) along the unit vector
        disp[i] = disp[i] + f;
        disp[j] = disp[j] - f;
      }
    }
    for (const auto& [a, b] : edges) {
      const Point d = p[a] - p[b];
      const double len = norm(d);
      const Point f = d * (len / ideal);  // (len^2 / k) along the unit vector
      disp[a] = disp[a] - f;
      disp[b] = disp[b] + f;
    }
    const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    for (std::size_t i = 0; i < k; ++i) {
      const double len = norm(disp[i]);
      if (len > 0.0) p[i] = p[i] + disp[i] * (std::min(len, temp) / len);
    }
  }
  Point lo{p[0]}, hi{p[0]};
  for (const auto& q : p) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  const Point mid = (lo + hi) * 0.5;
  for (auto& q : p) q = q - mid;
  return p;
}

}  // namespace detail

/// Deterministic force-directed baseline layout. Each connected component is
/// laid out on its own (ideal edge length 1.5 x mean node diagonal, random
/// start on a disk, linear cooling), then components are packed on a grid,
/// largest first.
inline Embedding initial_layout(const SizedGraph& graph, std::uint64_t seed,
                                std::size_t iterations = kDefaultLayoutIterations) {
  const std::size_t n = graph.n();
  if (n == 0) return Embedding{};
  double diag = 0.0;
  for (const Node& v : graph.nodes()) diag += std::hypot(v.w, v.h);
  const double ideal = 1.5 * diag / static_cast<double>(n);

  auto comps = detail::connected_components(graph);
  std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<Point>> local;
  double cell = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    local.push_back(detail::fr_component(graph, comps[c], ideal, Rng::mix(seed + c), iterations));
    for (const auto& q : local.back()) cell = std::max({cell, 2.0 * std::abs(q.x), 2.0 * std::abs(q.y)});
  }
  cell += 2.0 * ideal;

  std::vector<Point> pos(n);
  const auto columns = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(comps.size()))));
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Point origin = comps.size() == 1 ? Point{}
                                           : Point{cell * static_cast<double>(c % columns),
                                                   -cell * static_cast<double>(c / columns)};
    for (std::size_t i = 0; i < comps[c].size(); ++i) pos[comps[c][i]] = origin + local[c][i];
  }
  return Embedding(std::move(pos));
}

}  // namespace noverlap
