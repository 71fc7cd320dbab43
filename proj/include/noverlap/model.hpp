#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace noverlap {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that could not be tokenized or parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model invariant (dangling edge,
/// non-positive size, missing position, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Plain geometry values
// ---------------------------------------------------------------------------

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double squared_norm(Point p) { return p.x * p.x + p.y * p.y; }
inline double distance(Point a, Point b) { return norm(b - a); }

struct Size {
  double w = 0.0;
  double h = 0.0;
  friend constexpr bool operator==(Size a, Size b) = default;
};

// ---------------------------------------------------------------------------
// SizedGraph
// ---------------------------------------------------------------------------

struct Node {
  std::string id;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const Node&, const Node&) = default;
};

/// Undirected edge over dense node indices, always stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  friend constexpr bool operator==(Edge, Edge) = default;
  friend constexpr auto operator<=>(Edge, Edge) = default;
};

using NamedEdge = std::pair<std::string, std::string>;

enum class DuplicateEdges { reject, collapse };

/// Immutable problem instance: rectangles with ids plus an undirected simple
/// edge set. Nodes are stored sorted by id; that order is the dense index used
/// everywhere else, which makes every seeded computation reproducible.
class SizedGraph {
 public:
  SizedGraph() = default;

  SizedGraph(std::vector<Node> nodes, const std::vector<NamedEdge>& edges,
             std::string graph_id = {},
             DuplicateEdges duplicates = DuplicateEdges::reject)
      : graph_id_(std::move(graph_id)), nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& node = nodes_[i];
      if (i > 0 && nodes_[i - 1].id == node.id) {
        throw ValidationError("duplicate node id \"" + node.id + "\"");
      }
      if (!(node.w > 0.0) || !(node.h > 0.0) || !std::isfinite(node.w) ||
          !std::isfinite(node.h)) {
        throw ValidationError("node \"" + node.id +
                              "\": width and height must be finite and strictly positive");
      }
      index_.emplace(node.id, i);
    }
    edges_.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& [a, b] = edges[k];
      const auto ia = index_of(a);
      const auto ib = index_of(b);
      const std::string locus = "edge #" + std::to_string(k) + " [\"" + a + "\",\"" + b + "\"]";
      if (!ia) throw ValidationError(locus + ": dangling endpoint \"" + a + "\"");
      if (!ib) throw ValidationError(locus + ": dangling endpoint \"" + b + "\"");
      if (*ia == *ib) throw ValidationError(locus + ": self-loop");
      edges_.push_back({std::min(*ia, *ib), std::max(*ia, *ib)});
    }
    std::vector<Edge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      if (duplicates == DuplicateEdges::reject) {
        throw ValidationError("duplicate edge [\"" + nodes_[dup->u].id + "\",\"" +
                              nodes_[dup->v].id + "\"]");
      }
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    }
    edges_ = std::move(sorted);
  }

  std::size_t n() const { return nodes_.size(); }
  std::size_t m() const { return edges_.size(); }
  const std::string& graph_id() const { return graph_id_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  Size size_of(std::size_t i) const { return {nodes_[i].w, nodes_[i].h}; }

  std::vector<Size> sizes() const {
    std::vector<Size> out;
    out.reserve(nodes_.size());
    for (const auto& node : nodes_) out.push_back({node.w, node.h});
    return out;
  }

  std::optional<std::size_t> index_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(n());
    for (const Edge& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  friend bool operator==(const SizedGraph& a, const SizedGraph& b) {
    return a.graph_id_ == b.graph_id_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::string graph_id_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Embedding
// ---------------------------------------------------------------------------

/// Node-center positions, indexed by the dense index of the graph it lays out.
class Embedding {
 public:
  Embedding() = default;

  explicit Embedding(std::vector<Point> positions) : positions_(std::move(positions)) {
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      if (!std::isfinite(positions_[i].x) || !std::isfinite(positions_[i].y)) {
        throw ValidationError("position #" + std::to_string(i) + " is not finite");
      }
    }
  }

  /// Builds from an id-keyed map; must be total over `graph`.
  static Embedding from_map(const SizedGraph& graph,
                            const std::unordered_map<std::string, Point>& by_id) {
    std::vector<Point> positions(graph.n());
    for (std::size_t i = 0; i < graph.n(); ++i) {
      const auto it = by_id.find(graph.node(i).id);
      if (it == by_id.end()) {
        throw ValidationError("node \"" + graph.node(i).id + "\" has no position");
      }
      positions[i] = it->second;
    }
    if (by_id.size() != graph.n()) {
      for (const auto& [id, p] : by_id) {
        if (!graph.index_of(id)) throw ValidationError("position given for unknown node \"" + id + "\"");
      }
    }
    return Embedding(std::move(positions));
  }

  std::size_t size() const { return positions_.size(); }
  const Point& operator[](std::size_t i) const { return positions_[i]; }
  const std::vector<Point>& positions() const { return positions_; }

  bool is_total_over(const SizedGraph& graph) const { return positions_.size() == graph.n(); }

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<Point> positions_;
};

// ---------------------------------------------------------------------------
// AdjustmentPair
// ---------------------------------------------------------------------------

/// Owns copies of (graph, initial, adjusted). Node sizes come from the single graph, so they are identical on
/// both sides by construction.
class AdjustmentPair {
 public:
  AdjustmentPair(SizedGraph graph, Embedding initial, Embedding adjusted)
      : graph_(std::move(graph)), initial_(std::move(initial)), adjusted_(std::move(adjusted)) {
    if (!initial_.is_total_over(graph_)) {
      throw ValidationError("initial embedding has " + std::to_string(initial_.size()) +
                            " positions for " + std::to_string(graph_.n()) + " nodes");
    }
    if (!adjusted_.is_total_over(graph_)) {
      throw ValidationError("adjusted embedding has " + std::to_string(adjusted_.size()) +
                            " positions for " + std::to_string(graph_.n()) + " nodes");
    }
  }

  const SizedGraph& graph() const { return graph_; }
  const Embedding& initial() const { return initial_; }
  const Embedding& adjusted() const { return adjusted_; }

 private:
  SizedGraph graph_;
  Embedding initial_;
  Embedding adjusted_;
};

}  // namespace noverlap
