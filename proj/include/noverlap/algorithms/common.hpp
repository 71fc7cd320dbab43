#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noverlap/geometry.hpp"
#include "noverlap/model.hpp"

namespace noverlap {

enum class Algorithm { scaling, pfs, pfs_prime, fta, vpsc, prism, rwordle_l, gtree };

inline constexpr std::array<Algorithm, 8> kAllAlgorithms{
    Algorithm::scaling, Algorithm::pfs,   Algorithm::pfs_prime, Algorithm::fta,
    Algorithm::vpsc,    Algorithm::prism, Algorithm::rwordle_l, Algorithm::gtree};

constexpr std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::scaling: return "scaling";
    case Algorithm::pfs: return "pfs";
    case Algorithm::pfs_prime: return "pfs-prime";
    case Algorithm::fta: return "fta";
    case Algorithm::vpsc: return "vpsc";
    case Algorithm::prism: return "prism";
    case Algorithm::rwordle_l: return "rwordle-l";
    case Algorithm::gtree: return "gtree";
  }
  return "?";
}

/// Accepts the CLI spelling ("pfs-prime") and the underscore spelling.
inline std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == key) return a;
  }
  return std::nullopt;
}

struct AdjustParams {
  Algorithm algorithm = Algorithm::scaling;
  std::uint64_t seed = 0;
  std::size_t max_outer_iterations = 1000;
  /// Inflates every node's width and height by 2*padding during adjustment.
  double padding = 0.0;
  /// Separation slack added on top of the required gap so that rounding never
  /// leaves two nodes strictly overlapping.
  double epsilon = 1e-9;
};

namespace detail {

inline double axis_of(const Point& p, int axis) { return axis == 0 ? p.x : p.y; }
inline double& axis_of(Point& p, int axis) { return axis == 0 ? p.x : p.y; }
inline double extent_of(Size s, int axis) { return axis == 0 ? s.w : s.h; }

inline std::vector<Size> inflate(std::span<const Size> sizes, double by) {
  std::vector<Size> out(sizes.begin(), sizes.end());
  for (Size& s : out) {
    s.w += by;
    s.h += by;
  }
  return out;
}

}  // namespace detail

/// Smallest uniform factor s >= 1 such that scaling every center by s about
/// any fixed point leaves no overlapping pair.
inline double scaling_factor(std::span<const Point> pos, std::span<const Size> sizes) {
  double s = 1.0;
  for (const auto& [u, v] : overlapping_pairs(pos, sizes)) {
    const double dx = std::abs(pos[v].x - pos[u].x);
    const double dy = std::abs(pos[v].y - pos[u].y);
    if (dx == 0.0 && dy == 0.0) {
      throw ValidationError("overlapping nodes #" + std::to_string(u) + " and #" + std::to_string(v) +
                            " share a center; no scaling separates them");
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double need_x = dx > 0.0 ? ((sizes[u].w + sizes[v].w) / 2.0) / dx : inf;
    const double need_y = dy > 0.0 ? ((sizes[u].h + sizes[v].h) / 2.0) / dy : inf;
    s = std::max(s, std::min(need_x, need_y));
  }
  return s;
}

inline double scaling_factor(const SizedGraph& graph, const Embedding& embedding) {
  const auto sizes = graph.sizes();
  return scaling_factor(embedding.positions(), sizes);
}

/// Scales all centers about the bounding-box center by the factor needed for
/// `work_sizes`, nudging upward until no pair overlaps under `check_sizes`.
inline std::vector<Point> scale_apart(std::span<const Point> pos, std::span<const Size> work_sizes,
                                      std::span<const Size> check_sizes) {
  std::vector<Point> out(pos.begin(), pos.end());
  if (count_overlaps(pos, check_sizes) == 0) return out;
  double s = scaling_factor(pos, work_sizes);
  const Point c = bounding_box(pos, work_sizes).center();
  double nudge = 1e-12;
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (std::size_t i = 0; i < pos.size(); ++i) out[i] = c + (pos[i] - c) * s;
    if (count_overlaps(out, check_sizes) == 0) break;
    s *= 1.0 + nudge;
    nudge *= 4.0;
  }
  return out;
}

}  // namespace noverlap
