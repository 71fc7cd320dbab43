#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "noverlap/algorithms/common.hpp"

namespace noverlap {

struct IterativeResult {
  std::vector<Point> positions;
  std::size_t iterations = 0;
};

/// Force-transfer: each overlapping pair is resolved along its cheaper axis by
/// moving the member further along that axis; whatever the mover then hits
/// ahead of it is pushed by the same amount, transitively. One full scan over
/// the overlapping pairs is one outer iteration. Iteration stops once no pair
/// overlaps under `done_sizes` (default: `sizes`).
inline IterativeResult run_fta(std::span<const Point> initial, std::span<const Size> sizes,
                               std::size_t max_iterations, std::span<const Size> done_sizes = {}) {
  if (done_sizes.empty()) done_sizes = sizes;
  using detail::axis_of;
  IterativeResult out{{initial.begin(), initial.end()}, 0};
  auto& pos = out.positions;
  const std::size_t n = pos.size();
  std::vector<char> visited(n, 0);
  std::deque<std::size_t> queue;

  while (out.iterations < max_iterations) {
    if (count_overlaps(pos, done_sizes) == 0) break;
    const auto pairs = overlapping_pairs(pos, sizes);
    ++out.iterations;
    for (const auto& [u, v] : pairs) {
      if (!overlaps(pos[u], sizes[u], pos[v], sizes[v])) continue;
      const double dx = (sizes[u].w + sizes[v].w) / 2.0 - std::abs(pos[v].x - pos[u].x);
      const double dy = (sizes[u].h + sizes[v].h) / 2.0 - std::abs(pos[v].y - pos[u].y);
      const int axis = dx <= dy ? 0 : 1;
      const double delta = axis == 0 ? dx : dy;
      const bool v_ahead = axis_of(pos[v], axis) > axis_of(pos[u], axis) ||
                           (axis_of(pos[v], axis) == axis_of(pos[u], axis) && v > u);
      const std::size_t mover = v_ahead ? v : u;
      const std::size_t anchor = v_ahead ? u : v;

      std::fill(visited.begin(), visited.end(), 0);
      visited[anchor] = 1;
      visited[mover] = 1;
      queue.assign(1, mover);
      while (!queue.empty()) {
        const std::size_t p = queue.front();
        queue.pop_front();
        axis_of(pos[p], axis) += delta;
        const double cp = axis_of(pos[p], axis);
        for (std::size_t q = 0; q < n; ++q) {
          if (visited[q]) continue;
          const double cq = axis_of(pos[q], axis);
          if (cq < cp || (cq == cp && q < p)) continue;
          if (!overlaps(pos[p], sizes[p], pos[q], sizes[q])) continue;
          visited[q] = 1;
          queue.push_back(q);
        }
      }
    }
  }
  return out;
}

}  // namespace noverlap
