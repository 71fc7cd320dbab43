#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "noverlap/algorithms/common.hpp"
#include "noverlap/rng.hpp"

namespace noverlap {
namespace detail {

/// Uniform bucket grid over committed rectangles; a rectangle is filed under
/// every cell it touches.
class RectGrid {
 public:
  explicit RectGrid(double cell) : cell_(cell) {}

  void insert(std::size_t id, Point p, Size s) {
    for_cells(p, s, [&](std::int64_t key) { cells_[key].push_back(id); });
  }

  template <class Pred>
  bool any_overlap(Point p, Size s, Pred&& overlaps_with) const {
    bool hit = false;
    for_cells(p, s, [&](std::int64_t key) {
      if (hit) return;
      const auto it = cells_.find(key);
      if (it == cells_.end()) return;
      for (std::size_t id : it->second) {
        if (overlaps_with(id)) {
          hit = true;
          return;
        }
      }
    });
    return hit;
  }

 private:
  template <class F>
  void for_cells(Point p, Size s, F&& f) const {
    const auto x0 = static_cast<std::int64_t>(std::floor((p.x - s.w / 2.0) / cell_));
    const auto x1 = static_cast<std::int64_t>(std::floor((p.x + s.w / 2.0) / cell_));
    const auto y0 = static_cast<std::int64_t>(std::floor((p.y - s.h / 2.0) / cell_));
    const auto y1 = static_cast<std::int64_t>(std::floor((p.y + s.h / 2.0) / cell_));
    for (auto gx = x0; gx <= x1; ++gx) {
      for (auto gy = y0; gy <= y1; ++gy) f(gx * 0x1000003LL ^ gy);
    }
  }

  double cell_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

}  // namespace detail

/// Line-search placement: nodes are committed in order of their distance to
/// the bounding-box center; a node that hits an already-committed one walks
/// outward along the ray from the center through its initial position, in
/// steps of a tenth of its smaller side, until it is free.
inline std::vector<Point> run_rwordle_l(std::span<const Point> initial, std::span<const Size> sizes,
                                        std::uint64_t seed) {
  const std::size_t n = initial.size();
  std::vector<Point> pos(initial.begin(), initial.end());
  const Point c = bounding_box(initial, sizes).center();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> dist2(n);
  for (std::size_t i = 0; i < n; ++i) dist2[i] = squared_norm(initial[i] - c);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist2[a] < dist2[b]; });

  double cell = 0.0;
  for (const Size& s : sizes) cell = std::max({cell, s.w, s.h});
  detail::RectGrid grid(cell);
  Rng rng(seed);

  for (std::size_t i : order) {
    Point dir = initial[i] - c;
    const double len = norm(dir);
    if (len > 0.0) {
      dir = dir * (1.0 / len);
    } else {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      dir = {std::cos(angle), std::sin(angle)};
    }
    const double step = 0.1 * std::min(sizes[i].w, sizes[i].h);
    auto blocked = [&](Point p) {
      return grid.any_overlap(p, sizes[i], [&](std::size_t j) { return overlaps(p, sizes[i], pos[j], sizes[j]); });
    };
    Point p = initial[i];
    for (std::size_t k = 1; blocked(p); ++k) p = initial[i] + dir * (step * static_cast<double>(k));
    pos[i] = p;
    grid.insert(i, p, sizes[i]);
  }
  return pos;
}

}  // namespace noverlap
