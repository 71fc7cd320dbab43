#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "noverlap/algorithms/common.hpp"

// Force-scan family. Each pass sweeps one axis in coordinate order and only
// ever shifts nodes toward +axis by amounts that are non-decreasing along the
// sweep (PFS) or strictly order-keeping (PFS'), so the orthogonal ordering of
// the input survives, including exact coordinate ties.

namespace noverlap {
namespace detail {

/// Nodes grouped by equal coordinate on `axis`, groups in ascending order.
inline std::vector<std::vector<std::size_t>> coordinate_groups(std::span<const Point> pos, int axis) {
  std::vector<std::size_t> order(pos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int other = 1 - axis;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ca = axis_of(pos[a], axis), cb = axis_of(pos[b], axis);
    if (ca != cb) return ca < cb;
    const double oa = axis_of(pos[a], other), ob = axis_of(pos[b], other);
    if (oa != ob) return oa < ob;
    return a < b;
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || axis_of(pos[order[k]], axis) != axis_of(pos[order[k - 1]], axis)) groups.emplace_back();
    groups.back().push_back(order[k]);
  }
  return groups;
}

/// Rounding can collapse two distinct coordinates once shifted; restores a
/// strict increase between consecutive groups.
inline void keep_groups_strict(std::vector<Point>& pos, const std::vector<std::vector<std::size_t>>& groups,
                               int axis) {
  for (std::size_t g = 1; g < groups.size(); ++g) {
    const double prev = axis_of(pos[groups[g - 1].front()], axis);
    const double cur = axis_of(pos[groups[g].front()], axis);
    if (cur > prev) continue;
    const double fixed = std::nextafter(prev, std::numeric_limits<double>::infinity());
    for (std::size_t i : groups[g]) axis_of(pos[i], axis) = fixed;
  }
}

/// Classic force-scan pass: shift_i = max(shift of the previous group,
/// shift_j + needed(j, i) over earlier overlapping j).
inline void force_scan_pass(std::vector<Point>& pos, std::span<const Size> sizes, int axis) {
  const std::size_t n = pos.size();
  std::vector<std::vector<std::size_t>> partners(n);
  for (const auto& [u, v] : overlapping_pairs(pos, sizes)) {
    partners[u].push_back(v);
    partners[v].push_back(u);
  }
  const auto groups = coordinate_groups(pos, axis);
  std::vector<double> shift(n, 0.0);
  double running = 0.0;
  for (const auto& group : groups) {
    double need = running;
    for (std::size_t i : group) {
      const double ci = axis_of(pos[i], axis);
      for (std::size_t j : partners[i]) {
        const double cj = axis_of(pos[j], axis);
        if (!(cj < ci)) continue;
        const double gap = (extent_of(sizes[i], axis) + extent_of(sizes[j], axis)) / 2.0;
        need = std::max(need, shift[j] + gap - (ci - cj));
      }
    }
    for (std::size_t i : group) shift[i] = need;
    running = need;
  }
  for (std::size_t i = 0; i < n; ++i) axis_of(pos[i], axis) += shift[i];
  keep_groups_strict(pos, groups, axis);
}

/// Compact pass: a group only moves as far as its most constraining earlier
/// neighbour (one whose orthogonal interval intersects it) demands, and
/// otherwise keeps its coordinate. Strict order with the previous group is kept
/// with a gap of at most min(original gap, min_gap).
inline void compact_scan_pass(std::vector<Point>& pos, std::span<const Size> sizes, int axis, double min_gap) {
  const int other = 1 - axis;
  const auto groups = coordinate_groups(pos, axis);
  const std::vector<Point> original = pos;
  std::vector<std::size_t> placed;
  placed.reserve(pos.size());
  double prev_new = -std::numeric_limits<double>::infinity();
  double prev_old = -std::numeric_limits<double>::infinity();
  for (const auto& group : groups) {
    const double old_c = axis_of(original[group.front()], axis);
    double target = old_c;
    if (std::isfinite(prev_new)) {
      double floor = prev_new + std::min(old_c - prev_old, min_gap);
      if (!(floor > prev_new)) floor = std::nextafter(prev_new, std::numeric_limits<double>::infinity());
      target = std::max(target, floor);
    }
    for (std::size_t i : group) {
      const double oi = axis_of(original[i], other);
      const double ei = extent_of(sizes[i], other);
      for (std::size_t j : placed) {
        if (!(std::abs(axis_of(original[j], other) - oi) < (extent_of(sizes[j], other) + ei) / 2.0)) continue;
        const double gap = (extent_of(sizes[i], axis) + extent_of(sizes[j], axis)) / 2.0;
        target = std::max(target, axis_of(pos[j], axis) + gap);
      }
    }
    for (std::size_t i : group) axis_of(pos[i], axis) = target;
    placed.insert(placed.end(), group.begin(), group.end());
    prev_new = target;
    prev_old = old_c;
  }
}

}  // namespace detail

/// PFS: horizontal force-scan, then vertical force-scan on the result.
inline std::vector<Point> run_pfs(std::span<const Point> initial, std::span<const Size> sizes) {
  std::vector<Point> pos(initial.begin(), initial.end());
  detail::force_scan_pass(pos, sizes, 0);
  detail::force_scan_pass(pos, sizes, 1);
  return pos;
}

/// PFS': compact horizontal scan, then the PFS vertical pass for pairs that
/// share an x coordinate.
inline std::vector<Point> run_pfs_prime(std::span<const Point> initial, std::span<const Size> sizes,
                                        double min_gap) {
  std::vector<Point> pos(initial.begin(), initial.end());
  detail::compact_scan_pass(pos, sizes, 0, min_gap);
  detail::force_scan_pass(pos, sizes, 1);
  return pos;
}

}  // namespace noverlap
