#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "noverlap/algorithms/common.hpp"

namespace noverlap {

/// x[right] - x[left] >= gap
struct SeparationConstraint {
  std::size_t left = 0;
  std::size_t right = 0;
  double gap = 0.0;
};

/// Solves  min sum_i (x_i - desired_i)^2  subject to separation constraints by
/// block merging: variables joined by tight (active) constraints move as one
/// rigid block placed at the mean of (desired - offset) of its members. A
/// feasible solution is built in topological order, then blocks are split
/// wherever an active constraint has a negative Lagrange multiplier.
class SeparationSolver {
 public:
  SeparationSolver(std::vector<double> desired, std::vector<SeparationConstraint> constraints)
      : desired_(std::move(desired)), cons_(std::move(constraints)) {
    const std::size_t n = desired_.size();
    in_.resize(n);
    out_.resize(n);
    for (std::size_t c = 0; c < cons_.size(); ++c) {
      if (cons_[c].left >= n || cons_[c].right >= n || cons_[c].left == cons_[c].right) {
        throw ValidationError("separation constraint #" + std::to_string(c) + " has invalid endpoints");
      }
      out_[cons_[c].left].push_back(c);
      in_[cons_[c].right].push_back(c);
    }
    double scale = 1.0;
    for (double d : desired_) scale = std::max(scale, std::abs(d));
    tol_ = 1e-10 * scale;
  }

  std::vector<double> solve() {
    reset();
    satisfy();
    refine();
    std::vector<double> x(desired_.size());
    for (std::size_t v = 0; v < x.size(); ++v) x[v] = position(v);
    return x;
  }

 private:
  struct Block {
    std::vector<std::size_t> vars;
    double posn = 0.0;
    bool alive = true;
  };

  struct State {
    std::vector<Block> blocks;
    std::vector<std::size_t> block_of;
    std::vector<double> offset;
    std::vector<char> active;
  };

  double position(std::size_t v) const { return blocks_[block_of_[v]].posn + offset_[v]; }
  double slack(std::size_t c) const {
    return position(cons_[c].right) - position(cons_[c].left) - cons_[c].gap;
  }

  void reset() {
    const std::size_t n = desired_.size();
    blocks_.assign(n, Block{});
    block_of_.resize(n);
    offset_.assign(n, 0.0);
    active_.assign(cons_.size(), 0);
    for (std::size_t v = 0; v < n; ++v) {
      blocks_[v].vars = {v};
      blocks_[v].posn = desired_[v];
      block_of_[v] = v;
    }
  }

  void place(std::size_t b) {
    double sum = 0.0;
    for (std::size_t v : blocks_[b].vars) sum += desired_[v] - offset_[v];
    blocks_[b].posn = sum / static_cast<double>(blocks_[b].vars.size());
  }

  std::size_t merge_via(std::size_t c) {
    const std::size_t l = cons_[c].left, r = cons_[c].right;
    std::size_t keep = block_of_[l], gone = block_of_[r];
    double d = offset_[l] + cons_[c].gap - offset_[r];
    if (blocks_[keep].vars.size() < blocks_[gone].vars.size()) {
      std::swap(keep, gone);
      d = -d;
    }
    for (std::size_t v : blocks_[gone].vars) {
      offset_[v] += d;
      block_of_[v] = keep;
    }
    auto& kv = blocks_[keep].vars;
    kv.insert(kv.end(), blocks_[gone].vars.begin(), blocks_[gone].vars.end());
    blocks_[gone].vars.clear();
    blocks_[gone].alive = false;
    active_[c] = 1;
    place(keep);
    return keep;
  }

  std::vector<std::size_t> topological_order() const {
    const std::size_t n = desired_.size();
    std::vector<std::size_t> indeg(n, 0), order;
    order.reserve(n);
    for (const auto& c : cons_) ++indeg[c.right];
    for (std::size_t v = 0; v < n; ++v) {
      if (indeg[v] == 0) order.push_back(v);
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t c : out_[order[k]]) {
        if (--indeg[cons_[c].right] == 0) order.push_back(cons_[c].right);
      }
    }
    if (order.size() != n) throw ValidationError("separation constraints contain a cycle");
    return order;
  }

  void satisfy() {
    for (std::size_t v : topological_order()) {
      std::size_t b = block_of_[v];
      for (;;) {
        std::size_t worst = cons_.size();
        double worst_slack = -tol_;
        for (std::size_t u : blocks_[b].vars) {
          for (std::size_t c : in_[u]) {
            if (block_of_[cons_[c].left] == b) continue;
            const double s = slack(c);
            if (s < worst_slack) {
              worst_slack = s;
              worst = c;
            }
          }
        }
        if (worst == cons_.size()) break;
        b = merge_via(worst);
      }
    }
  }

  double objective() const {
    double f = 0.0;
    for (std::size_t v = 0; v < desired_.size(); ++v) {
      const double d = position(v) - desired_[v];
      f += d * d;
    }
    return f;
  }

  /// Most negative Lagrange multiplier over all active constraints.
  std::pair<std::size_t, double> min_multiplier() const {
    std::pair<std::size_t, double> best{cons_.size(), 0.0};
    std::vector<double> subtree(desired_.size(), 0.0);
    std::vector<std::size_t> parent_con(desired_.size(), cons_.size());
    std::vector<char> seen(desired_.size(), 0);
    std::vector<std::size_t> order, stack;
    for (const Block& blk : blocks_) {
      if (!blk.alive || blk.vars.size() < 2) continue;
      order.clear();
      stack.assign(1, blk.vars.front());
      seen[blk.vars.front()] = 1;
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        order.push_back(v);
        auto visit = [&](std::size_t c, std::size_t w) {
          if (!active_[c] || seen[w]) return;
          seen[w] = 1;
          parent_con[w] = c;
          stack.push_back(w);
        };
        for (std::size_t c : out_[v]) visit(c, cons_[c].right);
        for (std::size_t c : in_[v]) visit(c, cons_[c].left);
      }
      for (std::size_t v : order) subtree[v] = 2.0 * (position(v) - desired_[v]);
      for (std::size_t k = order.size(); k-- > 1;) {
        const std::size_t v = order[k];
        const std::size_t c = parent_con[v];
        const std::size_t parent = cons_[c].left == v ? cons_[c].right : cons_[c].left;
        subtree[parent] += subtree[v];
        const double lm = cons_[c].right == v ? subtree[v] : -subtree[v];
        if (lm < best.second) best = {c, lm};
      }
      for (std::size_t v : order) seen[v] = 0;
    }
    return best;
  }

  void split(std::size_t c) {
    active_[c] = 0;
    const std::size_t b = block_of_[cons_[c].left];
    std::vector<char> on_left(desired_.size(), 0);
    std::vector<std::size_t> stack{cons_[c].left};
    on_left[cons_[c].left] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e : out_[v]) {
        if (active_[e] && !on_left[cons_[e].right]) {
          on_left[cons_[e].right] = 1;
          stack.push_back(cons_[e].right);
        }
      }
      for (std::size_t e : in_[v]) {
        if (active_[e] && !on_left[cons_[e].left]) {
          on_left[cons_[e].left] = 1;
          stack.push_back(cons_[e].left);
        }
      }
    }
    Block right;
    std::vector<std::size_t> left_vars;
    for (std::size_t v : blocks_[b].vars) (on_left[v] ? left_vars : right.vars).push_back(v);
    blocks_[b].vars = std::move(left_vars);
    const std::size_t nb = blocks_.size();
    for (std::size_t v : right.vars) block_of_[v] = nb;
    blocks_.push_back(std::move(right));
    place(b);
    place(nb);
  }

  void refine() {
    const std::size_t cap = 4 * desired_.size() + 16;
    for (std::size_t round = 0; round < cap; ++round) {
      const auto [c, lm] = min_multiplier();
      if (c == cons_.size() || lm >= -tol_) return;
      const State saved{blocks_, block_of_, offset_, active_};
      const double before = objective();
      split(c);
      bool broken = false;
      for (std::size_t guard = 0; guard < cons_.size() + desired_.size(); ++guard) {
        std::size_t worst = cons_.size();
        double worst_slack = -tol_;
        for (std::size_t k = 0; k < cons_.size(); ++k) {
          const double s = slack(k);
          if (s < worst_slack) {
            worst_slack = s;
            worst = k;
          }
        }
        if (worst == cons_.size()) break;
        if (block_of_[cons_[worst].left] == block_of_[cons_[worst].right]) {
          broken = true;
          break;
        }
        merge_via(worst);
      }
      bool feasible = !broken;
      for (std::size_t k = 0; feasible && k < cons_.size(); ++k) feasible = slack(k) >= -tol_;
      if (!feasible || !(objective() < before)) {
        blocks_ = saved.blocks;
        block_of_ = saved.block_of;
        offset_ = saved.offset;
        active_ = saved.active;
        return;
      }
    }
  }

  std::vector<double> desired_;
  std::vector<SeparationConstraint> cons_;
  std::vector<std::vector<std::size_t>> in_, out_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<double> offset_;
  std::vector<char> active_;
  double tol_ = 1e-10;
};

/// Two constrained least-squares passes. The x pass separates overlapping
/// pairs for which a horizontal move is the cheaper escape; the y pass then
/// orders every pair whose x-projections still intersect by more than
/// `slack / 2`, which leaves no overlap behind once `slack` is taken off the
/// sizes. Pairs the x pass left flush stay where they are.
inline std::vector<Point> run_vpsc(std::span<const Point> initial, std::span<const Size> sizes, double slack = 0.0) {
  const std::size_t n = initial.size();
  std::vector<Point> pos(initial.begin(), initial.end());
  auto before = [&](std::size_t a, std::size_t b, int axis) {
    const double ca = detail::axis_of(pos[a], axis), cb = detail::axis_of(pos[b], axis);
    return ca < cb || (ca == cb && a < b);
  };

  std::vector<SeparationConstraint> xs;
  for (const auto& [u, v] : overlapping_pairs(pos, sizes)) {
    const double dx = (sizes[u].w + sizes[v].w) / 2.0 - std::abs(pos[v].x - pos[u].x);
    const double dy = (sizes[u].h + sizes[v].h) / 2.0 - std::abs(pos[v].y - pos[u].y);
    if (dx > dy) continue;
    const auto [l, r] = before(u, v, 0) ? std::pair{u, v} : std::pair{v, u};
    xs.push_back({l, r, (sizes[u].w + sizes[v].w) / 2.0});
  }
  if (!xs.empty()) {
    std::vector<double> desired(n);
    for (std::size_t i = 0; i < n; ++i) desired[i] = pos[i].x;
    const auto x = SeparationSolver(std::move(desired), std::move(xs)).solve();
    for (std::size_t i = 0; i < n; ++i) pos[i].x = x[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return before(a, b, 0); });
  double max_w = 0.0;
  for (const Size& s : sizes) max_w = std::max(max_w, s.w);
  std::vector<SeparationConstraint> ys;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    const double reach = (sizes[i].w + max_w) / 2.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = order[b];
      if (pos[j].x - pos[i].x >= reach) break;
      if (!(std::abs(pos[j].x - pos[i].x) < (sizes[i].w + sizes[j].w - slack) / 2.0)) continue;
      const auto [l, r] = before(i, j, 1) ? std::pair{i, j} : std::pair{j, i};
      ys.push_back({l, r, (sizes[i].h + sizes[j].h) / 2.0});
    }
  }
  if (!ys.empty()) {
    std::vector<double> desired(n);
    for (std::size_t i = 0; i < n; ++i) desired[i] = pos[i].y;
    const auto y = SeparationSolver(std::move(desired), std::move(ys)).solve();
    for (std::size_t i = 0; i < n; ++i) pos[i].y = y[i];
  }
  return pos;
}

}  // namespace noverlap
