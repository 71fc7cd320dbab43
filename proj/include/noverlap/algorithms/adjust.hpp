#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "noverlap/algorithms/common.hpp"
#include "noverlap/algorithms/force_scan.hpp"
#include "noverlap/algorithms/fta.hpp"
#include "noverlap/algorithms/proximity.hpp"
#include "noverlap/algorithms/rwordle.hpp"
#include "noverlap/algorithms/vpsc.hpp"

namespace noverlap {

struct AdjustOutcome {
  Embedding adjusted;
  bool fallback_used = false;
  std::size_t outer_iterations = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Removes every node overlap from `initial` with the selected algorithm.
///
/// An input that is already overlap-free comes back unchanged. If an iterative
/// algorithm runs out of iterations with overlaps left, its output is scaled
/// apart about the bounding-box center and `fallback_used` is set. The result
/// is a deterministic function of (graph, initial, params).
inline AdjustOutcome adjust(const SizedGraph& graph, const Embedding& initial, const AdjustParams& params) {
  if (!initial.is_total_over(graph)) {
    throw ValidationError("embedding has " + std::to_string(initial.size()) + " positions for " +
                          std::to_string(graph.n()) + " nodes");
  }
  if (!(params.padding >= 0.0)) throw ValidationError("padding must be non-negative");
  if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (params.max_outer_iterations == 0) throw ValidationError("max_outer_iterations must be positive");

  const auto start = std::chrono::steady_clock::now();
  AdjustOutcome out;
  const auto padded = detail::inflate(graph.sizes(), 2.0 * params.padding);
  const auto& init = initial.positions();

  if (count_overlaps(init, padded) == 0) {
    out.adjusted = initial;
  } else {
    const auto work = detail::inflate(padded, params.epsilon);
    const std::vector<Point> start_pos = jitter_coincident(init, work);
    std::vector<Point> pos;
    switch (params.algorithm) {
      case Algorithm::scaling:
        pos = scale_apart(start_pos, work, padded);
        break;
      case Algorithm::pfs:
        pos = run_pfs(start_pos, work);
        break;
      case Algorithm::pfs_prime:
        pos = run_pfs_prime(start_pos, work, params.epsilon);
        break;
      case Algorithm::fta: {
        auto r = run_fta(start_pos, work, params.max_outer_iterations, padded);
        pos = std::move(r.positions);
        out.outer_iterations = r.iterations;
        break;
      }
      case Algorithm::vpsc:
        pos = run_vpsc(start_pos, work, params.epsilon);
        break;
      case Algorithm::prism: {
        auto r = run_prism(start_pos, work, params.max_outer_iterations, padded);
        pos = std::move(r.positions);
        out.outer_iterations = r.iterations;
        break;
      }
      case Algorithm::rwordle_l:
        pos = run_rwordle_l(start_pos, work, params.seed);
        break;
      case Algorithm::gtree: {
        auto r = run_gtree(start_pos, work, params.max_outer_iterations, padded);
        pos = std::move(r.positions);
        out.outer_iterations = r.iterations;
        break;
      }
    }
    if (out.outer_iterations == 0) out.outer_iterations = 1;
    if (count_overlaps(pos, padded) > 0) {
      pos = scale_apart(jitter_coincident(pos, work), work, padded);
      out.fallback_used = true;
    }
    out.adjusted = Embedding(std::move(pos));
  }
  out.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return out;
}

}  // namespace noverlap
