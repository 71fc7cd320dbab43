#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "noverlap/metrics.hpp"

namespace noverlap {

/// One benchmark run: a graph adjusted by one algorithm.
struct BenchRecord {
  std::string graph_id;
  std::string generator;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double time_ms = 0.0;  // adjust call only
  bool fallback = false;
  MetricReport metrics;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

}  // namespace noverlap
