#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "noverlap/algorithms/adjust.hpp"
#include "noverlap/corpus.hpp"
#include "noverlap/io.hpp"
#include "noverlap/metrics.hpp"
#include "noverlap/record.hpp"

namespace noverlap {

/// Runs fn(0) .. fn(count - 1) on up to `parallelism` threads. Each index runs
/// exactly once; callers write results into per-index slots.
inline void parallel_for(std::size_t count, std::size_t parallelism, const std::function<void(std::size_t)>& fn) {
  parallelism = std::max<std::size_t>(1, std::min(parallelism, count));
  if (parallelism == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(parallelism);
  for (std::size_t t = 0; t < parallelism; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

struct BenchInput {
  SizedGraph graph;
  Embedding initial;
  std::string generator;
};

struct BenchOptions {
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::uint64_t seed = 0;
  double padding = 0.0;
  std::size_t max_outer_iterations = 1000;
  std::size_t parallelism = 1;
};

struct BenchConfig {
  CorpusSpec corpus = desk_scale_spec();
  std::size_t layout_iterations = kDefaultLayoutIterations;
  BenchOptions run;
  std::vector<Metric> report_metrics{kSelectedMetrics.begin(), kSelectedMetrics.end()};

  std::size_t graph_count() const { return corpus.graph_count(); }
  std::size_t run_count() const { return corpus.graph_count() * run.algorithms.size(); }
};

/// Generates and lays out every graph of the corpus, in spec order.
inline std::vector<BenchInput> build_corpus(const CorpusSpec& spec, std::size_t layout_iterations,
                                            std::size_t parallelism = 1) {
  spec.validate();
  std::vector<std::tuple<GraphModel, std::size_t, std::uint64_t>> keys;
  for (GraphModel model : spec.models) {
    for (std::size_t n : spec.sizes) {
      for (std::uint64_t s = 0; s < spec.seeds_per_size; ++s) keys.emplace_back(model, n, s);
    }
  }
  std::vector<std::optional<BenchInput>> slots(keys.size());
  parallel_for(keys.size(), parallelism, [&](std::size_t i) {
    const auto& [model, n, s] = keys[i];
    SizedGraph g = generate(model, n, s, spec.node_size);
    Embedding e = initial_layout(g, s, layout_iterations);
    slots[i] = BenchInput{std::move(g), std::move(e), std::string(model_name(model))};
  });
  std::vector<BenchInput> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Runs every algorithm on every input. Records come back sorted by graph_id,
/// then by the canonical algorithm order, whatever the parallelism. A run that
/// throws, or whose output still overlaps, is recorded with an error instead
/// of aborting the sweep.
inline std::vector<BenchRecord> run_benchmark(const std::vector<BenchInput>& inputs, const BenchOptions& options) {
  const std::size_t algos = options.algorithms.size();
  std::vector<BenchRecord> records(inputs.size() * algos);
  parallel_for(records.size(), options.parallelism, [&](std::size_t k) {
    const BenchInput& in = inputs[k / algos];
    const Algorithm algorithm = options.algorithms[k % algos];
    BenchRecord& r = records[k];
    r.graph_id = in.graph.graph_id();
    r.generator = in.generator;
    r.n = in.graph.n();
    r.m = in.graph.m();
    r.algorithm = std::string(algorithm_name(algorithm));
    r.seed = options.seed;
    try {
      AdjustParams params;
      params.algorithm = algorithm;
      params.seed = options.seed;
      params.padding = options.padding;
      params.max_outer_iterations = options.max_outer_iterations;
      const AdjustOutcome outcome = adjust(in.graph, in.initial, params);
      r.time_ms = std::chrono::duration<double, std::milli>(outcome.wall_time).count();
      r.fallback = outcome.fallback_used;
      const std::size_t left = count_overlaps(outcome.adjusted.positions(), in.graph.sizes());
      if (left != 0) {
        r.error = std::to_string(left) + " overlapping pairs remain";
        return;
      }
      r.metrics = compute_metrics(AdjustmentPair(in.graph, in.initial, outcome.adjusted));
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  auto rank = [](const std::string& name) {
    const auto a = algorithm_from_name(name);
    return a ? static_cast<std::size_t>(*a) : kAllAlgorithms.size();
  };
  std::stable_sort(records.begin(), records.end(), [&](const BenchRecord& a, const BenchRecord& b) {
    if (a.graph_id != b.graph_id) return a.graph_id < b.graph_id;
    return rank(a.algorithm) < rank(b.algorithm);
  });
  return records;
}

inline std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  return run_benchmark(build_corpus(config.corpus, config.layout_iterations, config.run.parallelism), config.run);
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Quantile with linear interpolation between order statistics (R type 7).
/// `sorted` must be ascending and nonempty.
inline double quantile_r7(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct SummaryStats {
  std::optional<double> q1, median, q3, mean;
  std::size_t count = 0;  // defined values
  std::size_t undefined_count = 0;
};

inline SummaryStats summarize(const std::vector<std::optional<double>>& values) {
  SummaryStats s;
  std::vector<double> v;
  for (const auto& x : values) {
    if (x) {
      v.push_back(*x);
    } else {
      ++s.undefined_count;
    }
  }
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.q1 = quantile_r7(v, 0.25);
  s.median = quantile_r7(v, 0.5);
  s.q3 = quantile_r7(v, 0.75);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

struct AggregateRow {
  std::string algorithm;
  std::optional<std::size_t> n;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::array<SummaryStats, kMetricCount> metrics;
  SummaryStats time_ms;
};

using AggregateTable = std::vector<AggregateRow>;

/// Groups by algorithm (and by n when `by_n`); failed runs are counted but
/// contribute no values.
inline AggregateTable aggregate(const std::vector<BenchRecord>& records, bool by_n = false) {
  if (records.empty()) throw ValidationError("cannot aggregate an empty record set");
  auto rank = [](const std::string& name) {
    const auto a = algorithm_from_name(name);
    return a ? static_cast<std::size_t>(*a) : kAllAlgorithms.size();
  };
  using Key = std::tuple<std::size_t, std::string, std::size_t>;
  std::map<Key, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records) groups[{rank(r.algorithm), r.algorithm, by_n ? r.n : 0}].push_back(&r);

  AggregateTable table;
  for (const auto& [key, members] : groups) {
    AggregateRow row;
    row.algorithm = std::get<1>(key);
    if (by_n) row.n = std::get<2>(key);
    row.records = members.size();
    std::vector<std::optional<double>> times;
    std::array<std::vector<std::optional<double>>, kMetricCount> cols;
    for (const BenchRecord* r : members) {
      if (!r->ok()) {
        ++row.failures;
        continue;
      }
      times.emplace_back(r->time_ms);
      for (std::size_t k = 0; k < kMetricCount; ++k) cols[k].push_back(r->metrics.values()[k]);
    }
    for (std::size_t k = 0; k < kMetricCount; ++k) row.metrics[k] = summarize(cols[k]);
    row.time_ms = summarize(times);
    table.push_back(std::move(row));
  }
  return table;
}

/// Pearson coefficient over pairwise-complete observations; undefined with
/// fewer than 3 pairs or a constant column.
inline std::optional<double> pearson(const std::vector<std::optional<double>>& a,
                                     const std::vector<std::optional<double>>& b) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] && b[i]) {
      x.push_back(*a[i]);
      y.push_back(*b[i]);
    }
  }
  if (x.size() < 3) return std::nullopt;
  const double nn = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nn;
  my /= nn;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

using CorrelationMatrix = std::vector<std::vector<std::optional<double>>>;

inline CorrelationMatrix correlation_matrix(const std::vector<BenchRecord>& records,
                                            const std::vector<Metric>& metrics) {
  std::vector<std::vector<std::optional<double>>> cols(metrics.size());
  for (const auto& r : records) {
    if (!r.ok()) continue;
    for (std::size_t k = 0; k < metrics.size(); ++k) cols[k].push_back(r.metrics[metrics[k]]);
  }
  CorrelationMatrix out(metrics.size(), std::vector<std::optional<double>>(metrics.size()));
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const auto self = pearson(cols[i], cols[i]);
    if (self) out[i][i] = 1.0;
    for (std::size_t j = i + 1; j < metrics.size(); ++j) out[i][j] = out[j][i] = pearson(cols[i], cols[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace detail {

inline void svg_embedding(std::string& out, const SizedGraph& graph, const std::vector<Point>& pos,
                          const std::string& name, double dx, double scale, const BoundingBox& frame) {
  auto X = [&](double x) { return format_real(dx + (x - frame.min_x) * scale); };
  auto Y = [&](double y) { return format_real((frame.max_y - y) * scale); };
  std::vector<char> in_overlap(graph.n(), 0);
  const auto sizes = graph.sizes();
  for (const auto& [u, v] : overlapping_pairs(pos, sizes)) in_overlap[u] = in_overlap[v] = 1;
  out += "<g class=\"embedding\" id=\"" + name + "\">\n";
  for (const Edge& e : graph.edges()) {
    out += "<line class=\"edge\" x1=\"" + X(pos[e.u].x) + "\" y1=\"" + Y(pos[e.u].y) + "\" x2=\"" + X(pos[e.v].x) +
           "\" y2=\"" + Y(pos[e.v].y) + "\"/>\n";
  }
  for (std::size_t i = 0; i < graph.n(); ++i) {
    const Size s = sizes[i];
    out += std::string("<rect class=\"") + (in_overlap[i] ? "node overlap" : "node") + "\" x=\"" +
           X(pos[i].x - s.w / 2.0) + "\" y=\"" + Y(pos[i].y + s.h / 2.0) + "\" width=\"" + format_real(s.w * scale) +
           "\" height=\"" + format_real(s.h * scale) + "\"><title>" + graph.node(i).id + "</title></rect>\n";
  }
  out += "</g>\n";
}

}  // namespace detail

/// Rectangles at node centers, edges as center-to-center lines; nodes in an
/// overlapping pair get the "overlap" class. With `after`, the two embeddings
/// are drawn side by side at a shared scale.
inline std::string render_svg(const SizedGraph& graph, const Embedding& before, const Embedding* after = nullptr,
                              double target_width = 800.0) {
  if (!before.is_total_over(graph) || (after && !after->is_total_over(graph))) {
    throw ValidationError("embedding is not total over graph");
  }
  constexpr double kMargin = 10.0;
  BoundingBox a = graph.n() ? bounding_box(graph, before) : BoundingBox{0, 0, 1, 1};
  BoundingBox b = after && graph.n() ? bounding_box(graph, *after) : a;
  const double span_w = a.width() + (after ? b.width() : 0.0);
  const double span_h = std::max(a.height(), after ? b.height() : 0.0);
  const double scale = span_w > 0.0 ? target_width / span_w : 1.0;
  const double gap = after ? 2.0 * kMargin : 0.0;
  const double width = span_w * scale + 2.0 * kMargin + gap;
  const double height = span_h * scale + 2.0 * kMargin;

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_real(width) + "\" height=\"" +
                    format_real(height) + "\">\n";
  out +=
      "<style>.edge{stroke:#888;stroke-width:1}.node{fill:#cde;fill-opacity:0.7;stroke:#246}"
      ".overlap{stroke:#c00;stroke-width:2}</style>\n";
  out += "<g transform=\"translate(" + format_real(kMargin) + "," + format_real(kMargin) + ")\">\n";
  detail::svg_embedding(out, graph, before.positions(), after ? "before" : "embedding", 0.0, scale, a);
  if (after) detail::svg_embedding(out, graph, after->positions(), "after", a.width() * scale + gap, scale, b);
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace noverlap
