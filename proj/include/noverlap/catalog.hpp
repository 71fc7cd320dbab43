#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>

namespace noverlap {

enum class MetricClass { orthogonal_ordering, spread, global_shape, node_movement, edge_length };

/// The 21 layout-adjustment quality metrics, in catalog order. The order is the
/// column order of every CSV this library writes.
enum class Metric : std::size_t {
  oo_o,
  oo_kt,
  oo_ni,
  oo_nni,
  sp_bb_l1ml,
  sp_bb_a,
  sp_bb_na,
  sp_ch_a,
  gs_bb_ar,
  gs_bb_iar,
  gs_ch_sd,
  nm_mn,
  nm_dm_me,
  nm_dm_ne,
  nm_dm_h,
  nm_dm_se,
  nm_dm_imse,
  nm_d,
  nm_knn,
  el_r,
  el_rsdd,
};

inline constexpr std::size_t kMetricCount = 21;

struct RangeBound {
  double value;
  bool closed;
};

struct MetricDescriptor {
  Metric metric;
  std::string_view abbreviation;
  std::string_view name;
  MetricClass metric_class;
  RangeBound low;
  RangeBound high;
  /// oo_ni is bounded above by n(n-1); `high` is ignored when set.
  bool high_is_ordered_pair_count;
  double target;
  bool selected;
};

namespace detail {
inline constexpr double kInf = std::numeric_limits<double>::infinity();
}

// clang-format off
inline constexpr std::array<MetricDescriptor, kMetricCount> kMetricCatalog{{
  {Metric::oo_o,       "oo_o",       "Original",                               MetricClass::orthogonal_ordering, {0, true}, {1, true},               false, 1, false},
  {Metric::oo_kt,      "oo_kt",      "Kendall's Tau Distance",                 MetricClass::orthogonal_ordering, {0, true}, {1, true},               false, 0, false},
  {Metric::oo_ni,      "oo_ni",      "Number of Inversions",                   MetricClass::orthogonal_ordering, {0, true}, {detail::kInf, false},   true,  0, false},
  {Metric::oo_nni,     "oo_nni",     "Normalised Number of Inversions",        MetricClass::orthogonal_ordering, {0, true}, {1, true},               false, 0, true},
  {Metric::sp_bb_l1ml, "sp_bb_l1ml", "Bounding Box L1 Metric Length",          MetricClass::spread,              {1, true}, {detail::kInf, false},   false, 1, false},
  {Metric::sp_bb_a,    "sp_bb_a",    "Bounding Box Area",                      MetricClass::spread,              {1, true}, {detail::kInf, false},   false, 1, false},
  {Metric::sp_bb_na,   "sp_bb_na",   "Bounding Box Normalised Area",           MetricClass::spread,              {0, true}, {1, false},              false, 0, false},
  {Metric::sp_ch_a,    "sp_ch_a",    "Convex Hull Area",                       MetricClass::spread,              {1, true}, {detail::kInf, false},   false, 1, true},
  {Metric::gs_bb_ar,   "gs_bb_ar",   "Bounding Box Aspect Ratio",              MetricClass::global_shape,        {0, false}, {detail::kInf, false},  false, 1, false},
  {Metric::gs_bb_iar,  "gs_bb_iar",  "Bounding Box Improved Aspect Ratio",     MetricClass::global_shape,        {1, true}, {detail::kInf, false},   false, 1, true},
  {Metric::gs_ch_sd,   "gs_ch_sd",   "Convex Hull Standard Deviation",         MetricClass::global_shape,        {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::nm_mn,      "nm_mn",      "Moved Nodes",                            MetricClass::node_movement,       {0, true}, {1, true},               false, 0, false},
  {Metric::nm_dm_me,   "nm_dm_me",   "Distance Moved Mean Euclidean",          MetricClass::node_movement,       {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::nm_dm_ne,   "nm_dm_ne",   "Distance Moved Normalized Euclidean",    MetricClass::node_movement,       {0, true}, {1, true},               false, 0, false},
  {Metric::nm_dm_h,    "nm_dm_h",    "Distance Moved Hamiltonian",             MetricClass::node_movement,       {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::nm_dm_se,   "nm_dm_se",   "Distance Moved Squared Euclidean",       MetricClass::node_movement,       {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::nm_dm_imse, "nm_dm_imse", "Distance Moved Improved Mean Squared Euclidean", MetricClass::node_movement, {0, true}, {detail::kInf, true}, false, 0, true},
  // The catalog lists ]0, +inf[ with target 0; the lower bound is closed here
  // so that the target itself is admissible.
  {Metric::nm_d,       "nm_d",       "Displacement",                           MetricClass::node_movement,       {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::nm_knn,     "nm_knn",     "K-Nearest Neighbours",                   MetricClass::node_movement,       {0, true}, {detail::kInf, false},   false, 0, false},
  {Metric::el_r,       "el_r",       "Ratio",                                  MetricClass::edge_length,         {1, true}, {detail::kInf, false},   false, 1, false},
  {Metric::el_rsdd,    "el_rsdd",    "Relative Standard Deviation Delaunay",   MetricClass::edge_length,         {0, true}, {detail::kInf, true},    false, 0, true},
}};
// clang-format on

constexpr const MetricDescriptor& descriptor(Metric m) {
  return kMetricCatalog[static_cast<std::size_t>(m)];
}

constexpr std::string_view abbreviation(Metric m) { return descriptor(m).abbreviation; }

inline std::optional<Metric> metric_from_abbreviation(std::string_view name) {
  for (const auto& d : kMetricCatalog) {
    if (d.abbreviation == name) return d.metric;
  }
  return std::nullopt;
}

/// Whether `value` lies in the catalog range of `m` for a graph with `n` nodes.
inline bool in_range(Metric m, double value, std::size_t n) {
  const auto& d = descriptor(m);
  const double hi = d.high_is_ordered_pair_count
                        ? static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0)
                        : d.high.value;
  const bool hi_closed = d.high_is_ordered_pair_count ? true : d.high.closed;
  const bool lo_ok = d.low.closed ? value >= d.low.value : value > d.low.value;
  const bool hi_ok = hi_closed ? value <= hi : value < hi;
  return lo_ok && hi_ok;
}

inline constexpr std::array<Metric, 5> kSelectedMetrics{
    Metric::oo_nni, Metric::sp_ch_a, Metric::gs_bb_iar, Metric::nm_dm_imse, Metric::el_rsdd};

}  // namespace noverlap
