// Acceptance gate: one PASS/FAIL line per criterion. Criterion 7 only warns.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "support.hpp"

using namespace noverlap;
namespace ts = testing_support;

namespace {

int hard_failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail, bool soft = false) {
  const char* verdict = ok ? "PASS" : (soft ? "WARN" : "FAIL");
  std::printf("%s %d %s: %s\n", verdict, id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok && !soft) ++hard_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> defined_values(const std::vector<BenchRecord>& rs, const std::string& algorithm, Metric m) {
  std::vector<double> out;
  for (const auto& r : rs) {
    if (r.ok() && r.algorithm == algorithm && r.metrics[m]) out.push_back(*r.metrics[m]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random instance pushed apart by scaling so it is overlap-free.
ts::Instance overlap_free_instance(std::uint64_t seed) {
  auto inst = ts::random_instance(seed, 2 + seed % 40, 20.0, 0.25);
  AdjustParams p;
  p.algorithm = Algorithm::scaling;
  inst.embedding = adjust(inst.graph, inst.embedding, p).adjusted;
  return inst;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  BenchConfig config;  // desk preset, all 8 algorithms, serial
  const auto inputs = build_corpus(config.corpus, config.layout_iterations, 1);
  const auto records = run_benchmark(inputs, config.run);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // 1. every run overlap-free
  {
    std::size_t bad = 0, fallbacks = 0;
    for (const auto& r : records) {
      if (!r.ok()) ++bad;
      fallbacks += r.fallback ? 1 : 0;
    }
    // recount every output with the brute-force oracle, not the sweep
    std::size_t oracle_bad = 0;
    for (const auto& in : inputs) {
      for (Algorithm a : kAllAlgorithms) {
        AdjustParams p;
        p.algorithm = a;
        const auto out = adjust(in.graph, in.initial, p);
        oracle_bad += ts::count_overlaps_oracle(out.adjusted.positions(), in.graph.sizes()) != 0;
      }
    }
    const bool ok = records.size() == 672 && bad == 0 && oracle_bad == 0 && seconds < 600.0;
    report(1, "overlap-free desk corpus", ok,
           fmt("%zu runs, %zu failed, %zu oracle overlaps, %zu fallbacks, corpus+bench %.1f s", records.size(), bad,
               oracle_bad, fallbacks, seconds));
  }

  // 2. ordering preserved by scaling, pfs, pfs-prime
  {
    std::size_t rows = 0, exceptions = 0;
    for (const auto& r : records) {
      if (r.algorithm != "scaling" && r.algorithm != "pfs" && r.algorithm != "pfs-prime") continue;
      ++rows;
      if (!r.ok() || *r.metrics[Metric::oo_o] != 1.0 || *r.metrics[Metric::oo_nni] != 0.0) ++exceptions;
    }
    report(2, "orthogonal ordering preserved", rows == 252 && exceptions == 0,
           fmt("%zu rows, %zu exceptions", rows, exceptions));
  }

  // 3. identity adjustment hits every target
  {
    std::size_t mismatches = 0, undefined = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = overlap_free_instance(seed);
      if (count_overlaps(inst.graph, inst.embedding) != 0) ++mismatches;
      const auto out = adjust(inst.graph, inst.embedding, {});
      const auto r = compute_metrics(AdjustmentPair(inst.graph, inst.embedding, out.adjusted));
      for (const auto& d : kMetricCatalog) {
        const auto v = r[d.metric];
        if (!v) {
          ++undefined;
          continue;
        }
        double target = d.target;
        if (d.metric == Metric::el_r) target = *ts::edge_oracle(inst.graph, inst.embedding.positions(),
                                                                 inst.embedding.positions()).r;
        if (std::abs(*v - target) > 1e-12) ++mismatches;
      }
      const std::size_t n = inst.graph.n();
      for (std::size_t k = 1; k < n; ++k) {
        if (*compute_metrics(AdjustmentPair(inst.graph, inst.embedding, out.adjusted), {k})[Metric::nm_knn] != 0.0) {
          ++mismatches;
        }
      }
    }
    report(3, "identity targets", mismatches == 0,
           fmt("100 embeddings, %zu mismatches, %zu undefined values (degenerate hull or no edges); "
               "el_r checked against the initial edge length ratio",
               mismatches, undefined));
  }

  // 4. worked examples
  {
    const double l1 = spread_from_boxes(4, 2, 4, 4).sp_bb_l1ml;
    const double ar1 = shape_from_boxes(3, 2, 6, 4).gs_bb_ar;
    const auto s2 = shape_from_boxes(3, 2, 4, 6);
    const bool ok = std::abs(l1 - 1) <= 1e-12 && std::abs(ar1 - 1) <= 1e-12 && std::abs(s2.gs_bb_ar - 2.25) <= 1e-12 &&
                    std::abs(s2.gs_bb_iar - 2.25) <= 1e-12;
    report(4, "worked examples", ok,
           fmt("sp_bb_l1ml=%.15g gs_bb_ar=%.15g,%.15g gs_bb_iar=%.15g", l1, ar1, s2.gs_bb_ar, s2.gs_bb_iar));
  }

  // 5. oracle equivalence
  {
    std::size_t metric_bad = 0, hull_bad = 0, dt_bad = 0, knn_bad = 0, scale_bad = 0, vpsc_bad = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const std::size_t n = 2 + seed % 30;
      const auto inst = ts::random_instance(seed, n, 10.0, 0.3);
      const auto& a = inst.embedding.positions();
      const auto b = ts::random_instance(seed + 4242, n, 12.0).embedding.positions();
      const auto r = compute_metrics(AdjustmentPair(inst.graph, inst.embedding, Embedding(b)));
      const auto oo = ts::ordering_oracle(a, b);
      const auto nm = ts::movement_oracle(a, b, inst.graph.sizes(), default_knn_k(n));
      const auto el = ts::edge_oracle(inst.graph, a, b);
      auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * (1 + std::abs(y)); };
      const bool ok = *r[Metric::oo_o] == oo.oo_o && *r[Metric::oo_kt] == oo.oo_kt && *r[Metric::oo_ni] == oo.oo_ni &&
                      *r[Metric::oo_nni] == oo.oo_nni && *r[Metric::nm_mn] == nm.mn && *r[Metric::nm_knn] == nm.knn &&
                      close(*r[Metric::nm_dm_me], nm.me) && close(*r[Metric::nm_dm_ne], nm.ne) &&
                      close(*r[Metric::nm_dm_se], nm.se) && close(*r[Metric::nm_dm_h], nm.h) &&
                      close(*r[Metric::nm_dm_imse], nm.imse) && r[Metric::el_r].has_value() == el.r.has_value() &&
                      (!el.r || close(*r[Metric::el_r], *el.r)) && close(*r[Metric::el_rsdd], *el.rsdd);
      metric_bad += !ok;

      const auto small = ts::random_instance(seed, 1 + seed % 6, 8.0);
      const auto sizes = small.graph.sizes();
      const auto hull = convex_hull(small.embedding.positions(), sizes);
      hull_bad += std::abs(hull.area - ts::shoelace(ts::gift_wrap(ts::corners(small.embedding.positions(), sizes)))) > 1e-9;

      const auto pts = ts::random_points(seed, 3 + seed % 10);
      const auto dt = delaunay(pts, std::vector<Size>(pts.size(), Size{0.1, 0.1}));
      for (const auto& tri : dt.triangles) {
        const auto cc = ts::circumcircle(pts[tri[0]], pts[tri[1]], pts[tri[2]]);
        for (std::size_t q = 0; q < pts.size(); ++q) {
          if (q != tri[0] && q != tri[1] && q != tri[2] && squared_norm(pts[q] - cc->c) - cc->r2 < -1e-9) ++dt_bad;
        }
      }

      const auto kp = ts::random_points(seed + 1, 2 + seed % 49, 5.0);
      const std::size_t k = 1 + seed % (kp.size() - 1);
      knn_bad += knn_sets(kp, k) != ts::knn_oracle(kp, k);

      const auto si = ts::random_instance(seed, 2 + seed % 25, 12.0);
      const auto ss = si.graph.sizes();
      const auto& sp = si.embedding.positions();
      scale_bad += std::abs(scaling_factor(sp, ss) - ts::scaling_bisection(sp, ss, bounding_box(sp, ss).center())) > 1e-6;
    }
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> pos(-5, 5), gap(0.1, 4);
    for (int trial = 0; trial < 200; ++trial) {
      // closed form for an active chain: the block sits at the mean of (desired - offset)
      const std::size_t n = 2 + trial % 2;
      std::vector<double> desired(n), gaps(n - 1);
      for (auto& g : gaps) g = gap(gen);
      desired[0] = pos(gen);
      for (std::size_t i = 1; i < n; ++i) desired[i] = desired[i - 1] + gaps[i - 1] * 0.5;  // every constraint binds
      std::vector<SeparationConstraint> cons;
      std::vector<double> offset(n, 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        cons.push_back({i, i + 1, gaps[i]});
        offset[i + 1] = offset[i] + gaps[i];
      }
      double block = 0;
      for (std::size_t i = 0; i < n; ++i) block += (desired[i] - offset[i]) / static_cast<double>(n);
      const auto x = SeparationSolver(desired, cons).solve();
      for (std::size_t i = 0; i < n; ++i) vpsc_bad += std::abs(x[i] - (block + offset[i])) > 1e-6;
    }
    const bool ok = metric_bad + hull_bad + dt_bad + knn_bad + scale_bad + vpsc_bad == 0;
    report(5, "oracle equivalence", ok,
           fmt("200 cases each; mismatches metrics=%zu hull=%zu delaunay=%zu knn=%zu scaling=%zu vpsc=%zu", metric_bad,
               hull_bad, dt_bad, knn_bad, scale_bad, vpsc_bad));
  }

  // 6. imse ignores translations and center scalings, el_rsdd ignores uniform scaling
  {
    double worst_imse = 0, worst_rsdd = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto inst = ts::random_instance(seed, 3 + seed % 30, 10.0, 0.3);
      const auto& a = inst.embedding.positions();
      const auto c = bounding_box(a, std::vector<Size>(a.size(), Size{0, 0})).center();
      const double s = 1.0 + static_cast<double>(seed % 13) * 0.37;
      std::vector<Point> moved, scaled;
      for (const Point& q : a) {
        moved.push_back(q + Point{-7.25, 3.5 + static_cast<double>(seed)});
        scaled.push_back(c + (q - c) * s);
      }
      const auto rt = compute_metrics(AdjustmentPair(inst.graph, inst.embedding, Embedding(moved)));
      const auto rs = compute_metrics(AdjustmentPair(inst.graph, inst.embedding, Embedding(scaled)));
      worst_imse = std::max({worst_imse, *rt[Metric::nm_dm_imse], *rs[Metric::nm_dm_imse]});
      worst_rsdd = std::max(worst_rsdd, *rs[Metric::el_rsdd]);
    }
    report(6, "metric design properties", worst_imse <= 1e-9 && worst_rsdd <= 1e-12,
           fmt("max nm_dm_imse=%.3g, max el_rsdd under scaling=%.3g", worst_imse, worst_rsdd));
  }

  // 7. qualitative findings (warn only)
  {
    auto median = [](const std::vector<double>& v) { return v.empty() ? NAN : quantile_r7(v, 0.5); };
    std::string worst_area, best_imse;
    double worst_area_v = -1, best_imse_v = 1e300;
    for (Algorithm a : kAllAlgorithms) {
      const std::string name(algorithm_name(a));
      const double area = median(defined_values(records, name, Metric::sp_ch_a));
      const double imse = median(defined_values(records, name, Metric::nm_dm_imse));
      if (area > worst_area_v) worst_area_v = area, worst_area = name;
      if (imse < best_imse_v) best_imse_v = imse, best_imse = name;
    }
    auto column = [&](Metric m) {
      std::vector<std::optional<double>> v;
      for (const auto& r : records) {
        if (r.ok()) v.push_back(r.metrics[m]);
      }
      return v;
    };
    const auto c_move = pearson(column(Metric::nm_dm_se), column(Metric::nm_dm_h));
    const auto c_shape = pearson(column(Metric::gs_bb_iar), column(Metric::gs_ch_sd));
    const bool ok = worst_area == "scaling" && best_imse == "scaling" && c_move && *c_move > 0.5 && c_shape &&
                    *c_shape > 0.0;
    report(7, "qualitative findings", ok,
           fmt("largest median sp_ch_a: %s (%.4g); smallest median nm_dm_imse: %s (%.3g); "
               "corr(nm_dm_se,nm_dm_h)=%.3f corr(gs_bb_iar,gs_ch_sd)=%.3f",
               worst_area.c_str(), worst_area_v, best_imse.c_str(), best_imse_v, c_move.value_or(NAN),
               c_shape.value_or(NAN)),
           true);
  }

  // 8. paper-scale counts, as reported by a dry run
  {
    const auto paper = parse_config("preset = \"paper\"\n");
    report(8, "paper-scale structure", paper.graph_count() == 840 && paper.run_count() == 6720,
           fmt("%zu graphs, %zu runs", paper.graph_count(), paper.run_count()));
  }

  // 9. determinism under time masking
  {
    const std::string first = write_records_csv(records, true);
    const std::string second = write_records_csv(run_benchmark(config), true);
    BenchConfig wide = config;
    wide.run.parallelism = 8;
    const std::string third = write_records_csv(run_benchmark(wide), true);
    report(9, "determinism", first == second && first == third,
           fmt("repeat run %s, parallelism 1 vs 8 %s (%zu bytes)", first == second ? "identical" : "differs",
               first == third ? "identical" : "differs", first.size()));
  }

  return hard_failures == 0 ? 0 : 1;
}
