#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "support.hpp"

using namespace noverlap;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

BenchRecord record_with(const std::string& algorithm, std::optional<double> value, std::size_t n = 10) {
  BenchRecord r;
  r.graph_id = "g";
  r.algorithm = algorithm;
  r.n = n;
  r.metrics[Metric::sp_ch_a] = value;
  return r;
}

/// Textbook two-pass Pearson on complete columns.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

std::vector<BenchInput> small_inputs() {
  CorpusSpec spec;
  spec.models = {kAllModels.begin(), kAllModels.end()};
  spec.sizes = {10, 24};
  spec.seeds_per_size = 2;
  return build_corpus(spec, 100);
}

}  // namespace

TEST(Quantiles, R7Definition) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_r7(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_r7(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_r7(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile_r7(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_r7(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_r7({7}, 0.25), 7.0);
}

TEST(Aggregate, SingleRecord) {
  const auto t = aggregate({record_with("pfs", 3.5)});
  ASSERT_EQ(t.size(), 1u);
  const auto& s = t[0].metrics[static_cast<std::size_t>(Metric::sp_ch_a)];
  EXPECT_EQ(*s.q1, 3.5);
  EXPECT_EQ(*s.median, 3.5);
  EXPECT_EQ(*s.q3, 3.5);
}

TEST(Aggregate, UndefinedValuesExcludedAndCounted) {
  std::vector<BenchRecord> rs;
  for (int i = 1; i <= 9; ++i) rs.push_back(record_with("vpsc", static_cast<double>(i)));
  rs.push_back(record_with("vpsc", std::nullopt));
  const auto t = aggregate(rs);
  const auto& s = t[0].metrics[static_cast<std::size_t>(Metric::sp_ch_a)];
  EXPECT_EQ(s.count, 9u);
  EXPECT_EQ(s.undefined_count, 1u);
  EXPECT_DOUBLE_EQ(*s.median, 5.0);
  EXPECT_DOUBLE_EQ(*s.q1, 3.0);
  EXPECT_DOUBLE_EQ(*s.q3, 7.0);
}

TEST(Aggregate, GroupsInAlgorithmOrderAndCountsFailures) {
  auto bad = record_with("scaling", 2.0);
  bad.error = "boom";
  const auto t = aggregate({record_with("gtree", 1.0), record_with("scaling", 1.0), bad,
                            record_with("scaling", 3.0, 20)},
                           true);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].algorithm, "scaling");
  EXPECT_EQ(t[0].n, 10u);
  EXPECT_EQ(t[0].failures, 1u);
  EXPECT_EQ(t[0].metrics[static_cast<std::size_t>(Metric::sp_ch_a)].count, 1u);
  EXPECT_EQ(t[1].n, 20u);
  EXPECT_EQ(t[2].algorithm, "gtree");
  EXPECT_THROW(aggregate({}), ValidationError);
}

TEST(Aggregate, QuartilesOrdered) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BenchRecord> rs;
    for (int i = 0; i < 1 + trial % 17; ++i) rs.push_back(record_with("fta", u(gen)));
    const auto& s = aggregate(rs)[0].metrics[static_cast<std::size_t>(Metric::sp_ch_a)];
    ASSERT_LE(*s.q1, *s.median);
    ASSERT_LE(*s.median, *s.q3);
  }
}

TEST(Pearson, Examples) {
  std::vector<std::optional<double>> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i * 0.7);
    y.push_back(2 * i * 0.7 + 3);
  }
  EXPECT_NEAR(*pearson(x, y), 1.0, 1e-12);
  EXPECT_EQ(*pearson(x, x), 1.0);
  EXPECT_FALSE(pearson({1.0, 2.0}, {1.0, 2.0}));
  EXPECT_FALSE(pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}));
  EXPECT_FALSE(pearson({1.0, std::nullopt, 2.0, 4.0}, {1.0, 2.0, std::nullopt, 3.0}));
}

TEST(Pearson, MatchesOracle) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::optional<double>> x, y;
    std::vector<double> cx, cy;
    for (int i = 0; i < 5 + trial % 40; ++i) {
      const double a = nd(gen), b = 0.4 * a + nd(gen);
      const bool drop = gen() % 7 == 0;
      x.push_back(a);
      y.push_back(drop ? std::nullopt : std::optional<double>(b));
      if (!drop) {
        cx.push_back(a);
        cy.push_back(b);
      }
    }
    if (cx.size() < 3) continue;
    ASSERT_NEAR(*pearson(x, y), pearson_oracle(cx, cy), 1e-12) << trial;
  }
}

TEST(Pearson, MatrixIsSymmetricWithUnitDiagonal) {
  std::vector<BenchRecord> rs;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 20; ++i) {
    BenchRecord r;
    for (std::size_t k = 0; k < kMetricCount; ++k) r.metrics[static_cast<Metric>(k)] = u(gen);
    rs.push_back(r);
  }
  const std::vector<Metric> ms{kSelectedMetrics.begin(), kSelectedMetrics.end()};
  const auto m = correlation_matrix(rs, ms);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    EXPECT_EQ(*m[i][i], 1.0);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      EXPECT_EQ(*m[i][j], *m[j][i]);
      EXPECT_LE(std::abs(*m[i][j]), 1.0);
    }
  }
}

TEST(Svg, OneNode) {
  const SizedGraph g({{"a", 2, 1}}, {});
  const auto svg = render_svg(g, Embedding({{0, 0}}));
  EXPECT_EQ(count_of(svg, "<rect"), 1u);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(render_svg(g, Embedding({{0, 0}})), svg);
}

TEST(Svg, OverlapMarkupAndSideBySide) {
  const SizedGraph g({{"a", 2, 2}, {"b", 2, 2}}, {{"a", "b"}});
  const Embedding before({{0, 0}, {1, 0}});
  const Embedding after({{-0.5, 0}, {1.5, 0}});
  const auto one = render_svg(g, before);
  EXPECT_EQ(count_of(one, "<rect"), 2u);
  EXPECT_EQ(count_of(one, "class=\"node overlap\""), 2u);
  EXPECT_EQ(count_of(one, "<line"), 1u);
  const auto both = render_svg(g, before, &after);
  EXPECT_EQ(count_of(both, "<rect"), 4u);
  EXPECT_EQ(count_of(both, "id=\"before\""), 1u);
  EXPECT_EQ(count_of(both, "id=\"after\""), 1u);
  EXPECT_EQ(count_of(both, "class=\"node overlap\""), 2u);
  EXPECT_THROW(render_svg(g, Embedding({{0, 0}})), ValidationError);
}

TEST(Config, JsonAndToml) {
  const auto j = parse_config(R"({"preset":"desk","algorithms":["scaling","pfs-prime"],"seed":4,"parallelism":2})");
  EXPECT_EQ(j.graph_count(), 84u);
  EXPECT_EQ(j.run_count(), 168u);
  EXPECT_EQ(j.run.seed, 4u);
  EXPECT_EQ(j.run.parallelism, 2u);

  const auto t = parse_config(R"(
# small grid
preset = "paper"
models = ["tree", "scale_free"]
sizes = [
  10, 20,  # trailing comment
]
seeds_per_size = 2
all_metrics = true
padding = 0.5
node_size = { rule = "degree_proportional", base = 3.0, slope = 1 }
)");
  EXPECT_EQ(t.graph_count(), 8u);
  EXPECT_EQ(t.run_count(), 64u);
  EXPECT_EQ(t.report_metrics.size(), kMetricCount);
  EXPECT_EQ(t.run.padding, 0.5);
  EXPECT_EQ(t.corpus.node_size.kind, NodeSizeRule::Kind::degree_proportional);

  const auto tables = parse_config("[node_size]\nrule = \"uniform\"\nw = 6\nh = 3\n");
  EXPECT_EQ(tables.corpus.node_size.a, 6.0);

  const auto paper = parse_config("preset = \"paper\"\n");
  EXPECT_EQ(paper.graph_count(), 840u);
  EXPECT_EQ(paper.run_count(), 6720u);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config(R"({"bogus":1})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"algorithms":["magic"]})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"sizes":[1]})"), ValidationError);
  EXPECT_THROW(parse_config("{"), ParseError);
  EXPECT_THROW(parse_config("seed = \n"), ParseError);
  EXPECT_THROW(parse_config("preset = \"huge\"\n"), ValidationError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 8, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
}

TEST(RunBenchmark, RecordsAreCompleteAndSorted) {
  const auto inputs = small_inputs();
  ASSERT_EQ(inputs.size(), 16u);
  BenchOptions opt;
  const auto rs = run_benchmark(inputs, opt);
  ASSERT_EQ(rs.size(), 16u * 8u);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    ASSERT_TRUE(rs[i].ok()) << rs[i].graph_id << " " << rs[i].algorithm << ": " << rs[i].error;
    EXPECT_EQ(rs[i].algorithm, algorithm_name(kAllAlgorithms[i % 8]));
    if (i > 0) {
      ASSERT_LE(rs[i - 1].graph_id, rs[i].graph_id);
    }
  }
}

TEST(RunBenchmark, ParallelismDoesNotChangeContent) {
  const auto inputs = small_inputs();
  BenchOptions one, eight;
  eight.parallelism = 8;
  const auto a = write_records_csv(run_benchmark(inputs, one), true);
  const auto b = write_records_csv(run_benchmark(inputs, eight), true);
  EXPECT_EQ(a, b);
}

TEST(RunBenchmark, CorpusBuildIsParallelSafe) {
  CorpusSpec spec;
  spec.models = {GraphModel::random, GraphModel::tree};
  spec.sizes = {12};
  spec.seeds_per_size = 3;
  const auto a = build_corpus(spec, 50, 1);
  const auto b = build_corpus(spec, 50, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].graph == b[i].graph);
    EXPECT_TRUE(a[i].initial == b[i].initial);
    EXPECT_EQ(a[i].generator, b[i].generator);
  }
}
