#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace noverlap;

namespace {

std::vector<std::size_t> degrees(const SizedGraph& g) {
  std::vector<std::size_t> d(g.n(), 0);
  for (const Edge& e : g.edges()) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

bool connected(const SizedGraph& g) {
  const auto adj = g.adjacency();
  std::vector<bool> seen(g.n(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.n();
}

}  // namespace

TEST(Generate, TreeExample) {
  const auto g = generate(GraphModel::tree, 10, 7);
  EXPECT_EQ(g.n(), 10u);
  EXPECT_EQ(g.m(), 9u);
  EXPECT_TRUE(connected(g));
}

TEST(Generate, RandomExample) {
  const auto g = generate(GraphModel::random, 10, 7);
  EXPECT_EQ(g.n(), 10u);
  EXPECT_EQ(g.m(), 20u);
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const Edge& e : g.edges()) {
    EXPECT_NE(e.u, e.v);
    unique.insert({e.u, e.v});
  }
  EXPECT_EQ(unique.size(), 20u);
}

TEST(Generate, RandomSaturatesSmallGraphs) {
  EXPECT_EQ(generate(GraphModel::random, 4, 1).m(), 6u);
  EXPECT_EQ(generate(GraphModel::random, 5, 1).m(), 10u);
}

TEST(Generate, ScaleFreeIsSkewed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto d = degrees(generate(GraphModel::scale_free, 100, seed));
    std::sort(d.begin(), d.end());
    ASSERT_GT(d.back(), d[d.size() / 2]) << seed;
  }
}

TEST(Generate, SmallWorldKeepsRingDegree) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = generate(GraphModel::small_world, 50, seed);
    EXPECT_EQ(g.m(), 100u);
    const auto d = degrees(g);
    ASSERT_GE(*std::min_element(d.begin(), d.end()), 2u) << seed;
  }
}

TEST(Generate, InvariantsAcrossModels) {
  for (GraphModel model : kAllModels) {
    for (std::size_t n : {2u, 3u, 5u, 17u, 64u}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = generate(model, n, seed);
        ASSERT_EQ(g.n(), n);
        ASSERT_EQ(g.graph_id(), synthetic_graph_id(model, n, seed));
        for (const Edge& e : g.edges()) ASSERT_LT(e.u, e.v);
        if (model != GraphModel::random) {
          ASSERT_TRUE(connected(g)) << model_name(model) << " " << n;
        }
        ASSERT_TRUE(generate(model, n, seed) == g);
      }
    }
  }
  EXPECT_THROW(generate(GraphModel::tree, 1, 0), ValidationError);
}

TEST(Generate, DegreeProportionalSizes) {
  const auto g = generate(GraphModel::scale_free, 30, 2, NodeSizeRule::degree_proportional(2, 1));
  const auto d = degrees(g);
  for (std::size_t i = 0; i < g.n(); ++i) {
    EXPECT_EQ(g.node(i).w, 2.0 + static_cast<double>(d[i]));
    EXPECT_EQ(g.node(i).h, g.node(i).w / 2);
  }
}

TEST(Generate, ModelNames) {
  for (GraphModel m : kAllModels) EXPECT_EQ(model_from_name(model_name(m)), m);
  EXPECT_EQ(model_from_name("small-world"), GraphModel::small_world);
  EXPECT_FALSE(model_from_name("lattice"));
}

TEST(Layout, SingletonAtOrigin) {
  const SizedGraph g({{"a", 3, 2}}, {});
  const auto e = initial_layout(g, 9);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], (Point{0, 0}));
}

TEST(Layout, Deterministic) {
  for (GraphModel m : kAllModels) {
    const auto g = generate(m, 60, 4);
    EXPECT_TRUE(initial_layout(g, 4) == initial_layout(g, 4));
    EXPECT_FALSE(initial_layout(g, 4) == initial_layout(g, 5));
  }
}

TEST(Layout, PathEndsFartherThanNeighbours) {
  const SizedGraph g({{"a", 4, 2}, {"b", 4, 2}, {"c", 4, 2}}, {{"a", "b"}, {"b", "c"}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto e = initial_layout(g, seed);
    const double ends = distance(e[0], e[2]);
    ASSERT_GT(ends, distance(e[0], e[1])) << seed;
    ASSERT_GT(ends, distance(e[1], e[2])) << seed;
  }
}

TEST(Layout, DisconnectedComponentsDoNotCollide) {
  const auto g = generate(GraphModel::random, 40, 3);
  const auto e = initial_layout(g, 3);
  EXPECT_TRUE(e.is_total_over(g));
  EXPECT_LT(count_overlaps(g, e), g.n() * 2);
}

TEST(CorpusSpecs, Counts) {
  const auto paper = paper_scale_spec();
  EXPECT_EQ(paper.graph_count(), 840u);
  EXPECT_EQ(paper.graph_count() * kAllAlgorithms.size(), 6720u);
  EXPECT_EQ(paper.sizes.size(), 21u);
  EXPECT_EQ(paper.sizes.front(), 10u);
  EXPECT_EQ(paper.sizes.back(), 1000u);
  const auto desk = desk_scale_spec();
  EXPECT_EQ(desk.sizes, (std::vector<std::size_t>{10, 18, 32, 56, 100, 178, 316}));
  EXPECT_EQ(desk.graph_count(), 84u);
  EXPECT_NO_THROW(paper.validate());
}

TEST(CorpusSpecs, ValidationRejectsBadSizes) {
  auto spec = desk_scale_spec();
  spec.sizes = {1};
  EXPECT_THROW(spec.validate(), ValidationError);
  spec.sizes = {200000};
  EXPECT_THROW(spec.validate(), ValidationError);
}
