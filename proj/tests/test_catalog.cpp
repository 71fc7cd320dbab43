#include <gtest/gtest.h>

#include <set>

#include "noverlap/catalog.hpp"

using namespace noverlap;

TEST(Catalog, TwentyOneRowsInOrder) {
  ASSERT_EQ(kMetricCatalog.size(), 21u);
  for (std::size_t i = 0; i < kMetricCatalog.size(); ++i) {
    EXPECT_EQ(static_cast<std::size_t>(kMetricCatalog[i].metric), i);
  }
  std::set<std::string_view> names;
  for (const auto& d : kMetricCatalog) names.insert(d.abbreviation);
  EXPECT_EQ(names.size(), 21u);
  EXPECT_EQ(abbreviation(Metric::oo_o), "oo_o");
  EXPECT_EQ(abbreviation(Metric::el_rsdd), "el_rsdd");
}

TEST(Catalog, ExactlyFiveSelected) {
  std::set<std::string_view> selected;
  for (const auto& d : kMetricCatalog) {
    if (d.selected) selected.insert(d.abbreviation);
  }
  EXPECT_EQ(selected, (std::set<std::string_view>{"oo_nni", "sp_ch_a", "gs_bb_iar", "nm_dm_imse", "el_rsdd"}));
  EXPECT_EQ(kSelectedMetrics.size(), 5u);
  for (Metric m : kSelectedMetrics) EXPECT_TRUE(descriptor(m).selected);
}

TEST(Catalog, ClassesAndTargets) {
  std::size_t per_class[5] = {};
  for (const auto& d : kMetricCatalog) ++per_class[static_cast<int>(d.metric_class)];
  EXPECT_EQ(per_class[0], 4u);
  EXPECT_EQ(per_class[1], 4u);
  EXPECT_EQ(per_class[2], 3u);
  EXPECT_EQ(per_class[3], 8u);
  EXPECT_EQ(per_class[4], 2u);
  EXPECT_EQ(descriptor(Metric::oo_o).target, 1.0);
  EXPECT_EQ(descriptor(Metric::sp_bb_na).target, 0.0);
  EXPECT_EQ(descriptor(Metric::gs_bb_ar).target, 1.0);
  EXPECT_EQ(descriptor(Metric::el_r).target, 1.0);
}

TEST(Catalog, Lookup) {
  EXPECT_EQ(metric_from_abbreviation("nm_knn"), Metric::nm_knn);
  EXPECT_FALSE(metric_from_abbreviation("nope"));
}

TEST(Catalog, Ranges) {
  EXPECT_TRUE(in_range(Metric::sp_bb_na, 0.0, 5));
  EXPECT_FALSE(in_range(Metric::sp_bb_na, 1.0, 5));
  EXPECT_FALSE(in_range(Metric::gs_bb_ar, 0.0, 5));
  EXPECT_TRUE(in_range(Metric::oo_ni, 20.0, 5));
  EXPECT_FALSE(in_range(Metric::oo_ni, 21.0, 5));
  EXPECT_FALSE(in_range(Metric::sp_ch_a, 0.99, 5));
}
