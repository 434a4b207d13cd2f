// Copyright 2026 The cprof Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cprof/explain.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "cprof/common.h"
#include "cprof/features.h"
#include "cprof/models.h"
#include "oracles.h"

namespace cprof {
namespace {

namespace fs = std::filesystem;

Tree Stump() {
  Tree t;
  t.nodes.resize(3);
  t.nodes[0] = {0, 0.5, 1, 2, 0.5, 2.0};
  t.nodes[1] = {-1, 0, -1, -1, 0.0, 1.0};
  t.nodes[2] = {-1, 0, -1, -1, 1.0, 1.0};
  return t;
}

TEST(TreeShap, StumpExample) {
  const Tree stump = Stump();
  const double row[2] = {0.7, 123.0};
  double phi[2] = {0, 0};
  AccumulateTreeShap(stump, row, 1.0, phi);
  EXPECT_DOUBLE_EQ(TreeExpectedValue(stump), 0.5);
  EXPECT_DOUBLE_EQ(phi[0], 0.5);
  EXPECT_EQ(phi[1], 0.0);
  const auto brute = oracle::BruteForceShapley(stump, row, 2);
  EXPECT_DOUBLE_EQ(brute[0], 0.5);
}

TEST(TreeShapProperty, MatchesBruteForceOnRandomTrees) {
  Rng rng(1234);
  for (int t = 0; t < 20; ++t) {
    const int features = 2 + static_cast<int>(rng.Below(11));  // <= 12
    const int leaves = 2 + static_cast<int>(rng.Below(30));
    const Tree tree = oracle::RandomTree(rng, leaves, features);
    for (int r = 0; r < 10; ++r) {
      std::vector<double> row(features);
      for (double& v : row) v = rng.Normal();
      std::vector<double> phi(features, 0.0);
      AccumulateTreeShap(tree, row.data(), 1.0, phi.data());
      const auto want = oracle::BruteForceShapley(tree, row.data(), features);
      double sum = TreeExpectedValue(tree);
      for (int j = 0; j < features; ++j) {
        ASSERT_NEAR(phi[j], want[j], 1e-9) << "tree " << t << " feature " << j;
        sum += phi[j];
      }
      ASSERT_NEAR(sum, tree.Predict(row), 1e-9);
    }
  }
}

TEST(TreeShapProperty, ScaleIsLinear) {
  Rng rng(7);
  const Tree tree = oracle::RandomTree(rng, 12, 5);
  std::vector<double> row = {0.1, -0.3, 1.2, 0.0, -2.0};
  std::vector<double> one(5, 0.0), three(5, 0.0);
  AccumulateTreeShap(tree, row.data(), 1.0, one.data());
  AccumulateTreeShap(tree, row.data(), 3.0, three.data());
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(three[j], 3 * one[j], 1e-12);
}

struct TrainTest {
  Dataset train, test;
};

TrainTest SplitData(const Dataset& all, uint64_t seed) {
  const Split s = StratifiedSplit(all.labels, 0.25, seed);
  return {all.SelectRows(s.train), all.SelectRows(s.test)};
}

TEST(TreeShap, LocalAccuracyForEveryTreeFamily) {
  const TrainTest d = SplitData(oracle::InformativePlusNoise(600, 8, 2, 70), 1);
  const std::vector<std::pair<Family, HyperParams>> specs = {
      {Family::kGbdt, {{"n_rounds", 40}, {"max_depth", 4}}},
      {Family::kRandomForest, {{"n_trees", 25}, {"max_depth", 5}}},
      {Family::kDecisionTree, {{"max_depth", 6}}}};
  for (const auto& [family, params] : specs) {
    const TrainedModel model = TrainedModel::Fit({family, params, 3, true}, d.train, 1);
    const ShapMatrix shap = TreeShap(model, d.test, 2);
    const Eigen::VectorXd margin = model.Margin(d.test);
    ASSERT_EQ(shap.values.rows(), d.test.rows());
    for (int i = 0; i < d.test.rows(); ++i) {
      ASSERT_NEAR(shap.base + shap.values.row(i).sum(), margin[i], 1e-6) << FamilyName(family);
    }
  }
}

TEST(TreeShap, NullPlayerGetsZero) {
  Dataset all = oracle::InformativePlusNoise(300, 4, 0, 71);
  all.x.col(3).setConstant(2.5);  // never split on
  const TrainedModel model =
      TrainedModel::Fit({Family::kGbdt, {{"n_rounds", 20}}, 1, false}, all, 1);
  const ShapMatrix shap = TreeShap(model, all, 1);
  for (int i = 0; i < all.rows(); ++i) EXPECT_EQ(shap.values(i, 3), 0.0);
}

TEST(TreeShap, RejectsLinearModels) {
  const Dataset data = oracle::InformativePlusNoise(60, 3, 0, 72);
  const TrainedModel model = TrainedModel::Fit({Family::kLogisticRegression, {}, 0, false}, data, 1);
  EXPECT_THROW(TreeShap(model, data, 1), ContractError);
}

TEST(TreeShap, IndependentOfJobs) {
  const Dataset data = oracle::InformativePlusNoise(200, 5, 1, 73);
  const TrainedModel model = TrainedModel::Fit({Family::kGbdt, {{"n_rounds", 15}}, 1, false}, data, 1);
  EXPECT_EQ(TreeShap(model, data, 1).values, TreeShap(model, data, 3).values);
}

TEST(ShapImportance, InformativeColumnRanksFirst) {
  const Dataset data = oracle::InformativePlusNoise(400, 6, 4, 74);
  const TrainedModel model = TrainedModel::Fit({Family::kGbdt, {{"n_rounds", 30}}, 1, false}, data, 1);
  const ImportanceReport report = ShapImportance(model, data, 1);
  EXPECT_EQ(report.ranking[0], 4);
  EXPECT_EQ(report.method, ImportanceMethod::kTreeShap);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(report.scores[j], report.shap.values.col(j).cwiseAbs().mean(), 1e-15);
  }
}

TEST(RankByScore, StableDescending) {
  EXPECT_EQ(RankByScore({0.1, 0.5, 0.1, 0.9}), (std::vector<int>{3, 1, 0, 2}));
  EXPECT_EQ(RankByScore({}), std::vector<int>{});
}

TEST(PermutationImportance, InformativeFirstNoiseNearZero) {
  const TrainTest d = SplitData(oracle::InformativePlusNoise(2000, 10, 0, 75), 2);
  const TrainedModel model = TrainedModel::Fit({Family::kLogisticRegression, {}, 0, true}, d.train, 1);
  const ImportanceReport report = PermutationImportance(model, d.test, 10, 5, 2);
  EXPECT_EQ(report.ranking[0], 0);
  for (int j = 1; j < 10; ++j) EXPECT_LT(std::abs(report.scores[j]), 0.02) << j;

  const ImportanceReport again = PermutationImportance(model, d.test, 10, 5, 1);
  EXPECT_EQ(again.scores, report.scores);
  EXPECT_EQ(PermutationImportance(model, d.test, 1, 9, 1).scores,
            PermutationImportance(model, d.test, 1, 9, 1).scores);
}

TEST(PermutationImportance, IgnoredColumnIsExactlyZero) {
  Dataset all = oracle::InformativePlusNoise(300, 3, 0, 76);
  const TrainedModel model =
      TrainedModel::Fit({Family::kDecisionTree, {{"max_depth", 1}}, 0, false}, all, 1);
  const ImportanceReport report = PermutationImportance(model, all, 5, 1, 1);
  EXPECT_EQ(report.scores[1], 0.0);
  EXPECT_EQ(report.scores[2], 0.0);
}

Dataset ThreeInformative(int n, int noise, uint64_t seed) {
  Rng rng(seed);
  const int d = 3 + noise;
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = static_cast<int>(rng.Below(2));
    for (int j = 0; j < d; ++j) x(i, j) = rng.Normal();
    for (int j = 0; j < 3; ++j) x(i, j) += y[i] ? 1.2 : -1.2;
  }
  return oracle::MakeDataset(x, y);
}

TEST(TopKF1Curve, FullSetMatchesAllFeatures) {
  const TrainTest d = SplitData(ThreeInformative(600, 97, 77), 3);
  const ModelSpec spec{Family::kLogisticRegression, {{"l2", 10}}, 0, true};
  std::vector<int> ranking(100);
  for (int j = 0; j < 100; ++j) ranking[j] = 99 - j;
  ranking[97] = 2, ranking[98] = 1, ranking[99] = 0;  // informative last
  std::vector<std::string> warnings;
  const auto curve = TopKF1Curve(ranking, d.train, d.test, {0, 100}, spec, 1, &warnings);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
  const TrainedModel full = TrainedModel::Fit(spec, d.train, 1);
  EXPECT_EQ(curve[0].f1, Evaluate(full.Predict(d.test).labels, d.test.labels).f1);
  EXPECT_THROW(TopKF1Curve(ranking, d.train, d.test, {101}, spec, 1, nullptr), ContractError);
}

TEST(TopKF1Curve, FewInformativeColumnsSuffice) {
  const TrainTest d = SplitData(ThreeInformative(2000, 97, 78), 4);
  const ModelSpec spec{Family::kLogisticRegression, {{"l2", 10}}, 0, true};
  std::vector<int> ranking(100);
  for (int j = 0; j < 100; ++j) ranking[j] = j;
  const auto curve = TopKF1Curve(ranking, d.train, d.test, {1, 3, 100}, spec, 2, nullptr);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].k, 1);
  EXPECT_NEAR(curve[1].f1, curve[2].f1, 0.02);
  EXPECT_LT(curve[0].f1, curve[1].f1);
}

Dataset UserMatrix(const std::vector<double>& per_row_value, const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  Eigen::MatrixXd x(n, kNumUserColumns);
  for (int i = 0; i < n; ++i) x.row(i).setConstant(per_row_value[i]);
  Dataset d = oracle::MakeDataset(x, Eigen::Map<const Eigen::VectorXi>(labels.data(), n));
  d.columns = UserColumnNames();
  return d;
}

TEST(IdiomHeatmap, ShapeAndGroupMeans) {
  const Dataset d = UserMatrix({0.4, 0.4, 0.1, 0.3}, {1, 1, 0, 0});
  const auto cells = IdiomHeatmap(d);
  ASSERT_EQ(cells.size(), 616u);
  EXPECT_EQ(cells[0].statistic, "mean");
  EXPECT_EQ(cells[0].group, "conspiracy");
  EXPECT_EQ(cells[1].group, "control");
  for (const auto& c : cells) {
    EXPECT_NEAR(c.value, c.group == "conspiracy" ? 0.4 : 0.2, 1e-15);
  }
  Dataset missing = d.SelectColumns({0, 1, 2});
  EXPECT_THROW(IdiomHeatmap(missing), SchemaError);
}

TEST(IdiomHeatmap, IdenticalGroupsGiveIdenticalColumns) {
  const Dataset d = UserMatrix({0.7, 0.2, 0.7, 0.2}, {1, 1, 0, 0});
  const auto cells = IdiomHeatmap(d);
  for (std::size_t i = 0; i + 1 < cells.size(); i += 2) EXPECT_EQ(cells[i].value, cells[i + 1].value);
}

TEST(GroupRanking, FiltersByGroup) {
  ImportanceReport report;
  report.columns = {UserColumnNames()[0], UserColumnNames()[8 * 7], UserColumnNames()[60 * 7]};
  report.scores = {0.1, 0.3, 0.2};
  report.ranking = RankByScore(report.scores);
  const auto idioms = GroupRanking(report, {FeatureGroup::kIdiom});
  ASSERT_EQ(idioms.size(), 1u);
  EXPECT_EQ(idioms[0].column, UserColumnNames()[8 * 7]);
  const auto emotions_and_idioms = GroupRanking(report, {FeatureGroup::kEmotion, FeatureGroup::kIdiom});
  ASSERT_EQ(emotions_and_idioms.size(), 2u);
  EXPECT_EQ(emotions_and_idioms[0].score, 0.3);
}

TEST(Writers, CsvShapesAndSvg) {
  const fs::path dir = fs::temp_directory_path() / "cprof_explain_writers";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Dataset data = oracle::InformativePlusNoise(50, 3, 0, 79);
  const TrainedModel model = TrainedModel::Fit({Family::kGbdt, {{"n_rounds", 5}}, 1, false}, data, 1);
  const ImportanceReport report = ShapImportance(model, data, 1);
  WriteShapSummaryCsv(dir / "shap.csv", report, data);
  WriteImportanceCsv(dir / "imp.csv", report);
  WriteTopKCsv(dir / "topk.csv", {{1, 0.5}, {3, 0.75}});
  auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  EXPECT_EQ(lines(ReadFile(dir / "shap.csv")), 1 + 50 * 3);
  EXPECT_EQ(lines(ReadFile(dir / "imp.csv")), 1 + 3);
  EXPECT_EQ(ReadFile(dir / "topk.csv"), "k,f1\n1,0.5\n3,0.75\n");
  const std::string svg = TopFeaturesSvg(report, 2, "a <title> & more");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("&lt;title&gt; &amp; more"), std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace cprof
