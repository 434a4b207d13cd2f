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

#include "cprof/models.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "cprof/common.h"
#include "oracles.h"

namespace cprof {
namespace {

using nlohmann::json;

Eigen::VectorXi Truth(std::vector<int> v) {
  return Eigen::Map<Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TEST(Evaluate, FormulaExamples) {
  // 8 TP, 2 FP, 2 FN, 3 TN.
  std::vector<int> pred, truth;
  for (int i = 0; i < 8; ++i) { pred.push_back(1); truth.push_back(1); }
  for (int i = 0; i < 2; ++i) { pred.push_back(1); truth.push_back(0); }
  for (int i = 0; i < 2; ++i) { pred.push_back(0); truth.push_back(1); }
  for (int i = 0; i < 3; ++i) { pred.push_back(0); truth.push_back(0); }
  const Metrics m = Evaluate(pred, Truth(truth));
  EXPECT_EQ(m.tp, 8);
  EXPECT_EQ(m.fp, 2);
  EXPECT_EQ(m.fn, 2);
  EXPECT_EQ(m.tn, 3);
  EXPECT_DOUBLE_EQ(m.precision, 0.8);
  EXPECT_DOUBLE_EQ(m.recall, 0.8);
  EXPECT_DOUBLE_EQ(m.f1, 0.8);
  EXPECT_DOUBLE_EQ(m.accuracy, 11.0 / 15.0);

  const Metrics perfect = Evaluate({1, 0, 1}, Truth({1, 0, 1}));
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  const Metrics none = Evaluate({0, 0}, Truth({1, 0}));
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);

  EXPECT_THROW(Evaluate({}, Eigen::VectorXi()), ContractError);
  EXPECT_THROW(Evaluate({1}, Truth({1, 0})), ContractError);
}

TEST(EvaluateProperty, F1MatchesHarmonicMeanOfCounts) {
  Rng rng(21);
  for (int iter = 0; iter < 500; ++iter) {
    const int n = 1 + static_cast<int>(rng.Below(60));
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = static_cast<int>(rng.Below(2));
      truth[i] = static_cast<int>(rng.Below(2));
    }
    const Metrics m = Evaluate(pred, Truth(truth));
    ASSERT_EQ(m.tp + m.fp + m.tn + m.fn, n);
    ASSERT_NEAR(m.f1, oracle::F1FromCounts(m.tp, m.fp, m.fn), 1e-15);
  }
}

TEST(ResolveParams, DefaultsAndValidation) {
  const HyperParams p = ResolveParams(Family::kGbdt, {{"max_depth", 3}});
  EXPECT_EQ(p.at("max_depth"), 3);
  EXPECT_EQ(p.at("n_rounds"), 200);
  EXPECT_EQ(p.at("learning_rate"), 0.1);
  EXPECT_THROW(ResolveParams(Family::kGbdt, {{"depth", 3}}), ContractError);
  EXPECT_THROW(ResolveParams(Family::kGbdt, {{"learning_rate", 0}}), ContractError);
  EXPECT_THROW(ResolveParams(Family::kLogisticRegression, {{"l2", -1}}), ContractError);
  EXPECT_THROW(ParseFamily("svm"), ContractError);
  for (int f = 0; f < kNumFamilies; ++f) {
    const Family family = static_cast<Family>(f);
    EXPECT_EQ(ParseFamily(FamilyName(family)), family);
    for (const auto& params : DefaultGrid(family)) EXPECT_NO_THROW(ResolveParams(family, params));
  }
}

TEST(StratifiedSplit, ExactProportions) {
  Eigen::VectorXi y(200);
  for (int i = 0; i < 200; ++i) y[i] = i < 100 ? 1 : 0;
  const Split s = StratifiedSplit(y, 0.15, 3);
  ASSERT_EQ(s.test.size(), 30u);
  ASSERT_EQ(s.train.size(), 170u);
  int test_pos = 0;
  for (int i : s.test) test_pos += y[i];
  EXPECT_EQ(test_pos, 15);
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  std::set<int> all(s.train.begin(), s.train.end());
  for (int i : s.test) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 200u);

  const Split again = StratifiedSplit(y, 0.15, 3);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(StratifiedSplit(y, 0.15, 4).test, s.test);
}

TEST(StratifiedSplit, LargeClassRounding) {
  Eigen::VectorXi y(14420);
  for (int i = 0; i < 14420; ++i) y[i] = i % 2;
  const Split s = StratifiedSplit(y, 0.15, 1);
  EXPECT_EQ(s.test.size(), 2u * 1082u);
}

TEST(StratifiedSplit, TinyClassThrows) {
  EXPECT_THROW(StratifiedSplit(Truth({1, 0, 0, 0}), 0.5, 1), ContractError);
}

TEST(StratifiedFolds, EqualSizesAndClassBalance) {
  Eigen::VectorXi y(100);
  for (int i = 0; i < 100; ++i) y[i] = i % 2;
  const std::vector<int> folds = StratifiedFolds(y, 5, 9);
  std::vector<int> size(5, 0), pos(5, 0);
  for (int i = 0; i < 100; ++i) {
    ++size[folds[i]];
    pos[folds[i]] += y[i];
  }
  for (int f = 0; f < 5; ++f) {
    EXPECT_EQ(size[f], 20);
    EXPECT_EQ(pos[f], 10);
  }
  EXPECT_EQ(StratifiedFolds(y, 5, 9), folds);
}

TEST(LogisticRegression, OneDimensionalThreshold) {
  Eigen::MatrixXd x(40, 1);
  Eigen::VectorXi y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = (i - 19.5) / 4.0;
    y[i] = x(i, 0) > 0 ? 1 : 0;
  }
  const Dataset data = oracle::MakeDataset(x, y);
  const TrainedModel model = TrainedModel::Fit({Family::kLogisticRegression, {}, 0, false}, data, 1);
  EXPECT_EQ(Evaluate(model.Predict(data).labels, y).accuracy, 1.0);

  // A score of exactly 0.5 at the fitted boundary.
  const json est = json::parse(model.Serialize()).at("estimator");
  const double w = est.at("coef")[0].get<double>();
  const double b = est.at("intercept").get<double>();
  Eigen::MatrixXd boundary(1, 1);
  boundary(0, 0) = -b / w;
  Dataset at = oracle::MakeDataset(boundary, Truth({1}));
  EXPECT_NEAR(model.Predict(at).scores[0], 0.5, 1e-12);
}

TEST(LogisticRegression, SeparableDataHighF1) {
  const Dataset all = oracle::SeparableData(2000, 10, 77);
  const Split split = StratifiedSplit(all.labels, 0.15, 1);
  const Dataset train = all.SelectRows(split.train), test = all.SelectRows(split.test);
  const TrainedModel model =
      TrainedModel::Fit({Family::kLogisticRegression, {{"l2", 1e-3}}, 0, true}, train, 1);
  EXPECT_GE(Evaluate(model.Predict(test).labels, test.labels).f1, 0.99);
}

// The fitted coefficients satisfy the stationarity condition of the
// penalized objective, checked by recomputing its gradient directly.
TEST(LogisticRegression, GradientVanishesAtOptimum) {
  const Dataset data = oracle::InformativePlusNoise(300, 4, 0, 5);
  const double l2 = 2.0;
  const TrainedModel model =
      TrainedModel::Fit({Family::kLogisticRegression, {{"l2", l2}}, 0, false}, data, 1);
  const json est = json::parse(model.Serialize()).at("estimator");
  std::vector<double> w = est.at("coef").get<std::vector<double>>();
  const double b = est.at("intercept").get<double>();
  std::vector<double> grad(5, 0.0);
  for (int i = 0; i < data.rows(); ++i) {
    double z = b;
    for (int j = 0; j < 4; ++j) z += w[j] * data.x(i, j);
    const double r = 1 / (1 + std::exp(-z)) - data.labels[i];
    for (int j = 0; j < 4; ++j) grad[j] += r * data.x(i, j);
    grad[4] += r;
  }
  for (int j = 0; j < 4; ++j) grad[j] += l2 * w[j];
  // Newton stops once the largest gradient entry is within tol * n.
  for (double g : grad) EXPECT_NEAR(g, 0.0, 1e-8 * data.rows());
}

TEST(Ridge, NormalEquationsHold) {
  const Dataset data = oracle::InformativePlusNoise(120, 3, 1, 6);
  const double alpha = 3.0;
  const TrainedModel model = TrainedModel::Fit({Family::kRidge, {{"alpha", alpha}}, 0, false}, data, 1);
  const json est = json::parse(model.Serialize()).at("estimator");
  const auto w = est.at("coef").get<std::vector<double>>();
  const double b = est.at("intercept").get<double>();
  std::vector<double> grad(4, 0.0);
  for (int i = 0; i < data.rows(); ++i) {
    double r = b - (2.0 * data.labels[i] - 1);
    for (int j = 0; j < 3; ++j) r += w[j] * data.x(i, j);
    for (int j = 0; j < 3; ++j) grad[j] += r * data.x(i, j);
    grad[3] += r;
  }
  for (int j = 0; j < 3; ++j) grad[j] += alpha * w[j];
  for (double g : grad) EXPECT_NEAR(g, 0.0, 1e-8);
}

double CoefNorm(const TrainedModel& model) {
  const auto w = json::parse(model.Serialize()).at("estimator").at("coef").get<std::vector<double>>();
  return std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
}

TEST(RegularizationProperty, DoublingStrengthNeverGrowsTheNorm) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset data = oracle::InformativePlusNoise(150, 6, 2, seed);
    double prev_lr = INFINITY, prev_ridge = INFINITY;
    for (double s = 0.01; s <= 100; s *= 2) {
      const double lr = CoefNorm(
          TrainedModel::Fit({Family::kLogisticRegression, {{"l2", s}}, 0, false}, data, 1));
      const double ridge =
          CoefNorm(TrainedModel::Fit({Family::kRidge, {{"alpha", s}}, 0, false}, data, 1));
      ASSERT_LE(lr, prev_lr + 1e-9) << "l2=" << s;
      ASSERT_LE(ridge, prev_ridge + 1e-12) << "alpha=" << s;
      prev_lr = lr;
      prev_ridge = ridge;
    }
  }
}

TEST(GaussianNb, SeparatesBlobs) {
  const Dataset all = oracle::Blobs(2000, 3, 13);
  const Split split = StratifiedSplit(all.labels, 0.2, 1);
  const Dataset train = all.SelectRows(split.train), test = all.SelectRows(split.test);
  const TrainedModel model = TrainedModel::Fit({Family::kGaussianNb, {}, 0, false}, train, 1);
  EXPECT_GT(Evaluate(model.Predict(test).labels, test.labels).accuracy, 0.99);
}

TEST(Lda, SingularCovarianceFallsBackWithWarning) {
  Eigen::MatrixXd x(20, 3);
  Eigen::VectorXi y(20);
  for (int i = 0; i < 20; ++i) {
    y[i] = i % 2;
    x(i, 0) = y[i] + 0.1 * (i % 5);
    x(i, 1) = 2 * x(i, 0);  // collinear
    x(i, 2) = 1.0;          // constant
  }
  const TrainedModel model =
      TrainedModel::Fit({Family::kLda, {}, 0, false}, oracle::MakeDataset(x, y), 1);
  EXPECT_FALSE(model.warnings().empty());
  EXPECT_EQ(Evaluate(model.Predict(oracle::MakeDataset(x, y)).labels, y).accuracy, 1.0);
}

TEST(Knn, NearestSelf) {
  const Dataset data = oracle::InformativePlusNoise(50, 3, 0, 2);
  const TrainedModel model = TrainedModel::Fit({Family::kKnn, {{"k", 1}}, 0, true}, data, 1);
  const auto pred = model.Predict(data).labels;
  for (int i = 0; i < data.rows(); ++i) EXPECT_EQ(pred[i], data.labels[i]);
}

// Consistent data: no two rows share features with different labels.
Dataset ConsistentRandom(int n, int d, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.Normal();
    y[i] = static_cast<int>(rng.Below(2));
  }
  return oracle::MakeDataset(x, y);
}

TEST(Gbdt, MemorizesConsistentData) {
  const Dataset data = ConsistentRandom(100, 5, 31);
  const TrainedModel model = TrainedModel::Fit(
      {Family::kGbdt, {{"n_rounds", 300}, {"max_depth", 6}, {"learning_rate", 0.3}}, 0, false},
      data, 1);
  EXPECT_EQ(Evaluate(model.Predict(data).labels, data.labels).accuracy, 1.0);
}

TEST(DecisionTree, MemorizesTrainingRows) {
  const Dataset data = ConsistentRandom(80, 4, 32);
  const TrainedModel model =
      TrainedModel::Fit({Family::kDecisionTree, {{"max_depth", 30}}, 0, false}, data, 1);
  EXPECT_EQ(Evaluate(model.Predict(data).labels, data.labels).accuracy, 1.0);
}

TEST(RandomForest, LearnsInformativeColumn) {
  const Dataset all = oracle::InformativePlusNoise(600, 6, 3, 33);
  const Split split = StratifiedSplit(all.labels, 0.2, 1);
  const Dataset train = all.SelectRows(split.train), test = all.SelectRows(split.test);
  const TrainedModel model = TrainedModel::Fit(
      {Family::kRandomForest, {{"n_trees", 50}, {"max_depth", 6}}, 5, false}, train, 2);
  EXPECT_GT(Evaluate(model.Predict(test).labels, test.labels).accuracy, 0.9);
}

TEST(TreeFamiliesProperty, StandardizeDoesNotChangeLabels) {
  const Dataset all = oracle::InformativePlusNoise(300, 5, 1, 40);
  Dataset scaled = all;
  for (int j = 0; j < scaled.cols(); ++j) scaled.x.col(j) = scaled.x.col(j) * (j + 1) * 10.0;
  for (Family family : {Family::kDecisionTree, Family::kRandomForest, Family::kGbdt}) {
    HyperParams params;
    if (family == Family::kRandomForest) params = {{"n_trees", 20}};
    if (family == Family::kGbdt) params = {{"n_rounds", 30}};
    const auto raw = TrainedModel::Fit({family, params, 3, false}, all, 1).Predict(all).labels;
    const auto std_labels = TrainedModel::Fit({family, params, 3, true}, all, 1).Predict(all).labels;
    EXPECT_EQ(raw, std_labels) << FamilyName(family);
  }
}

TEST(Standardizer, FitsOnTrainingRowsOnly) {
  Eigen::MatrixXd train(3, 2);
  train << 1, 5, 2, 5, 3, 5;
  const Standardizer s = Standardizer::Fit(train);
  EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
  EXPECT_EQ(s.scale[1], 1.0);  // constant column
  Eigen::MatrixXd test(1, 2);
  test << 100, 5;
  const Eigen::MatrixXd out = s.Apply(test);
  EXPECT_DOUBLE_EQ(out(0, 0), 98.0 / s.scale[0]);
  EXPECT_EQ(out(0, 1), 0.0);
}

TEST(TrainedModel, SerializationRoundTripForEveryFamily) {
  const Dataset data = oracle::InformativePlusNoise(120, 4, 2, 50);
  for (int f = 0; f < kNumFamilies; ++f) {
    const Family family = static_cast<Family>(f);
    HyperParams params;
    if (family == Family::kRandomForest) params = {{"n_trees", 10}};
    if (family == Family::kGbdt) params = {{"n_rounds", 20}};
    const TrainedModel model = TrainedModel::Fit({family, params, 7, true}, data, 1);
    const std::string text = model.Serialize();
    const TrainedModel loaded = TrainedModel::Deserialize(text);
    EXPECT_EQ(loaded.Serialize(), text) << FamilyName(family);
    const Predictions a = model.Predict(data), b = loaded.Predict(data);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.scores, b.scores) << FamilyName(family);
  }
}

TEST(TrainedModel, RejectsSchemaMismatch) {
  const Dataset data = oracle::InformativePlusNoise(60, 3, 0, 51);
  const TrainedModel model = TrainedModel::Fit({Family::kLogisticRegression, {}, 0, false}, data, 1);
  Dataset renamed = data;
  renamed.columns[1] = "other";
  EXPECT_THROW(model.Predict(renamed), SchemaError);
  EXPECT_THROW(TrainedModel::Deserialize(R"({"format":"something-else"})"), SchemaError);
}

TEST(TrainedModel, RejectsNonFiniteInput) {
  Dataset data = oracle::InformativePlusNoise(60, 3, 0, 52);
  data.x(5, 2) = std::nan("");
  EXPECT_THROW(TrainedModel::Fit({Family::kLogisticRegression, {}, 0, false}, data, 1), SchemaError);
}

TEST(TrainedModelProperty, IdenticalAcrossThreadCounts) {
  const Dataset data = oracle::InformativePlusNoise(200, 6, 1, 53);
  for (Family family : {Family::kRandomForest, Family::kGbdt, Family::kKnn}) {
    HyperParams params;
    if (family == Family::kRandomForest) params = {{"n_trees", 16}};
    if (family == Family::kGbdt) params = {{"n_rounds", 25}, {"max_features", 3}};
    const std::string one = TrainedModel::Fit({family, params, 11, false}, data, 1).Serialize();
    const std::string four = TrainedModel::Fit({family, params, 11, false}, data, 4).Serialize();
    EXPECT_EQ(one, four) << FamilyName(family);
  }
}

TEST(CrossValidate, SingletonGridAndBetterSpecWins) {
  const Dataset data = oracle::InformativePlusNoise(200, 3, 0, 60);
  const ModelSpec base{Family::kKnn, {}, 1, true};
  const CvResult single = CrossValidate(base, {{{"k", 3}}}, data, 5, 1);
  EXPECT_EQ(single.best.params.at("k"), 3);
  EXPECT_EQ(single.grid.size(), 1u);
  EXPECT_EQ(single.grid[0].fold_f1.size(), 5u);

  // The signal column only: a 1-nearest-neighbour vote on noise loses to a
  // wide vote on the informative shift.
  const ModelSpec lr{Family::kLogisticRegression, {}, 1, false};
  const CvResult cv = CrossValidate(lr, {{{"l2", 1e6}}, {{"l2", 1}}}, data, 5, 2);
  EXPECT_EQ(cv.best_index, 1);
  EXPECT_GT(cv.grid[1].mean_f1, cv.grid[0].mean_f1);
  const CvResult serial = CrossValidate(lr, {{{"l2", 1e6}}, {{"l2", 1}}}, data, 5, 1);
  EXPECT_EQ(serial.grid[1].fold_f1, cv.grid[1].fold_f1);
}

TEST(CrossValidate, TiesGoToTheSimplerSpec) {
  const Dataset data = oracle::Blobs(100, 2, 61);
  const ModelSpec base{Family::kLogisticRegression, {}, 1, false};
  // Both reach F1 1.0 on every fold; larger l2 is simpler.
  const CvResult cv = CrossValidate(base, {{{"l2", 0.1}}, {{"l2", 10}}}, data, 5, 1);
  EXPECT_EQ(cv.grid[0].mean_f1, cv.grid[1].mean_f1);
  EXPECT_EQ(cv.best_index, 1);
}

TEST(CrossValidate, SingleClassFoldThrows) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(12, 2);
  Eigen::VectorXi y = Eigen::VectorXi::Zero(12);
  y[0] = 1;
  y[1] = 1;
  EXPECT_THROW(CrossValidate({Family::kLogisticRegression, {}, 1, false}, {{}},
                             oracle::MakeDataset(x, y), 5, 1),
               ContractError);
}

}  // namespace
}  // namespace cprof
