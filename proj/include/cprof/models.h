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

#ifndef CPROF_MODELS_H_
#define CPROF_MODELS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/dataset.h"
#include "cprof/trees.h"

namespace cprof {

enum class Family {
  kLogisticRegression,
  kRidge,
  kLda,
  kGaussianNb,
  kKnn,
  kDecisionTree,
  kRandomForest,
  kGbdt,
};
inline constexpr int kNumFamilies = 8;

std::string_view FamilyName(Family family);
Family ParseFamily(std::string_view name);  // throws ContractError
bool IsTreeFamily(Family family);

using HyperParams = std::map<std::string, double>;

struct ModelSpec {
  Family family = Family::kLogisticRegression;
  HyperParams params;  // missing keys take the family defaults
  uint64_t seed = 0;
  bool standardize = false;
};

// Documented hyperparameters per family with defaults and allowed ranges:
//   logistic_regression: l2 (1) > 0, max_iter (100) >= 1, tol (1e-8) > 0
//   ridge:               alpha (1) > 0
//   lda:                 shrinkage (0) in [0, 1]
//   gaussian_nb:         var_smoothing (1e-9) >= 0
//   knn:                 k (5) >= 1
//   decision_tree:       max_depth (8) >= 1, min_samples_leaf (1) >= 1
//   random_forest:       n_trees (200) >= 1, max_depth (12) >= 1,
//                        min_samples_leaf (1) >= 1,
//                        max_features (0 = sqrt of the column count) >= 0
//   gbdt:                n_rounds (200) >= 1, learning_rate (0.1) in (0, 1],
//                        max_depth (5) >= 1, lambda (1) >= 0,
//                        min_child_weight (1e-3) >= 0,
//                        min_samples_leaf (1) >= 1, max_bins (0 = exact) >= 0,
//                        max_features (0 = all columns) >= 0
// Throws ContractError on an unknown key or an out-of-range value and
// returns the full parameter set.
HyperParams ResolveParams(Family family, const HyperParams& given);

// Default grid searched by cross-validation.
std::vector<HyperParams> DefaultGrid(Family family);
// Smaller is simpler; used to break ties between equal CV scores.
double ComplexityKey(Family family, const HyperParams& params);
bool DefaultStandardize(Family family);

struct Metrics {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
};

// Positive class is 1 (conspiracy). Throws ContractError on empty or
// mismatched input.
Metrics Evaluate(const std::vector<int>& predicted, const Eigen::VectorXi& truth);

struct Predictions {
  std::vector<int> labels;
  // Probability of the positive class for probabilistic families, signed
  // margin for ridge and lda; larger always means more positive.
  Eigen::VectorXd scores;
};

// Family-specific learned state.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int jobs) = 0;
  virtual Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const = 0;
  virtual std::vector<int> Labels(const Eigen::MatrixXd& x) const;
  virtual nlohmann::json ToJson() const = 0;
  virtual void FromJson(const nlohmann::json& j) = 0;
  virtual double Threshold() const { return 0.5; }
  std::vector<std::string> warnings;
};

// Per-column mean/scale fitted on training rows only. Constant columns keep
// scale 1.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer Fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const;
};

// Tree ensembles expose their trees for SHAP. The model margin is
// base + weight * sum of tree outputs.
struct TreeEnsembleView {
  const std::vector<Tree>* trees = nullptr;
  double base = 0;
  double weight = 1;
};

class TrainedModel {
 public:
  static TrainedModel Fit(const ModelSpec& spec, const Dataset& train, int jobs);

  // Throws SchemaError when the dataset's schema hash differs from training.
  Predictions Predict(const Dataset& data) const;
  // Tree families only: the raw margin SHAP explains (log-odds for gbdt,
  // positive-class probability for decision_tree and random_forest).
  Eigen::VectorXd Margin(const Dataset& data) const;
  TreeEnsembleView Trees() const;
  // The schema-checked (and standardized, when enabled) matrix the
  // estimator sees.
  Eigen::MatrixXd PreparedInputs(const Dataset& data) const;

  const ModelSpec& spec() const { return spec_; }
  const std::string& schema_hash() const { return schema_hash_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::string>& warnings() const { return estimator_->warnings; }
  const Estimator& estimator() const { return *estimator_; }

  // Self-describing JSON artifact (format "cprof-model", version 1).
  std::string Serialize() const;
  static TrainedModel Deserialize(std::string_view text);

  // Cross-validation record stored with the artifact.
  nlohmann::json metadata = nlohmann::json::object();

 private:
  ModelSpec spec_;
  std::string schema_hash_;
  std::vector<std::string> columns_;
  std::optional<Standardizer> standardizer_;
  std::shared_ptr<Estimator> estimator_;
};

std::unique_ptr<Estimator> MakeEstimator(Family family, const HyperParams& params,
                                         uint64_t seed);

// Round-half-up of n * fraction test rows per class, clamped to [1, n - 1],
// chosen after a per-class Fisher-Yates shuffle. Indices come back sorted.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};
Split StratifiedSplit(const Eigen::VectorXi& labels, double test_fraction,
                      uint64_t seed);

// fold[i] in [0, k): each class is shuffled and dealt round-robin.
std::vector<int> StratifiedFolds(const Eigen::VectorXi& labels, int k, uint64_t seed);

struct GridResult {
  HyperParams params;
  std::vector<double> fold_f1;
  double mean_f1 = 0;
};

struct CvResult {
  ModelSpec best;
  int best_index = 0;
  std::vector<GridResult> grid;
};

// Exhaustive search; best = highest mean fold F1, then lower complexity key,
// then earlier grid position. Throws ContractError for a single-class fold.
CvResult CrossValidate(const ModelSpec& base, const std::vector<HyperParams>& grid,
                       const Dataset& train, int k, int jobs);

}  // namespace cprof

#endif  // CPROF_MODELS_H_
