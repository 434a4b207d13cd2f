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

#ifndef CPROF_EXPLAIN_H_
#define CPROF_EXPLAIN_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/dataset.h"
#include "cprof/features.h"
#include "cprof/models.h"
#include "cprof/trees.h"

namespace cprof {

enum class ImportanceMethod { kTreeShap, kPermutation };

// "tree_shap_mean_abs" / "permutation_f1_drop"
std::string_view ImportanceMethodName(ImportanceMethod method);

// Cover-weighted mean output of one tree.
double TreeExpectedValue(const Tree& tree);

// Path-dependent TreeSHAP for one tree and one row, added into phi (one slot
// per feature) scaled by `scale`.
void AccumulateTreeShap(const Tree& tree, const double* row, double scale,
                        double* phi);

struct ShapMatrix {
  double base = 0;         // expected margin
  Eigen::MatrixXd values;  // rows x columns
};

// Exact Shapley attributions of the model margin. base + row sum equals
// TrainedModel::Margin for every row. Throws ContractError for a non-tree
// family.
ShapMatrix TreeShap(const TrainedModel& model, const Dataset& data, int jobs);

struct ImportanceReport {
  ImportanceMethod method = ImportanceMethod::kTreeShap;
  std::vector<std::string> columns;
  std::vector<double> scores;  // one per column
  std::vector<int> ranking;    // column indices, best first
  ShapMatrix shap;             // tree_shap only
};

// Descending score; equal scores keep column order.
std::vector<int> RankByScore(const std::vector<double>& scores);

// Mean |SHAP| per column.
ImportanceReport ShapImportance(const TrainedModel& model, const Dataset& data,
                                int jobs);

// Mean F1 drop over `repeats` within-column shuffles. Repeat r of column j
// shuffles with Rng(DeriveSeed(seed, j * repeats + r)).
ImportanceReport PermutationImportance(const TrainedModel& model,
                                       const Dataset& data, int repeats,
                                       uint64_t seed, int jobs);

struct CurvePoint {
  int k = 0;
  double f1 = 0;
};

// Refits `spec` on the top-k ranked columns (kept in their original order)
// for each k and records the test F1. k = 0 is skipped with a warning;
// k above the column count throws ContractError.
std::vector<CurvePoint> TopKF1Curve(const std::vector<int>& ranking,
                                    const Dataset& train, const Dataset& test,
                                    const std::vector<int>& ks,
                                    const ModelSpec& spec, int jobs,
                                    std::vector<std::string>* warnings);

struct HeatmapCell {
  std::string idiom;
  std::string statistic;
  std::string group;  // conspiracy / control
  double value = 0;
};

// Per-group average of every idiom column-statistic: 44 x 7 x 2 cells,
// idiom-major. Throws SchemaError when an idiom column is missing.
std::vector<HeatmapCell> IdiomHeatmap(const Dataset& data);

// Ranked entries of the report restricted to user columns of the given
// groups (matched by column name).
struct RankedFeature {
  std::string column;
  double score = 0;
};
std::vector<RankedFeature> GroupRanking(const ImportanceReport& report,
                                        const std::vector<FeatureGroup>& groups);

// CSV writers. shap_summary: feature,sample_id,shap,feature_value.
void WriteShapSummaryCsv(const std::filesystem::path& path,
                         const ImportanceReport& report, const Dataset& data);
// feature,score,rank
void WriteImportanceCsv(const std::filesystem::path& path,
                        const ImportanceReport& report);
void WriteRankedCsv(const std::filesystem::path& path,
                    const std::vector<RankedFeature>& ranked);
// k,f1
void WriteTopKCsv(const std::filesystem::path& path,
                  const std::vector<CurvePoint>& curve);
// idiom,statistic,group,value
void WriteHeatmapCsv(const std::filesystem::path& path,
                     const std::vector<HeatmapCell>& cells);

// Horizontal bar chart of the top `n` scores.
std::string TopFeaturesSvg(const ImportanceReport& report, int n,
                           std::string_view title);

}  // namespace cprof

#endif  // CPROF_EXPLAIN_H_
