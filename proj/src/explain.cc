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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "cprof/common.h"
#include "cprof/csv.h"

namespace cprof {

namespace {

// One entry of the unique feature path in the TreeSHAP recursion.
struct PathElement {
  int feature = -1;
  double zero_fraction = 0;
  double one_fraction = 0;
  double weight = 0;
};

void ExtendPath(std::vector<PathElement>& path, int depth, double zero_fraction,
                double one_fraction, int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / (depth + 1.0);
    path[i].weight = zero_fraction * path[i].weight * (depth - i) / (depth + 1.0);
  }
}

void UnwindPath(std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0) {
      const double tmp = path[i].weight;
      path[i].weight = next_one * (depth + 1) / ((i + 1) * one);
      next_one = tmp - path[i].weight * zero * (depth - i) / (depth + 1.0);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight of the path with element `index` unwound.
double UnwoundSum(const std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one = path[depth].weight;
  double total = 0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0) {
      const double tmp = next_one * (depth + 1) / ((i + 1) * one);
      total += tmp;
      next_one = path[i].weight - tmp * zero * (depth - i) / (depth + 1.0);
    } else {
      total += path[i].weight / zero * (depth + 1) / (depth - i);
    }
  }
  return total;
}

struct ShapWalk {
  const Tree& tree;
  const double* row;
  double scale;
  double* phi;

  void Recurse(int node, std::vector<PathElement> path, int depth,
               double zero_fraction, double one_fraction, int feature) {
    path.resize(depth + 1);
    ExtendPath(path, depth, zero_fraction, one_fraction, feature);
    const TreeNode& n = tree.nodes[node];
    if (n.is_leaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = UnwoundSum(path, depth, i);
        phi[path[i].feature] +=
            scale * w * (path[i].one_fraction - path[i].zero_fraction) * n.value;
      }
      return;
    }
    const int hot = row[n.feature] <= n.threshold ? n.left : n.right;
    const int cold = hot == n.left ? n.right : n.left;
    double incoming_zero = 1, incoming_one = 1;
    for (int i = 1; i <= depth; ++i) {
      if (path[i].feature == n.feature) {
        incoming_zero = path[i].zero_fraction;
        incoming_one = path[i].one_fraction;
        UnwindPath(path, depth, i);
        --depth;
        break;
      }
    }
    const double cover = n.cover;
    Recurse(hot, path, depth + 1, incoming_zero * tree.nodes[hot].cover / cover,
            incoming_one, n.feature);
    Recurse(cold, path, depth + 1, incoming_zero * tree.nodes[cold].cover / cover,
            0.0, n.feature);
  }
};

void WriteCsv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::string out = header + "\n";
  for (const auto& r : rows) out += CsvRow(r);
  WriteFile(path, out);
}

}  // namespace

std::string_view ImportanceMethodName(ImportanceMethod method) {
  return method == ImportanceMethod::kTreeShap ? "tree_shap_mean_abs"
                                               : "permutation_f1_drop";
}

double TreeExpectedValue(const Tree& tree) {
  const double root = tree.nodes[0].cover;
  if (root <= 0) return tree.nodes[0].value;
  double sum = 0;
  for (const TreeNode& n : tree.nodes) {
    if (n.is_leaf()) sum += n.value * n.cover;
  }
  return sum / root;
}

void AccumulateTreeShap(const Tree& tree, const double* row, double scale,
                        double* phi) {
  if (tree.nodes.size() < 2) return;
  ShapWalk walk{tree, row, scale, phi};
  walk.Recurse(0, {}, 0, 1.0, 1.0, -1);
}

ShapMatrix TreeShap(const TrainedModel& model, const Dataset& data, int jobs) {
  const TreeEnsembleView view = model.Trees();
  ShapMatrix out;
  out.base = view.base;
  for (const Tree& t : *view.trees) out.base += view.weight * TreeExpectedValue(t);
  const int n = data.rows();
  const int d = data.cols();
  // Row-major copy so each row is contiguous.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows =
      model.PreparedInputs(data);
  out.values = Eigen::MatrixXd::Zero(n, d);
  std::vector<std::vector<double>> phi(n);
  ParallelFor(n, jobs, [&](std::size_t i) {
    phi[i].assign(d, 0.0);
    for (const Tree& t : *view.trees) {
      AccumulateTreeShap(t, rows.row(i).data(), view.weight, phi[i].data());
    }
  });
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) out.values(i, j) = phi[i][j];
  }
  return out;
}

std::vector<int> RankByScore(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

ImportanceReport ShapImportance(const TrainedModel& model, const Dataset& data,
                                int jobs) {
  ImportanceReport report;
  report.method = ImportanceMethod::kTreeShap;
  report.columns = data.columns;
  report.shap = TreeShap(model, data, jobs);
  report.scores.resize(data.cols());
  for (int j = 0; j < data.cols(); ++j) {
    report.scores[j] = data.rows() > 0 ? report.shap.values.col(j).cwiseAbs().mean() : 0.0;
  }
  report.ranking = RankByScore(report.scores);
  return report;
}

ImportanceReport PermutationImportance(const TrainedModel& model,
                                       const Dataset& data, int repeats,
                                       uint64_t seed, int jobs) {
  if (repeats < 1) throw ContractError("permutation importance needs repeats >= 1");
  const double baseline = Evaluate(model.Predict(data).labels, data.labels).f1;
  ImportanceReport report;
  report.method = ImportanceMethod::kPermutation;
  report.columns = data.columns;
  report.scores.assign(data.cols(), 0.0);
  ParallelFor(data.cols(), jobs, [&](std::size_t j) {
    Dataset shuffled = data;
    std::vector<double> column(data.x.col(j).data(),
                               data.x.col(j).data() + data.rows());
    double drop = 0;
    for (int r = 0; r < repeats; ++r) {
      std::vector<double> values = column;
      Rng rng(DeriveSeed(seed, j * repeats + r));
      rng.Shuffle(values);
      for (int i = 0; i < data.rows(); ++i) shuffled.x(i, j) = values[i];
      drop += baseline - Evaluate(model.Predict(shuffled).labels, data.labels).f1;
    }
    report.scores[j] = drop / repeats;
  });
  report.ranking = RankByScore(report.scores);
  return report;
}

std::vector<CurvePoint> TopKF1Curve(const std::vector<int>& ranking,
                                    const Dataset& train, const Dataset& test,
                                    const std::vector<int>& ks,
                                    const ModelSpec& spec, int jobs,
                                    std::vector<std::string>* warnings) {
  std::vector<CurvePoint> curve;
  for (int k : ks) {
    if (k <= 0) {
      if (warnings) warnings->push_back("top-k curve: skipped k = " + std::to_string(k));
      continue;
    }
    if (k > static_cast<int>(ranking.size())) {
      throw ContractError("top-k curve: k = " + std::to_string(k) + " exceeds " +
                          std::to_string(ranking.size()) + " ranked columns");
    }
    std::vector<int> selected(ranking.begin(), ranking.begin() + k);
    std::sort(selected.begin(), selected.end());
    const Dataset train_k = train.SelectColumns(selected);
    const Dataset test_k = test.SelectColumns(selected);
    const TrainedModel model = TrainedModel::Fit(spec, train_k, jobs);
    curve.push_back({k, Evaluate(model.Predict(test_k).labels, test_k.labels).f1});
  }
  return curve;
}

std::vector<HeatmapCell> IdiomHeatmap(const Dataset& data) {
  std::unordered_map<std::string, int> index;
  for (int j = 0; j < data.cols(); ++j) index.emplace(data.columns[j], j);
  const auto& features = BaseFeatures();
  std::vector<HeatmapCell> cells;
  cells.reserve(kNumIdioms * kNumStatistics * 2);
  for (int f = kNumEmotions; f < kNumEmotions + kNumIdioms; ++f) {
    for (int s = 0; s < kNumStatistics; ++s) {
      const std::string& name = UserColumnNames()[UserColumnIndex(f, s)];
      auto it = index.find(name);
      if (it == index.end()) throw SchemaError("missing idiom column " + name);
      for (int label : {1, 0}) {
        double sum = 0;
        int count = 0;
        for (int i = 0; i < data.rows(); ++i) {
          if (data.labels[i] != label) continue;
          sum += data.x(i, it->second);
          ++count;
        }
        cells.push_back({features[f].name, std::string(StatisticName(s)),
                         label == 1 ? "conspiracy" : "control",
                         count > 0 ? sum / count : 0.0});
      }
    }
  }
  return cells;
}

std::vector<RankedFeature> GroupRanking(const ImportanceReport& report,
                                        const std::vector<FeatureGroup>& groups) {
  static const std::unordered_map<std::string, int> column_index = [] {
    std::unordered_map<std::string, int> m;
    const auto& names = UserColumnNames();
    for (int j = 0; j < static_cast<int>(names.size()); ++j) m.emplace(names[j], j);
    return m;
  }();
  std::vector<RankedFeature> out;
  for (int j : report.ranking) {
    auto it = column_index.find(report.columns[j]);
    if (it == column_index.end()) continue;
    const FeatureGroup g = UserColumnGroup(it->second);
    if (std::find(groups.begin(), groups.end(), g) != groups.end()) {
      out.push_back({report.columns[j], report.scores[j]});
    }
  }
  return out;
}

void WriteShapSummaryCsv(const std::filesystem::path& path,
                         const ImportanceReport& report, const Dataset& data) {
  if (report.method != ImportanceMethod::kTreeShap) {
    throw ContractError("shap summary needs a tree_shap report");
  }
  std::string out = "feature,sample_id,shap,feature_value\n";
  for (int j : report.ranking) {
    for (int i = 0; i < data.rows(); ++i) {
      out += CsvRow({report.columns[j], data.row_ids[i],
                     FormatDouble(report.shap.values(i, j)), FormatDouble(data.x(i, j))});
    }
  }
  WriteFile(path, out);
}

void WriteImportanceCsv(const std::filesystem::path& path,
                        const ImportanceReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const int j = report.ranking[r];
    rows.push_back({report.columns[j], FormatDouble(report.scores[j]),
                    std::to_string(r + 1)});
  }
  WriteCsv(path, "feature,score,rank", rows);
}

void WriteRankedCsv(const std::filesystem::path& path,
                    const std::vector<RankedFeature>& ranked) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    rows.push_back({ranked[r].column, FormatDouble(ranked[r].score), std::to_string(r + 1)});
  }
  WriteCsv(path, "feature,score,rank", rows);
}

void WriteTopKCsv(const std::filesystem::path& path,
                  const std::vector<CurvePoint>& curve) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : curve) rows.push_back({std::to_string(p.k), FormatDouble(p.f1)});
  WriteCsv(path, "k,f1", rows);
}

void WriteHeatmapCsv(const std::filesystem::path& path,
                     const std::vector<HeatmapCell>& cells) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells) {
    rows.push_back({c.idiom, c.statistic, c.group, FormatDouble(c.value)});
  }
  WriteCsv(path, "idiom,statistic,group,value", rows);
}

std::string TopFeaturesSvg(const ImportanceReport& report, int n,
                           std::string_view title) {
  const int count = std::min<int>(n, static_cast<int>(report.ranking.size()));
  const int bar_height = 18, label_width = 360, chart_width = 300, top = 40;
  const int height = top + count * (bar_height + 4) + 20;
  double max_score = 0;
  for (int r = 0; r < count; ++r) {
    max_score = std::max(max_score, std::abs(report.scores[report.ranking[r]]));
  }
  auto escape = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << label_width + chart_width + 120 << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<text x=\"10\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";
  for (int r = 0; r < count; ++r) {
    const int j = report.ranking[r];
    const double score = report.scores[j];
    const int y = top + r * (bar_height + 4);
    const int width = max_score > 0
                          ? static_cast<int>(std::lround(chart_width * std::abs(score) / max_score))
                          : 0;
    svg << "<text x=\"" << label_width - 6 << "\" y=\"" << y + 13
        << "\" text-anchor=\"end\">" << escape(report.columns[j]) << "</text>\n";
    svg << "<rect x=\"" << label_width << "\" y=\"" << y << "\" width=\"" << width
        << "\" height=\"" << bar_height << "\" fill=\"#3b75af\"/>\n";
    svg << "<text x=\"" << label_width + width + 6 << "\" y=\"" << y + 13 << "\">"
        << FormatDouble(std::round(score * 1e4) / 1e4) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cprof
