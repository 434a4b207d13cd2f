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

#ifndef CPROF_TREES_H_
#define CPROF_TREES_H_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cprof {

// Rows with x[feature] <= threshold go left. Leaves have feature = -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;  // leaf output; for internal nodes the node's own estimate
  double cover = 0;  // training weight reaching the node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0

  template <typename Row>
  double Predict(const Row& row) const {
    int n = 0;
    while (!nodes[n].is_leaf()) {
      n = row[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left
                                                      : nodes[n].right;
    }
    return nodes[n].value;
  }
  int Depth() const;
  // Node weights of the two children sum to the parent's; values finite.
  void Validate(int num_features) const;
};

// Per-feature row orders (ascending value, ties by row index), computed once
// per training matrix and shared by all trees grown on it. With max_bins > 0
// split candidates are restricted to boundaries between quantile bins.
class PresortedMatrix {
 public:
  PresortedMatrix(const Eigen::MatrixXd& x, int max_bins);

  const Eigen::MatrixXd& x() const { return x_; }
  int rows() const { return static_cast<int>(x_.rows()); }
  int cols() const { return static_cast<int>(x_.cols()); }
  const std::vector<int>& order(int feature) const { return order_[feature]; }
  // Value used to find split boundaries (the bin index when binned).
  double key(int row, int feature) const {
    return binned_ ? static_cast<double>(bins_[feature][row]) : x_(row, feature);
  }
  // Threshold that separates keys lo < hi in raw feature units.
  double Threshold(int feature, double lo_key, double hi_key) const;

 private:
  const Eigen::MatrixXd& x_;
  std::vector<std::vector<int>> order_;
  bool binned_ = false;
  std::vector<std::vector<int>> bins_;            // [feature][row]
  std::vector<std::vector<double>> bin_upper_;   // [feature][bin] midpoint edge
};

struct GrowOptions {
  int max_depth = 6;
  double min_samples_leaf = 1;   // weighted row count per child
  double min_child_weight = 0;   // hessian sum per child
  double lambda = 0;             // L2 on leaf values
  int max_features = 0;          // features tried per node; 0 = all
  uint64_t seed = 0;             // per-node feature draws
  double leaf_scale = 1;         // multiplies leaf values
};

// Grows one tree level by level with an exact greedy split search.
// A split maximizes G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l) where G and H
// are weighted sums of grad and hess; leaves output leaf_scale * G/(H+l).
// With grad = label, hess = 1 and l = 0 the gain is half the weighted Gini
// decrease and leaves hold the positive fraction. Candidates are scanned by
// ascending feature and threshold and only a strictly larger gain replaces
// the incumbent, so ties go to the lowest feature, then the lowest
// threshold. Rows with weight 0 are ignored.
Tree GrowTree(const PresortedMatrix& data, const std::vector<double>& grad,
              const std::vector<double>& hess, const std::vector<double>& weight,
              const GrowOptions& options);

}  // namespace cprof

#endif  // CPROF_TREES_H_
