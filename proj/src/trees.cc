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

#include "cprof/trees.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cprof/common.h"

namespace cprof {

namespace {

constexpr double kMinGain = 1e-12;

double Midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2;
  return mid < hi ? mid : lo;
}

struct NodeStats {
  double g = 0;
  double h = 0;
  double w = 0;
};

struct Scan {
  NodeStats left;
  double last_key = 0;
  bool started = false;
};

struct Candidate {
  double gain = kMinGain;
  int feature = -1;
  double threshold = 0;
};

}  // namespace

int Tree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    depth[nodes[i].left] = depth[i] + 1;
    depth[nodes[i].right] = depth[i] + 1;
    best = std::max(best, depth[i] + 1);
  }
  return best;
}

void Tree::Validate(int num_features) const {
  if (nodes.empty()) throw SchemaError("tree has no nodes");
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = nodes[i];
    if (!std::isfinite(node.value) || !std::isfinite(node.cover)) {
      throw SchemaError("tree node " + std::to_string(i) + " is not finite");
    }
    if (node.is_leaf()) continue;
    if (node.feature >= num_features || node.left <= i || node.right <= i ||
        node.left >= n || node.right >= n || !std::isfinite(node.threshold)) {
      throw SchemaError("tree node " + std::to_string(i) + " is malformed");
    }
  }
}

PresortedMatrix::PresortedMatrix(const Eigen::MatrixXd& x, int max_bins)
    : x_(x), order_(x.cols()) {
  const int n = static_cast<int>(x.rows());
  binned_ = max_bins > 0;
  if (binned_) {
    bins_.resize(x.cols());
    bin_upper_.resize(x.cols());
  }
  for (int f = 0; f < x.cols(); ++f) {
    std::vector<int>& order = order_[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return x(a, f) < x(b, f); });
    if (!binned_) continue;

    std::vector<double> distinct;
    for (int r : order) {
      if (distinct.empty() || x(r, f) > distinct.back()) distinct.push_back(x(r, f));
    }
    const std::size_t m = distinct.size();
    const std::size_t bins = std::min<std::size_t>(m, static_cast<std::size_t>(max_bins));
    // Distinct value k lands in bin floor(k * bins / m).
    auto bin_of = [&](std::size_t k) { return static_cast<int>(k * bins / m); };
    std::vector<double>& upper = bin_upper_[f];
    upper.assign(bins, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      if (bin_of(k) != bin_of(k + 1)) {
        upper[bin_of(k)] = Midpoint(distinct[k], distinct[k + 1]);
      }
    }
    std::vector<int>& row_bins = bins_[f];
    row_bins.resize(n);
    std::size_t k = 0;
    for (int r : order) {
      while (distinct[k] < x(r, f)) ++k;
      row_bins[r] = bin_of(k);
    }
  }
}

double PresortedMatrix::Threshold(int feature, double lo_key,
                                  double hi_key) const {
  if (binned_) return bin_upper_[feature][static_cast<std::size_t>(lo_key)];
  return Midpoint(lo_key, hi_key);
}

Tree GrowTree(const PresortedMatrix& data, const std::vector<double>& grad,
              const std::vector<double>& hess, const std::vector<double>& weight,
              const GrowOptions& opt) {
  const int n = data.rows();
  const int d = data.cols();
  if (static_cast<int>(grad.size()) != n || static_cast<int>(hess.size()) != n ||
      static_cast<int>(weight.size()) != n) {
    throw ContractError("GrowTree: grad/hess/weight size mismatch");
  }
  const double lambda = opt.lambda;
  auto score = [lambda](double g, double h) {
    return h + lambda > 0 ? g * g / (h + lambda) : 0.0;
  };
  auto leaf_value = [&](const NodeStats& s) {
    return s.h + lambda > 0 ? opt.leaf_scale * s.g / (s.h + lambda) : 0.0;
  };

  Tree tree;
  std::vector<NodeStats> stats(1);
  std::vector<int> node_of(n, -1);
  for (int i = 0; i < n; ++i) {
    if (weight[i] <= 0) continue;
    node_of[i] = 0;
    stats[0].g += weight[i] * grad[i];
    stats[0].h += weight[i] * hess[i];
    stats[0].w += weight[i];
  }
  tree.nodes.push_back({-1, 0, -1, -1, leaf_value(stats[0]), stats[0].w});

  std::vector<int> frontier = {0};
  for (int depth = 0; depth < opt.max_depth && !frontier.empty(); ++depth) {
    // slot[node] indexes the per-level arrays; -1 when the node cannot split.
    std::vector<int> slot(tree.nodes.size(), -1);
    std::vector<int> open;
    for (int node : frontier) {
      if (stats[node].w >= 2 * opt.min_samples_leaf) {
        slot[node] = static_cast<int>(open.size());
        open.push_back(node);
      }
    }
    if (open.empty()) break;

    std::vector<std::vector<char>> allowed;
    if (opt.max_features > 0 && opt.max_features < d) {
      allowed.assign(open.size(), std::vector<char>(d, 0));
      std::vector<int> features(d);
      for (std::size_t s = 0; s < open.size(); ++s) {
        std::iota(features.begin(), features.end(), 0);
        Rng rng(DeriveSeed(opt.seed, static_cast<uint64_t>(open[s])));
        for (int k = 0; k < opt.max_features; ++k) {
          const int pick = k + static_cast<int>(rng.Below(d - k));
          std::swap(features[k], features[pick]);
          allowed[s][features[k]] = 1;
        }
      }
    }

    std::vector<Candidate> best(open.size());
    std::vector<Scan> scans(open.size());
    for (int f = 0; f < d; ++f) {
      std::fill(scans.begin(), scans.end(), Scan{});
      for (int row : data.order(f)) {
        const int node = node_of[row];
        if (node < 0) continue;
        const int s = slot[node];
        if (s < 0 || (!allowed.empty() && !allowed[s][f])) continue;
        const double key = data.key(row, f);
        Scan& scan = scans[s];
        if (scan.started && key > scan.last_key) {
          const NodeStats& total = stats[node];
          const NodeStats& l = scan.left;
          const double rw = total.w - l.w;
          const double rh = total.h - l.h;
          if (l.w >= opt.min_samples_leaf && rw >= opt.min_samples_leaf &&
              l.h >= opt.min_child_weight && rh >= opt.min_child_weight) {
            const double gain = score(l.g, l.h) + score(total.g - l.g, rh) -
                                score(total.g, total.h);
            if (gain > best[s].gain) {
              best[s] = {gain, f, data.Threshold(f, scan.last_key, key)};
            }
          }
        }
        scan.started = true;
        scan.last_key = key;
        scan.left.g += weight[row] * grad[row];
        scan.left.h += weight[row] * hess[row];
        scan.left.w += weight[row];
      }
    }

    std::vector<int> next;
    for (std::size_t s = 0; s < open.size(); ++s) {
      if (best[s].feature < 0) continue;
      const int node = open[s];
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes[node].feature = best[s].feature;
      tree.nodes[node].threshold = best[s].threshold;
      tree.nodes[node].left = left;
      tree.nodes[node].right = left + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      stats.resize(tree.nodes.size());
      next.push_back(left);
      next.push_back(left + 1);
    }
    if (next.empty()) break;
    for (int i = 0; i < n; ++i) {
      const int node = node_of[i];
      if (node < 0 || tree.nodes[node].is_leaf()) continue;
      const TreeNode& split = tree.nodes[node];
      const int child =
          data.x()(i, split.feature) <= split.threshold ? split.left : split.right;
      node_of[i] = child;
      stats[child].g += weight[i] * grad[i];
      stats[child].h += weight[i] * hess[i];
      stats[child].w += weight[i];
    }
    for (int child : next) {
      tree.nodes[child].value = leaf_value(stats[child]);
      tree.nodes[child].cover = stats[child].w;
    }
    frontier = std::move(next);
  }
  return tree;
}

}  // namespace cprof
