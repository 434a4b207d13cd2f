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

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "cprof/common.h"

namespace cprof {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kNumFamilies> kFamilyNames = {
    "logistic_regression", "ridge", "lda", "gaussian_nb",
    "knn", "decision_tree", "random_forest", "gbdt"};

struct ParamRule {
  const char* key;
  double default_value;
  double min;
  double max;
  bool min_exclusive;
  bool integer;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<ParamRule>& Rules(Family family) {
  static const std::vector<ParamRule> kRules[kNumFamilies] = {
      {{"l2", 1.0, 0, kInf, true, false},
       {"max_iter", 100, 1, 10000, false, true},
       {"tol", 1e-8, 0, kInf, true, false}},
      {{"alpha", 1.0, 0, kInf, true, false}},
      {{"shrinkage", 0.0, 0, 1, false, false}},
      {{"var_smoothing", 1e-9, 0, kInf, false, false}},
      {{"k", 5, 1, 1e6, false, true}},
      {{"max_depth", 8, 1, 64, false, true},
       {"min_samples_leaf", 1, 1, 1e9, false, true}},
      {{"n_trees", 200, 1, 100000, false, true},
       {"max_depth", 12, 1, 64, false, true},
       {"min_samples_leaf", 1, 1, 1e9, false, true},
       {"max_features", 0, 0, 1e9, false, true}},
      {{"n_rounds", 200, 1, 100000, false, true},
       {"learning_rate", 0.1, 0, 1, true, false},
       {"max_depth", 5, 1, 64, false, true},
       {"lambda", 1.0, 0, kInf, false, false},
       {"min_child_weight", 1e-3, 0, kInf, false, false},
       {"min_samples_leaf", 1, 1, 1e9, false, true},
       {"max_bins", 0, 0, 65535, false, true},
       {"max_features", 0, 0, 1e9, false, true}},
  };
  return kRules[static_cast<int>(family)];
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFrom(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

int Param(const HyperParams& p, const char* key) {
  return static_cast<int>(p.at(key));
}

std::vector<double> ToStd(const Eigen::VectorXi& y) {
  std::vector<double> out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i];
  return out;
}

// ---------------------------------------------------------------------------

class LogisticRegression : public Estimator {
 public:
  explicit LogisticRegression(const HyperParams& p)
      : l2_(p.at("l2")), max_iter_(Param(p, "max_iter")), tol_(p.at("tol")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const Eigen::Index n = x.rows(), d = x.cols();
    Eigen::MatrixXd a(n, d + 1);
    a.leftCols(d) = x;
    a.col(d).setOnes();
    const Eigen::VectorXd t = y.cast<double>();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);

    auto objective = [&](const Eigen::VectorXd& b) {
      const Eigen::VectorXd z = a * b;
      double f = 0;
      for (Eigen::Index i = 0; i < n; ++i) f += Softplus(z[i]) - t[i] * z[i];
      return f + 0.5 * l2_ * b.head(d).squaredNorm();
    };

    double f = objective(beta);
    iterations_ = 0;
    for (int it = 0; it < max_iter_; ++it) {
      const Eigen::VectorXd z = a * beta;
      Eigen::VectorXd p(n), w(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        p[i] = Sigmoid(z[i]);
        w[i] = p[i] * (1 - p[i]);
      }
      Eigen::VectorXd grad = a.transpose() * (p - t);
      grad.head(d) += l2_ * beta.head(d);
      if (grad.lpNorm<Eigen::Infinity>() <= tol_ * std::max<double>(1, n)) break;
      Eigen::MatrixXd hess = a.transpose() * w.asDiagonal() * a;
      hess.diagonal().head(d).array() += l2_;
      hess(d, d) += 1e-10;  // keeps the intercept solvable on separable data
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      // Backtracking (Armijo) line search.
      double alpha = 1.0;
      const double slope = grad.dot(step);
      Eigen::VectorXd candidate = beta + step;
      double fc = objective(candidate);
      while (fc > f + 1e-4 * alpha * slope && alpha > 1e-10) {
        alpha *= 0.5;
        candidate = beta + alpha * step;
        fc = objective(candidate);
      }
      ++iterations_;
      if (!(fc < f) && alpha <= 1e-10) break;
      beta = candidate;
      f = fc;
    }
    coef_ = beta.head(d);
    intercept_ = beta[d];
  }

  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    Eigen::VectorXd z = (x * coef_).array() + intercept_;
    return z.unaryExpr([](double v) { return Sigmoid(v); });
  }

  json ToJson() const override {
    return {{"coef", VectorJson(coef_)}, {"intercept", intercept_},
            {"iterations", iterations_}};
  }
  void FromJson(const json& j) override {
    coef_ = VectorFrom(j.at("coef"));
    intercept_ = j.at("intercept").get<double>();
    iterations_ = j.at("iterations").get<int>();
  }

  const Eigen::VectorXd& coef() const { return coef_; }

 private:
  double l2_;
  int max_iter_;
  double tol_;
  Eigen::VectorXd coef_;
  double intercept_ = 0;
  int iterations_ = 0;
};

class Ridge : public Estimator {
 public:
  explicit Ridge(const HyperParams& p) : alpha_(p.at("alpha")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const Eigen::VectorXd t = (2 * y.cast<double>()).array() - 1.0;
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const double t_mean = t.mean();
    const Eigen::MatrixXd xc = x.rowwise() - mu;
    Eigen::MatrixXd gram = xc.transpose() * xc;
    gram.diagonal().array() += alpha_;
    coef_ = gram.ldlt().solve(xc.transpose() * (t.array() - t_mean).matrix());
    intercept_ = t_mean - mu.dot(coef_);
  }
  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    return (x * coef_).array() + intercept_;
  }
  double Threshold() const override { return 0.0; }
  json ToJson() const override {
    return {{"coef", VectorJson(coef_)}, {"intercept", intercept_}};
  }
  void FromJson(const json& j) override {
    coef_ = VectorFrom(j.at("coef"));
    intercept_ = j.at("intercept").get<double>();
  }

 private:
  double alpha_;
  Eigen::VectorXd coef_;
  double intercept_ = 0;
};

class Lda : public Estimator {
 public:
  explicit Lda(const HyperParams& p) : shrinkage_(p.at("shrinkage")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const Eigen::Index d = x.cols();
    Eigen::RowVectorXd mu[2] = {Eigen::RowVectorXd::Zero(d),
                                Eigen::RowVectorXd::Zero(d)};
    double count[2] = {0, 0};
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      mu[y[i]] += x.row(i);
      count[y[i]] += 1;
    }
    for (int c = 0; c < 2; ++c) mu[c] /= count[c];
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Eigen::RowVectorXd r = x.row(i) - mu[y[i]];
      cov.noalias() += r.transpose() * r;
    }
    cov /= std::max(1.0, static_cast<double>(x.rows()) - 2);
    const double avg_var = d > 0 ? cov.trace() / static_cast<double>(d) : 0.0;
    const double target = avg_var > 0 ? avg_var : 1.0;

    used_shrinkage_ = shrinkage_;
    for (double fallback : {0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0}) {
      const double s = std::max(shrinkage_, fallback);
      Eigen::MatrixXd shrunk = (1 - s) * cov;
      shrunk.diagonal().array() += s * target;
      Eigen::LLT<Eigen::MatrixXd> llt(shrunk);
      if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
        used_shrinkage_ = s;
        coef_ = llt.solve((mu[1] - mu[0]).transpose());
        break;
      }
    }
    if (used_shrinkage_ != shrinkage_) {
      warnings.push_back("lda: pooled covariance is singular; shrinkage raised to " +
                         FormatDouble(used_shrinkage_));
    }
    intercept_ = -0.5 * coef_.dot((mu[0] + mu[1]).transpose()) +
                 std::log(count[1] / count[0]);
  }
  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    return (x * coef_).array() + intercept_;
  }
  double Threshold() const override { return 0.0; }
  json ToJson() const override {
    return {{"coef", VectorJson(coef_)},
            {"intercept", intercept_},
            {"shrinkage_used", used_shrinkage_}};
  }
  void FromJson(const json& j) override {
    coef_ = VectorFrom(j.at("coef"));
    intercept_ = j.at("intercept").get<double>();
    used_shrinkage_ = j.at("shrinkage_used").get<double>();
  }

 private:
  double shrinkage_;
  double used_shrinkage_ = 0;
  Eigen::VectorXd coef_;
  double intercept_ = 0;
};

class GaussianNb : public Estimator {
 public:
  explicit GaussianNb(const HyperParams& p) : var_smoothing_(p.at("var_smoothing")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const Eigen::Index d = x.cols();
    const Eigen::RowVectorXd overall_mean = x.colwise().mean();
    const double max_var =
        (x.rowwise() - overall_mean).array().square().colwise().mean().maxCoeff();
    // Floor of var_smoothing times the largest feature variance; a tiny
    // absolute floor keeps constant data finite.
    const double eps = std::max(var_smoothing_ * max_var, 1e-300);
    for (int c = 0; c < 2; ++c) {
      mean_[c] = Eigen::RowVectorXd::Zero(d);
      var_[c] = Eigen::RowVectorXd::Zero(d);
      double n = 0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (y[i] != c) continue;
        mean_[c] += x.row(i);
        n += 1;
      }
      mean_[c] /= n;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (y[i] != c) continue;
        var_[c].array() += (x.row(i) - mean_[c]).array().square();
      }
      var_[c] = (var_[c] / n).array() + eps;
      log_prior_[c] = std::log(n / static_cast<double>(x.rows()));
    }
  }
  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double ll[2];
      for (int c = 0; c < 2; ++c) {
        const Eigen::ArrayXd diff = (x.row(i) - mean_[c]).array().transpose();
        const Eigen::ArrayXd var = var_[c].array().transpose();
        ll[c] = log_prior_[c] -
                0.5 * ((2 * M_PI * var).log() + diff.square() / var).sum();
      }
      out[i] = Sigmoid(ll[1] - ll[0]);
    }
    return out;
  }
  json ToJson() const override {
    json j;
    for (int c = 0; c < 2; ++c) {
      const std::string key = std::to_string(c);
      j["mean_" + key] = VectorJson(mean_[c].transpose());
      j["var_" + key] = VectorJson(var_[c].transpose());
      j["log_prior_" + key] = log_prior_[c];
    }
    return j;
  }
  void FromJson(const json& j) override {
    for (int c = 0; c < 2; ++c) {
      const std::string key = std::to_string(c);
      mean_[c] = VectorFrom(j.at("mean_" + key)).transpose();
      var_[c] = VectorFrom(j.at("var_" + key)).transpose();
      log_prior_[c] = j.at("log_prior_" + key).get<double>();
    }
  }

 private:
  double var_smoothing_;
  Eigen::RowVectorXd mean_[2];
  Eigen::RowVectorXd var_[2];
  double log_prior_[2] = {0, 0};
};

class Knn : public Estimator {
 public:
  explicit Knn(const HyperParams& p) : k_(Param(p, "k")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    x_ = x;
    y_ = y;
  }

  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = Vote(x.row(i)).first;
    return out;
  }
  std::vector<int> Labels(const Eigen::MatrixXd& x) const override {
    std::vector<int> out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = Vote(x.row(i)).second;
    return out;
  }
  json ToJson() const override {
    json rows = json::array();
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      rows.push_back(VectorJson(x_.row(i).transpose()));
    }
    return {{"x", rows},
            {"y", std::vector<int>(y_.data(), y_.data() + y_.size())}};
  }
  void FromJson(const json& j) override {
    const auto& rows = j.at("x");
    const auto labels = j.at("y").get<std::vector<int>>();
    const Eigen::Index d = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
    x_.resize(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x_.row(static_cast<Eigen::Index>(i)) = VectorFrom(rows[i]).transpose();
    }
    y_ = Eigen::Map<const Eigen::VectorXi>(labels.data(),
                                           static_cast<Eigen::Index>(labels.size()));
  }

 private:
  // (positive fraction, label); vote ties go to the nearest neighbour.
  std::pair<double, int> Vote(const Eigen::RowVectorXd& q) const {
    const Eigen::Index n = x_.rows();
    const Eigen::VectorXd dist = (x_.rowwise() - q).rowwise().squaredNorm();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const int k = std::min<int>(k_, static_cast<int>(n));
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    int positive = 0;
    for (int i = 0; i < k; ++i) positive += y_[idx[i]];
    const int label = 2 * positive > k ? 1 : (2 * positive < k ? 0 : y_[idx[0]]);
    return {static_cast<double>(positive) / k, label};
  }

  int k_;
  Eigen::MatrixXd x_;
  Eigen::VectorXi y_;
};

json TreeJson(const Tree& tree) {
  std::vector<int> feature, left, right;
  std::vector<double> threshold, value, cover;
  for (const TreeNode& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    cover.push_back(n.cover);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"value", value},         {"cover", cover}};
}

Tree TreeFrom(const json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto cover = j.at("cover").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n ||
      value.size() != n || cover.size() != n) {
    throw SchemaError("tree arrays have different lengths");
  }
  Tree tree;
  for (std::size_t i = 0; i < n; ++i) {
    tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i], cover[i]});
  }
  return tree;
}

class TreeModel : public Estimator {
 public:
  const std::vector<Tree>& trees() const { return trees_; }
  virtual double Base() const { return 0.0; }
  virtual double Weight() const { return 1.0; }
  virtual double Link(double margin) const { return margin; }

  Eigen::VectorXd Margins(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto row = x.row(i);
      double sum = 0;
      for (const Tree& t : trees_) sum += t.Predict(row);
      out[i] = Base() + Weight() * sum;
    }
    return out;
  }
  Eigen::VectorXd Scores(const Eigen::MatrixXd& x) const override {
    Eigen::VectorXd m = Margins(x);
    for (Eigen::Index i = 0; i < m.size(); ++i) m[i] = Link(m[i]);
    return m;
  }
  json ToJson() const override {
    json trees = json::array();
    for (const Tree& t : trees_) trees.push_back(TreeJson(t));
    return {{"trees", trees}, {"base", Base()}};
  }
  void FromJson(const json& j) override {
    trees_.clear();
    for (const auto& t : j.at("trees")) trees_.push_back(TreeFrom(t));
    LoadBase(j.at("base").get<double>());
  }

 protected:
  virtual void LoadBase(double) {}
  std::vector<Tree> trees_;
};

class DecisionTree : public TreeModel {
 public:
  explicit DecisionTree(const HyperParams& p)
      : max_depth_(Param(p, "max_depth")),
        min_leaf_(Param(p, "min_samples_leaf")) {}

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const PresortedMatrix data(x, 0);
    const std::vector<double> ones(x.rows(), 1.0);
    GrowOptions opt;
    opt.max_depth = max_depth_;
    opt.min_samples_leaf = min_leaf_;
    trees_ = {GrowTree(data, ToStd(y), ones, ones, opt)};
  }

 private:
  int max_depth_;
  int min_leaf_;
};

class RandomForest : public TreeModel {
 public:
  RandomForest(const HyperParams& p, uint64_t seed)
      : n_trees_(Param(p, "n_trees")),
        max_depth_(Param(p, "max_depth")),
        min_leaf_(Param(p, "min_samples_leaf")),
        max_features_(Param(p, "max_features")),
        seed_(seed) {}

  double Weight() const override {
    return trees_.empty() ? 0.0 : 1.0 / static_cast<double>(trees_.size());
  }

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int jobs) override {
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    const PresortedMatrix data(x, 0);
    const std::vector<double> grad = ToStd(y);
    const std::vector<double> ones(n, 1.0);
    const int features =
        max_features_ > 0 ? std::min(max_features_, d)
                          : std::max(1, static_cast<int>(std::floor(std::sqrt(d))));
    trees_.assign(n_trees_, Tree{});
    ParallelFor(n_trees_, jobs, [&](std::size_t t) {
      const uint64_t tree_seed = DeriveSeed(seed_, t);
      Rng rng(tree_seed);
      std::vector<double> weight(n, 0.0);
      for (int i = 0; i < n; ++i) weight[rng.Below(n)] += 1.0;
      GrowOptions opt;
      opt.max_depth = max_depth_;
      opt.min_samples_leaf = min_leaf_;
      opt.max_features = features;
      opt.seed = DeriveSeed(tree_seed, 1);
      trees_[t] = GrowTree(data, grad, ones, weight, opt);
    });
  }

 private:
  int n_trees_;
  int max_depth_;
  int min_leaf_;
  int max_features_;
  uint64_t seed_;
};

class Gbdt : public TreeModel {
 public:
  Gbdt(const HyperParams& p, uint64_t seed)
      : n_rounds_(Param(p, "n_rounds")),
        learning_rate_(p.at("learning_rate")),
        max_depth_(Param(p, "max_depth")),
        lambda_(p.at("lambda")),
        min_child_weight_(p.at("min_child_weight")),
        min_leaf_(Param(p, "min_samples_leaf")),
        max_bins_(Param(p, "max_bins")),
        max_features_(Param(p, "max_features")),
        seed_(seed) {}

  double Base() const override { return base_; }
  double Link(double margin) const override { return Sigmoid(margin); }

  void Fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, int) override {
    const int n = static_cast<int>(x.rows());
    const PresortedMatrix data(x, max_bins_);
    const double rate = std::clamp(y.cast<double>().mean(), 1e-6, 1 - 1e-6);
    base_ = std::log(rate / (1 - rate));
    std::vector<double> margin(n, base_), grad(n), hess(n);
    const std::vector<double> ones(n, 1.0);
    GrowOptions opt;
    opt.max_depth = max_depth_;
    opt.min_samples_leaf = min_leaf_;
    opt.min_child_weight = min_child_weight_;
    opt.lambda = lambda_;
    opt.leaf_scale = learning_rate_;
    opt.max_features = std::min(max_features_, static_cast<int>(x.cols()));
    trees_.clear();
    trees_.reserve(n_rounds_);
    for (int r = 0; r < n_rounds_; ++r) {
      for (int i = 0; i < n; ++i) {
        const double p = Sigmoid(margin[i]);
        grad[i] = y[i] - p;
        hess[i] = std::max(p * (1 - p), 1e-16);
      }
      opt.seed = DeriveSeed(seed_, static_cast<uint64_t>(r));
      Tree tree = GrowTree(data, grad, hess, ones, opt);
      for (int i = 0; i < n; ++i) margin[i] += tree.Predict(x.row(i));
      trees_.push_back(std::move(tree));
    }
  }

 protected:
  void LoadBase(double base) override { base_ = base; }

 private:
  int n_rounds_;
  double learning_rate_;
  int max_depth_;
  double lambda_;
  double min_child_weight_;
  int min_leaf_;
  int max_bins_;
  int max_features_;
  uint64_t seed_;
  double base_ = 0;
};

void CheckBinary(const Eigen::VectorXi& y) {
  int counts[2] = {0, 0};
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw ContractError("labels must be 0 or 1");
    ++counts[y[i]];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw ContractError("training data must contain both classes");
  }
}

}  // namespace

std::string_view FamilyName(Family family) {
  return kFamilyNames[static_cast<int>(family)];
}

Family ParseFamily(std::string_view name) {
  for (int i = 0; i < kNumFamilies; ++i) {
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  }
  throw ContractError("unknown model family '" + std::string(name) + "'");
}

bool IsTreeFamily(Family family) {
  return family == Family::kDecisionTree || family == Family::kRandomForest ||
         family == Family::kGbdt;
}

HyperParams ResolveParams(Family family, const HyperParams& given) {
  const auto& rules = Rules(family);
  for (const auto& [key, value] : given) {
    const bool known = std::any_of(rules.begin(), rules.end(),
                                   [&](const ParamRule& r) { return key == r.key; });
    if (!known) {
      throw ContractError("unknown hyperparameter '" + key + "' for " +
                          std::string(FamilyName(family)));
    }
  }
  HyperParams out;
  for (const ParamRule& r : rules) {
    auto it = given.find(r.key);
    const double v = it == given.end() ? r.default_value : it->second;
    const bool below = r.min_exclusive ? !(v > r.min) : !(v >= r.min);
    if (below || !(v <= r.max) || (r.integer && v != std::floor(v))) {
      throw ContractError(std::string(FamilyName(family)) + "." + r.key +
                          " = " + FormatDouble(v) + " is out of range");
    }
    out[r.key] = v;
  }
  return out;
}

std::vector<HyperParams> DefaultGrid(Family family) {
  std::vector<HyperParams> grid;
  switch (family) {
    case Family::kLogisticRegression:
      for (double l2 : {0.01, 0.1, 1.0, 10.0}) grid.push_back({{"l2", l2}});
      break;
    case Family::kRidge:
      for (double a : {0.1, 1.0, 10.0, 100.0}) grid.push_back({{"alpha", a}});
      break;
    case Family::kLda:
      for (double s : {0.0, 0.1, 0.3, 0.6}) grid.push_back({{"shrinkage", s}});
      break;
    case Family::kGaussianNb:
      for (double v : {1e-9, 1e-6, 1e-3}) grid.push_back({{"var_smoothing", v}});
      break;
    case Family::kKnn:
      for (double k : {1.0, 5.0, 11.0, 21.0}) grid.push_back({{"k", k}});
      break;
    case Family::kDecisionTree:
      for (double depth : {3.0, 5.0, 8.0, 12.0}) {
        for (double leaf : {1.0, 5.0}) {
          grid.push_back({{"max_depth", depth}, {"min_samples_leaf", leaf}});
        }
      }
      break;
    case Family::kRandomForest:
      for (double trees : {100.0, 300.0}) {
        for (double depth : {8.0, 16.0}) {
          grid.push_back({{"n_trees", trees}, {"max_depth", depth}});
        }
      }
      break;
    case Family::kGbdt:
      for (double depth : {3.0, 5.0, 7.0}) {
        for (double lr : {0.05, 0.1}) {
          for (double rounds : {200.0, 500.0}) {
            grid.push_back(
                {{"max_depth", depth}, {"learning_rate", lr}, {"n_rounds", rounds}});
          }
        }
      }
      break;
  }
  return grid;
}

double ComplexityKey(Family family, const HyperParams& given) {
  const HyperParams p = ResolveParams(family, given);
  switch (family) {
    case Family::kLogisticRegression: return 1.0 / p.at("l2");
    case Family::kRidge: return 1.0 / p.at("alpha");
    case Family::kLda: return 1.0 - p.at("shrinkage");
    case Family::kGaussianNb: return -p.at("var_smoothing");
    case Family::kKnn: return 1.0 / p.at("k");
    case Family::kDecisionTree:
      return p.at("max_depth") * 1e6 - p.at("min_samples_leaf");
    case Family::kRandomForest:
      return p.at("n_trees") * p.at("max_depth") - p.at("min_samples_leaf") * 1e-6;
    case Family::kGbdt:
      return p.at("n_rounds") * p.at("max_depth") * p.at("learning_rate");
  }
  return 0;
}

bool DefaultStandardize(Family family) {
  return family == Family::kLogisticRegression || family == Family::kRidge ||
         family == Family::kLda || family == Family::kKnn;
}

Metrics Evaluate(const std::vector<int>& predicted, const Eigen::VectorXi& truth) {
  if (predicted.empty() || static_cast<Eigen::Index>(predicted.size()) != truth.size()) {
    throw ContractError("evaluate needs equal, non-empty prediction and truth lists");
  }
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1, t = truth[static_cast<Eigen::Index>(i)] == 1;
    if (p && t) ++m.tp;
    else if (p) ++m.fp;
    else if (t) ++m.fn;
    else ++m.tn;
  }
  m.precision = m.tp + m.fp > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
  m.recall = m.tp + m.fn > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
  m.f1 = m.precision + m.recall > 0
             ? 2 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(predicted.size());
  return m;
}

std::vector<int> Estimator::Labels(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd s = Scores(x);
  std::vector<int> out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = s[i] >= Threshold() ? 1 : 0;
  return out;
}

Standardizer Standardizer::Fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  s.mean = x.colwise().mean();
  s.scale.resize(x.cols());
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean[j]).square().sum() / n;
    s.scale[j] = var > 0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

std::unique_ptr<Estimator> MakeEstimator(Family family, const HyperParams& given,
                                         uint64_t seed) {
  const HyperParams p = ResolveParams(family, given);
  switch (family) {
    case Family::kLogisticRegression: return std::make_unique<LogisticRegression>(p);
    case Family::kRidge: return std::make_unique<Ridge>(p);
    case Family::kLda: return std::make_unique<Lda>(p);
    case Family::kGaussianNb: return std::make_unique<GaussianNb>(p);
    case Family::kKnn: return std::make_unique<Knn>(p);
    case Family::kDecisionTree: return std::make_unique<DecisionTree>(p);
    case Family::kRandomForest: return std::make_unique<RandomForest>(p, seed);
    case Family::kGbdt: return std::make_unique<Gbdt>(p, seed);
  }
  throw ContractError("unknown model family");
}

TrainedModel TrainedModel::Fit(const ModelSpec& spec, const Dataset& train, int jobs) {
  if (train.rows() == 0 || train.cols() == 0) {
    throw ContractError("cannot fit on an empty matrix");
  }
  train.CheckFinite();
  CheckBinary(train.labels);
  TrainedModel model;
  model.spec_ = spec;
  model.spec_.params = ResolveParams(spec.family, spec.params);
  model.schema_hash_ = train.SchemaHash();
  model.columns_ = train.columns;
  if (spec.standardize) model.standardizer_ = Standardizer::Fit(train.x);
  auto estimator = MakeEstimator(spec.family, model.spec_.params, spec.seed);
  estimator->Fit(model.PreparedInputs(train), train.labels, jobs);
  for (const auto& w : estimator->warnings) std::cerr << "warning: " << w << "\n";
  model.estimator_ = std::move(estimator);
  return model;
}

Eigen::MatrixXd TrainedModel::PreparedInputs(const Dataset& data) const {
  if (data.SchemaHash() != schema_hash_) {
    throw SchemaError("feature schema does not match the model (expected " +
                      schema_hash_ + ", got " + data.SchemaHash() + ")");
  }
  return standardizer_ ? standardizer_->Apply(data.x) : data.x;
}

Predictions TrainedModel::Predict(const Dataset& data) const {
  const Eigen::MatrixXd x = PreparedInputs(data);
  return {estimator_->Labels(x), estimator_->Scores(x)};
}

Eigen::VectorXd TrainedModel::Margin(const Dataset& data) const {
  const auto* trees = dynamic_cast<const TreeModel*>(estimator_.get());
  if (trees == nullptr) {
    throw ContractError(std::string(FamilyName(spec_.family)) +
                        " is not a tree model; use permutation importance");
  }
  return trees->Margins(PreparedInputs(data));
}

TreeEnsembleView TrainedModel::Trees() const {
  const auto* trees = dynamic_cast<const TreeModel*>(estimator_.get());
  if (trees == nullptr) {
    throw ContractError(std::string(FamilyName(spec_.family)) +
                        " is not a tree model; use permutation importance");
  }
  return {&trees->trees(), trees->Base(), trees->Weight()};
}

std::string TrainedModel::Serialize() const {
  nlohmann::ordered_json j;
  j["format"] = "cprof-model";
  j["version"] = 1;
  j["family"] = FamilyName(spec_.family);
  j["params"] = spec_.params;
  j["seed"] = spec_.seed;
  j["standardize"] = spec_.standardize;
  j["schema_sha256"] = schema_hash_;
  j["columns"] = columns_;
  if (standardizer_) {
    j["standardizer"] = {{"mean", VectorJson(standardizer_->mean.transpose())},
                         {"scale", VectorJson(standardizer_->scale.transpose())}};
  } else {
    j["standardizer"] = nullptr;
  }
  j["warnings"] = estimator_->warnings;
  j["metadata"] = metadata;
  j["estimator"] = estimator_->ToJson();
  return j.dump() + "\n";
}

TrainedModel TrainedModel::Deserialize(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "cprof-model" || j.at("version") != 1) {
      throw SchemaError("not a version 1 cprof model artifact");
    }
    TrainedModel model;
    model.spec_.family = ParseFamily(j.at("family").get<std::string>());
    model.spec_.params =
        ResolveParams(model.spec_.family, j.at("params").get<HyperParams>());
    model.spec_.seed = j.at("seed").get<uint64_t>();
    model.spec_.standardize = j.at("standardize").get<bool>();
    model.schema_hash_ = j.at("schema_sha256").get<std::string>();
    model.columns_ = j.at("columns").get<std::vector<std::string>>();
    if (SchemaHash(model.columns_) != model.schema_hash_) {
      throw SchemaError("model columns do not match its schema hash");
    }
    if (!j.at("standardizer").is_null()) {
      Standardizer s;
      s.mean = VectorFrom(j["standardizer"].at("mean")).transpose();
      s.scale = VectorFrom(j["standardizer"].at("scale")).transpose();
      model.standardizer_ = s;
    }
    model.metadata = j.at("metadata");
    auto estimator = MakeEstimator(model.spec_.family, model.spec_.params,
                                   model.spec_.seed);
    estimator->FromJson(j.at("estimator"));
    estimator->warnings = j.at("warnings").get<std::vector<std::string>>();
    if (const auto* trees = dynamic_cast<const TreeModel*>(estimator.get())) {
      for (const Tree& t : trees->trees()) {
        t.Validate(static_cast<int>(model.columns_.size()));
      }
    }
    model.estimator_ = std::move(estimator);
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model artifact: ") + e.what());
  }
}

Split StratifiedSplit(const Eigen::VectorXi& labels, double test_fraction,
                      uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) {
    throw ContractError("test fraction must be in (0, 1)");
  }
  Split split;
  for (int c = 0; c < 2; ++c) {
    std::vector<int> members;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    }
    const int n = static_cast<int>(members.size());
    if (n < 2) {
      throw ContractError("stratified split needs at least 2 rows per class; class " +
                          std::to_string(c) + " has " + std::to_string(n));
    }
    // The small epsilon keeps exact halves (7210 * 0.15 = 1081.5) rounding up
    // despite binary representation error.
    int test = static_cast<int>(std::floor(n * test_fraction + 0.5 + 1e-9));
    test = std::clamp(test, 1, n - 1);
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(c)));
    rng.Shuffle(members);
    split.test.insert(split.test.end(), members.begin(), members.begin() + test);
    split.train.insert(split.train.end(), members.begin() + test, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<int> StratifiedFolds(const Eigen::VectorXi& labels, int k, uint64_t seed) {
  if (k < 2) throw ContractError("cross-validation needs k >= 2");
  std::vector<int> fold(labels.size(), -1);
  int next = 0;
  for (int c = 0; c < 2; ++c) {
    std::vector<int> members;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    }
    Rng rng(DeriveSeed(seed, 100 + static_cast<uint64_t>(c)));
    rng.Shuffle(members);
    for (int m : members) fold[m] = next++ % k;
  }
  return fold;
}

CvResult CrossValidate(const ModelSpec& base, const std::vector<HyperParams>& grid,
                       const Dataset& train, int k, int jobs) {
  if (grid.empty()) throw ContractError("hyperparameter grid is empty");
  const std::vector<int> fold = StratifiedFolds(train.labels, k, base.seed);
  std::vector<std::vector<int>> fit_rows(k), val_rows(k);
  for (int i = 0; i < train.rows(); ++i) {
    for (int f = 0; f < k; ++f) {
      (fold[i] == f ? val_rows : fit_rows)[f].push_back(i);
    }
  }
  for (int f = 0; f < k; ++f) {
    int pos_fit = 0, pos_val = 0;
    for (int i : fit_rows[f]) pos_fit += train.labels[i];
    for (int i : val_rows[f]) pos_val += train.labels[i];
    const int n_fit = static_cast<int>(fit_rows[f].size());
    const int n_val = static_cast<int>(val_rows[f].size());
    if (pos_fit == 0 || pos_fit == n_fit || pos_val == 0 || pos_val == n_val) {
      throw ContractError("fold " + std::to_string(f) + " is single-class (" +
                          std::to_string(pos_val) + " positives of " +
                          std::to_string(n_val) + " validation rows); use a smaller k");
    }
  }

  std::vector<Dataset> fit_sets, val_sets;
  for (int f = 0; f < k; ++f) {
    fit_sets.push_back(train.SelectRows(fit_rows[f]));
    val_sets.push_back(train.SelectRows(val_rows[f]));
  }

  CvResult result;
  result.grid.resize(grid.size());
  std::vector<double> scores(grid.size() * k);
  ParallelFor(scores.size(), jobs, [&](std::size_t task) {
    const std::size_t g = task / k;
    const int f = static_cast<int>(task % k);
    ModelSpec spec = base;
    spec.params = grid[g];
    const TrainedModel model = TrainedModel::Fit(spec, fit_sets[f], 1);
    scores[task] = Evaluate(model.Predict(val_sets[f]).labels, val_sets[f].labels).f1;
  });

  for (std::size_t g = 0; g < grid.size(); ++g) {
    GridResult& r = result.grid[g];
    r.params = ResolveParams(base.family, grid[g]);
    r.fold_f1.assign(scores.begin() + g * k, scores.begin() + (g + 1) * k);
    r.mean_f1 = std::accumulate(r.fold_f1.begin(), r.fold_f1.end(), 0.0) / k;
  }
  int best = 0;
  for (int g = 1; g < static_cast<int>(grid.size()); ++g) {
    const GridResult& a = result.grid[g];
    const GridResult& b = result.grid[best];
    if (a.mean_f1 > b.mean_f1 ||
        (a.mean_f1 == b.mean_f1 &&
         ComplexityKey(base.family, a.params) < ComplexityKey(base.family, b.params))) {
      best = g;
    }
  }
  result.best_index = best;
  result.best = base;
  result.best.params = result.grid[best].params;
  return result;
}

}  // namespace cprof
