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

#include "cprof/aggregate.h"

#include <algorithm>
#include <cmath>

namespace cprof {

double SortedQuantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractError("quantile of an empty series");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

SeriesStats DescribeSeries(std::span<const double> values) {
  if (values.empty()) throw ContractError("describe_series needs n >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double sum = 0;
  for (double v : sorted) sum += v;
  double mean = sum / n;
  // Rounding can push the mean of a near-constant series past its range.
  mean = std::clamp(mean, sorted.front(), sorted.back());

  double ss = 0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double std_dev = sorted.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

  return {mean,
          SortedQuantile(sorted, 0.5),
          std_dev,
          sorted.front(),
          sorted.back(),
          SortedQuantile(sorted, 0.25),
          SortedQuantile(sorted, 0.75)};
}

UserFeatureRow AggregateUser(const UserTweetFeatures& user) {
  if (user.tweets.empty()) {
    throw ContractError("user " + user.user_id + " has no scored tweets");
  }
  UserFeatureRow row;
  row.user_id = user.user_id;
  row.label = user.label;
  row.values.resize(kNumUserColumns);
  std::vector<double> series(user.tweets.size());
  for (int f = 0; f < kNumBaseFeatures; ++f) {
    for (std::size_t t = 0; t < user.tweets.size(); ++t) {
      series[t] = user.tweets[t][f];
    }
    const SeriesStats stats = DescribeSeries(series);
    std::copy(stats.begin(), stats.end(),
              row.values.begin() + UserColumnIndex(f, 0));
  }
  return row;
}

std::vector<UserFeatureRow> BuildUserMatrix(
    const std::vector<UserTweetFeatures>& users, int jobs) {
  std::vector<std::size_t> order(users.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return users[a].user_id < users[b].user_id;
  });
  std::vector<UserFeatureRow> rows(users.size());
  ParallelFor(order.size(), jobs,
              [&](std::size_t i) { rows[i] = AggregateUser(users[order[i]]); });
  return rows;
}

}  // namespace cprof
