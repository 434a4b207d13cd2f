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

#ifndef CPROF_AGGREGATE_H_
#define CPROF_AGGREGATE_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cprof/common.h"
#include "cprof/features.h"

namespace cprof {

// mean, median, std, min, max, q1, q3 (StatisticName order).
using SeriesStats = std::array<double, kNumStatistics>;

// Sample std (n - 1), 0 for a singleton; quantiles interpolate linearly at
// position (n - 1) * p of the sorted series. Throws ContractError when empty.
SeriesStats DescribeSeries(std::span<const double> values);

// Linear-interpolation quantile of an ascending series.
double SortedQuantile(std::span<const double> sorted, double p);

struct UserTweetFeatures {
  std::string user_id;
  Label label = Label::kControl;
  std::vector<TweetFeatureVector> tweets;
};

struct UserFeatureRow {
  std::string user_id;
  Label label = Label::kControl;
  std::vector<double> values;  // kNumUserColumns, UserColumnNames() order
};

UserFeatureRow AggregateUser(const UserTweetFeatures& user);

// Rows sorted by user_id. Throws ContractError for a user without tweets.
std::vector<UserFeatureRow> BuildUserMatrix(
    const std::vector<UserTweetFeatures>& users, int jobs);

}  // namespace cprof

#endif  // CPROF_AGGREGATE_H_
