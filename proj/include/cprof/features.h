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

#ifndef CPROF_FEATURES_H_
#define CPROF_FEATURES_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/lingfeat.h"
#include "cprof/zeroshot.h"

namespace cprof {

inline constexpr int kNumBaseFeatures =
    kNumEmotions + kNumIdioms + kNumLinguisticFeatures;  // 124
inline constexpr int kNumStatistics = 7;
inline constexpr int kNumUserColumns = kNumBaseFeatures * kNumStatistics;

enum class FeatureGroup {
  kEmotion,
  kIdiom,
  kLexical,
  kSyntactical,
  kSemantic,
  kStructural,
  kSubjectSpecific,
};
inline constexpr int kNumFeatureGroups = 7;

std::string_view FeatureGroupName(FeatureGroup group);

struct BaseFeature {
  std::string name;  // emotion label, idiom text, or linguistic column name
  FeatureGroup group;
  std::string definition;
};

// Emotions, then idioms, then the 72 linguistic columns.
const std::vector<BaseFeature>& BaseFeatures();

using TweetFeatureVector = std::array<double, kNumBaseFeatures>;

TweetFeatureVector ComposeTweetFeatures(const AgreementVector& agreement,
                                        const LinguisticVector& linguistic);

// mean, median, std, min, max, q1, q3
std::string_view StatisticName(int statistic);

// Feature-major: column = feature * 7 + statistic, named "stat(feature)".
const std::vector<std::string>& UserColumnNames();
inline int UserColumnIndex(int feature, int statistic) {
  return feature * kNumStatistics + statistic;
}
FeatureGroup UserColumnGroup(int column);

// sha256 of the column names joined by '\n'.
std::string SchemaHash(const std::vector<std::string>& columns);

// JSON document listing every base feature (name, group, definition), the
// group sizes, the statistic order and the user-column schema hash.
std::string SchemaManifestJson();

}  // namespace cprof

#endif  // CPROF_FEATURES_H_
