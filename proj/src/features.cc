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

#include "cprof/features.h"

#include <json.hpp>

#include <algorithm>

#include "cprof/common.h"

namespace cprof {

namespace {

constexpr std::array<std::string_view, kNumStatistics> kStatistics = {
    "mean", "median", "std", "min", "max", "q1", "q3"};

FeatureGroup FromLinguistic(LinguisticGroup group) {
  switch (group) {
    case LinguisticGroup::kLexical: return FeatureGroup::kLexical;
    case LinguisticGroup::kSyntactical: return FeatureGroup::kSyntactical;
    case LinguisticGroup::kSemantic: return FeatureGroup::kSemantic;
    case LinguisticGroup::kStructural: return FeatureGroup::kStructural;
    case LinguisticGroup::kSubjectSpecific: return FeatureGroup::kSubjectSpecific;
  }
  return FeatureGroup::kLexical;
}

std::vector<BaseFeature> BuildBaseFeatures() {
  const Lexicon& lexicon = Lexicon::Default();
  std::vector<BaseFeature> features;
  features.reserve(kNumBaseFeatures);
  for (const auto& emotion : lexicon.EmotionLabels()) {
    features.push_back({emotion, FeatureGroup::kEmotion,
                        "agreement with \"" + EmotionHypothesis(emotion) + "\""});
  }
  for (const auto& idiom : lexicon.Idioms()) {
    features.push_back({idiom, FeatureGroup::kIdiom, "agreement with the idiom"});
  }
  for (const auto& info : LinguisticSchema()) {
    features.push_back({std::string(info.name), FromLinguistic(info.group),
                        std::string(info.definition)});
  }
  return features;
}

}  // namespace

std::string_view FeatureGroupName(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::kEmotion: return "emotion";
    case FeatureGroup::kIdiom: return "idiom";
    case FeatureGroup::kLexical: return "lexical";
    case FeatureGroup::kSyntactical: return "syntactical";
    case FeatureGroup::kSemantic: return "semantic";
    case FeatureGroup::kStructural: return "structural";
    case FeatureGroup::kSubjectSpecific: return "subject_specific";
  }
  return "lexical";
}

const std::vector<BaseFeature>& BaseFeatures() {
  static const std::vector<BaseFeature> features = BuildBaseFeatures();
  return features;
}

TweetFeatureVector ComposeTweetFeatures(const AgreementVector& agreement,
                                        const LinguisticVector& linguistic) {
  TweetFeatureVector v{};
  auto it = std::copy(agreement.emotions.begin(), agreement.emotions.end(), v.begin());
  it = std::copy(agreement.idioms.begin(), agreement.idioms.end(), it);
  std::copy(linguistic.begin(), linguistic.end(), it);
  return v;
}

std::string_view StatisticName(int statistic) {
  return kStatistics.at(static_cast<std::size_t>(statistic));
}

const std::vector<std::string>& UserColumnNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kNumUserColumns);
    for (const auto& f : BaseFeatures()) {
      for (std::string_view stat : kStatistics) {
        out.push_back(std::string(stat) + "(" + f.name + ")");
      }
    }
    return out;
  }();
  return names;
}

FeatureGroup UserColumnGroup(int column) {
  return BaseFeatures().at(column / kNumStatistics).group;
}

std::string SchemaHash(const std::vector<std::string>& columns) {
  std::string joined;
  for (const auto& c : columns) {
    joined += c;
    joined += '\n';
  }
  return Sha256Hex(joined);
}

std::string SchemaManifestJson() {
  nlohmann::ordered_json doc;
  doc["base_features"] = nlohmann::ordered_json::array();
  std::array<int, kNumFeatureGroups> sizes{};
  for (const auto& f : BaseFeatures()) {
    ++sizes[static_cast<int>(f.group)];
    doc["base_features"].push_back({{"name", f.name},
                                    {"group", FeatureGroupName(f.group)},
                                    {"definition", f.definition}});
  }
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (int g = 0; g < kNumFeatureGroups; ++g) {
    groups[std::string(FeatureGroupName(static_cast<FeatureGroup>(g)))] = sizes[g];
  }
  doc["group_sizes"] = groups;
  doc["statistics"] = kStatistics;
  doc["quantile_method"] = "linear interpolation, position (n-1)p";
  doc["std_convention"] = "sample (n-1), 0 when n = 1";
  doc["num_base_features"] = kNumBaseFeatures;
  doc["num_user_columns"] = kNumUserColumns;
  doc["user_schema_sha256"] = SchemaHash(UserColumnNames());
  return doc.dump(2) + "\n";
}

}  // namespace cprof
