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

#ifndef CPROF_LINGFEAT_H_
#define CPROF_LINGFEAT_H_

#include <array>
#include <string_view>

#include "cprof/textnlp.h"

namespace cprof {

inline constexpr int kNumLinguisticFeatures = 72;
inline constexpr int kNumReadabilityIndices = 9;

enum class LinguisticGroup {
  kLexical,
  kSyntactical,
  kSemantic,
  kStructural,
  kSubjectSpecific,
};

std::string_view LinguisticGroupName(LinguisticGroup group);

struct LinguisticFeatureInfo {
  std::string_view name;
  LinguisticGroup group;
  std::string_view definition;
};

// Frozen column order: lexical (22), syntactical (20), semantic (16),
// structural (5), subject-specific (9). `avg_word_length` appears in both the
// lexical and the structural block and always carries the same value.
const std::array<LinguisticFeatureInfo, kNumLinguisticFeatures>&
LinguisticSchema();

using LinguisticVector = std::array<double, kNumLinguisticFeatures>;

// All 72 features of one annotated tweet. Ratios with an empty denominator
// are 0, so the vector is always finite.
LinguisticVector ExtractLinguistic(const Annotation& annotation);

// Index of the first schema column with this name; throws ContractError.
int LinguisticIndex(std::string_view name);

struct ClauseCounts {
  int coordinate = 0;
  int subordinate = 0;
  int relative = 0;
  int complementation = 0;
};

// coordinate: CCONJ with a VERB/AUX before and after it in its sentence.
// subordinate: SCONJ followed later in the sentence by a VERB/AUX.
// relative: relative pronoun, not sentence-initial, directly followed by a
//   VERB/AUX.
// complementation: "that", "whether" or "if" directly after a VERB.
ClauseCounts CountClauses(const Annotation& annotation);

// flesch_reading_ease, smog_index, flesch_kincaid_grade, coleman_liau_index,
// automated_readability_index, dale_chall_readability_score,
// difficult_words, linsear_write_formula, gunning_fog. All zero when the
// text has no words.
std::array<double, kNumReadabilityIndices> ReadabilityIndices(
    const Annotation& annotation);

}  // namespace cprof

#endif  // CPROF_LINGFEAT_H_
