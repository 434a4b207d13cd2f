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

#ifndef CPROF_SYNTHETIC_H_
#define CPROF_SYNTHETIC_H_

#include <cstdint>
#include <string>

namespace cprof {

struct SyntheticOptions {
  int users_per_group = 100;
  int tweets_per_user = 20;
  uint64_t seed = 7;
};

// Two line-delimited tweet files in the ingest format (no label key).
struct SyntheticCorpus {
  std::string conspiracy;
  std::string control;
};

// Style-injected toy corpus. Conspiracy users draw most tweets from idiom
// phrasings with heavy "they/us" pronoun use and exclamation or question
// endings; control users mostly post everyday chatter with plain periods.
// Each user's mixing rate is random, and a few tweets per user are retweets
// or non-English so preprocessing has work to do. Every user keeps at least
// tweets_per_user - 5 tweets after filtering.
SyntheticCorpus GenerateSyntheticCorpus(const SyntheticOptions& options);

}  // namespace cprof

#endif  // CPROF_SYNTHETIC_H_
