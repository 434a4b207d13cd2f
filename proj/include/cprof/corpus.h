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

#ifndef CPROF_CORPUS_H_
#define CPROF_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/common.h"

namespace cprof {

struct Tweet {
  std::string tweet_id;
  std::string user_id;
  std::string text;
  std::string lang;        // ISO-639-1 code or empty
  std::string created_at;  // RFC 3339 as given
  int64_t created_ms = 0;  // parsed created_at, UTC milliseconds
  bool is_retweet = false;
};

struct UserTimeline {
  std::string user_id;
  Label label = Label::kControl;
  std::vector<Tweet> tweets;  // newest first
};

// Parses an RFC 3339 timestamp ("2020-05-01T12:00:00Z",
// "2020-05-01T12:00:00.250+02:00") into UTC milliseconds.
std::optional<int64_t> ParseRfc3339(std::string_view text);

// Newest first: created_at descending, then tweet_id descending (numeric ids
// compare numerically).
bool NewerThan(const Tweet& a, const Tweet& b);

// Validates one JSON line against the tweet schema; returns the problem, or
// nullopt when the record is valid.
std::optional<std::string> ParseTweetLine(std::string_view line, Tweet& out);

struct LoadResult {
  std::vector<UserTimeline> timelines;  // sorted by user_id
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::vector<std::string> problems;  // "line N: reason"
  std::vector<std::string> warnings;
};

// Throws IoError when unreadable and SchemaError when more than 10% of the
// non-blank lines are malformed.
LoadResult LoadTweets(const std::filesystem::path& path, Label label);
LoadResult LoadTweetsFromString(std::string_view content, Label label,
                                const std::string& source_name);

struct PreprocessOptions {
  int min_tweets = 10;
  int max_tweets = 100;
};

struct PreprocessOutcome {
  std::optional<UserTimeline> kept;  // empty when the user is rejected
  std::size_t retweets_removed = 0;
  std::size_t non_english_removed = 0;
  std::size_t truncated = 0;
};

bool IsRetweet(const Tweet& tweet);
// "en" passes, any other code fails; an empty code falls back to the
// stop-word test (>= 2 distinct stop words, or >= 8% of word tokens).
bool PassesEnglishFilter(const Tweet& tweet);

// Retweet filter, language filter, newest-N cap, then the minimum check.
PreprocessOutcome PreprocessTimeline(const UserTimeline& timeline,
                                     const PreprocessOptions& options);

// Keeps a uniformly random subset of the majority class equal in size to the
// minority class: majority users sorted by id, Fisher-Yates shuffled with
// Rng(seed), first m taken. Output: conspiracy users then control users,
// each sorted by id. Throws ContractError when a class is empty.
std::vector<UserTimeline> BalanceDataset(std::vector<UserTimeline> timelines,
                                         uint64_t seed);

// One JSON object per tweet (input keys plus "label"), users in the given
// order, tweets newest first.
std::string SerializeTimelines(const std::vector<UserTimeline>& timelines);
// Inverse of SerializeTimelines; the label comes from each record.
std::vector<UserTimeline> ParseTimelines(std::string_view content,
                                         const std::string& source_name);

}  // namespace cprof

#endif  // CPROF_CORPUS_H_
