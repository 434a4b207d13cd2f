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

#include "cprof/corpus.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "cprof/common.h"

namespace cprof {
namespace {

using nlohmann::json;

std::string Line(const std::string& id, const std::string& user, const std::string& text,
                 int minute, const std::string& lang = "en", bool rt = false) {
  char ts[32];
  std::snprintf(ts, sizeof ts, "2021-03-%02dT%02d:%02d:00Z", 1 + minute / 1440,
                (minute / 60) % 24, minute % 60);
  return json{{"tweet_id", id}, {"user_id", user},  {"text", text},
              {"lang", lang},   {"created_at", ts}, {"is_retweet", rt}}
             .dump() + "\n";
}

UserTimeline Timeline(int originals, int retweets, int foreign = 0) {
  UserTimeline t;
  t.user_id = "u";
  t.label = Label::kConspiracy;
  int id = 0;
  auto add = [&](const std::string& text, const std::string& lang, bool rt) {
    Tweet tw;
    tw.tweet_id = std::to_string(1000 + id);
    tw.user_id = "u";
    tw.text = text;
    tw.lang = lang;
    tw.created_ms = 1'600'000'000'000LL + id * 60'000LL;
    tw.is_retweet = rt;
    t.tweets.push_back(tw);
    ++id;
  };
  for (int i = 0; i < originals; ++i) add("they lie to us " + std::to_string(i), "en", false);
  for (int i = 0; i < retweets; ++i) add("RT @x: shared", "en", i % 2 == 0);
  for (int i = 0; i < foreign; ++i) add("hola amigos", "es", false);
  std::sort(t.tweets.begin(), t.tweets.end(), NewerThan);
  return t;
}

TEST(ParseRfc3339, Forms) {
  EXPECT_EQ(ParseRfc3339("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(ParseRfc3339("1970-01-01T00:00:01.250Z"), 1250);
  EXPECT_EQ(ParseRfc3339("1970-01-01T02:00:00+02:00"), 0);
  EXPECT_FALSE(ParseRfc3339("yesterday").has_value());
  EXPECT_FALSE(ParseRfc3339("2021-13-01T00:00:00Z").has_value());
}

TEST(LoadTweets, GroupsByUser) {
  const std::string content = Line("1", "u1", "a", 1) + Line("2", "u1", "b", 2) +
                              Line("3", "u2", "c", 3) + Line("4", "u1", "d", 4) +
                              Line("5", "u2", "e", 5);
  const LoadResult r = LoadTweetsFromString(content, Label::kControl, "t");
  ASSERT_EQ(r.timelines.size(), 2u);
  EXPECT_EQ(r.timelines[0].user_id, "u1");
  EXPECT_EQ(r.timelines[0].tweets.size(), 3u);
  EXPECT_EQ(r.timelines[1].tweets.size(), 2u);
  EXPECT_EQ(r.timelines[0].tweets.front().tweet_id, "4");  // newest first
  EXPECT_EQ(r.malformed, 0u);
}

TEST(LoadTweets, EmptyFileWarns) {
  const LoadResult r = LoadTweetsFromString("", Label::kControl, "t");
  EXPECT_TRUE(r.timelines.empty());
  EXPECT_FALSE(r.warnings.empty());
}

TEST(LoadTweets, MissingTextIsSkipped) {
  std::string content;
  for (int i = 0; i < 12; ++i) content += Line(std::to_string(i), "u1", "hi", i);
  json bad = json::parse(Line("99", "u1", "x", 99));
  bad.erase("text");
  content += bad.dump() + "\n";
  const LoadResult r = LoadTweetsFromString(content, Label::kControl, "t");
  EXPECT_EQ(r.malformed, 1u);
  ASSERT_EQ(r.problems.size(), 1u);
  EXPECT_NE(r.problems[0].find("line 13"), std::string::npos) << r.problems[0];
  EXPECT_EQ(r.timelines[0].tweets.size(), 12u);
}

TEST(LoadTweets, TooManyMalformedLinesIsFatal) {
  const std::string content = Line("1", "u1", "hi", 1) + "{not json\n" + "[]\n";
  EXPECT_THROW(LoadTweetsFromString(content, Label::kControl, "t"), SchemaError);
}

TEST(PreprocessTimeline, CapsAtNewestHundred) {
  const UserTimeline t = Timeline(120, 30);
  const PreprocessOutcome out = PreprocessTimeline(t, {});
  ASSERT_TRUE(out.kept.has_value());
  EXPECT_EQ(out.kept->tweets.size(), 100u);
  EXPECT_EQ(out.retweets_removed, 30u);
  EXPECT_EQ(out.truncated, 20u);
  // The oldest 20 originals (ids 1000..1019) are the ones dropped.
  std::set<std::string> ids;
  for (const auto& tw : out.kept->tweets) ids.insert(tw.tweet_id);
  EXPECT_EQ(ids.count("1019"), 0u);
  EXPECT_EQ(ids.count("1020"), 1u);
  EXPECT_EQ(ids.count("1119"), 1u);
}

TEST(PreprocessTimeline, RejectsShortTimelines) {
  EXPECT_FALSE(PreprocessTimeline(Timeline(7, 5), {}).kept.has_value());
  EXPECT_FALSE(PreprocessTimeline(Timeline(9, 0, 4), {}).kept.has_value());
}

TEST(PreprocessTimeline, BoundaryPassesThrough) {
  const UserTimeline t = Timeline(10, 0);
  const PreprocessOutcome out = PreprocessTimeline(t, {});
  ASSERT_TRUE(out.kept.has_value());
  EXPECT_EQ(out.kept->tweets.size(), 10u);
  for (std::size_t i = 0; i < t.tweets.size(); ++i) {
    EXPECT_EQ(out.kept->tweets[i].tweet_id, t.tweets[i].tweet_id);
  }
}

TEST(PassesEnglishFilter, CodesAndStopWordFallback) {
  Tweet t;
  t.text = "whatever";
  t.lang = "en";
  EXPECT_TRUE(PassesEnglishFilter(t));
  t.lang = "es";
  t.text = "they are lying to us";
  EXPECT_FALSE(PassesEnglishFilter(t));
  t.lang = "";
  EXPECT_TRUE(PassesEnglishFilter(t));
  t.text = "hola amigos que tal";
  EXPECT_FALSE(PassesEnglishFilter(t));
}

TEST(PreprocessTimelineProperty, InputOrderDoesNotChangeSurvivors) {
  Rng rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    UserTimeline t = Timeline(static_cast<int>(rng.Below(130)), static_cast<int>(rng.Below(20)),
                              static_cast<int>(rng.Below(10)));
    const auto base = PreprocessTimeline(t, {});
    rng.Shuffle(t.tweets);
    const auto shuffled = PreprocessTimeline(t, {});
    ASSERT_EQ(base.kept.has_value(), shuffled.kept.has_value());
    if (!base.kept) continue;
    std::vector<std::string> a, b;
    for (const auto& tw : base.kept->tweets) a.push_back(tw.tweet_id);
    for (const auto& tw : shuffled.kept->tweets) b.push_back(tw.tweet_id);
    ASSERT_EQ(a, b);
    ASSERT_LE(a.size(), 100u);
    ASSERT_GE(a.size(), 10u);
  }
}

std::vector<UserTimeline> Users(int conspiracy, int control) {
  std::vector<UserTimeline> out;
  for (int i = 0; i < conspiracy; ++i) {
    out.push_back({"c" + std::to_string(i), Label::kConspiracy, {}});
  }
  for (int i = 0; i < control; ++i) out.push_back({"n" + std::to_string(i), Label::kControl, {}});
  return out;
}

std::vector<std::string> Ids(const std::vector<UserTimeline>& users, Label label) {
  std::vector<std::string> ids;
  for (const auto& u : users) {
    if (u.label == label) ids.push_back(u.user_id);
  }
  return ids;
}

TEST(BalanceDataset, UndersamplesMajority) {
  const auto balanced = BalanceDataset(Users(7358, 7210), 42);
  EXPECT_EQ(Ids(balanced, Label::kConspiracy).size(), 7210u);
  EXPECT_EQ(Ids(balanced, Label::kControl).size(), 7210u);
  const auto same = BalanceDataset(Users(50, 50), 1);
  EXPECT_EQ(same.size(), 100u);
}

TEST(BalanceDataset, SeedControlsTheSubset) {
  const auto a = Ids(BalanceDataset(Users(100, 40), 1), Label::kConspiracy);
  const auto b = Ids(BalanceDataset(Users(100, 40), 1), Label::kConspiracy);
  const auto c = Ids(BalanceDataset(Users(100, 40), 2), Label::kConspiracy);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(a.size(), 40u);
  // Input order does not matter.
  auto users = Users(100, 40);
  std::reverse(users.begin(), users.end());
  EXPECT_EQ(Ids(BalanceDataset(users, 1), Label::kConspiracy), a);
}

TEST(BalanceDataset, EmptyClassThrows) {
  EXPECT_THROW(BalanceDataset(Users(5, 0), 1), ContractError);
}

TEST(SerializeTimelines, RoundTrip) {
  std::vector<UserTimeline> users = {Timeline(3, 0)};
  users[0].tweets[0].text = "quote \" and newline\n and emoji \xF0\x9F\x98\x80";
  for (auto& tw : users[0].tweets) tw.created_at = "2021-03-01T00:00:00Z";
  const std::string text = SerializeTimelines(users);
  const auto parsed = ParseTimelines(text, "t");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].label, Label::kConspiracy);
  EXPECT_EQ(parsed[0].tweets[0].text, users[0].tweets[0].text);
  EXPECT_EQ(SerializeTimelines(parsed), text);
}

}  // namespace
}  // namespace cprof
