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

#include <algorithm>
#include <json.hpp>
#include <map>
#include <set>

#include "cprof/lexicon.h"
#include "cprof/textnlp.h"

namespace cprof {

namespace {

using nlohmann::json;

bool AllDigits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int CompareIds(std::string_view a, std::string_view b) {
  if (AllDigits(a) && AllDigits(b)) {
    while (a.size() > 1 && a.front() == '0') a.remove_prefix(1);
    while (b.size() > 1 && b.front() == '0') b.remove_prefix(1);
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  }
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

// Days since 1970-01-01 of a proleptic Gregorian date.
int64_t DaysFromCivil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

bool IsLeap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

std::optional<std::string> IdField(const json& record, const char* key,
                                   std::string& out) {
  auto it = record.find(key);
  if (it == record.end()) return std::string("missing ") + key;
  if (it->is_string()) {
    out = it->get<std::string>();
  } else if (it->is_number_unsigned() || it->is_number_integer()) {
    out = it->dump();
  } else {
    return std::string(key) + " must be a string";
  }
  if (out.empty()) return std::string(key) + " is empty";
  return std::nullopt;
}

std::vector<UserTimeline> Group(std::vector<Tweet> tweets, Label label) {
  std::map<std::string, UserTimeline> users;
  for (Tweet& t : tweets) {
    UserTimeline& u = users[t.user_id];
    u.user_id = t.user_id;
    u.label = label;
    u.tweets.push_back(std::move(t));
  }
  std::vector<UserTimeline> out;
  out.reserve(users.size());
  for (auto& [id, u] : users) {
    std::stable_sort(u.tweets.begin(), u.tweets.end(), NewerThan);
    out.push_back(std::move(u));
  }
  return out;
}

json TweetJson(const Tweet& t, Label label) {
  nlohmann::ordered_json j;
  j["tweet_id"] = t.tweet_id;
  j["user_id"] = t.user_id;
  j["text"] = t.text;
  j["lang"] = t.lang;
  j["created_at"] = t.created_at;
  j["is_retweet"] = t.is_retweet;
  j["label"] = LabelName(label);
  return j;
}

}  // namespace

std::optional<int64_t> ParseRfc3339(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t n, int& value) {
    if (pos + n > s.size()) return false;
    value = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      value = value * 10 + (s[i] - '0');
    }
    return true;
  };
  int year, month, day, hour, minute, second;
  if (!digits(0, 4, year) || s.size() < 20 || s[4] != '-' ||
      !digits(5, 2, month) || s[7] != '-' || !digits(8, 2, day) ||
      (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !digits(11, 2, hour) ||
      s[13] != ':' || !digits(14, 2, minute) || s[16] != ':' ||
      !digits(17, 2, second)) {
    return std::nullopt;
  }
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12 || day < 1 ||
      day > kDays[month - 1] + (month == 2 && IsLeap(year) ? 1 : 0) ||
      hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  int64_t millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int scale = 100, count = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++count;
    }
    if (count == 0) return std::nullopt;
  }
  int64_t offset_minutes = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh, om;
    if (!digits(pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !digits(pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (oh * 60 + om) * (s[pos] == '+' ? 1 : -1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  const int64_t days = DaysFromCivil(year, static_cast<unsigned>(month),
                                     static_cast<unsigned>(day));
  const int64_t seconds = days * 86400 + hour * 3600 + minute * 60 + second -
                          offset_minutes * 60;
  return seconds * 1000 + millis;
}

bool NewerThan(const Tweet& a, const Tweet& b) {
  if (a.created_ms != b.created_ms) return a.created_ms > b.created_ms;
  return CompareIds(a.tweet_id, b.tweet_id) > 0;
}

std::optional<std::string> ParseTweetLine(std::string_view line, Tweet& out) {
  const json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) return "invalid JSON";
  if (!record.is_object()) return "record is not an object";
  out = Tweet{};
  if (auto e = IdField(record, "tweet_id", out.tweet_id)) return e;
  if (auto e = IdField(record, "user_id", out.user_id)) return e;

  auto text = record.find("text");
  if (text == record.end()) return "missing text";
  if (!text->is_string()) return "text must be a string";
  out.text = text->get<std::string>();
  if (out.text.empty()) return "text is empty";

  auto lang = record.find("lang");
  if (lang != record.end() && !lang->is_null()) {
    if (!lang->is_string()) return "lang must be a string";
    out.lang = lang->get<std::string>();
  }

  auto created = record.find("created_at");
  if (created == record.end()) return "missing created_at";
  if (!created->is_string()) return "created_at must be a string";
  out.created_at = created->get<std::string>();
  const auto ms = ParseRfc3339(out.created_at);
  if (!ms) return "created_at is not an RFC 3339 timestamp";
  out.created_ms = *ms;

  auto rt = record.find("is_retweet");
  if (rt != record.end() && !rt->is_null()) {
    if (!rt->is_boolean()) return "is_retweet must be a boolean";
    out.is_retweet = rt->get<bool>();
  }
  return std::nullopt;
}

LoadResult LoadTweets(const std::filesystem::path& path, Label label) {
  return LoadTweetsFromString(ReadFile(path), label, path.string());
}

LoadResult LoadTweetsFromString(std::string_view content, Label label,
                                const std::string& source_name) {
  LoadResult result;
  std::vector<Tweet> tweets;
  std::vector<std::size_t> bad_lines;
  std::size_t line_no = 0;
  for (std::string& line : SplitString(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++result.records;
    Tweet tweet;
    if (auto problem = ParseTweetLine(line, tweet)) {
      ++result.malformed;
      bad_lines.push_back(line_no);
      result.problems.push_back("line " + std::to_string(line_no) + ": " + *problem);
      continue;
    }
    tweets.push_back(std::move(tweet));
  }
  if (result.records == 0) {
    result.warnings.push_back(source_name + ": no records");
  }
  if (result.malformed * 10 > result.records) {
    std::string lines;
    for (std::size_t i = 0; i < bad_lines.size() && i < 20; ++i) {
      lines += (i ? ", " : "") + std::to_string(bad_lines[i]);
    }
    if (bad_lines.size() > 20) lines += ", ...";
    throw SchemaError(source_name + ": " + std::to_string(result.malformed) +
                      " of " + std::to_string(result.records) +
                      " records are malformed (limit 10%); lines " + lines +
                      "; first problem: " + result.problems.front());
  }
  result.timelines = Group(std::move(tweets), label);
  return result;
}

bool IsRetweet(const Tweet& tweet) {
  return tweet.is_retweet || tweet.text.rfind("RT @", 0) == 0;
}

bool PassesEnglishFilter(const Tweet& tweet) {
  if (!tweet.lang.empty()) return NormalizeTerm(tweet.lang) == "en";
  const Lexicon& lexicon = Lexicon::Default();
  std::set<std::string> distinct;
  std::size_t words = 0, stops = 0;
  for (const Token& t : Tokenize(tweet.text)) {
    if (t.kind != TokenKind::kWord) continue;
    ++words;
    if (lexicon.IsStopWord(t.lower)) {
      ++stops;
      distinct.insert(t.lower);
    }
  }
  return distinct.size() >= 2 || (words > 0 && stops * 100 >= 8 * words);
}

PreprocessOutcome PreprocessTimeline(const UserTimeline& timeline,
                                     const PreprocessOptions& options) {
  PreprocessOutcome outcome;
  UserTimeline kept;
  kept.user_id = timeline.user_id;
  kept.label = timeline.label;
  for (const Tweet& t : timeline.tweets) {
    if (IsRetweet(t)) {
      ++outcome.retweets_removed;
    } else if (!PassesEnglishFilter(t)) {
      ++outcome.non_english_removed;
    } else {
      kept.tweets.push_back(t);
    }
  }
  std::stable_sort(kept.tweets.begin(), kept.tweets.end(), NewerThan);
  const auto cap = static_cast<std::size_t>(options.max_tweets);
  if (kept.tweets.size() > cap) {
    outcome.truncated = kept.tweets.size() - cap;
    kept.tweets.resize(cap);
  }
  if (kept.tweets.size() >= static_cast<std::size_t>(options.min_tweets)) {
    outcome.kept = std::move(kept);
  }
  return outcome;
}

std::vector<UserTimeline> BalanceDataset(std::vector<UserTimeline> timelines,
                                         uint64_t seed) {
  std::vector<UserTimeline> groups[2];
  for (UserTimeline& t : timelines) {
    groups[LabelToInt(t.label)].push_back(std::move(t));
  }
  for (auto& g : groups) {
    std::sort(g.begin(), g.end(), [](const UserTimeline& a, const UserTimeline& b) {
      return a.user_id < b.user_id;
    });
  }
  if (groups[0].empty() || groups[1].empty()) {
    throw ContractError("balancing needs users in both groups (conspiracy: " +
                        std::to_string(groups[1].size()) + ", control: " +
                        std::to_string(groups[0].size()) + ")");
  }
  const std::size_t m = std::min(groups[0].size(), groups[1].size());
  for (auto& g : groups) {
    if (g.size() == m) continue;
    std::vector<std::size_t> order(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.Shuffle(order);
    order.resize(m);
    std::sort(order.begin(), order.end());
    std::vector<UserTimeline> selected;
    selected.reserve(m);
    for (std::size_t i : order) selected.push_back(std::move(g[i]));
    g = std::move(selected);
  }
  std::vector<UserTimeline> out;
  out.reserve(2 * m);
  for (int label : {1, 0}) {
    for (auto& t : groups[label]) out.push_back(std::move(t));
  }
  return out;
}

std::string SerializeTimelines(const std::vector<UserTimeline>& timelines) {
  std::string out;
  for (const UserTimeline& u : timelines) {
    for (const Tweet& t : u.tweets) {
      out += TweetJson(t, u.label).dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<UserTimeline> ParseTimelines(std::string_view content,
                                         const std::string& source_name) {
  std::vector<UserTimeline> out;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 0;
  for (const std::string& line : SplitString(content, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    Tweet tweet;
    if (auto problem = ParseTweetLine(line, tweet)) {
      throw SchemaError(where + ": " + *problem);
    }
    const json record = json::parse(line);
    if (!record.contains("label") || !record["label"].is_string()) {
      throw SchemaError(where + ": missing label");
    }
    const Label label = ParseLabel(record["label"].get<std::string>());
    auto [it, inserted] = index.emplace(tweet.user_id, out.size());
    if (inserted) {
      out.push_back(UserTimeline{tweet.user_id, label, {}});
    } else if (out[it->second].label != label) {
      throw SchemaError(where + ": user " + tweet.user_id + " has two labels");
    }
    out[it->second].tweets.push_back(std::move(tweet));
  }
  for (auto& u : out) std::stable_sort(u.tweets.begin(), u.tweets.end(), NewerThan);
  return out;
}

}  // namespace cprof
