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

#include "cprof/synthetic.h"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <ctime>
#include <string_view>
#include <vector>

#include "cprof/common.h"

namespace cprof {

namespace {

constexpr std::array<std::string_view, 14> kIdiomPhrases = {
    "wake up", "follow the money", "they don't want us to know the truth",
    "question everything", "trust no one", "the truth is out there",
    "they're trying to silence us", "it's a cover-up",
    "we need to dig deeper and uncover the truth", "they are pulling the strings",
    "it all happens behind closed doors", "they want to keep us in the dark",
    "we have to stick together", "the truth is hidden"};

constexpr std::array<std::string_view, 10> kSubjects = {
    "the vaccine rollout", "the election", "the new towers", "the central bank",
    "the media", "big pharma", "the government", "the health agency",
    "the weather program", "the food supply"};

constexpr std::array<std::string_view, 8> kConspiracyFrames = {
    "They lie to us about {s} every single day",
    "Why is nobody asking about {s}",
    "They think we will never find out what they did with {s}",
    "Look at who profits from {s}",
    "They hide everything about {s} from us",
    "Do they really think we believe their story on {s}",
    "We see what they are doing with {s}",
    "Nobody in charge will tell us the facts about {s}"};

constexpr std::array<std::string_view, 16> kControlTweets = {
    "Had a great lunch with friends at the new cafe today.",
    "The weather this morning is lovely, perfect for a walk.",
    "Just finished reading a good book about gardening.",
    "Our team won the match last night, what a game.",
    "Looking forward to the weekend hike with the family.",
    "The new pasta recipe turned out really well.",
    "Congrats to everyone who ran the marathon today.",
    "The concert downtown was amazing, great music all night.",
    "Got my flu shot at the pharmacy this afternoon.",
    "Watching the election coverage with a cup of tea.",
    "Planted tomatoes and basil in the garden this evening.",
    "Finally fixed the old bike, riding to work tomorrow.",
    "Trying a new coffee place near the office.",
    "The museum has a lovely exhibit on local history.",
    "Spent the afternoon cleaning the garage, very satisfying.",
    "Our daughter started piano lessons this week."};

constexpr std::array<std::string_view, 6> kForeignTweets = {
    "Buenos dias a todos, que tengan un buen dia",
    "Che bella giornata oggi al mare",
    "Bonjour tout le monde, il fait beau aujourd'hui",
    "Guten Morgen, heute ist ein schoner Tag",
    "Obrigado pela ajuda de ontem",
    "Hoy vamos al parque con los ninos"};

constexpr std::array<std::string_view, 6> kShouts = {"!", "!!", "?!", "?", ".", "..."};

std::string Pick(Rng& rng, const auto& options) {
  return std::string(options[rng.Below(options.size())]);
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string ConspiracyTweet(Rng& rng) {
  std::string frame = Pick(rng, kConspiracyFrames);
  const std::string subject = Pick(rng, kSubjects);
  frame.replace(frame.find("{s}"), 3, subject);
  std::string text = frame + Pick(rng, kShouts);
  const std::string idiom = Pick(rng, kIdiomPhrases);
  switch (rng.Below(3)) {
    case 0: text += " " + Capitalize(idiom) + Pick(rng, kShouts); break;
    case 1: text = Capitalize(idiom) + Pick(rng, kShouts) + " " + text; break;
    default: text += " " + Capitalize(idiom) + "!!! WAKE UP!"; break;
  }
  return text;
}

std::string Timestamp(int64_t seconds) {
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string GenerateGroup(const SyntheticOptions& options, bool conspiracy,
                          uint64_t& next_tweet_id) {
  std::string out;
  const std::string prefix = conspiracy ? "c" : "n";
  for (int u = 0; u < options.users_per_group; ++u) {
    Rng rng(DeriveSeed(options.seed, (conspiracy ? 1'000'000 : 0) + static_cast<uint64_t>(u)));
    char id[16];
    std::snprintf(id, sizeof id, "%s%04d", prefix.c_str(), u);
    // Share of tweets drawn from the conspiratorial style.
    const double style_rate =
        conspiracy ? 0.45 + 0.4 * rng.Uniform() : 0.15 * rng.Uniform();
    const int retweets = static_cast<int>(rng.Below(3));
    const int foreign = static_cast<int>(rng.Below(3));
    // The style count is fixed from the rate, so the two groups' ranges
    // never overlap; only the positions are random.
    const int english = options.tweets_per_user - retweets - foreign;
    const int styled = static_cast<int>(std::lround(style_rate * english));
    std::vector<char> is_styled(english, 0);
    std::fill(is_styled.begin(), is_styled.begin() + styled, 1);
    rng.Shuffle(is_styled);
    int64_t clock = 1672531200 + static_cast<int64_t>(rng.Below(86400 * 30));
    for (int k = 0; k < options.tweets_per_user; ++k) {
      clock += 600 + static_cast<int64_t>(rng.Below(86400 * 2));
      nlohmann::ordered_json record;
      std::string text;
      std::string lang = "en";
      bool is_retweet = false;
      if (k < retweets) {
        text = "RT @newsdesk: " + Pick(rng, kControlTweets);
        is_retweet = rng.Below(2) == 0;
      } else if (k < retweets + foreign) {
        text = Pick(rng, kForeignTweets);
        lang = rng.Below(2) == 0 ? "es" : "";
      } else {
        if (is_styled[k - retweets - foreign]) {
          text = ConspiracyTweet(rng);
        } else {
          text = Pick(rng, kControlTweets);
          // Everyday chatter gets excited too.
          if (rng.Below(3) == 0) text.back() = '!';
        }
        if (rng.Below(5) == 0) lang = "";
      }
      record["tweet_id"] = std::to_string(next_tweet_id++);
      record["user_id"] = id;
      record["text"] = text;
      record["lang"] = lang;
      record["created_at"] = Timestamp(clock);
      record["is_retweet"] = is_retweet;
      out += record.dump() + "\n";
    }
  }
  return out;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticOptions& options) {
  if (options.users_per_group < 1 || options.tweets_per_user < 15) {
    throw ContractError("synthetic corpus needs >= 1 user per group and >= 15 tweets per user");
  }
  uint64_t next_id = 1000000;
  SyntheticCorpus corpus;
  corpus.conspiracy = GenerateGroup(options, true, next_id);
  corpus.control = GenerateGroup(options, false, next_id);
  return corpus;
}

}  // namespace cprof
