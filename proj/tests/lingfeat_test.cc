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

#include "cprof/lingfeat.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cprof/common.h"
#include "cprof/textnlp.h"

namespace cprof {
namespace {

double Feature(const LinguisticVector& v, std::string_view name) {
  return v[LinguisticIndex(name)];
}

LinguisticVector Extract(std::string_view text) { return ExtractLinguistic(Annotate(text)); }

TEST(LinguisticSchema, GroupSizesAndNames) {
  const auto& schema = LinguisticSchema();
  ASSERT_EQ(schema.size(), 72u);
  std::map<LinguisticGroup, int> sizes;
  for (const auto& info : schema) ++sizes[info.group];
  EXPECT_EQ(sizes[LinguisticGroup::kLexical], 22);
  EXPECT_EQ(sizes[LinguisticGroup::kSyntactical], 20);
  EXPECT_EQ(sizes[LinguisticGroup::kSemantic], 16);
  EXPECT_EQ(sizes[LinguisticGroup::kStructural], 5);
  EXPECT_EQ(sizes[LinguisticGroup::kSubjectSpecific], 9);
  EXPECT_EQ(schema.front().name, "num_words");
  EXPECT_EQ(schema.back().name, "gunning_fog");
  EXPECT_NO_THROW(LinguisticIndex("1st_person_pronouns"));
  EXPECT_NO_THROW(LinguisticIndex("2nd_person_pronouns"));
  EXPECT_THROW(LinguisticIndex("no_such_feature"), ContractError);
  // Groups are contiguous blocks.
  for (std::size_t i = 1; i < schema.size(); ++i) {
    EXPECT_LE(static_cast<int>(schema[i - 1].group), static_cast<int>(schema[i].group));
  }
}

TEST(ExtractLinguistic, HandCountedExample) {
  const auto v = Extract("Wake up! They lie to us.");
  EXPECT_EQ(Feature(v, "num_sentences"), 2);
  EXPECT_EQ(Feature(v, "num_exclamation_marks"), 1);
  EXPECT_EQ(Feature(v, "num_words"), 6);
  EXPECT_EQ(Feature(v, "num_personal_pronouns"), 2);
  EXPECT_EQ(Feature(v, "num_punct"), 2);
}

TEST(ExtractLinguistic, RepeatedQuestion) {
  const auto v = Extract("Why? Why? Why?");
  EXPECT_EQ(Feature(v, "num_question_marks"), 3);
  EXPECT_EQ(Feature(v, "num_unique_words"), 1);
  EXPECT_EQ(Feature(v, "num_sentences"), 3);
}

TEST(ExtractLinguistic, EmptyTextIsAllZero) {
  const auto v = Extract("");
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v[i], 0.0) << LinguisticSchema()[i].name;
  }
}

TEST(CountClauses, RuleExamples) {
  EXPECT_EQ(CountClauses(Annotate("They lie and they cheat.")).coordinate, 1);
  EXPECT_EQ(CountClauses(Annotate("Wake up because they lie.")).subordinate, 1);
  EXPECT_EQ(CountClauses(Annotate("The man who knows.")).relative, 1);
  EXPECT_EQ(CountClauses(Annotate("I know that they lie.")).complementation, 1);
  const ClauseCounts none = CountClauses(Annotate("Cats and dogs."));
  EXPECT_EQ(none.coordinate, 0);
}

TEST(Readability, FleschByHand) {
  // 6 words, 1 sentence, 6 syllables: 206.835 - 1.015 * 6 - 84.6 * 1.
  EXPECT_NEAR(ReadabilityIndices(Annotate("The cat sat on the mat."))[0], 116.145, 1e-9);
  // One word of one syllable: 206.835 - 1.015 - 84.6.
  EXPECT_NEAR(ReadabilityIndices(Annotate("go"))[0], 121.22, 1e-9);
  for (double x : ReadabilityIndices(Annotate(""))) EXPECT_EQ(x, 0.0);
}

TEST(Readability, FleschKincaidAndFogByHand) {
  const auto r = ReadabilityIndices(Annotate("The cat sat on the mat."));
  // 0.39 * 6 + 11.8 * 1 - 15.59
  EXPECT_NEAR(r[2], 0.39 * 6 + 11.8 - 15.59, 1e-9);
  // No complex words: 0.4 * (6 + 0).
  EXPECT_NEAR(r[8], 0.4 * 6, 1e-9);
  EXPECT_EQ(r[6], 0.0);
}

std::string RandomTweet(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "They", "lie", "to", "us", "and", "we", "know", "because", "the", "truth",
      "is", "hidden", ".", "!", "?", "WAKE", "UP", "#truth", "@user", "\xF0\x9F\x98\x80",
      "Brussels", "who", "that", "not", "can't", "each", "other", "beautiful",
      "information", "was", "taken", "quickly", "in", "42", ","};
  std::string s;
  const int n = static_cast<int>(rng.Below(40));
  for (int i = 0; i < n; ++i) s += pieces[rng.Below(pieces.size())] + " ";
  return s;
}

TEST(ExtractLinguisticProperty, InvariantsOnRandomTweets) {
  Rng rng(99);
  const int lex_awl = LinguisticIndex("avg_word_length");
  int structural_awl = -1;
  const auto& schema = LinguisticSchema();
  for (int i = 0; i < 72; ++i) {
    if (schema[i].name == "avg_word_length" && i != lex_awl) structural_awl = i;
  }
  ASSERT_GE(structural_awl, 0);

  for (int iter = 0; iter < 400; ++iter) {
    const std::string text = RandomTweet(rng);
    const auto v = Extract(text);
    for (double x : v) ASSERT_TRUE(std::isfinite(x)) << text;
    const double words = Feature(v, "num_words");
    ASSERT_LE(Feature(v, "num_unique_words"), words);
    ASSERT_LE(Feature(v, "num_upper_case_words") + Feature(v, "num_lower_case_words") +
                  Feature(v, "num_title_case_words"),
              words);
    ASSERT_EQ(v[lex_awl], v[structural_awl]);
    const double voc = Feature(v, "voc_rich");
    ASSERT_GE(voc, 0.0);
    ASSERT_LE(voc, 1.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (schema[j].name.starts_with("num_") && schema[j].name.find("freq") == std::string_view::npos &&
          schema[j].name.find("avg") == std::string_view::npos) {
        ASSERT_GE(v[j], 0.0);
        ASSERT_EQ(v[j], std::floor(v[j])) << schema[j].name;
      }
    }
  }
}

TEST(ExtractLinguisticProperty, SelfConcatenationDoublesCountsKeepsRatios) {
  // Sentence-terminated tweets so the copy starts a fresh sentence.
  const std::vector<std::string> tweets = {
      "They lie to us. Wake up!", "The man who knows the truth is hidden.",
      "We can't trust them and they know it!", "Why? Why? Why?"};
  for (const auto& t : tweets) {
    const auto once = Extract(t);
    const auto twice = Extract(t + " " + t);
    for (std::string_view count : {"num_words", "num_punct", "num_sentences", "num_nouns",
                                   "num_verbs", "num_noun_chunks", "num_personal_pronouns"}) {
      EXPECT_EQ(Feature(twice, count), 2 * Feature(once, count)) << t << " " << count;
    }
    for (std::string_view ratio : {"avg_word_length", "punctuation_freq",
                                   "avg_num_words_per_sentence", "avg_sentence_length",
                                   "proper_noun_ratio", "num_caps_word_freq"}) {
      EXPECT_NEAR(Feature(twice, ratio), Feature(once, ratio), 1e-12) << t << " " << ratio;
    }
  }
}

TEST(Readability, FiniteOnFuzzCorpus) {
  Rng rng(5);
  std::vector<std::string> corpus = {"", "\xF0\x9F\x98\x80\xF0\x9F\x98\x82", "!!!", "#tag",
                                     "https://t.co/x"};
  while (corpus.size() < 50) corpus.push_back(RandomTweet(rng));
  for (const auto& t : corpus) {
    for (double x : ReadabilityIndices(Annotate(t))) EXPECT_TRUE(std::isfinite(x)) << t;
  }
}

}  // namespace
}  // namespace cprof
