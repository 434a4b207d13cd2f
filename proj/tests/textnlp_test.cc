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

#include "cprof/textnlp.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "cprof/common.h"

namespace cprof {
namespace {

std::vector<std::string> Surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<Pos> Tags(const Annotation& a) {
  std::vector<Pos> out;
  for (const auto& t : a.tokens) out.push_back(*t.pos);
  return out;
}

TEST(Tokenize, SplitsWordsPunctuationAndHashtags) {
  const auto tokens = Tokenize("Wake up! #truth");
  EXPECT_EQ(Surfaces(tokens), (std::vector<std::string>{"Wake", "up", "!", "#truth"}));
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].kind, TokenKind::kWord);
  EXPECT_EQ(tokens[1].kind, TokenKind::kWord);
  EXPECT_EQ(tokens[2].kind, TokenKind::kPunctuation);
  EXPECT_EQ(tokens[3].kind, TokenKind::kHashtag);
  EXPECT_EQ(tokens[3].lower, "truth");
}

TEST(Tokenize, EmptyTextHasNoTokens) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(Tokenize, UrlIsOneToken) {
  const auto tokens = Tokenize("see https://x.co/a");
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].surface, "see");
  EXPECT_EQ(tokens[1].kind, TokenKind::kUrl);
  EXPECT_EQ(tokens[1].surface, "https://x.co/a");
}

TEST(Tokenize, MentionsNumbersAndEmoji) {
  const auto tokens = Tokenize("@who said 42 \xF0\x9F\x98\x80");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].kind, TokenKind::kMention);
  EXPECT_EQ(tokens[2].kind, TokenKind::kNumber);
  EXPECT_EQ(tokens[3].kind, TokenKind::kOther);
}

TEST(SplitSentences, TerminatorsAndFragments) {
  EXPECT_EQ(Annotate("I know. They lie!").sentences.size(), 2u);
  EXPECT_EQ(Annotate("e.g. this works").sentences.size(), 1u);
  EXPECT_EQ(Annotate("no punctuation").sentences.size(), 1u);
  EXPECT_EQ(Annotate("line one\nline two").sentences.size(), 2u);
}

TEST(PosTag, LexiconAndSuffixRules) {
  EXPECT_EQ(Tags(Annotate("The cat sleeps")),
            (std::vector<Pos>{Pos::kDet, Pos::kNoun, Pos::kVerb}));
  EXPECT_EQ(Tags(Annotate("himself")), (std::vector<Pos>{Pos::kPron}));
}

TEST(PosTag, CapitalizedMidSentenceWordIsProperNoun) {
  const Annotation a = Annotate("Yes Brussels hides this");
  EXPECT_EQ(*a.tokens[1].pos, Pos::kPropn);
  EXPECT_EQ(*a.tokens[2].pos, Pos::kVerb);
  EXPECT_EQ(*a.tokens[3].pos, Pos::kPron);
}

TEST(Entities, MaximalProperNounRunsAndMentions) {
  EXPECT_EQ(Annotate("The New World Order controls").entities,
            (std::vector<Span>{{1, 4}}));
  EXPECT_TRUE(Annotate("they hide it").entities.empty());
  EXPECT_EQ(Annotate("@who and NATO").entities.size(), 2u);
}

TEST(NounChunks, PatternMatches) {
  const auto chunks = Annotate("the hidden truth").noun_chunks;
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].size(), 3);
  EXPECT_TRUE(Annotate("run quickly").noun_chunks.empty());
  EXPECT_EQ(Annotate("big pharma and deep state").noun_chunks.size(), 2u);
}

TEST(Syllables, Rules) {
  EXPECT_EQ(CountSyllables("cat"), 1);
  EXPECT_EQ(CountSyllables("table"), 2);
  EXPECT_EQ(CountSyllables("a"), 1);
  EXPECT_EQ(CountSyllables("make"), 1);
}

// Random strings over a small alphabet that exercises every token kind.
std::string RandomText(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "they", "The", "lie", " ", " ", "  ", ".", "!", "?", "#tag", "@user", "42",
      "e.g.", "https://t.co/x", "\xF0\x9F\x98\x80", "\n", "don't", ",", "NATO",
      "caf\xC3\xA9", "\xE2\x80\xA6", "\"", "(", ")", "-", "wake", "UP"};
  std::string s;
  const int n = static_cast<int>(rng.Below(30));
  for (int i = 0; i < n; ++i) {
    s += pieces[rng.Below(pieces.size())];
    if (rng.Below(2) == 0) s += " ";
  }
  return s;
}

TEST(AnnotateProperty, InvariantsHoldOnRandomText) {
  Rng rng(2024);
  for (int iter = 0; iter < 500; ++iter) {
    const std::string text = RandomText(rng);
    const Annotation a = Annotate(text);

    // Non-whitespace characters are reconstructed by the token surfaces.
    std::string expected, rebuilt;
    for (std::size_t i = 0; i < text.size();) {
      const CodePoint cp = DecodeUtf8(text, i);
      if (!IsWhitespace(cp.value)) expected.append(text, i, cp.length);
      i += cp.length;
    }
    for (const auto& t : a.tokens) {
      rebuilt += t.surface;
      ASSERT_FALSE(t.surface.empty());
      ASSERT_EQ(text.compare(t.offset, t.surface.size(), t.surface), 0);
      ASSERT_TRUE(t.pos.has_value());
      ASSERT_EQ(t.kind == TokenKind::kPunctuation, *t.pos == Pos::kPunct) << text;
    }
    ASSERT_EQ(rebuilt, expected) << text;

    // Sentences partition the tokens.
    int next = 0;
    for (const Span& s : a.sentences) {
      ASSERT_EQ(s.begin, next);
      ASSERT_GT(s.end, s.begin);
      next = s.end;
    }
    ASSERT_EQ(next, static_cast<int>(a.tokens.size()));

    for (const auto* layer : {&a.entities, &a.noun_chunks}) {
      int last_end = 0;
      for (const Span& s : *layer) {
        ASSERT_GE(s.begin, last_end) << "overlap in " << text;
        ASSERT_EQ(a.tokens[s.begin].sentence, a.tokens[s.end - 1].sentence);
        last_end = s.end;
      }
    }

    // Determinism.
    const Annotation again = Annotate(text);
    ASSERT_EQ(Surfaces(again.tokens), Surfaces(a.tokens));
    ASSERT_EQ(again.sentences, a.sentences);
    ASSERT_EQ(Tags(again), Tags(a));
  }
}

}  // namespace
}  // namespace cprof
