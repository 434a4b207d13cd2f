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

#include "cprof/resources.h"

#include <gtest/gtest.h>

#include <string>

#include "cprof/common.h"
#include "cprof/lexicon.h"

namespace cprof {
namespace {

TEST(Resources, ManifestMatchesEmbeddedFiles) {
  const auto checks = VerifyResourceManifest();
  EXPECT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.path << " " << c.actual;
}

TEST(Resources, UnknownPathThrows) {
  EXPECT_THROW(Resource("lexicon/nope.tsv"), ContractError);
  EXPECT_FALSE(Resource("lexicon/stopwords.tsv").empty());
}

TEST(Resources, ConstantsHaveExpectedCounts) {
  EXPECT_EQ(ParseTsv(Resource("constants/emotions.tsv"), "emotions").size(), 8u);
  EXPECT_EQ(ParseTsv(Resource("constants/idioms.tsv"), "idioms").size(), 44u);
}

TEST(ParseTsv, SkipsCommentsAndRejectsMalformedLines) {
  const auto entries = ParseTsv("# version: 3\n\nfoo\tNOUN\nbar\tVERB\n", "t");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[1].term, "bar");
  EXPECT_EQ(entries[1].tag, "VERB");
  EXPECT_EQ(TsvVersion("# version: 3\nfoo\tNOUN\n"), 3);
  EXPECT_EQ(TsvVersion("foo\tNOUN\n"), 0);
  EXPECT_THROW(ParseTsv("no tab here\n", "t"), SchemaError);
  EXPECT_THROW(ParseTsv("a\tb\tc\n", "t"), SchemaError);
}

TEST(Lexicon, ParsesPosNames) {
  EXPECT_EQ(ParsePos("NOUN"), Pos::kNoun);
  EXPECT_EQ(PosName(Pos::kPropn), "PROPN");
  EXPECT_THROW(ParsePos("NOPE"), SchemaError);
}

}  // namespace
}  // namespace cprof
