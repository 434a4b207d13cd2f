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

#ifndef CPROF_TEXTNLP_H_
#define CPROF_TEXTNLP_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/lexicon.h"

namespace cprof {

enum class TokenKind : uint8_t {
  kWord,
  kPunctuation,
  kNumber,
  kHashtag,
  kMention,
  kUrl,
  kOther,  // emoji and symbols
};

std::string_view TokenKindName(TokenKind kind);

struct Token {
  std::string surface;
  // NormalizeTerm(surface); hashtags drop the leading '#'.
  std::string lower;
  TokenKind kind = TokenKind::kOther;
  std::optional<Pos> pos;
  int sentence = -1;
  int index = 0;            // position in Annotation::tokens
  std::size_t offset = 0;   // byte offset of surface in the source text
};

// Half-open token range [begin, end).
struct Span {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct Annotation {
  std::string text;
  std::vector<Token> tokens;
  std::vector<Span> sentences;
  std::vector<Span> entities;
  std::vector<Span> noun_chunks;
};

// Words, hashtags, mentions and numbers. URLs, punctuation and emoji are
// excluded from every word-derived count.
bool CountsAsWord(const Token& token);

std::vector<Token> Tokenize(std::string_view text);

// Splits after '.', '!', '?' or U+2026 runs (absorbing closing quotes and
// brackets) and at newlines. Abbreviations never reach this step as separate
// periods because the tokenizer keeps them whole. Sets Token::sentence.
std::vector<Span> SplitSentences(std::string_view text,
                                 std::vector<Token>& tokens);

// Assigns exactly one tag per token. Word tags come from, in order: the
// closed-class lexicon, the open-class lexicon (with plural/3rd-person -s
// stripping), then suffix rules. Contextual passes then resolve proper nouns,
// noun/verb ambiguity, infinitival "to", demonstratives and auxiliary
// have/do.
void PosTag(Annotation& annotation);

// Maximal runs of PROPN tokens plus every mention token (alone).
std::vector<Span> DetectEntities(const Annotation& annotation);

// Longest left-to-right matches of DET? ADJ* (NOUN|PROPN)+ per sentence.
std::vector<Span> ChunkNouns(const Annotation& annotation);

// Vowel-group count with silent-e and consonant+"le" handling; at least 1.
int CountSyllables(std::string_view word);

// Tokenize, split, tag, and fill the entity and chunk layers.
Annotation Annotate(std::string_view text);

// UTF-8 helpers shared with the feature extractors.
struct CodePoint {
  char32_t value;
  int length;
};
CodePoint DecodeUtf8(std::string_view text, std::size_t pos);
bool IsWhitespace(char32_t c);
bool IsLetter(char32_t c);

}  // namespace cprof

#endif  // CPROF_TEXTNLP_H_
