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

#ifndef CPROF_LEXICON_H_
#define CPROF_LEXICON_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cprof {

// Universal POS tags.
enum class Pos : uint8_t {
  kNoun,
  kPropn,
  kVerb,
  kAdj,
  kAdv,
  kPron,
  kDet,
  kAdp,
  kAux,
  kCconj,
  kSconj,
  kNum,
  kPart,
  kIntj,
  kPunct,
  kSym,
  kX,
};
inline constexpr int kNumPos = 17;

std::string_view PosName(Pos pos);
// Throws SchemaError on an unknown tag name.
Pos ParsePos(std::string_view name);

// Function-word subclasses from lexicon/word_classes.tsv.
enum class WordClass : uint8_t {
  kPersonal,
  kImpersonal,
  kPossessive,
  kReflexive,
  kReciprocal,
  kFirstPerson,
  kSecondPerson,
  kRelative,
  kQuantifier,
  kNegation,
  kModal,
  kBe,
  kPast,
  kParticiple,
};

inline constexpr int kNumEmotions = 8;

// All bundled word lists, parsed once. Terms are looked up by their
// normalized lowercase form (see NormalizeTerm).
class Lexicon {
 public:
  // Process-wide instance built from the embedded resources.
  static const Lexicon& Default();

  bool IsStopWord(std::string_view term) const;
  bool IsAbbreviation(std::string_view term) const;
  bool IsEasyWord(std::string_view term) const;

  // Tags in lexicon order (first = default); nullptr when absent.
  const std::vector<Pos>* ClosedClass(std::string_view term) const;
  const std::vector<Pos>* OpenClass(std::string_view term) const;

  bool HasClass(std::string_view term, WordClass word_class) const;
  // Two-word entries of a class, e.g. "each other" for kReciprocal.
  std::vector<std::pair<std::string, std::string>> MultiwordEntries(
      WordClass word_class) const;

  // Bit e set when the term belongs to emotion e (constants order).
  uint8_t EmotionMask(std::string_view term) const;

  bool IsSynonymPair(std::string_view a, std::string_view b) const;
  bool IsAntonymPair(std::string_view a, std::string_view b) const;

  // Longest abbreviation length in bytes, for tokenizer lookahead.
  std::size_t MaxAbbreviationLength() const { return max_abbreviation_; }

  const std::vector<std::string>& EmotionLabels() const {
    return emotion_labels_;
  }
  const std::vector<std::string>& Idioms() const { return idioms_; }

 private:
  Lexicon();

  std::unordered_set<std::string> stop_words_;
  std::unordered_set<std::string> abbreviations_;
  std::unordered_set<std::string> easy_words_;
  std::unordered_map<std::string, std::vector<Pos>> closed_class_;
  std::unordered_map<std::string, std::vector<Pos>> open_class_;
  std::unordered_map<std::string, uint32_t> word_classes_;
  std::unordered_map<std::string, uint8_t> emotions_;
  std::unordered_set<std::string> synonym_pairs_;
  std::unordered_set<std::string> antonym_pairs_;
  std::vector<std::string> emotion_labels_;
  std::vector<std::string> idioms_;
  std::size_t max_abbreviation_ = 0;
};

// Lowercases ASCII and Latin-1 letters and maps the typographic apostrophe
// U+2019 to '\''.
std::string NormalizeTerm(std::string_view text);

}  // namespace cprof

#endif  // CPROF_LEXICON_H_
