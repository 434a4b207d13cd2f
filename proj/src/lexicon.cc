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

#include "cprof/lexicon.h"

#include <algorithm>

#include "cprof/common.h"
#include "cprof/resources.h"

namespace cprof {

namespace {

constexpr std::array<std::string_view, kNumPos> kPosNames = {
    "NOUN", "PROPN", "VERB", "ADJ",  "ADV",   "PRON", "DET", "ADP", "AUX",
    "CCONJ", "SCONJ", "NUM", "PART", "INTJ", "PUNCT", "SYM", "X"};

constexpr std::array<std::string_view, 14> kWordClassNames = {
    "personal",   "impersonal",    "possessive", "reflexive", "reciprocal",
    "first_person", "second_person", "relative", "quantifier", "negation",
    "modal",      "be",            "past",       "participle"};

WordClass ParseWordClass(std::string_view name) {
  for (std::size_t i = 0; i < kWordClassNames.size(); ++i) {
    if (kWordClassNames[i] == name) return static_cast<WordClass>(i);
  }
  throw SchemaError("unknown word class '" + std::string(name) + "'");
}

std::string PairKey(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string key(a);
  key += '\t';
  key += b;
  return key;
}

template <typename Map>
const typename Map::mapped_type* Find(const Map& map, std::string_view key) {
  auto it = map.find(std::string(key));
  return it == map.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view PosName(Pos pos) {
  return kPosNames[static_cast<std::size_t>(pos)];
}

Pos ParsePos(std::string_view name) {
  for (std::size_t i = 0; i < kPosNames.size(); ++i) {
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  }
  throw SchemaError("unknown POS tag '" + std::string(name) + "'");
}

std::string NormalizeTerm(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c + 32));
    } else if (c == 0xC3 && i + 1 < text.size()) {
      auto next = static_cast<unsigned char>(text[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) next += 0x20;
      out.push_back(static_cast<char>(c));
      out.push_back(static_cast<char>(next));
      ++i;
    } else if (c == 0xE2 && text.substr(i, 3) == "\xE2\x80\x99") {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

const Lexicon& Lexicon::Default() {
  static const Lexicon* const instance = new Lexicon();
  return *instance;
}

Lexicon::Lexicon() {
  auto load = [](std::string_view path) {
    return ParseTsv(Resource(path), path);
  };
  for (auto& e : load("lexicon/stopwords.tsv")) stop_words_.insert(e.term);
  for (auto& e : load("lexicon/abbreviations.tsv")) {
    max_abbreviation_ = std::max(max_abbreviation_, e.term.size());
    abbreviations_.insert(e.term);
  }
  for (auto& e : load("lexicon/easy_words.tsv")) easy_words_.insert(e.term);
  for (auto& e : load("lexicon/closed_class.tsv")) {
    closed_class_[e.term].push_back(ParsePos(e.tag));
  }
  for (auto& e : load("lexicon/open_class.tsv")) {
    open_class_[e.term].push_back(ParsePos(e.tag));
  }
  for (auto& e : load("lexicon/word_classes.tsv")) {
    word_classes_[e.term] |= 1u << static_cast<int>(ParseWordClass(e.tag));
  }
  for (auto& e : load("constants/emotions.tsv")) {
    emotion_labels_.push_back(e.tag);
  }
  if (emotion_labels_.size() != kNumEmotions) {
    throw SchemaError("constants/emotions.tsv must list 8 emotions");
  }
  for (auto& e : load("lexicon/emotions.tsv")) {
    auto it = std::find(emotion_labels_.begin(), emotion_labels_.end(), e.tag);
    if (it == emotion_labels_.end()) {
      throw SchemaError("lexicon/emotions.tsv: unknown emotion " + e.tag);
    }
    emotions_[e.term] |= static_cast<uint8_t>(
        1u << static_cast<int>(it - emotion_labels_.begin()));
  }
  for (auto& e : load("lexicon/synonyms.tsv")) {
    synonym_pairs_.insert(PairKey(e.term, e.tag));
  }
  for (auto& e : load("lexicon/antonyms.tsv")) {
    antonym_pairs_.insert(PairKey(e.term, e.tag));
  }
  for (auto& e : load("constants/idioms.tsv")) idioms_.push_back(e.tag);
  if (idioms_.size() != 44) {
    throw SchemaError("constants/idioms.tsv must list 44 idioms");
  }
}

bool Lexicon::IsStopWord(std::string_view term) const {
  return stop_words_.count(std::string(term)) > 0;
}

bool Lexicon::IsAbbreviation(std::string_view term) const {
  return abbreviations_.count(std::string(term)) > 0;
}

bool Lexicon::IsEasyWord(std::string_view term) const {
  return easy_words_.count(std::string(term)) > 0;
}

const std::vector<Pos>* Lexicon::ClosedClass(std::string_view term) const {
  return Find(closed_class_, term);
}

const std::vector<Pos>* Lexicon::OpenClass(std::string_view term) const {
  return Find(open_class_, term);
}

bool Lexicon::HasClass(std::string_view term, WordClass word_class) const {
  const uint32_t* mask = Find(word_classes_, term);
  return mask != nullptr && (*mask >> static_cast<int>(word_class)) & 1u;
}

std::vector<std::pair<std::string, std::string>> Lexicon::MultiwordEntries(
    WordClass word_class) const {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [term, mask] : word_classes_) {
    const std::size_t space = term.find(' ');
    if (space == std::string::npos) continue;
    if ((mask >> static_cast<int>(word_class)) & 1u) {
      entries.emplace_back(term.substr(0, space), term.substr(space + 1));
    }
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

uint8_t Lexicon::EmotionMask(std::string_view term) const {
  const uint8_t* mask = Find(emotions_, term);
  return mask == nullptr ? 0 : *mask;
}

bool Lexicon::IsSynonymPair(std::string_view a, std::string_view b) const {
  return synonym_pairs_.count(PairKey(a, b)) > 0;
}

bool Lexicon::IsAntonymPair(std::string_view a, std::string_view b) const {
  return antonym_pairs_.count(PairKey(a, b)) > 0;
}

}  // namespace cprof
