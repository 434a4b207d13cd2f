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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "cprof/common.h"
#include "cprof/lexicon.h"

namespace cprof {

namespace {

using G = LinguisticGroup;

constexpr std::array<LinguisticFeatureInfo, kNumLinguisticFeatures> kSchema = {{
    // lexical
    {"num_words", G::kLexical, "word, hashtag, mention and number tokens"},
    {"num_unique_words", G::kLexical, "distinct lowercased words"},
    {"num_chars", G::kLexical, "non-whitespace code points, URLs included"},
    {"num_unique_chars", G::kLexical, "distinct non-whitespace code points"},
    {"avg_word_length", G::kLexical, "mean code points per word"},
    {"num_stop_words", G::kLexical, "words on the stop-word list"},
    {"num_punct", G::kLexical, "punctuation tokens"},
    {"num_digits", G::kLexical, "ASCII digits anywhere in the text"},
    {"num_upper_case_words", G::kLexical, "words with >= 2 letters, all upper case"},
    {"num_lower_case_words", G::kLexical, "words whose letters are all lower case"},
    {"num_title_case_words", G::kLexical,
     "words with an upper-case first letter and lower-case rest"},
    {"num_proper_nouns", G::kLexical, "PROPN tokens"},
    {"num_nouns", G::kLexical, "NOUN tokens"},
    {"num_verbs", G::kLexical, "VERB tokens"},
    {"num_adjectives", G::kLexical, "ADJ tokens"},
    {"num_adverbs", G::kLexical, "ADV tokens"},
    {"num_pronouns", G::kLexical, "PRON tokens"},
    {"num_named_entities", G::kLexical, "PROPN runs plus mentions"},
    {"num_noun_chunks", G::kLexical, "DET? ADJ* (NOUN|PROPN)+ matches"},
    {"num_exclamation_marks", G::kLexical, "'!' tokens"},
    {"num_question_marks", G::kLexical, "'?' tokens"},
    {"num_spaces", G::kLexical, "whitespace code points"},
    // syntactical
    {"nominal_forms", G::kSyntactical, "NOUN + PROPN tokens"},
    {"voc_rich", G::kSyntactical, "num_unique_words / num_words"},
    {"num_sentences", G::kSyntactical, "sentences"},
    {"avg_num_words_per_sentence", G::kSyntactical, "num_words / num_sentences"},
    {"num_noun_phrases", G::kSyntactical, "noun chunks"},
    {"num_verb_phrases", G::kSyntactical,
     "maximal AUX/VERB/PART runs containing a VERB"},
    {"num_adj_phrases", G::kSyntactical, "maximal ADJ runs"},
    {"num_adv_phrases", G::kSyntactical, "maximal ADV runs"},
    {"num_prep_phrases", G::kSyntactical,
     "ADP directly followed by a noun chunk or a pronoun"},
    {"num_coord_conj", G::kSyntactical, "CCONJ tokens"},
    {"num_subord_conj", G::kSyntactical, "SCONJ tokens"},
    {"num_coord_clauses", G::kSyntactical,
     "CCONJ with a VERB/AUX before and after it in the sentence"},
    {"num_subord_clauses", G::kSyntactical,
     "SCONJ followed later in the sentence by a VERB/AUX"},
    {"punctuation_freq", G::kSyntactical, "num_punct / num_words"},
    {"num_capitalized_sentences", G::kSyntactical,
     "sentences whose first word starts upper case"},
    {"num_caps_word_freq", G::kSyntactical, "num_upper_case_words / num_words"},
    {"num_participial", G::kSyntactical, "VERB tokens ending in -ing or -ed"},
    {"num_present_tense", G::kSyntactical,
     "VERB/AUX tokens not ending in -ing/-ed and not listed as past forms"},
    {"num_complementation", G::kSyntactical,
     "that/whether/if directly after a VERB"},
    {"num_relative_clause", G::kSyntactical,
     "non-initial relative pronoun directly followed by a VERB/AUX"},
    // semantic
    {"num_personal_pronouns", G::kSemantic, "personal pronoun class"},
    {"num_impersonal_pronouns", G::kSemantic, "impersonal pronoun class"},
    {"num_possessive_pronouns", G::kSemantic, "possessive class"},
    {"num_reflexive_pronouns", G::kSemantic, "reflexive class"},
    {"num_reciprocal_pronouns", G::kSemantic,
     "reciprocal class, including two-word entries"},
    {"num_quantifiers", G::kSemantic, "quantifier class"},
    {"num_determiners", G::kSemantic, "DET tokens"},
    {"num_prepositions", G::kSemantic, "ADP tokens"},
    {"num_aux_verbs", G::kSemantic, "AUX tokens"},
    {"num_modal_verbs", G::kSemantic, "modal class"},
    {"num_negations", G::kSemantic, "negation class or a n't ending"},
    {"num_synonym", G::kSemantic,
     "distinct word-type pairs listed in the synonym lexicon"},
    {"num_antonymy", G::kSemantic,
     "distinct word-type pairs listed in the antonym lexicon"},
    {"1st_person_pronouns", G::kSemantic, "first-person class"},
    {"2nd_person_pronouns", G::kSemantic, "second-person class"},
    {"num_passive_verbs", G::kSemantic,
     "AUX 'be' followed within 2 tokens by an -ed or participle form"},
    // structural
    {"avg_sentence_length", G::kStructural, "tokens per sentence"},
    {"avg_word_length", G::kStructural, "same value as the lexical column"},
    {"avg_noun_phrases_per_sentence", G::kStructural,
     "num_noun_chunks / num_sentences"},
    {"avg_verbs_per_sentence", G::kStructural, "num_verbs / num_sentences"},
    {"proper_noun_ratio", G::kStructural, "num_proper_nouns / num_words"},
    // subject-specific
    {"flesch_reading_ease", G::kSubjectSpecific,
     "206.835 - 1.015 W/S - 84.6 Syl/W"},
    {"smog_index", G::kSubjectSpecific,
     "1.0430 sqrt(30 Poly/S) + 3.1291"},
    {"flesch_kincaid_grade", G::kSubjectSpecific,
     "0.39 W/S + 11.8 Syl/W - 15.59"},
    {"coleman_liau_index", G::kSubjectSpecific,
     "0.0588 L - 0.296 S100 - 15.8 (per 100 words)"},
    {"automated_readability_index", G::kSubjectSpecific,
     "4.71 C/W + 0.5 W/S - 21.43"},
    {"dale_chall_readability_score", G::kSubjectSpecific,
     "0.1579 pct_difficult + 0.0496 W/S, +3.6365 when pct > 5"},
    {"difficult_words", G::kSubjectSpecific,
     "words off the easy list with >= 3 syllables"},
    {"linsear_write_formula", G::kSubjectSpecific,
     "first 100 words, easy = 1, hard (>= 3 syllables) = 3"},
    {"gunning_fog", G::kSubjectSpecific,
     "0.4 (W/S + 100 complex/W), proper nouns never complex"},
}};

double Ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool Is(const Token& t, Pos pos) { return t.pos == pos; }

bool IsVerbal(const Token& t) { return Is(t, Pos::kVerb) || Is(t, Pos::kAux); }

bool IsEdForm(std::string_view lower) {
  return lower.size() > 3 && EndsWith(lower, "ed");
}

bool IsIngForm(std::string_view lower) {
  return lower.size() > 4 && EndsWith(lower, "ing");
}

struct LetterCase {
  int letters = 0;
  int upper = 0;
  int lower = 0;
  bool first_upper = false;
};

bool IsUpperLetter(char32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

bool IsLowerLetter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 0xDF && c <= 0xFF && c != 0xF7);
}

LetterCase CaseOf(std::string_view text) {
  LetterCase lc;
  for (std::size_t i = 0; i < text.size();) {
    const CodePoint cp = DecodeUtf8(text, i);
    i += cp.length;
    if (!IsLetter(cp.value)) continue;
    const bool up = IsUpperLetter(cp.value);
    if (lc.letters == 0) lc.first_upper = up;
    ++lc.letters;
    if (up) ++lc.upper;
    if (IsLowerLetter(cp.value)) ++lc.lower;
  }
  return lc;
}

int CodePointCount(std::string_view text) {
  int n = 0;
  for (std::size_t i = 0; i < text.size(); i += DecodeUtf8(text, i).length) ++n;
  return n;
}

// Maximal runs of tokens satisfying `member` within each sentence; a run is
// counted when `accept` holds for it.
template <typename Member, typename Accept>
int CountRuns(const Annotation& a, Member member, Accept accept) {
  int count = 0;
  for (const Span& s : a.sentences) {
    int i = s.begin;
    while (i < s.end) {
      if (!member(a.tokens[i])) {
        ++i;
        continue;
      }
      int j = i;
      while (j < s.end && member(a.tokens[j])) ++j;
      if (accept(i, j)) ++count;
      i = j;
    }
  }
  return count;
}

int FirstWordOf(const Annotation& a, const Span& s) {
  for (int i = s.begin; i < s.end; ++i) {
    if (a.tokens[i].kind == TokenKind::kWord) return i;
  }
  return -1;
}

struct WordStats {
  double words = 0;
  double syllables = 0;
  double letters = 0;       // letters in word tokens
  double characters = 0;    // letters and digits in word tokens
  double polysyllables = 0; // >= 3 syllables
  double complex_words = 0; // polysyllables that are not proper nouns
  double dale_chall_hard = 0;
  double difficult = 0;
  double linsear_points = 0;
};

WordStats CollectWordStats(const Annotation& a) {
  const Lexicon& lexicon = Lexicon::Default();
  WordStats st;
  for (const Token& t : a.tokens) {
    if (!CountsAsWord(t)) continue;
    const int syllables = CountSyllables(t.lower);
    st.words += 1;
    st.syllables += syllables;
    for (std::size_t i = 0; i < t.surface.size();) {
      const CodePoint cp = DecodeUtf8(t.surface, i);
      i += cp.length;
      if (IsLetter(cp.value)) {
        st.letters += 1;
        st.characters += 1;
      } else if (cp.value >= '0' && cp.value <= '9') {
        st.characters += 1;
      }
    }
    const bool poly = syllables >= 3;
    if (poly) st.polysyllables += 1;
    if (poly && !Is(t, Pos::kPropn)) st.complex_words += 1;
    const bool easy = t.kind == TokenKind::kNumber || lexicon.IsEasyWord(t.lower);
    if (!easy) st.dale_chall_hard += 1;
    if (!easy && poly) st.difficult += 1;
    if (st.words <= 100) st.linsear_points += poly ? 3 : 1;
  }
  return st;
}

}  // namespace

std::string_view LinguisticGroupName(LinguisticGroup group) {
  switch (group) {
    case G::kLexical: return "lexical";
    case G::kSyntactical: return "syntactical";
    case G::kSemantic: return "semantic";
    case G::kStructural: return "structural";
    case G::kSubjectSpecific: return "subject_specific";
  }
  return "lexical";
}

const std::array<LinguisticFeatureInfo, kNumLinguisticFeatures>&
LinguisticSchema() {
  return kSchema;
}

int LinguisticIndex(std::string_view name) {
  for (int i = 0; i < kNumLinguisticFeatures; ++i) {
    if (kSchema[i].name == name) return i;
  }
  throw ContractError("unknown linguistic feature '" + std::string(name) + "'");
}

ClauseCounts CountClauses(const Annotation& a) {
  const Lexicon& lexicon = Lexicon::Default();
  ClauseCounts c;
  for (const Span& s : a.sentences) {
    const int first_word = FirstWordOf(a, s);
    for (int i = s.begin; i < s.end; ++i) {
      const Token& t = a.tokens[i];
      if (Is(t, Pos::kCconj)) {
        const bool before = std::any_of(a.tokens.begin() + s.begin,
                                        a.tokens.begin() + i, IsVerbal);
        const bool after = std::any_of(a.tokens.begin() + i + 1,
                                       a.tokens.begin() + s.end, IsVerbal);
        if (before && after) ++c.coordinate;
      } else if (Is(t, Pos::kSconj)) {
        if (std::any_of(a.tokens.begin() + i + 1, a.tokens.begin() + s.end,
                        IsVerbal)) {
          ++c.subordinate;
        }
      }
      if (i != first_word && i + 1 < s.end &&
          lexicon.HasClass(t.lower, WordClass::kRelative) &&
          IsVerbal(a.tokens[i + 1])) {
        ++c.relative;
      }
      if (i > s.begin && Is(a.tokens[i - 1], Pos::kVerb) &&
          (t.lower == "that" || t.lower == "whether" || t.lower == "if")) {
        ++c.complementation;
      }
    }
  }
  return c;
}

std::array<double, kNumReadabilityIndices> ReadabilityIndices(
    const Annotation& a) {
  std::array<double, kNumReadabilityIndices> out{};
  const WordStats st = CollectWordStats(a);
  const double w = st.words;
  const double s = static_cast<double>(a.sentences.size());
  if (w == 0 || s == 0) return out;
  const double wps = w / s;
  const double spw = st.syllables / w;

  out[0] = 206.835 - 1.015 * wps - 84.6 * spw;
  out[1] = 1.0430 * std::sqrt(st.polysyllables * 30.0 / s) + 3.1291;
  out[2] = 0.39 * wps + 11.8 * spw - 15.59;
  out[3] = 0.0588 * (st.letters / w * 100.0) - 0.296 * (s / w * 100.0) - 15.8;
  out[4] = 4.71 * (st.characters / w) + 0.5 * wps - 21.43;
  const double pct_hard = st.dale_chall_hard / w * 100.0;
  out[5] = 0.1579 * pct_hard + 0.0496 * wps + (pct_hard > 5.0 ? 3.6365 : 0.0);
  out[6] = st.difficult;
  const double r = st.linsear_points / s;
  out[7] = r > 20.0 ? r / 2.0 : (r - 2.0) / 2.0;
  out[8] = 0.4 * (wps + 100.0 * st.complex_words / w);
  return out;
}

LinguisticVector ExtractLinguistic(const Annotation& a) {
  const Lexicon& lexicon = Lexicon::Default();
  LinguisticVector v{};
  auto set = [&](std::string_view name, double value) {
    v[LinguisticIndex(name)] = value;
  };

  double words = 0, stop_words = 0, word_chars = 0;
  double upper = 0, lower = 0, title = 0;
  std::set<std::string> types;
  int pos_count[kNumPos] = {};
  double punct = 0, exclaim = 0, question = 0;
  double participial = 0, present = 0;
  double personal = 0, impersonal = 0, possessive = 0, reflexive = 0;
  double reciprocal = 0, quantifiers = 0, modals = 0, negations = 0;
  double first_person = 0, second_person = 0, passive = 0;

  const auto reciprocal_pairs = lexicon.MultiwordEntries(WordClass::kReciprocal);

  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    const Token& t = a.tokens[i];
    if (t.pos) ++pos_count[static_cast<int>(*t.pos)];
    if (t.kind == TokenKind::kPunctuation) {
      ++punct;
      if (t.surface == "!") ++exclaim;
      if (t.surface == "?") ++question;
      continue;
    }
    if (!CountsAsWord(t)) continue;

    ++words;
    types.insert(t.lower);
    word_chars += CodePointCount(t.surface);
    if (lexicon.IsStopWord(t.lower)) ++stop_words;
    if (t.kind != TokenKind::kNumber) {
      const LetterCase lc = CaseOf(t.surface);
      if (lc.letters >= 2 && lc.upper == lc.letters) {
        ++upper;
      } else if (lc.letters > 0 && lc.lower == lc.letters) {
        ++lower;
      } else if (lc.letters > 0 && lc.first_upper &&
                 lc.lower == lc.letters - 1) {
        ++title;
      }
    }

    const std::string& w = t.lower;
    if (Is(t, Pos::kVerb) && (IsIngForm(w) || IsEdForm(w))) ++participial;
    if (IsVerbal(t) && !IsIngForm(w) && !IsEdForm(w) &&
        !lexicon.HasClass(w, WordClass::kPast) &&
        !lexicon.HasClass(w, WordClass::kParticiple)) {
      ++present;
    }
    if (lexicon.HasClass(w, WordClass::kPersonal)) ++personal;
    if (lexicon.HasClass(w, WordClass::kImpersonal)) ++impersonal;
    if (lexicon.HasClass(w, WordClass::kPossessive)) ++possessive;
    if (lexicon.HasClass(w, WordClass::kReflexive)) ++reflexive;
    if (lexicon.HasClass(w, WordClass::kReciprocal)) ++reciprocal;
    if (lexicon.HasClass(w, WordClass::kQuantifier)) ++quantifiers;
    if (lexicon.HasClass(w, WordClass::kModal)) ++modals;
    if (lexicon.HasClass(w, WordClass::kNegation) || EndsWith(w, "n't")) {
      ++negations;
    }
    if (lexicon.HasClass(w, WordClass::kFirstPerson)) ++first_person;
    if (lexicon.HasClass(w, WordClass::kSecondPerson)) ++second_person;

    if (i + 1 < a.tokens.size() && a.tokens[i + 1].sentence == t.sentence) {
      const std::string& next = a.tokens[i + 1].lower;
      for (const auto& [first, second] : reciprocal_pairs) {
        if (w == first && next == second) ++reciprocal;
      }
    }

    if (Is(t, Pos::kAux) && lexicon.HasClass(w, WordClass::kBe)) {
      for (std::size_t k = i + 1; k < a.tokens.size() && k <= i + 2; ++k) {
        const Token& n = a.tokens[k];
        if (n.sentence != t.sentence) break;
        const bool participle =
            (Is(n, Pos::kVerb) || Is(n, Pos::kAdj)) &&
            (IsEdForm(n.lower) ||
             lexicon.HasClass(n.lower, WordClass::kParticiple));
        if (participle) {
          ++passive;
          break;
        }
      }
    }
  }

  double chars = 0, spaces = 0, digits = 0;
  std::unordered_set<char32_t> distinct_chars;
  for (std::size_t i = 0; i < a.text.size();) {
    const CodePoint cp = DecodeUtf8(a.text, i);
    i += cp.length;
    if (IsWhitespace(cp.value)) {
      ++spaces;
      continue;
    }
    ++chars;
    distinct_chars.insert(cp.value);
    if (cp.value >= '0' && cp.value <= '9') ++digits;
  }

  double capitalized = 0;
  for (const Span& s : a.sentences) {
    const int first = FirstWordOf(a, s);
    if (first >= 0 && CaseOf(a.tokens[first].surface).first_upper) {
      ++capitalized;
    }
  }

  // Distinct word-type pairs; types is ordered so each pair is seen once.
  double synonyms = 0, antonyms = 0;
  const std::vector<std::string> type_list(types.begin(), types.end());
  for (std::size_t i = 0; i < type_list.size(); ++i) {
    for (std::size_t j = i + 1; j < type_list.size(); ++j) {
      if (lexicon.IsSynonymPair(type_list[i], type_list[j])) ++synonyms;
      if (lexicon.IsAntonymPair(type_list[i], type_list[j])) ++antonyms;
    }
  }

  auto tag_count = [&](Pos p) {
    return static_cast<double>(pos_count[static_cast<int>(p)]);
  };
  auto is = [](Pos p) { return [p](const Token& t) { return t.pos == p; }; };

  const double sentences = static_cast<double>(a.sentences.size());
  const double avg_word_length = Ratio(word_chars, words);
  const double chunks = static_cast<double>(a.noun_chunks.size());

  const int verb_phrases = CountRuns(
      a,
      [](const Token& t) {
        return Is(t, Pos::kAux) || Is(t, Pos::kVerb) || Is(t, Pos::kPart);
      },
      [&](int b, int e) {
        return std::any_of(a.tokens.begin() + b, a.tokens.begin() + e,
                           is(Pos::kVerb));
      });
  auto always = [](int, int) { return true; };
  const int adj_phrases = CountRuns(a, is(Pos::kAdj), always);
  const int adv_phrases = CountRuns(a, is(Pos::kAdv), always);

  std::vector<char> chunk_start(a.tokens.size(), 0);
  for (const Span& c : a.noun_chunks) chunk_start[c.begin] = 1;
  double prep_phrases = 0;
  for (std::size_t i = 0; i + 1 < a.tokens.size(); ++i) {
    const Token& t = a.tokens[i];
    const Token& n = a.tokens[i + 1];
    if (Is(t, Pos::kAdp) && n.sentence == t.sentence &&
        (chunk_start[i + 1] || Is(n, Pos::kPron))) {
      ++prep_phrases;
    }
  }

  const ClauseCounts clauses = CountClauses(a);
  const auto readability = ReadabilityIndices(a);

  double token_count = static_cast<double>(a.tokens.size());

  set("num_words", words);
  set("num_unique_words", static_cast<double>(types.size()));
  set("num_chars", chars);
  set("num_unique_chars", static_cast<double>(distinct_chars.size()));
  v[4] = avg_word_length;
  set("num_stop_words", stop_words);
  set("num_punct", punct);
  set("num_digits", digits);
  set("num_upper_case_words", upper);
  set("num_lower_case_words", lower);
  set("num_title_case_words", title);
  set("num_proper_nouns", tag_count(Pos::kPropn));
  set("num_nouns", tag_count(Pos::kNoun));
  set("num_verbs", tag_count(Pos::kVerb));
  set("num_adjectives", tag_count(Pos::kAdj));
  set("num_adverbs", tag_count(Pos::kAdv));
  set("num_pronouns", tag_count(Pos::kPron));
  set("num_named_entities", static_cast<double>(a.entities.size()));
  set("num_noun_chunks", chunks);
  set("num_exclamation_marks", exclaim);
  set("num_question_marks", question);
  set("num_spaces", spaces);

  set("nominal_forms", tag_count(Pos::kNoun) + tag_count(Pos::kPropn));
  set("voc_rich", Ratio(static_cast<double>(types.size()), words));
  set("num_sentences", sentences);
  set("avg_num_words_per_sentence", Ratio(words, sentences));
  set("num_noun_phrases", chunks);
  set("num_verb_phrases", verb_phrases);
  set("num_adj_phrases", adj_phrases);
  set("num_adv_phrases", adv_phrases);
  set("num_prep_phrases", prep_phrases);
  set("num_coord_conj", tag_count(Pos::kCconj));
  set("num_subord_conj", tag_count(Pos::kSconj));
  set("num_coord_clauses", clauses.coordinate);
  set("num_subord_clauses", clauses.subordinate);
  set("punctuation_freq", Ratio(punct, words));
  set("num_capitalized_sentences", capitalized);
  set("num_caps_word_freq", Ratio(upper, words));
  set("num_participial", participial);
  set("num_present_tense", present);
  set("num_complementation", clauses.complementation);
  set("num_relative_clause", clauses.relative);

  set("num_personal_pronouns", personal);
  set("num_impersonal_pronouns", impersonal);
  set("num_possessive_pronouns", possessive);
  set("num_reflexive_pronouns", reflexive);
  set("num_reciprocal_pronouns", reciprocal);
  set("num_quantifiers", quantifiers);
  set("num_determiners", tag_count(Pos::kDet));
  set("num_prepositions", tag_count(Pos::kAdp));
  set("num_aux_verbs", tag_count(Pos::kAux));
  set("num_modal_verbs", modals);
  set("num_negations", negations);
  set("num_synonym", synonyms);
  set("num_antonymy", antonyms);
  set("1st_person_pronouns", first_person);
  set("2nd_person_pronouns", second_person);
  set("num_passive_verbs", passive);

  set("avg_sentence_length", Ratio(token_count, sentences));
  v[59] = avg_word_length;
  set("avg_noun_phrases_per_sentence", Ratio(chunks, sentences));
  set("avg_verbs_per_sentence", Ratio(tag_count(Pos::kVerb), sentences));
  set("proper_noun_ratio", Ratio(tag_count(Pos::kPropn), words));

  std::copy(readability.begin(), readability.end(),
            v.begin() + (kNumLinguisticFeatures - kNumReadabilityIndices));
  return v;
}

}  // namespace cprof
