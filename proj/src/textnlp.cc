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

#include <algorithm>
#include <array>
#include <cctype>

namespace cprof {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool InRange(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

bool IsAsciiDigit(char32_t c) { return c >= '0' && c <= '9'; }

bool IsCombiningMark(char32_t c) { return InRange(c, 0x300, 0x36F); }

bool IsPunctuation(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case '!': case '"': case '#': case '%': case '&': case '\'':
      case '(': case ')': case '*': case ',': case '-': case '.':
      case '/': case ':': case ';': case '?': case '@': case '[':
      case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 ||
         c == 0xBB || c == 0xBF || InRange(c, 0x2010, 0x2027) ||
         InRange(c, 0x2030, 0x205E) || InRange(c, 0x3001, 0x3003) ||
         InRange(c, 0x3008, 0x3011);
}

bool IsRegionalIndicator(char32_t c) { return InRange(c, 0x1F1E6, 0x1F1FF); }

bool IsEmoji(char32_t c) {
  return InRange(c, 0x1F000, 0x1FAFF) || InRange(c, 0x2600, 0x27BF) ||
         InRange(c, 0x2B00, 0x2BFF) || InRange(c, 0x2300, 0x23FF) ||
         InRange(c, 0x2190, 0x21FF) || c == 0x3030 || c == 0x303D ||
         c == 0x3297 || c == 0x3299 || c == 0xA9 || c == 0xAE ||
         c == 0x2122 || c == 0x2139;
}

// Code points that attach to a preceding emoji.
bool IsEmojiModifier(char32_t c) {
  return c == 0xFE0F || c == 0xFE0E || c == 0x20E3 ||
         InRange(c, 0x1F3FB, 0x1F3FF) || InRange(c, 0xE0020, 0xE007F);
}

bool IsTerminator(const Token& t) {
  return t.kind == TokenKind::kPunctuation &&
         (t.surface == "." || t.surface == "!" || t.surface == "?" ||
          t.surface == "\xE2\x80\xA6");
}

bool IsCloser(const Token& t) {
  static constexpr std::array<std::string_view, 8> kClosers = {
      ")", "]", "}", "\"", "'", "\xE2\x80\x9D", "\xE2\x80\x99",
      "\xC2\xBB"};
  return t.kind == TokenKind::kPunctuation &&
         std::find(kClosers.begin(), kClosers.end(), t.surface) !=
             kClosers.end();
}

bool StartsWithIgnoreCase(std::string_view text, std::size_t pos,
                          std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = text[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != prefix[i]) return false;
  }
  return true;
}

bool IsMentionChar(char32_t c) {
  return (c < 0x80 && (std::isalnum(static_cast<int>(c)) != 0)) || c == '_';
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text)
      : text_(text), lexicon_(Lexicon::Default()) {}

  std::vector<Token> Run() {
    while (pos_ < text_.size()) {
      const CodePoint cp = At(pos_);
      if (IsWhitespace(cp.value)) {
        pos_ += cp.length;
        continue;
      }
      const std::size_t start = pos_;
      const TokenKind kind = Scan(cp);
      Emit(start, kind);
    }
    return std::move(tokens_);
  }

 private:
  CodePoint At(std::size_t pos) const { return DecodeUtf8(text_, pos); }

  bool LetterAt(std::size_t pos) const {
    return pos < text_.size() && IsLetter(At(pos).value);
  }

  TokenKind Scan(CodePoint cp) {
    const char32_t c = cp.value;
    if (StartsWithIgnoreCase(text_, pos_, "http://") ||
        StartsWithIgnoreCase(text_, pos_, "https://") ||
        StartsWithIgnoreCase(text_, pos_, "www.")) {
      ScanUrl();
      return TokenKind::kUrl;
    }
    if (c == '@' && pos_ + 1 < text_.size() && IsMentionChar(At(pos_ + 1).value)) {
      pos_ += 1;
      while (pos_ < text_.size() && IsMentionChar(At(pos_).value)) ++pos_;
      return TokenKind::kMention;
    }
    if (c == '#' && pos_ + 1 < text_.size()) {
      const char32_t next = At(pos_ + 1).value;
      if (IsLetter(next) || IsAsciiDigit(next) || next == '_') {
        pos_ += 1;
        while (pos_ < text_.size()) {
          const CodePoint n = At(pos_);
          if (!(IsLetter(n.value) || IsAsciiDigit(n.value) || n.value == '_' ||
                IsCombiningMark(n.value))) {
            break;
          }
          pos_ += n.length;
        }
        return TokenKind::kHashtag;
      }
    }
    if (IsAsciiDigit(c)) return ScanNumber();
    if (IsLetter(c)) {
      if (ScanAbbreviation()) return TokenKind::kWord;
      ScanWordBody();
      return TokenKind::kWord;
    }
    if (IsEmoji(c)) {
      ScanEmoji(cp);
      return TokenKind::kOther;
    }
    pos_ += cp.length;
    return IsPunctuation(c) ? TokenKind::kPunctuation : TokenKind::kOther;
  }

  void ScanUrl() {
    std::size_t end = pos_;
    while (end < text_.size()) {
      const CodePoint n = At(end);
      if (IsWhitespace(n.value)) break;
      end += n.length;
    }
    // Trailing sentence punctuation belongs to the sentence, not the URL.
    static constexpr std::array<std::string_view, 13> kTrailing = {
        ".", ",", "!", "?", ";", ":", "'", "\"", ")", "]", "}",
        "\xE2\x80\xA6", "\xE2\x80\x9D"};
    bool stripped = true;
    while (stripped && end > pos_) {
      stripped = false;
      for (std::string_view t : kTrailing) {
        if (end - pos_ > t.size() && text_.substr(end - t.size(), t.size()) == t) {
          end -= t.size();
          stripped = true;
          break;
        }
      }
    }
    pos_ = end;
  }

  TokenKind ScanNumber() {
    while (pos_ < text_.size() && IsAsciiDigit(At(pos_).value)) ++pos_;
    while (pos_ + 1 < text_.size()) {
      const char c = text_[pos_];
      if ((c == '.' || c == ',' || c == ':') &&
          IsAsciiDigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        pos_ += 1;
        while (pos_ < text_.size() && IsAsciiDigit(At(pos_).value)) ++pos_;
      } else {
        break;
      }
    }
    if (LetterAt(pos_)) {
      ScanWordBody();
      return TokenKind::kWord;  // "5g", "2nd"
    }
    return TokenKind::kNumber;
  }

  void ScanWordBody() {
    while (pos_ < text_.size()) {
      const CodePoint n = At(pos_);
      if (IsLetter(n.value) || IsAsciiDigit(n.value) ||
          IsCombiningMark(n.value)) {
        pos_ += n.length;
        continue;
      }
      const bool apostrophe = n.value == '\'' || n.value == 0x2019;
      if (apostrophe && LetterAt(pos_ + n.length)) {
        pos_ += n.length;
        continue;
      }
      if (n.value == '-' && pos_ + 1 < text_.size()) {
        const char32_t after = At(pos_ + 1).value;
        if (IsLetter(after) || IsAsciiDigit(after)) {
          pos_ += 1;
          continue;
        }
      }
      break;
    }
  }

  bool ScanAbbreviation() {
    const std::size_t max_len =
        std::min(lexicon_.MaxAbbreviationLength(), text_.size() - pos_);
    for (std::size_t len = max_len; len >= 2; --len) {
      const std::string_view candidate = text_.substr(pos_, len);
      if (candidate.back() != '.') continue;
      const std::size_t after = pos_ + len;
      if (after < text_.size()) {
        const char32_t next = At(after).value;
        if (IsLetter(next) || IsAsciiDigit(next)) continue;
      }
      if (lexicon_.IsAbbreviation(NormalizeTerm(candidate))) {
        pos_ = after;
        return true;
      }
    }
    return false;
  }

  void ScanEmoji(CodePoint first) {
    pos_ += first.length;
    if (IsRegionalIndicator(first.value) && pos_ < text_.size()) {
      const CodePoint n = At(pos_);
      if (IsRegionalIndicator(n.value)) pos_ += n.length;
      return;
    }
    while (pos_ < text_.size()) {
      const CodePoint n = At(pos_);
      if (IsEmojiModifier(n.value)) {
        pos_ += n.length;
      } else if (n.value == 0x200D && pos_ + n.length < text_.size() &&
                 IsEmoji(At(pos_ + n.length).value)) {
        pos_ += n.length;
        pos_ += At(pos_).length;
      } else {
        break;
      }
    }
  }

  void Emit(std::size_t start, TokenKind kind) {
    Token token;
    token.surface = std::string(text_.substr(start, pos_ - start));
    token.kind = kind;
    token.offset = start;
    token.index = static_cast<int>(tokens_.size());
    if (kind == TokenKind::kHashtag) {
      token.lower = NormalizeTerm(token.surface.substr(1));
    } else {
      token.lower = NormalizeTerm(token.surface);
    }
    tokens_.push_back(std::move(token));
  }

  std::string_view text_;
  const Lexicon& lexicon_;
  std::size_t pos_ = 0;
  std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Tagging

enum class TagSource : uint8_t { kFixed, kClosed, kOpen, kSuffix };

struct TagState {
  std::vector<Pos> candidates;
  TagSource source = TagSource::kFixed;
};

bool HasCandidate(const TagState& s, Pos pos) {
  return std::find(s.candidates.begin(), s.candidates.end(), pos) !=
         s.candidates.end();
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Letters of the surface (ASCII/Latin only matter for case tests).
struct CaseShape {
  int letters = 0;
  int upper = 0;
  bool first_upper = false;
};

CaseShape ShapeOf(std::string_view surface) {
  CaseShape shape;
  for (std::size_t i = 0; i < surface.size();) {
    const CodePoint cp = DecodeUtf8(surface, i);
    i += cp.length;
    if (!IsLetter(cp.value)) continue;
    const bool upper = (cp.value >= 'A' && cp.value <= 'Z') ||
                       (cp.value >= 0xC0 && cp.value <= 0xDE && cp.value != 0xD7);
    if (shape.letters == 0) shape.first_upper = upper;
    ++shape.letters;
    if (upper) ++shape.upper;
  }
  return shape;
}

const std::vector<Pos>* LookupOpen(const Lexicon& lexicon,
                                   const std::string& term) {
  if (const auto* tags = lexicon.OpenClass(term)) return tags;
  if (term.size() > 3 && EndsWith(term, "ies")) {
    if (const auto* tags = lexicon.OpenClass(term.substr(0, term.size() - 3) + "y")) {
      return tags;
    }
  }
  if (term.size() > 3 && EndsWith(term, "es")) {
    if (const auto* tags = lexicon.OpenClass(term.substr(0, term.size() - 2))) {
      return tags;
    }
  }
  if (term.size() > 2 && EndsWith(term, "s") && !EndsWith(term, "ss")) {
    if (const auto* tags = lexicon.OpenClass(term.substr(0, term.size() - 1))) {
      return tags;
    }
  }
  return nullptr;
}

Pos SuffixTag(const std::string& term) {
  if (EndsWith(term, "ly")) return Pos::kAdv;
  if (EndsWith(term, "ing") || EndsWith(term, "ed")) return Pos::kVerb;
  if (EndsWith(term, "ous") || EndsWith(term, "ful") || EndsWith(term, "ive")) {
    return Pos::kAdj;
  }
  return Pos::kNoun;
}

TagState BaseTag(const Token& token, const Lexicon& lexicon) {
  TagState state;
  switch (token.kind) {
    case TokenKind::kPunctuation:
      state.candidates = {Pos::kPunct};
      return state;
    case TokenKind::kNumber:
      state.candidates = {Pos::kNum};
      return state;
    case TokenKind::kUrl:
      state.candidates = {Pos::kX};
      return state;
    case TokenKind::kMention:
      state.candidates = {Pos::kPropn};
      return state;
    case TokenKind::kOther:
      state.candidates = {Pos::kSym};
      return state;
    case TokenKind::kWord:
    case TokenKind::kHashtag:
      break;
  }
  std::string term = token.lower;
  if (const auto* tags = lexicon.ClosedClass(term)) {
    state.candidates = *tags;
    state.source = TagSource::kClosed;
    return state;
  }
  if (term.size() > 2 && EndsWith(term, "'s")) term.resize(term.size() - 2);
  if (const auto* tags = LookupOpen(lexicon, term)) {
    state.candidates = *tags;
    state.source = TagSource::kOpen;
    return state;
  }
  state.candidates = {SuffixTag(term)};
  state.source = TagSource::kSuffix;
  return state;
}

bool IsWordLike(const Token& t) {
  return t.kind == TokenKind::kWord || t.kind == TokenKind::kHashtag;
}

void TagSentence(Annotation& a, const Span& sentence, const Lexicon& lexicon) {
  const int n = sentence.size();
  if (n == 0) return;
  std::vector<TagState> states(n);
  std::vector<Pos> tags(n);
  auto tok = [&](int i) -> Token& { return a.tokens[sentence.begin + i]; };

  int first_word = -1;
  for (int i = 0; i < n; ++i) {
    states[i] = BaseTag(tok(i), lexicon);
    tags[i] = states[i].candidates.front();
    if (first_word < 0 && tok(i).kind == TokenKind::kWord) first_word = i;
  }

  // Capitalized words inside a sentence name something unless they are
  // function words; shouted dictionary words keep their lexicon tag.
  for (int i = 0; i < n; ++i) {
    if (!IsWordLike(tok(i)) || i == first_word) continue;
    if (states[i].source == TagSource::kClosed) continue;
    const CaseShape shape = ShapeOf(tok(i).kind == TokenKind::kHashtag
                                        ? std::string_view(tok(i).surface).substr(1)
                                        : std::string_view(tok(i).surface));
    if (!shape.first_upper) continue;
    const bool all_caps = shape.letters >= 2 && shape.upper == shape.letters;
    if (all_caps && states[i].source == TagSource::kOpen) continue;
    tags[i] = Pos::kPropn;
    states[i].candidates = {Pos::kPropn};
  }

  // A capitalized sentence-initial content word continues a following name.
  if (first_word >= 0 && first_word + 1 < n &&
      states[first_word].source != TagSource::kClosed &&
      ShapeOf(tok(first_word).surface).first_upper &&
      tags[first_word + 1] == Pos::kPropn &&
      tok(first_word + 1).kind != TokenKind::kMention) {
    tags[first_word] = Pos::kPropn;
    states[first_word].candidates = {Pos::kPropn};
  }

  // Noun/verb ambiguity, resolved from the left context.
  for (int i = 0; i < n; ++i) {
    const TagState& s = states[i];
    if (s.candidates.size() < 2) continue;
    if (!(HasCandidate(s, Pos::kNoun) && HasCandidate(s, Pos::kVerb))) continue;
    int prev = i - 1;
    while (prev >= 0 && tok(prev).kind == TokenKind::kOther) --prev;
    if (prev < 0 || tags[prev] == Pos::kPunct) {
      tags[i] = Pos::kVerb;  // imperative
      continue;
    }
    const Token& p = tok(prev);
    const Pos pt = tags[prev];
    if (p.lower == "to") {
      tags[i] = Pos::kVerb;
    } else if (pt == Pos::kDet || pt == Pos::kAdj || pt == Pos::kAdp ||
               pt == Pos::kNum ||
               lexicon.HasClass(p.lower, WordClass::kPossessive)) {
      tags[i] = Pos::kNoun;
    } else if (pt == Pos::kPron || pt == Pos::kAux || pt == Pos::kPart ||
               pt == Pos::kAdv) {
      tags[i] = Pos::kVerb;
    } else if (pt == Pos::kNoun || pt == Pos::kPropn) {
      tags[i] = EndsWith(tok(i).lower, "s") ? Pos::kVerb : Pos::kNoun;
    } else {
      tags[i] = s.candidates.front();
    }
  }

  // An unknown word right after a subject pronoun is a verb ("they cheat").
  for (int i = 1; i < n; ++i) {
    if (states[i].source != TagSource::kSuffix || tags[i] != Pos::kNoun) continue;
    const std::string& p = tok(i - 1).lower;
    if (p == "i" || p == "we" || p == "they" || p == "he" || p == "she" || p == "you") {
      tags[i] = Pos::kVerb;
    }
  }

  auto next_word = [&](int i) {
    for (int j = i + 1; j < n; ++j) {
      if (tok(j).kind != TokenKind::kOther) return j;
    }
    return -1;
  };

  for (int i = 0; i < n; ++i) {
    const std::string& w = tok(i).lower;
    if (!IsWordLike(tok(i)) || states[i].source != TagSource::kClosed) continue;
    const int j = next_word(i);
    if (w == "to") {
      const bool verb_next =
          j >= 0 && (tags[j] == Pos::kVerb ||
                     (tags[j] == Pos::kAux && lexicon.HasClass(tok(j).lower, WordClass::kBe)));
      tags[i] = verb_next ? Pos::kPart : Pos::kAdp;
    } else if (w == "this" || w == "that" || w == "these" || w == "those") {
      const bool nominal_next =
          j >= 0 && (tags[j] == Pos::kNoun || tags[j] == Pos::kPropn ||
                     tags[j] == Pos::kAdj || tags[j] == Pos::kNum);
      if (nominal_next) {
        tags[i] = Pos::kDet;
      } else if (w == "that" && i > 0 && tags[i - 1] == Pos::kVerb && j >= 0 &&
                 tags[j] != Pos::kPunct) {
        tags[i] = Pos::kSconj;
      } else {
        tags[i] = Pos::kPron;
      }
    } else if (w == "have" || w == "has" || w == "had" || w == "having" ||
               w == "do" || w == "does" || w == "did") {
      bool aux = false;
      for (int k = i + 1, seen = 0; k < n && seen < 3; ++k) {
        if (tok(k).kind == TokenKind::kOther) continue;
        ++seen;
        const Pos t = tags[k];
        if (t == Pos::kVerb) {
          aux = true;
          break;
        }
        if (t == Pos::kNoun || t == Pos::kPropn || t == Pos::kDet ||
            t == Pos::kAdp || t == Pos::kPunct || t == Pos::kAdj ||
            t == Pos::kNum) {
          break;
        }
      }
      tags[i] = aux ? Pos::kAux : Pos::kVerb;
    }
  }

  for (int i = 0; i < n; ++i) tok(i).pos = tags[i];
}

}  // namespace

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "word";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kNumber: return "number";
    case TokenKind::kHashtag: return "hashtag";
    case TokenKind::kMention: return "mention";
    case TokenKind::kUrl: return "url";
    case TokenKind::kOther: return "other";
  }
  return "other";
}

CodePoint DecodeUtf8(std::string_view text, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) return {b0, 1};
  int length = 0;
  char32_t value = 0;
  if ((b0 & 0xE0) == 0xC0) {
    length = 2;
    value = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    length = 3;
    value = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    length = 4;
    value = b0 & 0x07;
  } else {
    return {kReplacement, 1};
  }
  if (pos + length > text.size()) return {kReplacement, 1};
  for (int i = 1; i < length; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) return {kReplacement, 1};
    value = (value << 6) | (b & 0x3F);
  }
  return {value, length};
}

bool IsWhitespace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0xA0 || InRange(c, 0x2000, 0x200B) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 ||
         c == 0xFEFF;
}

bool IsLetter(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  return (InRange(c, 0xC0, 0x24F) && c != 0xD7 && c != 0xF7) ||
         InRange(c, 0x370, 0x3FF) || InRange(c, 0x400, 0x52F) ||
         InRange(c, 0x590, 0x5FF) || InRange(c, 0x600, 0x6FF) ||
         InRange(c, 0x900, 0x97F) || InRange(c, 0x1E00, 0x1EFF) ||
         InRange(c, 0x3040, 0x30FF) || InRange(c, 0x3400, 0x4DBF) ||
         InRange(c, 0x4E00, 0x9FFF) || InRange(c, 0xAC00, 0xD7AF);
}

bool CountsAsWord(const Token& token) {
  return token.kind == TokenKind::kWord || token.kind == TokenKind::kHashtag ||
         token.kind == TokenKind::kMention || token.kind == TokenKind::kNumber;
}

std::vector<Token> Tokenize(std::string_view text) {
  return Tokenizer(text).Run();
}

std::vector<Span> SplitSentences(std::string_view text,
                                 std::vector<Token>& tokens) {
  std::vector<Span> sentences;
  const int n = static_cast<int>(tokens.size());
  int begin = 0;
  bool in_terminal_run = false;
  for (int i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (IsTerminator(t)) {
      in_terminal_run = true;
    } else if (!(in_terminal_run && IsCloser(t))) {
      in_terminal_run = false;
    }
    bool boundary = false;
    if (i + 1 == n) {
      boundary = true;
    } else {
      const Token& next = tokens[i + 1];
      if (in_terminal_run && !IsTerminator(next) && !IsCloser(next)) {
        boundary = true;
      }
      const std::size_t gap_begin = t.offset + t.surface.size();
      if (text.substr(gap_begin, next.offset - gap_begin).find('\n') !=
          std::string_view::npos) {
        boundary = true;
      }
    }
    if (boundary) {
      const int index = static_cast<int>(sentences.size());
      for (int j = begin; j <= i; ++j) tokens[j].sentence = index;
      sentences.push_back({begin, i + 1});
      begin = i + 1;
      in_terminal_run = false;
    }
  }
  return sentences;
}

void PosTag(Annotation& annotation) {
  const Lexicon& lexicon = Lexicon::Default();
  for (const Span& sentence : annotation.sentences) {
    TagSentence(annotation, sentence, lexicon);
  }
}

std::vector<Span> DetectEntities(const Annotation& annotation) {
  std::vector<Span> entities;
  for (const Span& sentence : annotation.sentences) {
    int run_start = -1;
    auto close_run = [&](int end) {
      if (run_start >= 0) entities.push_back({run_start, end});
      run_start = -1;
    };
    for (int i = sentence.begin; i < sentence.end; ++i) {
      const Token& t = annotation.tokens[i];
      if (t.kind == TokenKind::kMention) {
        close_run(i);
        entities.push_back({i, i + 1});
      } else if (t.pos == Pos::kPropn) {
        if (run_start < 0) run_start = i;
      } else {
        close_run(i);
      }
    }
    close_run(sentence.end);
  }
  return entities;
}

std::vector<Span> ChunkNouns(const Annotation& annotation) {
  std::vector<Span> chunks;
  auto tag = [&](int i) { return annotation.tokens[i].pos; };
  for (const Span& sentence : annotation.sentences) {
    int i = sentence.begin;
    while (i < sentence.end) {
      int j = i;
      if (tag(j) == Pos::kDet) ++j;
      while (j < sentence.end && tag(j) == Pos::kAdj) ++j;
      int k = j;
      while (k < sentence.end &&
             (tag(k) == Pos::kNoun || tag(k) == Pos::kPropn)) {
        ++k;
      }
      if (k > j) {
        chunks.push_back({i, k});
        i = k;
      } else {
        ++i;
      }
    }
  }
  return chunks;
}

int CountSyllables(std::string_view word) {
  std::string w;
  for (char c : word) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c >= 'a' && c <= 'z') w.push_back(c);
  }
  if (w.empty()) return 1;
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int count = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = vowel(c);
    if (v && !prev_vowel) ++count;
    prev_vowel = v;
  }
  const std::size_t n = w.size();
  if (w.back() == 'e' && count > 1) {
    const bool consonant_le = n > 2 && w[n - 2] == 'l' && !vowel(w[n - 3]);
    if (!consonant_le) --count;
  }
  return std::max(count, 1);
}

Annotation Annotate(std::string_view text) {
  Annotation annotation;
  annotation.text = std::string(text);
  annotation.tokens = Tokenize(text);
  annotation.sentences = SplitSentences(text, annotation.tokens);
  PosTag(annotation);
  annotation.entities = DetectEntities(annotation);
  annotation.noun_chunks = ChunkNouns(annotation);
  return annotation;
}

}  // namespace cprof
