#include "rr/sentence_split.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "rr/text.hpp"

namespace rr {

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> lexicon = {
      // case names and citations
      "v.", "vs.", "No.", "Nos.", "no.", "nos.", "Id.", "id.", "Ibid.", "ibid.", "cf.", "Cf.",
      "al.", "art.", "Art.", "Sec.", "sec.", "Ch.", "ch.", "Para.", "para.", "p.", "pp.", "n.",
      "Vol.", "vol.", "ed.", "Ed.", "supra.", "infra.", "approx.", "Cl.", "cl.", "Ex.",
      // reporters and courts
      "U.S.", "U.S.C.", "C.F.R.", "F.", "S.Ct.", "L.Ed.",
      "Supp.", "App.", "Vet.", "Fed.", "Reg.", "Cir.", "Ct.", "Civ.", "Crim.", "Evid.",
      "Proc.", "Const.", "Stat.", "Ann.", "Rev.", "So.", "Cr.", "N.E.", "N.W.", "S.E.", "S.W.", "SCC.", "SCR.", "Bom.", "Cal.", "Tex.", "Fla.",
      "Ill.", "Mass.", "Pa.", "Mich.", "Wash.", "Va.", "Md.", "Conn.", "Wis.",
      // titles
      "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Hon.", "Jr.", "Sr.", "St.", "Gen.", "Gov.", "Rep.",
      "Sen.", "Sgt.", "Lt.", "Col.", "Capt.", "Maj.", "Cpl.", "Pvt.", "Shri.", "Smt.",
      // organizations
      "Inc.", "Co.", "Corp.", "Ltd.", "LLC.", "Bros.", "Mfg.", "Ry.", "Dept.", "Assn.", "Govt.",
      "Admin.", "Comm.", "Int'l.",
      // months
      "Jan.", "Feb.", "Mar.", "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.",
      "Dec.",
      // latin
      "e.g.", "i.e.", "viz."};
  return lexicon;
}

SentenceSplitter::SentenceSplitter() : SentenceSplitter(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations)
    : abbreviations_(abbreviations.begin(), abbreviations.end()) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }
bool is_ascii_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Returns the byte length of a closing quote/bracket at pos, 0 if none.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+201D right double quote, U+2019 right single quote
  if (s.substr(pos, 3) == "\xE2\x80\x9D" || s.substr(pos, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

bool opens_sentence(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[') return true;
  if (s.substr(pos, 3) == "\xE2\x80\x9C" || s.substr(pos, 3) == "\xE2\x80\x98") return true;
  const auto* data = reinterpret_cast<const uint8_t*>(s.data());
  auto i = static_cast<int32_t>(pos);
  UChar32 cp;
  U8_NEXT(data, i, static_cast<int32_t>(s.size()), cp);
  return cp >= 0 && u_isupper(cp);
}

bool is_dotted_acronym(std::string_view token) {
  // "U.S.", "e.g.", "S.Ct.": letters and at least two periods, short.
  if (token.size() > 10) return false;
  int dots = 0;
  for (char c : token) {
    if (c == '.')
      ++dots;
    else if (!is_ascii_alpha(c))
      return false;
  }
  return dots >= 2;
}

bool is_enumerator(std::string_view token) {
  // "1." "12." "a." "iv." when they open a sentence
  token.remove_suffix(1);
  if (token.empty() || token.size() > 3) return false;
  bool digits = true;
  for (char c : token) digits = digits && is_ascii_digit(c);
  if (digits) return true;
  for (char c : token) {
    if (c != 'i' && c != 'v' && c != 'x' && c != 'I' && c != 'V' && c != 'X') return token.size() == 1;
  }
  return true;
}

}  // namespace

bool SentenceSplitter::is_abbreviation(std::string_view token) const {
  return abbreviations_.contains(std::string(token));
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> sentences;
  const std::size_t n = text.size();
  std::size_t start = 0;

  auto emit = [&](std::size_t end) {
    const auto piece = text::trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];

    if (c == '\n') {
      // blank line is a hard boundary
      std::size_t j = i + 1;
      while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < n && text[j] == '\n') {
        emit(i);
        start = j + 1;
        i = j + 1;
        continue;
      }
      ++i;
      continue;
    }

    if (!is_terminator(c)) {
      ++i;
      continue;
    }

    std::size_t end = i + 1;
    while (end < n && is_terminator(text[end])) ++end;
    while (end < n) {
      const std::size_t len = closer_length(text, end);
      if (len == 0) break;
      end += len;
    }
    if (end >= n || !is_space(text[end])) {
      i = end;
      continue;
    }
    std::size_t next = end;
    while (next < n && is_space(text[next])) ++next;
    if (next >= n || !opens_sentence(text, next)) {
      i = end;
      continue;
    }

    if (c == '.' && end == i + 1) {
      std::size_t word_start = i;
      while (word_start > start && !is_space(text[word_start - 1])) --word_start;
      std::string_view token = text.substr(word_start, i + 1 - word_start);
      while (!token.empty() && (token.front() == '(' || token.front() == '"' ||
                                token.front() == '\'' || token.front() == '['))
        token.remove_prefix(1);
      const bool first_token = text::trim(text.substr(start, word_start - start)).empty();
      const bool initial = token.size() == 2 && is_ascii_alpha(token[0]) &&
                           token[0] >= 'A' && token[0] <= 'Z';
      if (is_abbreviation(token) || initial || is_dotted_acronym(token) ||
          (first_token && is_enumerator(token))) {
        i = end;
        continue;
      }
    }

    emit(end);
    start = end;
    i = next;
  }
  if (start < n) emit(n);
  return sentences;
}

std::vector<std::string> split_sentences(std::string_view text) {
  static const SentenceSplitter splitter;
  return splitter.split(text);
}

}  // namespace rr
