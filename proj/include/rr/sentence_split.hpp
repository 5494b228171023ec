#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rr {

// Rule-based sentence boundary detection for legal prose.
//
// A boundary is a run of [.?!] (plus closing quotes/brackets) followed by
// whitespace and an uppercase letter or an opening quote/bracket, or a blank
// line. A period does not end a sentence when the token it closes is in the
// abbreviation lexicon, is a single-letter initial, is a dotted acronym
// ("U.S.", "e.g.") or is a leading list enumerator ("1.").
class SentenceSplitter {
 public:
  SentenceSplitter();
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  // Trimmed, non-empty sentences in document order.
  std::vector<std::string> split(std::string_view text) const;

  bool is_abbreviation(std::string_view token_with_period) const;

 private:
  std::unordered_set<std::string> abbreviations_;
};

// The shipped lexicon: reporters, titles, corporate suffixes, months and
// common legal shorthand. Every entry ends with '.'.
const std::vector<std::string>& default_abbreviations();

std::vector<std::string> split_sentences(std::string_view text);

}  // namespace rr
