#include <doctest.h>

#include <random>

#include "rr/sentence_split.hpp"

using namespace rr;

namespace {

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

TEST_CASE("plain sentences") {
  CHECK(split_sentences("The court ruled. The appeal failed.") ==
        std::vector<std::string>{"The court ruled.", "The appeal failed."});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   \n ").empty());
}

TEST_CASE("citations do not split") {
  const auto s = split_sentences("See Smith v. Jones, 530 U.S. 123. He appealed.");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == "See Smith v. Jones, 530 U.S. 123.");
  CHECK(s[1] == "He appealed.");
}

TEST_CASE("abbreviations, initials and section signs") {
  CHECK(split_sentences("Mr. Smith met Dr. Jones on Jan. 5. They talked.").size() == 2);
  CHECK(split_sentences("Filed as No. 12 under \xC2\xA7 5. Then denied.").size() == 2);
  CHECK(split_sentences("John F. Kennedy spoke. He left.").size() == 2);
  CHECK(split_sentences("Acme Inc. Was sued.").size() == 1);
  CHECK(split_sentences("It was 42 F.3d 1051 (9th Cir. 1994). Affirmed.").size() == 2);
}

TEST_CASE("question marks, quotes and blank lines") {
  CHECK(split_sentences("Is it? \"Yes,\" he said.").size() == 2);
  CHECK(split_sentences("no terminal punctuation\n\nsecond paragraph").size() == 2);
  CHECK(split_sentences("He said \"stop.\" Then left.").size() == 2);
  CHECK(split_sentences("lowercase after period. continues here").size() == 1);
}

TEST_CASE("property: abbreviations never end a sentence, nothing is lost") {
  const auto& abbr = default_abbreviations();
  const std::vector<std::string> words{"court", "held", "that", "the", "claim", "was", "denied", "plaintiff"};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < n; ++s) {
      text += "The";
      for (int k = 0; k < 3; ++k) text += " " + words[rng() % words.size()];
      const std::string& a = abbr[rng() % abbr.size()];
      text += " " + a + " Smith " + words[rng() % words.size()] + ". ";
    }
    const auto out = split_sentences(text);
    CHECK(out.size() == static_cast<std::size_t>(n));
    std::string joined;
    for (const auto& s : out) {
      CHECK_FALSE(s.empty());
      joined += s;
    }
    CHECK(squash(joined) == squash(text));
  }
}

TEST_CASE("lexicon entries end with a period") {
  for (const auto& a : default_abbreviations()) CHECK(a.back() == '.');
  SentenceSplitter sp;
  CHECK(sp.is_abbreviation("v."));
  CHECK(sp.is_abbreviation("U.S."));
  CHECK_FALSE(sp.is_abbreviation("court."));
}
