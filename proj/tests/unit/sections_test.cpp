#include <doctest.h>

#include <algorithm>

#include "rr/error.hpp"
#include "rr/sections.hpp"

using namespace rr;

TEST_CASE("segment the reference brief") {
  const auto s = segment_brief_sections("Facts:\nA sued B.\nIssue:\nWho wins?");
  REQUIRE(s.size() == 2);
  CHECK(s[0].canonical == SectionType::Facts);
  CHECK(s[0].body == "A sued B.");
  CHECK(s[1].canonical == SectionType::Issue);
  CHECK(s[1].body == "Who wins?");
}

TEST_CASE("no sections") {
  CHECK(segment_brief_sections("").empty());
  CHECK(segment_brief_sections("just a line of prose without any heading at all.\nand another one.").empty());
}

TEST_CASE("canonicalize headings") {
  CHECK(canonicalize_heading("Legal Issue") == SectionType::Issue);
  CHECK(canonicalize_heading("Issues") == SectionType::Issue);
  CHECK(canonicalize_heading("Issue") == SectionType::Issue);
  CHECK(canonicalize_heading("FACTS  ") == SectionType::Facts);
  CHECK(canonicalize_heading("Procedural History") == SectionType::ProceduralHistory);
  CHECK(canonicalize_heading("Holding") == SectionType::Conclusion);
  CHECK(canonicalize_heading("Rule of Law") == SectionType::Rule);
  CHECK(canonicalize_heading("Dissenting Opinion") == SectionType::Unknown);
  CHECK(canonicalize_heading("facts:") == canonicalize_heading("  Facts "));
}

TEST_CASE("unknown iff no rule matched") {
  const auto s = segment_brief_sections("Dissent:\nI disagree.\nFacts:\nX.");
  REQUIRE(s.size() == 2);
  CHECK(s[0].canonical == SectionType::Unknown);
  CHECK(s[0].raw_heading == "Dissent");
  CHECK(s[1].canonical == SectionType::Facts);
}

TEST_CASE("sections partition the input") {
  const std::string text =
      "Case Name\nPreamble text.\n\nFacts: The plaintiff slipped.\nMore facts here.\n\n"
      "Procedural History\nThe trial court ruled.\n\nIssue:\nWas there a duty?\n\nHolding:\nYes.\n";
  const auto s = segment_brief_sections(text);
  REQUIRE(s.size() >= 4);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].heading_begin <= s[i].body_begin);
    CHECK(s[i].body_begin <= s[i].body_end);
    if (i + 1 < s.size()) CHECK(s[i].body_end == s[i + 1].heading_begin);
    CHECK(std::string_view(text).substr(s[i].body_begin, s[i].body_end - s[i].body_begin).find(s[i].body) !=
          std::string_view::npos);
  }
  CHECK(s.back().body_end == text.size());
  // Prefix + sections reconstruct the input.
  std::string rebuilt = text.substr(0, s.front().heading_begin);
  for (const auto& sec : s) rebuilt += text.substr(sec.heading_begin, sec.body_end - sec.heading_begin);
  CHECK(rebuilt == text);
  CHECK(std::count_if(s.begin(), s.end(), [](const auto& x) {
          return x.canonical == SectionType::ProceduralHistory && x.body == "The trial court ruled.";
        }) == 1);
}

TEST_CASE("rule file parsing") {
  const auto rules = SectionRules::parse("# comment\n(my )?facts\tFacts\nquestion\tIssue\n");
  CHECK(rules.rules().size() == 2);
  CHECK(rules.classify("My Facts") == SectionType::Facts);
  CHECK(rules.classify("Issue") == SectionType::Unknown);
  CHECK_THROWS_WITH_AS(SectionRules::parse("facts Facts\n"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(SectionRules::parse("x\tFacts\ny\tNope\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(SectionRules::parse("(\tFacts\n"), ConfigError);
}

TEST_CASE("section type names") {
  CHECK(to_string(SectionType::ProceduralHistory) == "Procedural History");
  CHECK(parse_section_type("ProceduralHistory") == SectionType::ProceduralHistory);
  CHECK(parse_section_type("Procedural History") == SectionType::ProceduralHistory);
}
