#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace rr {

enum class SectionType { Facts, Issue, Conclusion, ProceduralHistory, Reasoning, Rule, Unknown };

// Label used as the source_label of case-brief sentences ("Procedural History").
std::string_view to_string(SectionType type);
std::optional<SectionType> parse_section_type(std::string_view name);

// Ordered heading rules; the first pattern matching the normalized heading
// wins. Patterns are ECMAScript regexes matched against the whole heading
// after lowercasing, replacing punctuation with spaces and collapsing
// whitespace.
class SectionRules {
 public:
  struct Rule {
    std::string pattern;
    std::regex compiled;
    SectionType type;
  };

  // Format: one rule per line, `<pattern> TAB <canonical>`; '#' starts a
  // comment line. Throws ConfigError naming the offending line.
  static SectionRules parse(std::string_view config);
  static SectionRules load(const std::string& path);

  SectionType classify(std::string_view raw_heading) const;
  const std::vector<Rule>& rules() const noexcept { return rules_; }

 private:
  std::vector<Rule> rules_;
};

// Rule file shipped with the harness (also installed as data/section_rules.tsv).
std::string_view default_section_rules_text();
const SectionRules& default_section_rules();

std::string normalize_heading(std::string_view raw);
SectionType canonicalize_heading(std::string_view raw);

struct BriefSection {
  std::string raw_heading;
  SectionType canonical = SectionType::Unknown;
  std::string body;  // trimmed
  // Byte offsets into the segmented text. A section covers
  // [heading_begin, body_end); body_end equals the next heading_begin.
  std::size_t heading_begin = 0;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

std::vector<BriefSection> segment_brief_sections(std::string_view text,
                                                 const SectionRules& rules = default_section_rules());

}  // namespace rr
