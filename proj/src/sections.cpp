#include "rr/sections.hpp"

#include <array>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace rr {

std::string_view to_string(SectionType type) {
  switch (type) {
    case SectionType::Facts: return "Facts";
    case SectionType::Issue: return "Issue";
    case SectionType::Conclusion: return "Conclusion";
    case SectionType::ProceduralHistory: return "Procedural History";
    case SectionType::Reasoning: return "Reasoning";
    case SectionType::Rule: return "Rule";
    case SectionType::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<SectionType> parse_section_type(std::string_view name) {
  if (name == "ProceduralHistory") return SectionType::ProceduralHistory;
  for (auto t : {SectionType::Facts, SectionType::Issue, SectionType::Conclusion,
                 SectionType::ProceduralHistory, SectionType::Reasoning, SectionType::Rule,
                 SectionType::Unknown}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view default_section_rules_text() {
  static constexpr std::string_view kRules =
      "# section-rules v1: <pattern> TAB <canonical>\n"
      "# patterns match the lowercased heading with punctuation removed\n"
      "(statement of )?(the )?(key |relevant |material |brief )?facts?( of the case)?\tFacts\n"
      "(the )?facts and (procedural )?(history|background)\tFacts\n"
      "(factual )?background( facts)?\tFacts\n"
      "factual (history|summary|background)\tFacts\n"
      "(legal |key |main |central |primary )?issues?( presented)?\tIssue\n"
      "(legal )?questions?( presented)?( for review)?\tIssue\n"
      "procedural (history|posture|background)\tProceduralHistory\n"
      "(prior |case )?(procedural )?history( of the case)?\tProceduralHistory\n"
      "(the )?(court s |courts )?(reasoning|rationale|analysis)\tReasoning\n"
      "(reasons?|rationale)( for (the )?(decision|holding))?\tReasoning\n"
      "discussion\tReasoning\n"
      "(legal |applicable |relevant )?rules?( of law)?\tRule\n"
      "(applicable |governing )?law\tRule\n"
      "(legal )?principles?( of law)?\tRule\n"
      "(the )?(court s |courts )?(conclusions?|holdings?|held)\tConclusion\n"
      "(decision|judgment|judgement|disposition|outcome|result|verdict|ruling)\tConclusion\n";
  return kRules;
}

const SectionRules& default_section_rules() {
  static const SectionRules rules = SectionRules::parse(default_section_rules_text());
  return rules;
}

SectionRules SectionRules::parse(std::string_view config) {
  SectionRules out;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(config, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = raw.rfind('\t');
    if (tab == std::string::npos)
      throw ConfigError("section rules line " + std::to_string(line_no) + ": expected TAB");
    const std::string pattern = text::trim_copy(std::string_view(raw).substr(0, tab));
    const std::string name = text::trim_copy(std::string_view(raw).substr(tab + 1));
    const auto type = parse_section_type(name);
    if (!type || *type == SectionType::Unknown)
      throw ConfigError("section rules line " + std::to_string(line_no) +
                        ": unknown canonical type '" + name + "'");
    if (pattern.empty())
      throw ConfigError("section rules line " + std::to_string(line_no) + ": empty pattern");
    try {
      out.rules_.push_back(Rule{pattern, std::regex(pattern, std::regex::ECMAScript), *type});
    } catch (const std::regex_error& e) {
      throw ConfigError("section rules line " + std::to_string(line_no) + ": bad pattern: " +
                        e.what());
    }
  }
  return out;
}

SectionRules SectionRules::load(const std::string& path) {
  return parse(text::read_file(path));
}

std::string normalize_heading(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       static_cast<unsigned char>(c) >= 0x80;
    if (alnum) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else {
      pending_space = true;
    }
  }
  return out;
}

SectionType SectionRules::classify(std::string_view raw_heading) const {
  const std::string key = normalize_heading(raw_heading);
  if (key.empty()) return SectionType::Unknown;
  for (const auto& rule : rules_) {
    if (std::regex_match(key, rule.compiled)) return rule.type;
  }
  return SectionType::Unknown;
}

SectionType canonicalize_heading(std::string_view raw) {
  return default_section_rules().classify(raw);
}

namespace {

constexpr std::array<std::string_view, 15> kSmallWords = {
    "of", "and", "the", "in", "for", "on", "to", "a", "an", "by", "v", "vs", "with", "at", "or"};

std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = c == ' ' || c == '\t';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

bool starts_with_letter(std::string_view s) {
  if (s.empty()) return false;
  const char c = s.front();
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool has_sentence_punct(std::string_view s) {
  return s.find_first_of(".?!;") != std::string_view::npos;
}

bool is_heading_label(std::string_view h) {
  return starts_with_letter(h) && word_count(h) <= 8 && !has_sentence_punct(h) && h.size() <= 80;
}

bool is_title_case_line(std::string_view t) {
  if (t.empty() || t.size() > 60 || word_count(t) > 6) return false;
  if (!(t.front() >= 'A' && t.front() <= 'Z')) return false;
  if (t.find_first_of(".?!,;:\"") != std::string_view::npos) return false;
  for (const auto& word : text::split(t, ' ')) {
    if (word.empty()) continue;
    const char c = word.front();
    if (c >= 'A' && c <= 'Z') continue;
    if (c >= '0' && c <= '9') return false;
    bool small = false;
    for (auto sw : kSmallWords) small = small || word == sw;
    if (!small) return false;
  }
  return true;
}

struct HeadingMatch {
  std::string raw;
  std::size_t body_begin;  // absolute offset
};

std::optional<HeadingMatch> match_heading(std::string_view line, std::size_t line_begin,
                                          std::size_t line_end_with_newline,
                                          const SectionRules& rules) {
  const auto t = text::trim(line);
  if (t.empty()) return std::nullopt;

  if (t.back() == ':') {
    const auto h = text::trim(t.substr(0, t.size() - 1));
    if (is_heading_label(h)) return HeadingMatch{std::string(h), line_end_with_newline};
  }

  const auto colon = t.find(':');
  if (colon != std::string_view::npos && colon + 1 < t.size()) {
    const auto h = text::trim(t.substr(0, colon));
    if (is_heading_label(h) && word_count(h) <= 5 && rules.classify(h) != SectionType::Unknown) {
      const std::size_t lead = static_cast<std::size_t>(t.data() - line.data());
      return HeadingMatch{std::string(h), line_begin + lead + colon + 1};
    }
  }

  if (is_title_case_line(t)) return HeadingMatch{std::string(t), line_end_with_newline};
  return std::nullopt;
}

}  // namespace

std::vector<BriefSection> segment_brief_sections(std::string_view text, const SectionRules& rules) {
  std::vector<BriefSection> sections;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    const std::size_t line_end = eol == std::string_view::npos ? text.size() : eol;
    const std::size_t next = eol == std::string_view::npos ? text.size() : eol + 1;
    const auto line = text.substr(pos, line_end - pos);
    if (auto m = match_heading(line, pos, next, rules)) {
      if (!sections.empty()) sections.back().body_end = pos;
      BriefSection s;
      s.raw_heading = std::move(m->raw);
      s.canonical = rules.classify(s.raw_heading);
      s.heading_begin = pos;
      s.body_begin = m->body_begin;
      sections.push_back(std::move(s));
    }
    pos = next;
  }
  if (!sections.empty()) sections.back().body_end = text.size();
  for (auto& s : sections) {
    s.body = text::trim_copy(text.substr(s.body_begin, s.body_end - s.body_begin));
  }
  return sections;
}

}  // namespace rr
