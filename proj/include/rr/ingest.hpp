#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rr/corpus.hpp"
#include "rr/sections.hpp"
#include "rr/sentence_split.hpp"

namespace rr {

// Collects non-fatal ingest warnings; every warning is also logged.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message);
};

// Readers for the three source distributions. Each reader also accepts a
// single interchange .jsonl file in place of the native layout.
//
// BVA: a directory of per-decision JSON files (VetClaims-JSON layout): an
//   object with a "sentences" array whose entries carry "text" and a
//   rhetorical role under "rhetClass"/"rhetRole" (string or list; the first
//   entry is the primary role). "EvidenceSentence" style names are reduced
//   to "Evidence". doc_id is the file stem.
// ISC: a directory of per-document .txt files, one `sentence<TAB>label`
//   line per sentence (Law-AI semantic-segmentation layout). Long-form
//   label names ("Ratio of the decision") are reduced to the short inventory.
// CB: a directory of brief files (.txt, .html, .htm, .md); see
//   segment_brief_sections.
Corpus ingest_bva(const std::filesystem::path& path, Diagnostics* diag = nullptr);
Corpus ingest_isc(const std::filesystem::path& path, Diagnostics* diag = nullptr);
Corpus ingest_casebriefs(const std::filesystem::path& path,
                         const SectionRules& rules = default_section_rules(),
                         const SentenceSplitter& splitter = SentenceSplitter(),
                         Diagnostics* diag = nullptr);

Corpus ingest_dataset(DatasetId dataset, const std::filesystem::path& path,
                      const SectionRules& rules = default_section_rules(),
                      Diagnostics* diag = nullptr);

// Sentences of one brief, labeled with their canonical section names.
std::vector<std::pair<std::string, std::string>> brief_sentences(
    std::string_view text, const SectionRules& rules, const SentenceSplitter& splitter);

std::string strip_markup(std::string_view html);
std::string canonical_bva_label(std::string_view raw);
std::string canonical_isc_label(std::string_view raw);

inline constexpr std::string_view kBvaReaderVersion = "bva-vetclaims-json/1";
inline constexpr std::string_view kIscReaderVersion = "isc-semantic-segmentation/1";
inline constexpr std::string_view kCbReaderVersion = "cb-briefs/1";

}  // namespace rr
