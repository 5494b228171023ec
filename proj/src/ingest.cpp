#include "rr/ingest.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rr/error.hpp"
#include "rr/recast.hpp"
#include "rr/text.hpp"

namespace fs = std::filesystem;

namespace rr {

void Diagnostics::warn(std::string message) {
  spdlog::warn("{}", message);
  warnings.push_back(std::move(message));
}

namespace {

void warn(Diagnostics* diag, std::string message) {
  if (diag)
    diag->warn(std::move(message));
  else
    spdlog::warn("{}", message);
}

std::vector<fs::path> list_files(const fs::path& dir, std::initializer_list<std::string_view> exts) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = text::ascii_lower(entry.path().extension().string());
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool is_interchange_file(const fs::path& path) {
  return fs::is_regular_file(path) && text::ascii_lower(path.extension().string()) == ".jsonl";
}

Corpus read_interchange(DatasetId expected, const fs::path& path) {
  Corpus corpus = read_jsonl(path);
  if (corpus.dataset() != expected)
    throw IngestError(path.string() + ": holds " + std::string(to_string(corpus.dataset())) +
                      " records, expected " + std::string(to_string(expected)));
  return corpus;
}

void require_dir(const fs::path& path) {
  if (!fs::exists(path)) throw IngestError("missing path: " + path.string());
  if (!fs::is_directory(path)) throw IngestError("not a directory: " + path.string());
}

void check_label(DatasetId dataset, const SentenceRecord& r, Diagnostics* diag) {
  if (!is_known_source_label(dataset, r.source_label))
    warn(diag, std::string(to_string(dataset)) + " " + r.doc_id + "/" + std::to_string(r.sent_index) +
                   ": unrecognized label '" + r.source_label + "' (kept)");
}

Corpus finish(DatasetId dataset, std::vector<Document> docs, const fs::path& path,
              std::string_view reader) {
  if (docs.empty()) throw IngestError("empty corpus: " + path.string());
  Corpus corpus(dataset, std::move(docs), Provenance{path.string(), std::string(reader)});
  spdlog::info("{}: {} documents, {} sentences from {}", to_string(dataset), corpus.document_count(),
               corpus.sentence_count(), path.string());
  return corpus;
}

std::optional<std::string> json_label(const nlohmann::json& sentence) {
  for (const char* key : {"rhetClass", "rhetRole", "rhetoricalRole", "role", "label"}) {
    auto it = sentence.find(key);
    if (it == sentence.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    // Secondary roles are ignored; only the primary one participates.
    if (it->is_array() && !it->empty() && it->front().is_string())
      return it->front().get<std::string>();
  }
  return std::nullopt;
}

std::optional<std::string> json_text(const nlohmann::json& sentence) {
  for (const char* key : {"text", "sentence", "sentText"}) {
    auto it = sentence.find(key);
    if (it != sentence.end() && it->is_string()) return it->get<std::string>();
  }
  return std::nullopt;
}

}  // namespace

std::string canonical_bva_label(std::string_view raw) {
  std::string label = text::trim_copy(raw);
  static const std::map<std::string, std::string> aliases = {
      {"FindingSentence", "Finding"},     {"EvidenceSentence", "Evidence"},
      {"ReasoningSentence", "Reasoning"}, {"LegalRuleSentence", "Legal Rule"},
      {"CitationSentence", "Citation"},   {"LegalRule", "Legal Rule"},
      {"Legal-Rule", "Legal Rule"},       {"Legal_Rule", "Legal Rule"}};
  if (auto it = aliases.find(label); it != aliases.end()) return it->second;
  return label;
}

std::string canonical_isc_label(std::string_view raw) {
  const std::string label = text::trim_copy(raw);
  static const std::map<std::string, std::string> aliases = {
      {"facts", "Facts"},
      {"fact", "Facts"},
      {"argument", "Argument"},
      {"arguments", "Argument"},
      {"statute", "Statute"},
      {"precedent", "Precedent"},
      {"ratio", "Ratio"},
      {"ratio of the decision", "Ratio"},
      {"ratio decidendi", "Ratio"},
      {"ruling by lower court", "Ruling (lower court)"},
      {"ruling (lower court)", "Ruling (lower court)"},
      {"ruling by present court", "Ruling (present court)"},
      {"ruling (present court)", "Ruling (present court)"}};
  if (auto it = aliases.find(text::ascii_lower(label)); it != aliases.end()) return it->second;
  return label;
}

Corpus ingest_bva(const fs::path& path, Diagnostics* diag) {
  if (is_interchange_file(path)) return read_interchange(DatasetId::BVA, path);
  require_dir(path);
  std::vector<Document> docs;
  for (const auto& file : list_files(path, {".json"})) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text::normalize(text::read_file(file)));
    } catch (const nlohmann::json::exception& e) {
      throw IngestError(file.string() + ": " + e.what());
    }
    const nlohmann::json* sentences = nullptr;
    if (j.is_array())
      sentences = &j;
    else if (j.is_object() && j.contains("sentences") && j["sentences"].is_array())
      sentences = &j["sentences"];
    if (!sentences) {
      warn(diag, file.string() + ": no sentence list, skipped");
      continue;
    }
    Document doc{DatasetId::BVA, file.stem().string(), {}};
    for (const auto& s : *sentences) {
      const auto body = json_text(s);
      if (!body || text::trim(*body).empty()) {
        warn(diag, file.string() + ": sentence without text skipped");
        continue;
      }
      SentenceRecord r;
      r.dataset = DatasetId::BVA;
      r.doc_id = doc.doc_id;
      r.sent_index = doc.sentences.size();
      r.text = text::trim_copy(*body);
      r.source_label = canonical_bva_label(json_label(s).value_or(""));
      check_label(DatasetId::BVA, r, diag);
      doc.sentences.push_back(std::move(r));
    }
    if (doc.sentences.empty()) {
      warn(diag, file.string() + ": no sentences, skipped");
      continue;
    }
    docs.push_back(std::move(doc));
  }
  return finish(DatasetId::BVA, std::move(docs), path, kBvaReaderVersion);
}

Corpus ingest_isc(const fs::path& path, Diagnostics* diag) {
  if (is_interchange_file(path)) return read_interchange(DatasetId::ISC, path);
  require_dir(path);
  std::vector<Document> docs;
  for (const auto& file : list_files(path, {".txt", ".tsv"})) {
    const std::string contents = text::normalize(text::read_file(file));
    Document doc{DatasetId::ISC, file.stem().string(), {}};
    std::size_t line_no = 0;
    for (const auto& line : text::split(contents, '\n')) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos) {
        warn(diag, file.string() + ":" + std::to_string(line_no) + ": no label column, skipped");
        continue;
      }
      const auto body = text::trim(std::string_view(line).substr(0, tab));
      if (body.empty()) {
        warn(diag, file.string() + ":" + std::to_string(line_no) + ": empty sentence, skipped");
        continue;
      }
      SentenceRecord r;
      r.dataset = DatasetId::ISC;
      r.doc_id = doc.doc_id;
      r.sent_index = doc.sentences.size();
      r.text = std::string(body);
      r.source_label = canonical_isc_label(std::string_view(line).substr(tab + 1));
      check_label(DatasetId::ISC, r, diag);
      doc.sentences.push_back(std::move(r));
    }
    if (doc.sentences.empty()) {
      warn(diag, file.string() + ": no sentences, skipped");
      continue;
    }
    docs.push_back(std::move(doc));
  }
  return finish(DatasetId::ISC, std::move(docs), path, kIscReaderVersion);
}

std::string strip_markup(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    const char c = html[i];
    if (c == '<') {
      const auto close = html.find('>', i);
      if (close == std::string_view::npos) break;
      std::string tag = text::ascii_lower(html.substr(i + 1, close - i - 1));
      const auto name_end = tag.find_first_of(" \t\n/");
      const bool closing = !tag.empty() && tag.front() == '/';
      std::string name = closing ? tag.substr(1) : tag.substr(0, name_end);
      if (auto sp = name.find_first_of(" \t\n"); sp != std::string::npos) name.resize(sp);
      static const char* kBlock[] = {"p", "div", "br", "br/", "li", "h1", "h2", "h3", "h4",
                                     "h5", "h6", "tr", "section", "article", "header"};
      bool block = false;
      for (const char* b : kBlock) block = block || name == b;
      if (name == "script" || name == "style") {
        const std::string end_tag = "</" + name;
        auto end = text::ascii_lower(html.substr(close)).find(end_tag);
        i = end == std::string::npos ? html.size() : html.find('>', close + end) + 1;
        continue;
      }
      if (block) out += '\n';
      i = close + 1;
      continue;
    }
    if (c == '&') {
      const auto semi = html.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 8) {
        const auto entity = html.substr(i + 1, semi - i - 1);
        static const std::map<std::string_view, std::string_view> named = {
            {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"},
            {"nbsp", " "}, {"sect", "\xC2\xA7"}, {"rsquo", "\xE2\x80\x99"},
            {"lsquo", "\xE2\x80\x98"}, {"rdquo", "\xE2\x80\x9D"}, {"ldquo", "\xE2\x80\x9C"},
            {"mdash", "\xE2\x80\x94"}, {"ndash", "\xE2\x80\x93"}};
        if (auto it = named.find(entity); it != named.end()) {
          out += it->second;
          i = semi + 1;
          continue;
        }
        if (entity.size() > 1 && entity.front() == '#') {
          const bool hex = entity[1] == 'x' || entity[1] == 'X';
          try {
            const unsigned long cp =
                std::stoul(std::string(entity.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10);
            if (cp < 0x80) {
              out += static_cast<char>(cp);
            } else if (cp < 0x800) {
              out += static_cast<char>(0xC0 | (cp >> 6));
              out += static_cast<char>(0x80 | (cp & 0x3F));
            } else if (cp < 0x10000) {
              out += static_cast<char>(0xE0 | (cp >> 12));
              out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
              out += static_cast<char>(0x80 | (cp & 0x3F));
            }
            i = semi + 1;
            continue;
          } catch (const std::exception&) {
          }
        }
      }
    }
    out += c;
    ++i;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> brief_sentences(std::string_view body,
                                                                 const SectionRules& rules,
                                                                 const SentenceSplitter& splitter) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& section : segment_brief_sections(body, rules)) {
    if (section.canonical == SectionType::Unknown) continue;
    for (auto& sentence : splitter.split(section.body))
      out.emplace_back(std::string(to_string(section.canonical)), std::move(sentence));
  }
  return out;
}

Corpus ingest_casebriefs(const fs::path& path, const SectionRules& rules,
                         const SentenceSplitter& splitter, Diagnostics* diag) {
  if (is_interchange_file(path)) return read_interchange(DatasetId::CB, path);
  require_dir(path);
  std::vector<Document> docs;
  for (const auto& file : list_files(path, {".txt", ".html", ".htm", ".md"})) {
    std::string contents = text::normalize(text::read_file(file));
    const std::string ext = text::ascii_lower(file.extension().string());
    if (ext == ".html" || ext == ".htm") contents = strip_markup(contents);
    // CRLF to LF so headings are seen as whole lines
    std::erase(contents, '\r');

    Document doc{DatasetId::CB, file.stem().string(), {}};
    for (auto& [label, sentence] : brief_sentences(contents, rules, splitter)) {
      SentenceRecord r;
      r.dataset = DatasetId::CB;
      r.doc_id = doc.doc_id;
      r.sent_index = doc.sentences.size();
      r.text = std::move(sentence);
      r.source_label = label;
      doc.sentences.push_back(std::move(r));
    }
    if (doc.sentences.empty()) {
      warn(diag, file.string() + ": no recognized sections, brief skipped");
      continue;
    }
    docs.push_back(std::move(doc));
  }
  return finish(DatasetId::CB, std::move(docs), path, kCbReaderVersion);
}

Corpus ingest_dataset(DatasetId dataset, const fs::path& path, const SectionRules& rules,
                      Diagnostics* diag) {
  switch (dataset) {
    case DatasetId::BVA: return ingest_bva(path, diag);
    case DatasetId::ISC: return ingest_isc(path, diag);
    case DatasetId::CB: return ingest_casebriefs(path, rules, SentenceSplitter(), diag);
  }
  throw IngestError("unknown dataset");
}

}  // namespace rr
