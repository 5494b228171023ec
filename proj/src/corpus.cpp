#include "rr/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace rr {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(DatasetId id) {
  switch (id) {
    case DatasetId::BVA: return "BVA";
    case DatasetId::CB: return "CB";
    case DatasetId::ISC: return "ISC";
  }
  return "?";
}

std::optional<DatasetId> parse_dataset(std::string_view name) {
  for (DatasetId id : kAllDatasets) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

DatasetId parse_dataset_or_throw(std::string_view name) {
  if (auto id = parse_dataset(name)) return *id;
  throw ConfigError("unknown dataset '" + std::string(name) + "' (expected BVA, CB or ISC)");
}

std::string_view to_string(MetaLabel label) {
  return label == MetaLabel::Facts ? "Facts" : "NonFacts";
}

std::optional<MetaLabel> parse_meta_label(std::string_view name) {
  if (name == "Facts") return MetaLabel::Facts;
  if (name == "NonFacts") return MetaLabel::NonFacts;
  return std::nullopt;
}

Corpus::Corpus(DatasetId dataset, std::vector<Document> documents, Provenance provenance)
    : dataset_(dataset), documents_(std::move(documents)), provenance_(std::move(provenance)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const Document& doc = documents_[d];
    if (d > 0 && documents_[d - 1].doc_id == doc.doc_id)
      throw IngestError("duplicate doc_id '" + doc.doc_id + "'");
    if (doc.dataset != dataset_)
      throw IngestError("document '" + doc.doc_id + "' belongs to another dataset");
    if (doc.sentences.empty()) throw IngestError("document '" + doc.doc_id + "' has no sentences");
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const SentenceRecord& s = doc.sentences[i];
      if (s.sent_index != i || s.doc_id != doc.doc_id || s.dataset != dataset_)
        throw IngestError("document '" + doc.doc_id + "': sentence " + std::to_string(i) +
                          " out of place");
      if (text::trim(s.text).empty())
        throw IngestError("document '" + doc.doc_id + "': empty sentence " + std::to_string(i));
    }
  }
}

Corpus Corpus::from_records(DatasetId dataset, std::vector<SentenceRecord> records,
                            Provenance provenance) {
  std::map<std::string, std::vector<SentenceRecord>> grouped;
  for (auto& r : records) {
    if (r.dataset != dataset)
      throw IngestError("record " + r.doc_id + "/" + std::to_string(r.sent_index) +
                        " has dataset " + std::string(to_string(r.dataset)) + ", expected " +
                        std::string(to_string(dataset)));
    grouped[r.doc_id].push_back(std::move(r));
  }
  std::vector<Document> docs;
  docs.reserve(grouped.size());
  for (auto& [doc_id, sentences] : grouped) {
    std::sort(sentences.begin(), sentences.end(),
              [](const auto& a, const auto& b) { return a.sent_index < b.sent_index; });
    for (std::size_t i = 1; i < sentences.size(); ++i) {
      if (sentences[i].sent_index == sentences[i - 1].sent_index)
        throw IngestError("duplicate sentence " + doc_id + "/" +
                          std::to_string(sentences[i].sent_index));
    }
    docs.push_back(Document{dataset, doc_id, std::move(sentences)});
  }
  return Corpus(dataset, std::move(docs), std::move(provenance));
}

std::size_t Corpus::sentence_count() const noexcept {
  return std::accumulate(documents_.begin(), documents_.end(), std::size_t{0},
                         [](std::size_t n, const Document& d) { return n + d.sentences.size(); });
}

std::vector<SentenceRecord> Corpus::sentences() const {
  std::vector<SentenceRecord> out;
  out.reserve(sentence_count());
  for (const auto& doc : documents_) out.insert(out.end(), doc.sentences.begin(), doc.sentences.end());
  return out;
}

const Document* Corpus::find(std::string_view doc_id) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), doc_id,
                             [](const Document& d, std::string_view id) { return d.doc_id < id; });
  if (it == documents_.end() || it->doc_id != doc_id) return nullptr;
  return &*it;
}

std::string sentence_to_json_line(const SentenceRecord& r) {
  ordered_json j;
  j["dataset"] = to_string(r.dataset);
  j["doc_id"] = r.doc_id;
  j["sent_index"] = r.sent_index;
  j["text"] = r.text;
  j["source_label"] = r.source_label;
  if (r.meta_label)
    j["meta_label"] = to_string(*r.meta_label);
  else
    j["meta_label"] = nullptr;
  return j.dump();
}

std::string sentence_to_unlabeled_json_line(const SentenceRecord& r) {
  ordered_json j;
  j["dataset"] = to_string(r.dataset);
  j["doc_id"] = r.doc_id;
  j["sent_index"] = r.sent_index;
  j["text"] = r.text;
  return j.dump();
}

SentenceRecord sentence_from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("malformed JSON line: ") + e.what());
  }
  try {
    SentenceRecord r;
    r.dataset = parse_dataset_or_throw(j.at("dataset").get<std::string>());
    r.doc_id = j.at("doc_id").get<std::string>();
    r.sent_index = j.at("sent_index").get<std::size_t>();
    r.text = j.at("text").get<std::string>();
    if (auto it = j.find("source_label"); it != j.end() && !it->is_null())
      r.source_label = it->get<std::string>();
    if (auto it = j.find("meta_label"); it != j.end() && !it->is_null()) {
      const auto name = it->get<std::string>();
      r.meta_label = parse_meta_label(name);
      if (!r.meta_label) throw IngestError("unknown meta_label '" + name + "'");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("bad interchange record: ") + e.what());
  } catch (const ConfigError& e) {
    throw IngestError(e.what());
  }
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents()) {
    for (const auto& s : doc.sentences) {
      out += sentence_to_json_line(s);
      out += '\n';
    }
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const Corpus& corpus) {
  text::write_file(path, to_jsonl(corpus));
}

Corpus parse_jsonl(std::string_view contents, Provenance provenance) {
  std::vector<SentenceRecord> records;
  std::size_t line_no = 0;
  for (const auto& line : text::split(contents, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      records.push_back(sentence_from_json_line(line));
    } catch (const IngestError& e) {
      throw IngestError(provenance.source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (records.empty()) throw IngestError("empty corpus: " + provenance.source);
  const DatasetId dataset = records.front().dataset;
  return Corpus::from_records(dataset, std::move(records), std::move(provenance));
}

Corpus read_jsonl(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IngestError("missing path: " + path.string());
  return parse_jsonl(text::read_file(path), Provenance{path.string(), "jsonl/1"});
}

}  // namespace rr
