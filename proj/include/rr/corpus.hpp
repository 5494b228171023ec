#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rr {

enum class DatasetId { BVA, CB, ISC };

inline constexpr std::array<DatasetId, 3> kAllDatasets = {DatasetId::BVA, DatasetId::CB,
                                                          DatasetId::ISC};

std::string_view to_string(DatasetId id);
std::optional<DatasetId> parse_dataset(std::string_view name);
DatasetId parse_dataset_or_throw(std::string_view name);

// Binary meta label. Facts is the positive class everywhere.
enum class MetaLabel { Facts, NonFacts };

std::string_view to_string(MetaLabel label);
std::optional<MetaLabel> parse_meta_label(std::string_view name);

struct SentenceRecord {
  DatasetId dataset = DatasetId::BVA;
  std::string doc_id;
  std::size_t sent_index = 0;
  std::string text;
  std::string source_label;
  std::optional<MetaLabel> meta_label;

  bool operator==(const SentenceRecord&) const = default;
};

struct Document {
  DatasetId dataset = DatasetId::BVA;
  std::string doc_id;
  std::vector<SentenceRecord> sentences;

  bool operator==(const Document&) const = default;
};

struct Provenance {
  std::string source;
  std::string reader;
};

// An immutable, validated collection of documents from a single dataset.
// Documents are kept in lexicographic doc_id order; sentence indices are
// contiguous from zero within each document.
class Corpus {
 public:
  Corpus(DatasetId dataset, std::vector<Document> documents, Provenance provenance);

  // Groups records by doc_id and orders them by sent_index. Throws
  // IngestError on duplicate keys, gaps, empty text or mixed datasets.
  static Corpus from_records(DatasetId dataset, std::vector<SentenceRecord> records,
                             Provenance provenance);

  DatasetId dataset() const noexcept { return dataset_; }
  const std::vector<Document>& documents() const noexcept { return documents_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  std::size_t document_count() const noexcept { return documents_.size(); }
  std::size_t sentence_count() const noexcept;
  std::vector<SentenceRecord> sentences() const;
  const Document* find(std::string_view doc_id) const;

  // Content equality; provenance is not compared.
  bool operator==(const Corpus& other) const {
    return dataset_ == other.dataset_ && documents_ == other.documents_;
  }

 private:
  DatasetId dataset_;
  std::vector<Document> documents_;
  Provenance provenance_;
};

// Interchange format: one JSON object per sentence, keys in the fixed order
// dataset, doc_id, sent_index, text, source_label, meta_label.
std::string sentence_to_json_line(const SentenceRecord& record);
SentenceRecord sentence_from_json_line(std::string_view line);

std::string to_jsonl(const Corpus& corpus);
void write_jsonl(const std::filesystem::path& path, const Corpus& corpus);
Corpus parse_jsonl(std::string_view contents, Provenance provenance);
Corpus read_jsonl(const std::filesystem::path& path);

// Unlabeled projection used for prediction jobs: only dataset, doc_id,
// sent_index and text are written.
std::string sentence_to_unlabeled_json_line(const SentenceRecord& record);

}  // namespace rr
