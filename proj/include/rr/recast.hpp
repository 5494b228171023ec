#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rr/corpus.hpp"

namespace rr {

// Native label inventory of each dataset.
const std::vector<std::string>& known_source_labels(DatasetId dataset);
bool is_known_source_label(DatasetId dataset, std::string_view label);

enum class UnmappedPolicy { NonFacts, Reject };

struct DatasetMapping {
  std::map<std::string, MetaLabel> labels;
  UnmappedPolicy default_policy = UnmappedPolicy::NonFacts;
  bool operator==(const DatasetMapping&) const = default;
};

// Per-dataset map from source labels to the binary meta label.
//
// Config format, one entry per line ('#' comments allowed):
//   BVA.Evidence = Facts
//   BVA.Legal Rule = NonFacts
//   BVA.default = NonFacts | reject
class LabelMapping {
 public:
  static LabelMapping parse(std::string_view config);
  static LabelMapping load(const std::string& path);
  static const LabelMapping& shipped_default();

  bool covers(DatasetId dataset) const { return datasets_.contains(dataset); }
  const DatasetMapping& at(DatasetId dataset) const;
  const std::map<DatasetId, DatasetMapping>& datasets() const noexcept { return datasets_; }

  // nullopt when the label is unmapped and the dataset policy is reject.
  std::optional<MetaLabel> lookup(DatasetId dataset, std::string_view source_label) const;

  bool operator==(const LabelMapping&) const = default;

 private:
  std::map<DatasetId, DatasetMapping> datasets_;
};

std::string_view default_mapping_text();

struct RecastOptions {
  // Forces reject semantics for unmapped labels regardless of the config.
  bool strict = false;
};

// Returns a copy of the corpus with meta_label set from the source label.
// Throws ConfigError listing the offending labels under reject semantics.
Corpus recast_corpus(const Corpus& corpus, const LabelMapping& mapping, RecastOptions options = {});

struct ClassCounts {
  std::size_t facts = 0;
  std::size_t non_facts = 0;
  std::size_t total() const { return facts + non_facts; }
  bool operator==(const ClassCounts&) const = default;
};

struct LabelDistribution {
  std::map<DatasetId, ClassCounts> per_dataset;
  ClassCounts pooled;

  // Table with whole-percent shares, datasets as columns plus Total.
  std::string render() const;
};

// Throws Error if a sentence lacks a meta label.
LabelDistribution label_distribution(std::span<const Corpus> corpora);

}  // namespace rr
