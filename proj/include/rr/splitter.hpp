#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rr/corpus.hpp"

namespace rr {

enum class Fold { Train, Validation, Test };

std::string_view to_string(Fold fold);
Fold parse_fold(std::string_view name);

struct SplitRatios {
  double train = 0.50;
  double validation = 0.25;
  double test = 0.25;
  bool operator==(const SplitRatios&) const = default;
};

inline constexpr std::string_view kDefaultSeed = "rr-v1";

struct FoldSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  bool operator==(const FoldSizes&) const = default;
};

// round-half-up on train and validation counts; test takes the remainder.
FoldSizes fold_sizes(std::size_t n_documents, const SplitRatios& ratios);

std::string sha256_hex(std::string_view data);

using DocKey = std::pair<DatasetId, std::string>;

// Document-level fold assignment.
struct SplitAssignment {
  std::string seed;
  SplitRatios ratios;
  std::map<DocKey, Fold> folds;

  bool operator==(const SplitAssignment&) const = default;

  bool covers(DatasetId dataset, const std::string& doc_id) const {
    return folds.contains({dataset, doc_id});
  }
  Fold at(DatasetId dataset, const std::string& doc_id) const;
  // Adds another assignment's entries; throws SplitError on overlap.
  void merge(const SplitAssignment& other);
};

// Documents are ordered by hex(SHA-256(seed ":" dataset ":" doc_id)); the
// first |train| go to Train, the next |validation| to Validation, the rest
// to Test.
SplitAssignment assign_splits(const Corpus& corpus, const SplitRatios& ratios = {},
                              std::string_view seed = kDefaultSeed);
SplitAssignment assign_splits(std::span<const Corpus> corpora, const SplitRatios& ratios = {},
                              std::string_view seed = kDefaultSeed);

// Sentences of the documents assigned to `fold`, in (doc_id, sent_index)
// order. Throws SplitError if a document has no assignment.
std::vector<SentenceRecord> materialize_fold(const Corpus& corpus, const SplitAssignment& assignment,
                                             Fold fold);

// Split manifest: JSON Lines {dataset, doc_id, fold} sorted by (dataset, doc_id).
std::string split_manifest_jsonl(const SplitAssignment& assignment);
SplitAssignment parse_split_manifest(std::string_view jsonl, std::string seed = {},
                                     SplitRatios ratios = {});

}  // namespace rr
