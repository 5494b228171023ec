#include "rr/splitter.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include <json.hpp>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace rr {

std::string_view to_string(Fold fold) {
  switch (fold) {
    case Fold::Train: return "train";
    case Fold::Validation: return "validation";
    case Fold::Test: return "test";
  }
  return "?";
}

Fold parse_fold(std::string_view name) {
  if (name == "train") return Fold::Train;
  if (name == "validation") return Fold::Validation;
  if (name == "test") return Fold::Test;
  throw SplitError("unknown fold '" + std::string(name) + "'");
}

FoldSizes fold_sizes(std::size_t n, const SplitRatios& ratios) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
    throw SplitError("split ratios must be non-negative and sum to 1");
  auto round_half_up = [](double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
  };
  FoldSizes sizes;
  sizes.train = std::min(n, round_half_up(ratios.train * static_cast<double>(n)));
  sizes.validation =
      std::min(n - sizes.train, round_half_up(ratios.validation * static_cast<double>(n)));
  sizes.test = n - sizes.train - sizes.validation;
  return sizes;
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
    throw Error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

Fold SplitAssignment::at(DatasetId dataset, const std::string& doc_id) const {
  auto it = folds.find({dataset, doc_id});
  if (it == folds.end())
    throw SplitError("document " + std::string(to_string(dataset)) + "/" + doc_id +
                     " missing from split assignment");
  return it->second;
}

void SplitAssignment::merge(const SplitAssignment& other) {
  for (const auto& [key, fold] : other.folds) {
    if (!folds.emplace(key, fold).second)
      throw SplitError("duplicate doc_id " + std::string(to_string(key.first)) + "/" + key.second);
  }
}

namespace {
void check_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.validation < 0 || r.test < 0 ||
      std::abs(r.train + r.validation + r.test - 1.0) > 1e-9)
    throw SplitError("split ratios must be non-negative and sum to 1");
}
}  // namespace

SplitAssignment assign_splits(const Corpus& corpus, const SplitRatios& ratios, std::string_view seed) {
  check_ratios(ratios);
  if (corpus.document_count() == 0) throw SplitError("cannot split an empty corpus");

  const std::string dataset(to_string(corpus.dataset()));
  std::vector<std::pair<std::string, std::string>> keyed;  // (digest, doc_id)
  std::set<std::string> seen;
  for (const auto& doc : corpus.documents()) {
    if (!seen.insert(doc.doc_id).second) throw SplitError("duplicate doc_id '" + doc.doc_id + "'");
    keyed.emplace_back(sha256_hex(std::string(seed) + ":" + dataset + ":" + doc.doc_id), doc.doc_id);
  }
  std::sort(keyed.begin(), keyed.end());

  const FoldSizes sizes = fold_sizes(keyed.size(), ratios);
  SplitAssignment out{std::string(seed), ratios, {}};
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const Fold fold = i < sizes.train                      ? Fold::Train
                      : i < sizes.train + sizes.validation ? Fold::Validation
                                                           : Fold::Test;
    out.folds.emplace(DocKey{corpus.dataset(), keyed[i].second}, fold);
  }
  return out;
}

SplitAssignment assign_splits(std::span<const Corpus> corpora, const SplitRatios& ratios,
                              std::string_view seed) {
  SplitAssignment out{std::string(seed), ratios, {}};
  for (const auto& corpus : corpora) out.merge(assign_splits(corpus, ratios, seed));
  return out;
}

std::vector<SentenceRecord> materialize_fold(const Corpus& corpus, const SplitAssignment& assignment,
                                             Fold fold) {
  std::vector<SentenceRecord> out;
  for (const auto& doc : corpus.documents()) {
    if (assignment.at(corpus.dataset(), doc.doc_id) != fold) continue;
    out.insert(out.end(), doc.sentences.begin(), doc.sentences.end());
  }
  return out;
}

std::string split_manifest_jsonl(const SplitAssignment& assignment) {
  std::string out;
  for (const auto& [key, fold] : assignment.folds) {
    nlohmann::ordered_json j;
    j["dataset"] = to_string(key.first);
    j["doc_id"] = key.second;
    j["fold"] = to_string(fold);
    out += j.dump();
    out += '\n';
  }
  return out;
}

SplitAssignment parse_split_manifest(std::string_view jsonl, std::string seed, SplitRatios ratios) {
  SplitAssignment out{std::move(seed), ratios, {}};
  std::size_t line_no = 0;
  for (const auto& line : text::split(jsonl, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const DatasetId dataset = parse_dataset_or_throw(j.at("dataset").get<std::string>());
      DocKey key{dataset, j.at("doc_id").get<std::string>()};
      if (!out.folds.emplace(key, parse_fold(j.at("fold").get<std::string>())).second)
        throw SplitError("duplicate entry");
    } catch (const std::exception& e) {
      throw SplitError("split manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rr
