#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rr/corpus.hpp"

namespace rr {

struct SynthSpec {
  DatasetId dataset = DatasetId::BVA;
  std::size_t n_documents = 40;
  std::size_t min_sentences_per_doc = 10;
  std::size_t max_sentences_per_doc = 30;
  double facts_ratio = 0.4;
  std::vector<std::string> signal_vocab;
  std::vector<std::string> noise_vocab;
  double overlap = 0.0;  // fraction of signal_vocab shared with the first sibling
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 25;
  std::size_t min_signal_tokens = 3;
  std::size_t max_signal_tokens = 5;
  std::string seed = "synth";
};

// Sentences are noise-token sequences; a Facts sentence has between
// min_signal_tokens and max_signal_tokens positions replaced by signal
// tokens, a NonFacts sentence has none. The number of Facts sentences is
// round(facts_ratio * total). Source labels use the dataset's own inventory
// so the shipped mapping reproduces the meta labels. Deterministic in the
// seed on every platform. Throws ConfigError on an invalid spec.
Corpus generate_synthetic(const SynthSpec& spec);

struct SiblingOptions {
  std::size_t n_documents = 40;
  std::size_t signal_vocab_size = 24;
  std::size_t noise_vocab_size = 400;
  double facts_ratio = 0.4;
  std::string seed = "synth";
};

// One spec per dataset. All siblings draw round(overlap * signal_vocab_size)
// signal tokens from a shared core and the rest from a private pool. The
// noise vocabulary is common to all siblings. overlap = 1 makes every signal
// vocabulary equal.
std::vector<SynthSpec> make_sibling_specs(const std::vector<DatasetId>& datasets, double overlap,
                                          const SiblingOptions& options = {});

// Deterministic 64-bit generator seeded from SHA-256 of a string, with
// platform-independent bounded draws.
class SeededRng {
 public:
  explicit SeededRng(std::string_view seed);
  std::uint64_t next();
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  std::size_t in_range(std::size_t lo, std::size_t hi);  // inclusive

 private:
  std::uint64_t state_[4];
};

}  // namespace rr
