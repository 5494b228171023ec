#include "rr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rr/error.hpp"
#include "rr/recast.hpp"
#include "rr/splitter.hpp"

namespace rr {

// xoshiro256** seeded from the SHA-256 digest of the seed string.
SeededRng::SeededRng(std::string_view seed) {
  const std::string hex = sha256_hex(seed);
  for (int i = 0; i < 4; ++i) state_[i] = std::stoull(hex.substr(static_cast<std::size_t>(16 * i), 16), nullptr, 16);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t SeededRng::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("SeededRng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return x % bound;
}

std::size_t SeededRng::in_range(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(below(hi - lo + 1));
}

namespace {

std::string_view positive_label(DatasetId d) { return d == DatasetId::BVA ? "Evidence" : "Facts"; }

std::vector<std::string> negative_labels(DatasetId d) {
  std::vector<std::string> out;
  for (const auto& l : known_source_labels(d))
    if (l != positive_label(d)) out.push_back(l);
  return out;
}

void validate(const SynthSpec& s) {
  if (!(s.facts_ratio > 0.0 && s.facts_ratio < 1.0)) throw ConfigError("synth: facts_ratio must be in (0,1)");
  if (s.overlap < 0.0 || s.overlap > 1.0) throw ConfigError("synth: overlap must be in [0,1]");
  if (s.n_documents == 0) throw ConfigError("synth: n_documents must be positive");
  if (s.min_sentences_per_doc == 0 || s.min_sentences_per_doc > s.max_sentences_per_doc)
    throw ConfigError("synth: invalid sentences-per-document range");
  if (s.min_tokens == 0 || s.min_tokens > s.max_tokens) throw ConfigError("synth: invalid length range");
  if (s.min_signal_tokens < 2 || s.min_signal_tokens > s.max_signal_tokens ||
      s.min_signal_tokens > s.min_tokens)
    throw ConfigError("synth: invalid signal-token range");
  if (s.signal_vocab.empty() || s.noise_vocab.empty()) throw ConfigError("synth: empty vocabulary");
  const std::set<std::string> signal(s.signal_vocab.begin(), s.signal_vocab.end());
  for (const auto& w : s.noise_vocab)
    if (signal.contains(w)) throw ConfigError("synth: token '" + w + "' is both signal and noise");
}

}  // namespace

Corpus generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  SeededRng rng(spec.seed + ":" + std::string(to_string(spec.dataset)));

  std::vector<std::size_t> doc_sizes(spec.n_documents);
  for (auto& n : doc_sizes) n = rng.in_range(spec.min_sentences_per_doc, spec.max_sentences_per_doc);
  std::size_t total = 0;
  for (auto n : doc_sizes) total += n;

  // Exactly round(ratio * total) positives at shuffled positions.
  const auto n_facts = static_cast<std::size_t>(std::llround(spec.facts_ratio * static_cast<double>(total)));
  std::vector<bool> is_facts(total, false);
  std::fill(is_facts.begin(), is_facts.begin() + static_cast<std::ptrdiff_t>(n_facts), true);
  for (std::size_t i = total; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(is_facts[i - 1], is_facts[j]);
  }

  const auto negatives = negative_labels(spec.dataset);
  std::vector<Document> docs;
  std::size_t flat = 0;
  for (std::size_t d = 0; d < spec.n_documents; ++d) {
    char id[32];
    std::snprintf(id, sizeof id, "doc%04zu", d);
    Document doc{spec.dataset, id, {}};
    for (std::size_t s = 0; s < doc_sizes[d]; ++s, ++flat) {
      const std::size_t length = rng.in_range(spec.min_tokens, spec.max_tokens);
      std::vector<std::string> tokens(length);
      for (auto& t : tokens) t = spec.noise_vocab[rng.below(spec.noise_vocab.size())];
      SentenceRecord r;
      r.dataset = spec.dataset;
      r.doc_id = doc.doc_id;
      r.sent_index = s;
      if (is_facts[flat]) {
        const std::size_t k = rng.in_range(spec.min_signal_tokens, std::min(spec.max_signal_tokens, length));
        std::vector<std::size_t> positions(length);
        for (std::size_t i = 0; i < length; ++i) positions[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.below(length - i));
          std::swap(positions[i], positions[j]);
          tokens[positions[i]] = spec.signal_vocab[rng.below(spec.signal_vocab.size())];
        }
        r.source_label = std::string(positive_label(spec.dataset));
        r.meta_label = MetaLabel::Facts;
      } else {
        r.source_label = negatives[rng.below(negatives.size())];
        r.meta_label = MetaLabel::NonFacts;
      }
      std::string text;
      for (const auto& t : tokens) {
        if (!text.empty()) text += ' ';
        text += t;
      }
      if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') text[0] = static_cast<char>(text[0] - 'a' + 'A');
      text += '.';
      r.text = std::move(text);
      doc.sentences.push_back(std::move(r));
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(spec.dataset, std::move(docs), Provenance{"synthetic:" + spec.seed, "synth/1"});
}

std::vector<SynthSpec> make_sibling_specs(const std::vector<DatasetId>& datasets, double overlap,
                                          const SiblingOptions& options) {
  if (overlap < 0.0 || overlap > 1.0) throw ConfigError("synth: overlap must be in [0,1]");
  const std::size_t k = options.signal_vocab_size;
  const auto shared = static_cast<std::size_t>(std::llround(overlap * static_cast<double>(k)));
  std::vector<SynthSpec> specs;
  for (std::size_t j = 0; j < datasets.size(); ++j) {
    SynthSpec s;
    s.dataset = datasets[j];
    s.n_documents = options.n_documents;
    s.facts_ratio = options.facts_ratio;
    s.overlap = j == 0 ? 1.0 : overlap;
    s.seed = options.seed;
    std::string tag = std::string(to_string(datasets[j]));
    std::transform(tag.begin(), tag.end(), tag.begin(), [](char c) { return static_cast<char>(c - 'A' + 'a'); });
    for (std::size_t i = 0; i < k; ++i) {
      if (j == 0 || i < shared)
        s.signal_vocab.push_back("sigcore" + std::to_string(i));
      else
        s.signal_vocab.push_back("sig" + tag + std::to_string(i));
    }
    for (std::size_t i = 0; i < options.noise_vocab_size; ++i)
      s.noise_vocab.push_back("w" + std::to_string(i));
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace rr
