#include <doctest.h>

#include <cmath>
#include <set>

#include "rr/error.hpp"
#include "rr/recast.hpp"
#include "rr/synth.hpp"
#include "rr/tfidf.hpp"

using namespace rr;

namespace {

SynthSpec basic(std::string seed) {
  auto spec = make_sibling_specs({DatasetId::BVA}, 1.0, {})[0];
  spec.n_documents = 10;
  spec.seed = std::move(seed);
  return spec;
}

}  // namespace

TEST_CASE("deterministic in the seed") {
  CHECK(generate_synthetic(basic("t1")) == generate_synthetic(basic("t1")));
  CHECK_FALSE(generate_synthetic(basic("t1")) == generate_synthetic(basic("t2")));
  SeededRng a("x"), b("x");
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("class ratio, signal placement and label recovery") {
  for (double ratio : {0.2, 0.4, 0.7}) {
    auto spec = basic("ratio");
    spec.facts_ratio = ratio;
    const Corpus c = generate_synthetic(spec);
    const std::set<std::string> signal(spec.signal_vocab.begin(), spec.signal_vocab.end());
    std::size_t facts = 0;
    for (const auto& s : c.sentences()) {
      std::size_t hits = 0;
      const auto toks = tokenize(s.text);
      for (const auto& t : toks) hits += signal.contains(t);
      CHECK(toks.size() >= spec.min_tokens);
      CHECK(toks.size() <= spec.max_tokens);
      REQUIRE(s.meta_label.has_value());
      // The generation rule recovers every label exactly.
      CHECK((hits > 0) == (*s.meta_label == MetaLabel::Facts));
      if (*s.meta_label == MetaLabel::Facts) {
        CHECK(hits >= 2);
        ++facts;
      }
    }
    CHECK(std::abs(double(facts) / double(c.sentence_count()) - ratio) <= 0.02);
  }
}

TEST_CASE("shape and labels follow the dataset inventory") {
  const Corpus c = generate_synthetic(basic("shape"));
  CHECK(c.document_count() == 10);
  for (const auto& d : c.documents()) {
    CHECK(d.sentences.size() >= 10);
    CHECK(d.sentences.size() <= 30);
  }
  CHECK(recast_corpus(c, LabelMapping::shipped_default(), {.strict = true}) == c);
}

TEST_CASE("sibling vocabularies") {
  const auto same = make_sibling_specs({DatasetId::BVA, DatasetId::CB}, 1.0);
  CHECK(std::set(same[0].signal_vocab.begin(), same[0].signal_vocab.end()) ==
        std::set(same[1].signal_vocab.begin(), same[1].signal_vocab.end()));
  const auto apart = make_sibling_specs({DatasetId::BVA, DatasetId::CB}, 0.0);
  for (const auto& t : apart[1].signal_vocab)
    CHECK(std::find(apart[0].signal_vocab.begin(), apart[0].signal_vocab.end(), t) == apart[0].signal_vocab.end());
  const auto half = make_sibling_specs({DatasetId::BVA, DatasetId::CB}, 0.5);
  std::size_t shared = 0;
  for (const auto& t : half[1].signal_vocab)
    shared += std::find(half[0].signal_vocab.begin(), half[0].signal_vocab.end(), t) != half[0].signal_vocab.end();
  CHECK(shared == half[0].signal_vocab.size() / 2);
  for (const auto& s : apart) {
    const std::set<std::string> noise(s.noise_vocab.begin(), s.noise_vocab.end());
    for (const auto& t : s.signal_vocab) CHECK_FALSE(noise.contains(t));
  }
}

TEST_CASE("invalid specs") {
  auto s = basic("bad");
  s.facts_ratio = 1.5;
  CHECK_THROWS_AS(generate_synthetic(s), ConfigError);
  s = basic("bad");
  s.signal_vocab.clear();
  CHECK_THROWS_AS(generate_synthetic(s), ConfigError);
  s = basic("bad");
  s.noise_vocab.push_back(s.signal_vocab[0]);
  CHECK_THROWS_AS(generate_synthetic(s), ConfigError);
  CHECK_THROWS_AS(make_sibling_specs({DatasetId::BVA}, 2.0), ConfigError);
}

TEST_CASE("bounded draws stay in range") {
  SeededRng r("range");
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const auto v = r.in_range(3, 5);
    CHECK(v >= 3);
    CHECK(v <= 5);
  }
}
