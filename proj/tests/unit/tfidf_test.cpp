#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/tfidf_oracle.hpp"
#include "rr/error.hpp"
#include "rr/tfidf.hpp"

using namespace rr;

TEST_CASE("tokenize") {
  CHECK(tokenize("The Court, in 1999,") == std::vector<std::string>{"the", "court", "in", "1999"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("U.S. v. Smith") == std::vector<std::string>{"u", "s", "v", "smith"});
}

TEST_CASE("fit_vocabulary examples") {
  const std::vector<std::string> train{"a b", "a c"};
  const auto v = fit_vocabulary(train);
  CHECK(v.terms() == std::vector<std::string>{"a", "a b", "a c", "b", "c"});
  CHECK(v.size() == 5);
  CHECK(v.n_train_sentences() == 2);
  const auto v2 = fit_vocabulary(train, {}, 2);
  CHECK(v2.terms() == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(fit_vocabulary(std::vector<std::string>{"  ,. "}), TrainingError);
  CHECK_THROWS_AS(fit_vocabulary(std::vector<std::string>{}), TrainingError);
}

TEST_CASE("vectorize worked example") {
  const auto v = fit_vocabulary(std::vector<std::string>{"a b", "a c"});
  const auto x = vectorize("a b", v);
  REQUIRE(x.entries.size() == 3);
  CHECK(v.term(x.entries[0].first) == "a");
  CHECK(v.term(x.entries[1].first) == "a b");
  CHECK(v.term(x.entries[2].first) == "b");
  // (1, 1.405465, 1.405465) / 2.225008
  CHECK(x.entries[0].second == doctest::Approx(0.449436).epsilon(1e-5));
  CHECK(x.entries[1].second == doctest::Approx(0.631667).epsilon(1e-5));
  CHECK(x.entries[2].second == doctest::Approx(0.631667).epsilon(1e-5));
  CHECK(v.idf(*v.index_of("b")) == doctest::Approx(std::log(1.5) + 1));
}

TEST_CASE("vectorize degenerate inputs") {
  const auto v = fit_vocabulary(std::vector<std::string>{"a"});
  CHECK(vectorize("zzz qqq", v).empty());
  const auto x = vectorize("a a", v);
  REQUIRE(x.entries.size() == 1);
  CHECK(x.entries[0].second == 1.0);
}

TEST_CASE("TF-IDF equals the count-then-weigh oracle to 1e-12") {
  const std::vector<std::string> words{"court", "held", "the", "claim", "of", "veteran", "a", "b", "appeal", "x1"};
  std::mt19937 rng(99);
  auto sentence = [&] {
    std::string s;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) s += (i ? (rng() % 4 ? " " : ", ") : "") + words[rng() % words.size()];
    return s + ".";
  };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> train;
    const int n = 1 + static_cast<int>(rng() % 50);
    for (int i = 0; i < n; ++i) train.push_back(sentence());
    for (std::size_t min_df : {1u, 2u}) {
      Vocabulary v;
      try {
        v = fit_vocabulary(train, {}, min_df);
      } catch (const TrainingError&) {
        continue;
      }
      const oracle::TfidfOracle o(train, 1, 3, static_cast<int>(min_df));
      REQUIRE(v.terms() == o.terms);
      for (int q = 0; q < 10; ++q) {
        const std::string text = q < 5 ? train[rng() % train.size()] : sentence();
        const auto dense = o.vectorize(text, 1, 3);
        const auto x = vectorize(text, v);
        std::vector<double> got(v.size(), 0.0);
        for (auto [i, w] : x.entries) got[i] = w;
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - dense[i]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: vectors are unit-norm or zero with increasing indices") {
  std::mt19937 rng(4);
  const auto v = fit_vocabulary(std::vector<std::string>{"alpha beta gamma", "beta delta", "gamma alpha alpha"});
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (int k = 0; k < static_cast<int>(rng() % 8); ++k)
      text += std::string(k ? " " : "") + std::vector<std::string>{"alpha", "beta", "gamma", "delta", "eps"}[rng() % 5];
    const auto x = vectorize(text, v);
    if (!x.empty()) CHECK(std::abs(x.squared_norm() - 1.0) < 1e-12);
    for (std::size_t k = 1; k < x.entries.size(); ++k) CHECK(x.entries[k - 1].first < x.entries[k].first);
    for (auto [idx, w] : x.entries) CHECK(std::isfinite(w));
  }
}

TEST_CASE("ngrams") {
  const std::vector<std::string> t{"a", "b", "c", "d"};
  CHECK(ngrams(t, {1, 1}).size() == 4);
  CHECK(ngrams(t, {1, 3}).size() == 4 + 3 + 2);
  CHECK(ngrams(t, {3, 3}) == std::vector<std::string>{"a b c", "b c d"});
}
