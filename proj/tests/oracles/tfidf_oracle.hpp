#pragma once

// Count-then-weigh TF-IDF, written without the library's tokenizer,
// vocabulary or vectorizer. ASCII input only.

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rr::oracle {

inline std::vector<std::string> ascii_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::map<std::string, int> gram_counts(const std::string& s, int lo, int hi) {
  const auto t = ascii_tokens(s);
  std::map<std::string, int> counts;
  for (int n = lo; n <= hi; ++n) {
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      std::string g = t[i];
      for (int k = 1; k < n; ++k) g += " " + t[i + k];
      counts[g] += 1;
    }
  }
  return counts;
}

struct TfidfOracle {
  std::vector<std::string> terms;  // sorted
  std::map<std::string, int> df;
  int n = 0;

  TfidfOracle(const std::vector<std::string>& train, int lo, int hi, int min_df) {
    n = static_cast<int>(train.size());
    std::map<std::string, int> all;
    for (const auto& s : train)
      for (const auto& [g, c] : gram_counts(s, lo, hi)) all[g] += 1;
    for (const auto& [g, d] : all)
      if (d >= min_df) {
        terms.push_back(g);
        df[g] = d;
      }
  }

  // Dense vector over `terms`.
  std::vector<double> vectorize(const std::string& s, int lo, int hi) const {
    std::vector<double> v(terms.size(), 0.0);
    const auto counts = gram_counts(s, lo, hi);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      auto it = counts.find(terms[i]);
      if (it == counts.end()) continue;
      const double idf = std::log((1.0 + n) / (1.0 + df.at(terms[i]))) + 1.0;
      v[i] = it->second * idf;
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0)
      for (double& x : v) x /= norm;
    return v;
  }
};

}  // namespace rr::oracle
