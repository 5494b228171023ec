#include "rr/recast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <spdlog/spdlog.h>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace rr {

const std::vector<std::string>& known_source_labels(DatasetId dataset) {
  static const std::vector<std::string> bva = {"Finding", "Reasoning", "Evidence", "Legal Rule",
                                               "Citation"};
  static const std::vector<std::string> cb = {"Facts",     "Issue", "Conclusion",
                                              "Procedural History", "Reasoning", "Rule"};
  static const std::vector<std::string> isc = {
      "Facts",     "Ruling (lower court)", "Argument",
      "Ratio",     "Statute",              "Precedent",
      "Ruling (present court)"};
  switch (dataset) {
    case DatasetId::BVA: return bva;
    case DatasetId::CB: return cb;
    case DatasetId::ISC: return isc;
  }
  return bva;
}

bool is_known_source_label(DatasetId dataset, std::string_view label) {
  const auto& labels = known_source_labels(dataset);
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

std::string_view default_mapping_text() {
  static constexpr std::string_view kMapping =
      "# label-mapping v1: <dataset>.<source label> = Facts | NonFacts\n"
      "BVA.Evidence = Facts\n"
      "BVA.Finding = NonFacts\n"
      "BVA.Reasoning = NonFacts\n"
      "BVA.Legal Rule = NonFacts\n"
      "BVA.Citation = NonFacts\n"
      "BVA.default = NonFacts\n"
      "\n"
      "CB.Facts = Facts\n"
      "CB.Issue = NonFacts\n"
      "CB.Conclusion = NonFacts\n"
      "CB.Procedural History = NonFacts\n"
      "CB.Reasoning = NonFacts\n"
      "CB.Rule = NonFacts\n"
      "CB.default = NonFacts\n"
      "\n"
      "ISC.Facts = Facts\n"
      "ISC.Ruling (lower court) = NonFacts\n"
      "ISC.Argument = NonFacts\n"
      "ISC.Ratio = NonFacts\n"
      "ISC.Statute = NonFacts\n"
      "ISC.Precedent = NonFacts\n"
      "ISC.Ruling (present court) = NonFacts\n"
      "ISC.default = NonFacts\n";
  return kMapping;
}

LabelMapping LabelMapping::parse(std::string_view config) {
  LabelMapping mapping;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("mapping line " + std::to_string(line_no) + ": " + msg);
  };
  for (const auto& raw : text::split(config, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.rfind('=');
    if (eq == std::string_view::npos) fail("expected '<dataset>.<label> = <class>'");
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string_view::npos) fail("key must be <dataset>.<label>");
    const auto dataset = parse_dataset(text::trim(key.substr(0, dot)));
    if (!dataset) fail("unknown dataset '" + std::string(key.substr(0, dot)) + "'");
    const std::string label = text::trim_copy(key.substr(dot + 1));
    if (label.empty()) fail("empty label");

    DatasetMapping& entry = mapping.datasets_[*dataset];
    if (label == "default") {
      if (value == "NonFacts")
        entry.default_policy = UnmappedPolicy::NonFacts;
      else if (value == "reject")
        entry.default_policy = UnmappedPolicy::Reject;
      else
        fail("default must be NonFacts or reject");
      continue;
    }
    const auto meta = parse_meta_label(value);
    if (!meta) fail("class must be Facts or NonFacts, got '" + std::string(value) + "'");
    auto [it, inserted] = entry.labels.emplace(label, *meta);
    if (!inserted) {
      if (it->second != *meta)
        fail("label '" + label + "' mapped to both Facts and NonFacts");
      fail("duplicate mapping for '" + label + "'");
    }
  }
  if (mapping.datasets_.empty()) throw ConfigError("no datasets configured");
  return mapping;
}

LabelMapping LabelMapping::load(const std::string& path) { return parse(text::read_file(path)); }

const LabelMapping& LabelMapping::shipped_default() {
  static const LabelMapping mapping = parse(default_mapping_text());
  return mapping;
}

const DatasetMapping& LabelMapping::at(DatasetId dataset) const {
  auto it = datasets_.find(dataset);
  if (it == datasets_.end())
    throw ConfigError("mapping has no entry for dataset " + std::string(to_string(dataset)));
  return it->second;
}

std::optional<MetaLabel> LabelMapping::lookup(DatasetId dataset, std::string_view label) const {
  const DatasetMapping& entry = at(dataset);
  if (auto it = entry.labels.find(std::string(label)); it != entry.labels.end()) return it->second;
  if (entry.default_policy == UnmappedPolicy::Reject) return std::nullopt;
  return MetaLabel::NonFacts;
}

Corpus recast_corpus(const Corpus& corpus, const LabelMapping& mapping, RecastOptions options) {
  const DatasetMapping& entry = mapping.at(corpus.dataset());
  const bool reject = options.strict || entry.default_policy == UnmappedPolicy::Reject;
  std::set<std::string> unmapped;
  std::vector<Document> docs = corpus.documents();
  for (auto& doc : docs) {
    for (auto& s : doc.sentences) {
      if (auto it = entry.labels.find(s.source_label); it != entry.labels.end()) {
        s.meta_label = it->second;
      } else {
        unmapped.insert(s.source_label);
        s.meta_label = MetaLabel::NonFacts;
      }
    }
  }
  if (!unmapped.empty()) {
    std::string list;
    for (const auto& l : unmapped) list += (list.empty() ? "'" : ", '") + l + "'";
    if (reject)
      throw ConfigError("unmapped " + std::string(to_string(corpus.dataset())) + " labels: " + list);
    spdlog::warn("{}: unmapped labels defaulted to NonFacts: {}", to_string(corpus.dataset()), list);
  }
  return Corpus(corpus.dataset(), std::move(docs), corpus.provenance());
}

LabelDistribution label_distribution(std::span<const Corpus> corpora) {
  LabelDistribution dist;
  for (const auto& corpus : corpora) {
    ClassCounts& counts = dist.per_dataset[corpus.dataset()];
    for (const auto& doc : corpus.documents()) {
      for (const auto& s : doc.sentences) {
        if (!s.meta_label)
          throw Error("label_distribution: " + s.doc_id + "/" + std::to_string(s.sent_index) +
                      " has no meta label");
        (*s.meta_label == MetaLabel::Facts ? counts.facts : counts.non_facts) += 1;
      }
    }
  }
  for (const auto& [id, c] : dist.per_dataset) {
    dist.pooled.facts += c.facts;
    dist.pooled.non_facts += c.non_facts;
  }
  return dist;
}

namespace {
std::string with_share(std::size_t count, std::size_t total) {
  char buf[64];
  const long pct = total == 0 ? 0 : std::lround(100.0 * static_cast<double>(count) / static_cast<double>(total));
  std::snprintf(buf, sizeof buf, "%zu (%ld%%)", count, pct);
  return buf;
}
}  // namespace

std::string LabelDistribution::render() const {
  std::vector<std::pair<std::string, ClassCounts>> columns;
  for (const auto& [id, c] : per_dataset) columns.emplace_back(std::string(to_string(id)), c);
  columns.emplace_back("Total", pooled);

  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s", "Label");
  out += buf;
  for (const auto& [name, c] : columns) {
    std::snprintf(buf, sizeof buf, "%16s", name.c_str());
    out += buf;
  }
  out += '\n';
  auto row = [&](const char* name, auto pick) {
    std::snprintf(buf, sizeof buf, "%-10s", name);
    out += buf;
    for (const auto& [_, c] : columns) {
      std::snprintf(buf, sizeof buf, "%16s", with_share(pick(c), c.total()).c_str());
      out += buf;
    }
    out += '\n';
  };
  row("Facts", [](const ClassCounts& c) { return c.facts; });
  row("NonFacts", [](const ClassCounts& c) { return c.non_facts; });
  std::snprintf(buf, sizeof buf, "%-10s", "Total");
  out += buf;
  for (const auto& [_, c] : columns) {
    std::snprintf(buf, sizeof buf, "%16zu", c.total());
    out += buf;
  }
  out += '\n';
  return out;
}

}  // namespace rr
