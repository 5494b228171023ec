#include "rr/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "rr/error.hpp"
#include "rr/ingest.hpp"
#include "rr/recast.hpp"
#include "rr/synth.hpp"
#include "rr/text.hpp"

namespace fs = std::filesystem;

namespace rr {

namespace {

SectionRules rules_for(const RunConfig& c) {
  return c.section_rules ? SectionRules::load(c.section_rules->string()) : default_section_rules();
}

LabelMapping mapping_for(const RunConfig& c) {
  return c.mapping ? LabelMapping::load(c.mapping->string()) : LabelMapping::shipped_default();
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto& part : text::split(s, ',')) {
    auto t = text::trim_copy(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<Corpus> load_corpora(const RunConfig& config) {
  if (config.datasets.empty()) throw ConfigError("no datasets configured");
  const SectionRules rules = rules_for(config);
  const LabelMapping mapping = mapping_for(config);
  std::vector<Corpus> out;
  for (const auto& [id, path] : config.datasets) {
    Diagnostics diag;
    Corpus raw = ingest_dataset(id, path, rules, &diag);
    spdlog::info("{}: {} documents, {} sentences from {}", to_string(id), raw.document_count(),
                 raw.sentence_count(), path.string());
    out.push_back(recast_corpus(raw, mapping, RecastOptions{config.strict_mapping}));
  }
  return out;
}

std::vector<std::shared_ptr<const Backend>> make_backends(const RunConfig& config) {
  std::vector<std::shared_ptr<const Backend>> out;
  std::set<std::string> seen;
  for (const auto& b : config.backends) {
    if (!seen.insert(b.id).second) throw ConfigError("duplicate backend id " + b.id);
    if (b.kind == "external")
      out.push_back(std::make_shared<ExternalBackend>(b.registration));
    else
      out.push_back(std::make_shared<SvmBackend>(b.id, config.grid, config.features));
  }
  if (out.empty()) throw ConfigError("no backends configured");
  return out;
}

TransferMatrix execute_run(const RunConfig& config) {
  const std::string started = utc_now();
  const fs::path dir = fs::absolute(config.output_dir);
  fs::create_directories(dir);
  text::write_file(dir / "config.json", run_config_to_json(config).dump(2) + "\n");

  const auto corpora = load_corpora(config);
  text::write_file(dir / "distribution.txt", label_distribution(corpora).render());
  const auto assignment = assign_splits(corpora, config.ratios, config.seed);
  text::write_file(dir / "splits.jsonl", split_manifest_jsonl(assignment));

  MatrixOptions options;
  for (const auto& p : config.pools) options.pools.push_back(Pool::parse(p));
  options.parallelism = config.parallelism;
  options.run_dir = dir;
  const auto backends = make_backends(config);
  TransferMatrix matrix = run_transfer_matrix(corpora, assignment, backends, options);

  text::write_file(dir / "report.txt", render_report(matrix, ReportFormat::TableText));
  text::write_file(dir / "report.csv", render_report(matrix, ReportFormat::Csv));
  nlohmann::ordered_json run;
  run["started"] = started;
  run["finished"] = utc_now();
  run["cells"] = matrix.cells.size();
  run["failed_cells"] = matrix.failed_cells();
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& c : corpora)
    prov[std::string(to_string(c.dataset()))] = {{"source", c.provenance().source},
                                                 {"reader", c.provenance().reader},
                                                 {"documents", c.document_count()},
                                                 {"sentences", c.sentence_count()}};
  run["corpora"] = prov;
  text::write_file(dir / "run.json", run.dump(2) + "\n");
  return matrix;
}

namespace cli {

namespace {

struct Common {
  std::string config_path;
  std::string seed;
  std::string datasets;
  std::string backends;
  std::size_t parallelism = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "Split seed");
  sub->add_option("--datasets", c.datasets, "Comma-separated subset of configured datasets");
  sub->add_option("--backends", c.backends, "Comma-separated subset of configured backend ids");
  sub->add_option("--parallelism", c.parallelism, "Concurrent cells")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Run directory");
}

void restrict_datasets(RunConfig& cfg, const std::string& list) {
  if (list.empty()) return;
  std::map<DatasetId, fs::path> kept;
  for (const auto& name : split_list(list)) {
    const DatasetId id = parse_dataset_or_throw(name);
    if (!cfg.datasets.contains(id)) throw ConfigError("dataset " + name + " is not configured");
    kept[id] = cfg.datasets.at(id);
  }
  cfg.datasets = std::move(kept);
  // Drop pools that mention removed datasets.
  std::vector<std::string> pools;
  for (const auto& p : cfg.pools) {
    bool ok = true;
    for (auto d : Pool::parse(p).members()) ok = ok && cfg.datasets.contains(d);
    if (ok) pools.push_back(p);
  }
  cfg.pools = std::move(pools);
}

void restrict_backends(RunConfig& cfg, const std::string& list) {
  if (list.empty()) return;
  std::vector<BackendSpec> kept;
  for (const auto& id : split_list(list)) {
    auto it = std::find_if(cfg.backends.begin(), cfg.backends.end(), [&](const auto& b) { return b.id == id; });
    if (it == cfg.backends.end()) throw ConfigError("backend " + id + " is not configured");
    kept.push_back(*it);
  }
  cfg.backends = std::move(kept);
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

RunConfig resolve_config(const Common& c) {
  RunConfig cfg = load_run_config(c.config_path);
  if (auto v = env("RRH_SEED")) cfg.seed = v;
  if (auto v = env("RRH_PARALLELISM")) {
    try {
      cfg.parallelism = std::stoul(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("RRH_PARALLELISM: not a number: ") + v);
    }
    if (cfg.parallelism == 0) throw ConfigError("RRH_PARALLELISM must be positive");
  }
  if (auto v = env("RRH_OUT")) cfg.output_dir = fs::absolute(v);
  if (auto v = env("RRH_DATASETS")) restrict_datasets(cfg, v);
  if (auto v = env("RRH_BACKENDS")) restrict_backends(cfg, v);

  if (!c.seed.empty()) cfg.seed = c.seed;
  if (c.parallelism) cfg.parallelism = c.parallelism;
  if (!c.out.empty()) cfg.output_dir = fs::absolute(c.out);
  restrict_datasets(cfg, c.datasets);
  restrict_backends(cfg, c.backends);
  return cfg;
}

int cmd_ingest(const std::string& dataset, const std::string& input, const std::string& out,
               const std::string& rules_path) {
  const SectionRules rules = rules_path.empty() ? default_section_rules() : SectionRules::load(rules_path);
  Diagnostics diag;
  const Corpus corpus = ingest_dataset(parse_dataset_or_throw(dataset), input, rules, &diag);
  write_jsonl(out, corpus);
  std::cout << dataset << ": " << corpus.document_count() << " documents, " << corpus.sentence_count()
            << " sentences, " << diag.warnings.size() << " warnings -> " << out << "\n";
  return kExitOk;
}

int cmd_recast(const std::vector<std::string>& inputs, const std::string& out, const std::string& out_dir,
               const std::string& mapping_path, bool strict) {
  if (!out.empty() && inputs.size() != 1) throw ConfigError("--out takes a single --in; use --out-dir");
  const LabelMapping mapping = mapping_path.empty() ? LabelMapping::shipped_default() : LabelMapping::load(mapping_path);
  std::vector<Corpus> recast;
  for (const auto& in : inputs) recast.push_back(recast_corpus(read_jsonl(in), mapping, RecastOptions{strict}));
  for (const auto& c : recast) {
    if (!out.empty())
      write_jsonl(out, c);
    else if (!out_dir.empty())
      write_jsonl(fs::path(out_dir) / (std::string(to_string(c.dataset())) + ".jsonl"), c);
  }
  std::cout << label_distribution(recast).render();
  return kExitOk;
}

int cmd_split(const std::vector<std::string>& inputs, const std::string& seed, const std::vector<double>& ratios,
              const std::string& out) {
  if (ratios.size() != 3) throw ConfigError("--ratios needs three values");
  std::vector<Corpus> corpora;
  for (const auto& in : inputs) corpora.push_back(read_jsonl(in));
  const auto assignment = assign_splits(corpora, SplitRatios{ratios[0], ratios[1], ratios[2]}, seed);
  const std::string body = split_manifest_jsonl(assignment);
  if (out.empty())
    std::cout << body;
  else
    text::write_file(out, body);
  for (const auto& c : corpora) {
    const auto s = fold_sizes(c.document_count(), assignment.ratios);
    std::cerr << to_string(c.dataset()) << ": train " << s.train << ", validation " << s.validation << ", test "
              << s.test << "\n";
  }
  return kExitOk;
}

int cmd_train(const Common& common, const std::string& pool_name, const std::string& model_out) {
  const RunConfig cfg = resolve_config(common);
  const Pool pool = Pool::parse(pool_name);
  const auto corpora = load_corpora(cfg);
  const auto assignment = assign_splits(corpora, cfg.ratios, cfg.seed);
  std::vector<SentenceRecord> train, validation;
  for (const auto& c : corpora) {
    if (!pool.contains(c.dataset())) continue;
    auto t = materialize_fold(c, assignment, Fold::Train);
    auto v = materialize_fold(c, assignment, Fold::Validation);
    train.insert(train.end(), t.begin(), t.end());
    validation.insert(validation.end(), v.begin(), v.end());
  }
  for (auto d : pool.members())
    if (!cfg.datasets.contains(d)) throw ConfigError("pool member " + std::string(to_string(d)) + " is not configured");
  const auto grid = cfg.grid.expand();
  const auto result = grid_search(train, validation, grid, cfg.features);
  std::cout << "pool " << pool.name() << ": C=" << result.chosen.C
            << " class_weight=" << to_string(result.chosen.class_weight)
            << " max_iterations=" << result.chosen.max_iterations << " validation F1=" << result.validation_f1
            << "\n";
  for (const auto& c : corpora) {
    const auto test = materialize_fold(c, assignment, Fold::Test);
    std::vector<MetaLabel> gold, pred;
    for (const auto& r : test) {
      gold.push_back(*r.meta_label);
      pred.push_back(predict_text(result.model, r.text).label);
    }
    const auto m = prf1(confusion(pred, gold));
    std::cout << "  test " << to_string(c.dataset()) << ": P=" << m.precision << " R=" << m.recall
              << " F1=" << m.f1 << "\n";
  }
  if (!model_out.empty()) save_model(model_out, result.model);
  return kExitOk;
}

int cmd_matrix(const Common& common) {
  const RunConfig cfg = resolve_config(common);
  const TransferMatrix matrix = execute_run(cfg);
  std::cout << render_report(matrix, ReportFormat::TableText);
  std::cout << "run directory: " << fs::absolute(cfg.output_dir).string() << "\n";
  if (matrix.failed_cells() > 0) {
    for (const auto& cell : matrix.cells)
      if (!cell.ok)
        std::cerr << "failed: " << cell.backend << " " << cell.pool.name() << " -> " << to_string(cell.target)
                  << ": " << cell.error << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_report(const std::string& run_dir, const std::string& format) {
  const fs::path metrics = fs::path(run_dir) / "metrics.json";
  if (!fs::exists(metrics)) throw ConfigError("no metrics.json in " + run_dir);
  const auto matrix = matrix_from_json(nlohmann::json::parse(text::read_file(metrics)));
  std::cout << render_report(matrix, parse_report_format(format));
  return kExitOk;
}

int cmd_synth(const std::string& datasets, double overlap, const std::string& seed, std::size_t docs,
              double facts_ratio, const std::string& out, bool with_stub) {
  std::vector<DatasetId> ids;
  for (const auto& n : split_list(datasets)) ids.push_back(parse_dataset_or_throw(n));
  if (ids.empty()) throw ConfigError("--datasets is empty");
  SiblingOptions opts;
  opts.n_documents = docs;
  opts.facts_ratio = facts_ratio;
  opts.seed = seed;
  const fs::path dir = fs::absolute(out);
  nlohmann::json cfg;
  cfg["version"] = 1;
  cfg["seed"] = std::string(kDefaultSeed);
  for (const auto& spec : make_sibling_specs(ids, overlap, opts)) {
    const Corpus c = generate_synthetic(spec);
    const std::string name = std::string(to_string(spec.dataset)) + ".jsonl";
    write_jsonl(dir / name, c);
    cfg["datasets"][std::string(to_string(spec.dataset))] = name;
    std::cout << to_string(spec.dataset) << ": " << c.document_count() << " documents, " << c.sentence_count()
              << " sentences -> " << (dir / name).string() << "\n";
  }
  cfg["backends"] = nlohmann::json::array({{{"id", "svm"}, {"kind", "svm"}}});
  if (with_stub)
    cfg["backends"].push_back({{"id", "stub"}, {"kind", "external"}, {"command", {"rr-stub-backend"}}});
  cfg["output_dir"] = "run";
  text::write_file(dir / "config.json", cfg.dump(2) + "\n");
  std::cout << "config: " << (dir / "config.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Cross-domain transfer evaluation for Facts / NonFacts sentence classification", "rrharness"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string dataset, input, out, rules, mapping, seed = std::string(kDefaultSeed), run_dir, format = "table-text";
  std::string out_dir, pool, datasets = "BVA,CB,ISC";
  std::vector<std::string> inputs;
  std::vector<double> ratios{0.5, 0.25, 0.25};
  bool strict = false, with_stub = false;
  double overlap = 0.0, facts_ratio = 0.4;
  std::size_t docs = 40;
  Common common;

  auto* ingest = app.add_subcommand("ingest", "Read a native dataset into interchange JSONL");
  ingest->add_option("--dataset", dataset, "BVA, CB or ISC")->required();
  ingest->add_option("--input", input, "Source directory or file")->required()->check(CLI::ExistingPath);
  ingest->add_option("--out", out, "Output .jsonl")->required();
  ingest->add_option("--section-rules", rules, "Heading rules for CB")->check(CLI::ExistingFile);

  auto* recast = app.add_subcommand("recast", "Apply the label mapping and print the class distribution");
  recast->add_option("--in", inputs, "Interchange .jsonl (repeatable)")->required()->check(CLI::ExistingFile);
  recast->add_option("--out", out, "Output .jsonl (single input)");
  recast->add_option("--out-dir", out_dir, "Write <DATASET>.jsonl here");
  recast->add_option("--mapping", mapping, "Mapping config")->check(CLI::ExistingFile);
  recast->add_flag("--strict", strict, "Reject unmapped labels");

  auto* split = app.add_subcommand("split", "Write a document-level split manifest");
  split->add_option("--in", inputs, "Interchange .jsonl (repeatable)")->required()->check(CLI::ExistingFile);
  split->add_option("--seed", seed, "Split seed");
  split->add_option("--ratios", ratios, "train validation test")->expected(3)->delimiter(',');
  split->add_option("--out", out, "Manifest path (default stdout)");

  auto* train = app.add_subcommand("train", "Grid-search one pool and evaluate it on every target");
  add_common(train, common);
  train->add_option("--pool", pool, "e.g. BVA+CB")->required();
  train->add_option("--model-out", out_dir, "Save the selected model");

  auto* matrix = app.add_subcommand("matrix", "Run the full transfer matrix");
  add_common(matrix, common);

  auto* report = app.add_subcommand("report", "Render a finished run");
  report->add_option("--run", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", format, "table-text or csv");

  auto* synth = app.add_subcommand("synth", "Generate synthetic sibling corpora and a run config");
  synth->add_option("--datasets", datasets, "Comma-separated dataset ids");
  synth->add_option("--overlap", overlap, "Shared share of the signal vocabulary")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--docs", docs, "Documents per dataset")->check(CLI::PositiveNumber);
  synth->add_option("--facts-ratio", facts_ratio, "Share of Facts sentences")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_flag("--with-stub", with_stub, "Also register the majority-class external backend");

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    if (*ingest) return cmd_ingest(dataset, input, out, rules);
    if (*recast) return cmd_recast(inputs, out, out_dir, mapping, strict);
    if (*split) return cmd_split(inputs, seed, ratios, out);
    if (*train) return cmd_train(common, pool, out_dir);
    if (*matrix) return cmd_matrix(common);
    if (*report) return cmd_report(run_dir, format);
    if (*synth) return cmd_synth(datasets, overlap, seed, docs, facts_ratio, out, with_stub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace cli

}  // namespace rr
