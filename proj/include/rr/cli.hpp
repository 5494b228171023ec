#pragma once

#include <filesystem>
#include <vector>

#include "rr/corpus.hpp"
#include "rr/matrix.hpp"
#include "rr/run_config.hpp"

namespace rr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;

// Ingests and recasts every configured dataset, in BVA, CB, ISC order.
std::vector<Corpus> load_corpora(const RunConfig& config);

std::vector<std::shared_ptr<const Backend>> make_backends(const RunConfig& config);

// Runs the full matrix for `config` and populates config.output_dir with
// config.json, splits.jsonl, distribution.txt, metrics.json, report.txt,
// report.csv, run.json, predictions/ and jobs/.
TransferMatrix execute_run(const RunConfig& config);

namespace cli {
int run(int argc, char** argv);
}

}  // namespace rr
