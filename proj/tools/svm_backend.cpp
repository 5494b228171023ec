// The linear SVM baseline behind the job protocol. Manifest config takes
// the same "svm" block as a run config.
#include <cstring>
#include <iostream>

#include "rr/backend.hpp"
#include "rr/run_config.hpp"
#include "rr/svm.hpp"

int main(int argc, char** argv) {
  if (argc != 3 || std::strcmp(argv[1], "--manifest") != 0) {
    std::cerr << "usage: rr-svm-backend --manifest <path>\n";
    return 64;
  }
  try {
    const rr::JobManifest job = rr::read_job_manifest(argv[2]);
    if (job.mode == rr::JobMode::Train) {
      rr::SvmGridSpec grid;
      rr::FeatureOptions features;
      rr::svm_options_from_json(job.config, grid, features);
      const auto train = rr::read_job_data(job.train_path);
      const auto validation = rr::read_job_data(job.validation_path);
      const auto combos = grid.expand();
      const auto result = rr::grid_search(train, validation, combos, features);
      rr::save_model(job.output_path, result.model);
      std::cout << "C=" << result.chosen.C << " class_weight=" << rr::to_string(result.chosen.class_weight)
                << " max_iterations=" << result.chosen.max_iterations
                << " validation_f1=" << result.validation_f1 << "\n";
    } else {
      const auto model = rr::load_model(job.model_path);
      std::vector<rr::PredictionRow> rows;
      for (const auto& r : rr::read_job_data(job.predict_path)) {
        const auto p = rr::predict_text(model, r.text);
        rows.push_back({r.doc_id, r.sent_index, p.label, p.margin});
      }
      rr::write_predictions(job.output_path, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "rr-svm-backend: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
