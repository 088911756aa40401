// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/train/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "conformer_forge/geom.hpp"

namespace conformer_forge::train {

std::size_t evaluation_threads() {
  const char* env = std::getenv("CONFORMER_FORGE_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<std::size_t>(v);
}

EvalReport evaluate_predictions(const Predictor& predict,
                                const trajdata::TrajectoryDataset& dataset, trajdata::Split split,
                                const model::LossConfig& loss, std::size_t threads) {
  const std::vector<std::size_t>& idx = dataset.indices(split);
  if (idx.empty()) {
    throw std::invalid_argument(std::string("evaluate: split '") + trajdata::split_name(split) +
                                "' is empty");
  }
  struct Row {
    double loss, l2, jaccard, rmsd;
  };
  std::vector<Row> rows(idx.size());
  auto work = [&](std::size_t k) {
    const Coords& frame = dataset.frames[idx[k]].coords;
    const model::Reconstruction r = model::score_prediction(predict(frame), frame, loss);
    rows[k] = {r.loss, r.mean_error, geom::contact_jaccard(r.target, r.predicted), r.rmsd};
  };

  if (threads == 0) threads = evaluation_threads();
  threads = std::min(threads, idx.size());
  if (threads <= 1) {
    for (std::size_t k = 0; k < idx.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < idx.size(); k = next++) {
          try {
            work(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  EvalReport report;
  report.frames = idx.size();
  for (const Row& r : rows) {
    report.loss += r.loss;
    report.avg_l2 += r.l2;
    report.contact_recovery += r.jaccard;
    report.rmsd += r.rmsd;
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  report.loss *= inv;
  report.avg_l2 *= inv;
  report.contact_recovery *= inv;
  report.rmsd *= inv;
  return report;
}

EvalReport evaluate(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                    trajdata::Split split, const model::LossConfig& loss, std::size_t threads) {
  if (dataset.meta.atom_count != model.atom_count()) {
    throw std::invalid_argument("evaluate: dataset has " + std::to_string(dataset.meta.atom_count) +
                                " atoms, model expects " + std::to_string(model.atom_count()));
  }
  // Eval mode only reads parameters, so workers can share the model.
  Predictor predict = [&model](const Coords& frame) {
    return model.decode_latent(model.encode_frame(frame).concat());
  };
  return evaluate_predictions(predict, dataset, split, loss, threads);
}

}  // namespace conformer_forge::train
