// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/latent/analysis.hpp"

#include <limits>
#include <map>
#include <stdexcept>

#include "conformer_forge/latent/embedding.hpp"

namespace conformer_forge::latent {

ProbeSuite run_probe_suite(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                           trajdata::Split split, std::uint64_t seed,
                           const std::vector<std::string>& properties) {
  const std::vector<std::size_t>& idx = dataset.indices(split);
  if (idx.empty()) throw std::invalid_argument("probe: the evaluation split is empty");

  std::map<int, std::size_t> exemplar;
  for (std::size_t i : dataset.splits.train) exemplar.try_emplace(dataset.frames[i].label_id, i);
  std::vector<std::size_t> ex_idx;
  std::vector<int> ex_labels;
  for (const auto& [label, i] : exemplar) {
    ex_labels.push_back(label);
    ex_idx.push_back(i);
  }

  const Embeddings ex = embed_frames(model, dataset, ex_idx);
  const Embeddings test = embed_frames(model, dataset, idx);

  ProbeSuite suite;
  suite.test_frames = idx.size();
  suite.extrinsic_accuracy = one_shot_accuracy(ex.extrinsic, ex_labels, test.extrinsic, test.labels);
  suite.intrinsic_accuracy =
      model.config().use_intrinsic
          ? one_shot_accuracy(ex.intrinsic, ex_labels, test.intrinsic, test.labels)
          : std::numeric_limits<double>::quiet_NaN();

  std::vector<std::string> names = properties.empty() ? dataset.meta.property_names : properties;
  if (names.empty()) return suite;
  const auto k = static_cast<std::size_t>(test.extrinsic.cols());
  const PCAResult base = pca(extrinsic_signal_matrix(dataset, idx), k);
  for (const std::string& name : names) {
    const Eigen::VectorXd y = property_vector(dataset, idx, name);
    ProbeResult r;
    r.task = name;
    r.value = regression_probe(test.extrinsic, y, seed);
    r.baseline = regression_probe(base.scores, y, seed);
    suite.regressions.push_back(r);
  }
  return suite;
}

}  // namespace conformer_forge::latent
