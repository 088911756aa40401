// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/latent/embedding.hpp"

#include <stdexcept>
#include <string>

#include "conformer_forge/geom.hpp"

namespace conformer_forge::latent {

Embeddings embed_frames(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                        const std::vector<std::size_t>& indices) {
  const auto rows = static_cast<Eigen::Index>(indices.size());
  Embeddings e;
  e.intrinsic.resize(rows, model.config().use_intrinsic
                               ? static_cast<Eigen::Index>(model.config().intrinsic_dim)
                               : 0);
  e.extrinsic.resize(rows, static_cast<Eigen::Index>(model.config().extrinsic_dim));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& frame = dataset.frames.at(indices[static_cast<std::size_t>(r)]);
    const model::LatentCode code = model.encode_frame(frame.coords);
    for (std::size_t c = 0; c < code.intrinsic.size(); ++c) {
      e.intrinsic(r, static_cast<Eigen::Index>(c)) = code.intrinsic[c];
    }
    for (std::size_t c = 0; c < code.extrinsic.size(); ++c) {
      e.extrinsic(r, static_cast<Eigen::Index>(c)) = code.extrinsic[c];
    }
    e.frame_index.push_back(frame.frame_index);
    e.labels.push_back(frame.label_id);
  }
  return e;
}

Eigen::MatrixXd extrinsic_signal_matrix(const trajdata::TrajectoryDataset& dataset,
                                        const std::vector<std::size_t>& indices) {
  const std::size_t n = dataset.meta.atom_count;
  const geom::BackboneGraph g = geom::build_backbone_graph(n);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()),
                      static_cast<Eigen::Index>(3 * (n - 1)));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::vector<Vec3> s = geom::extrinsic_signal(g, dataset.frames.at(indices[r]).coords);
    for (std::size_t k = 0; k < s.size(); ++k) {
      for (int c = 0; c < 3; ++c) {
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(3 * k + c)) = s[k][c];
      }
    }
  }
  return out;
}

Eigen::VectorXd property_vector(const trajdata::TrajectoryDataset& dataset,
                                const std::vector<std::size_t>& indices, const std::string& name) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto& props = dataset.frames.at(indices[r]).properties;
    auto it = props.find(name);
    if (it == props.end()) throw std::invalid_argument("unknown property '" + name + "'");
    y[static_cast<Eigen::Index>(r)] = it->second;
  }
  return y;
}

}  // namespace conformer_forge::latent
