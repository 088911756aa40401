// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/train/evaluate.hpp"
#include "conformer_forge/train/trainer.hpp"
#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::train {

/// Which encoder filters are copied from the source model. Decoder filters
/// are always copied.
enum class FilterSubset { kAll, kIntrinsic, kExtrinsic };

FilterSubset parse_filter_subset(const std::string& name);
const char* filter_subset_name(FilterSubset subset);

struct TransferConfig {
  TrainConfig train;  // epochs defaults to 10 in transfer_fit callers
  FilterSubset subset = FilterSubset::kAll;
  bool baseline = false;  // skip the copy: same procedure from random filters
};

struct TransferResult {
  model::ProGAE model;
  TrainHistory history;
  EvalReport report;          // test split of the target dataset
  std::string frozen_before;  // hash of every parameter except dec.dense
  std::string frozen_after;
};

/// Rebuilds the model on the target chain (first train frame as reference),
/// copies the selected filters and their BatchNorm state from `source`, and
/// trains only the latent-to-decoder dense layer. Throws DataError when the
/// source filters do not fit the target model.
TransferResult transfer_fit(const model::ProGAE& source, const trajdata::TrajectoryDataset& target,
                            const TransferConfig& config);

/// Hash of all parameters other than the latent-to-decoder dense layer.
std::string frozen_hash(const model::ProGAE& model);

}  // namespace conformer_forge::train
