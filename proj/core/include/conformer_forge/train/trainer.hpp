// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "conformer_forge/ad/tape.hpp"
#include "conformer_forge/model/loss.hpp"
#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::train {

struct TrainConfig {
  double lr = 1e-3;
  double lr_decay = 0.995;  // per epoch
  double weight_decay = 5e-5;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double bond_weight = 0.5;
  double huber_delta = 2.0;
  std::uint64_t seed = 1;
  bool use_intrinsic = true;

  void validate() const;
  /// lr * lr_decay^(epoch - 1), epochs counted from 1.
  double lr_at(std::size_t epoch) const;
  model::LossConfig loss() const { return {huber_delta, bond_weight}; }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;  // mean per-frame loss over the epoch's batches
  double val_loss = 0.0;    // eval-mode mean over the val split (NaN if empty)
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  /// Header "epoch,lr,train_loss,val_loss" and one row per epoch.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam over the train split, reshuffled every epoch from the
/// config seed. When `trainable` is non-empty only those parameters are
/// updated; BatchNorm layers always run in train mode.
TrainHistory train_model(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                         const TrainConfig& config, const EpochCallback& on_epoch = {},
                         std::vector<ad::Parameter*> trainable = {});

/// Model whose hierarchy is built from the first train-split frame.
model::ProGAE init_model_for(const trajdata::TrajectoryDataset& dataset,
                             const model::ModelConfig& config, std::uint64_t seed);

}  // namespace conformer_forge::train
