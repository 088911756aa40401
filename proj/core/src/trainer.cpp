// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "conformer_forge/ad/ops.hpp"
#include "conformer_forge/train/adam.hpp"
#include "conformer_forge/train/evaluate.hpp"

namespace conformer_forge::train {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("train: lr must be positive");
  if (!(lr_decay > 0.0)) throw std::invalid_argument("train: lr_decay must be positive");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("train: weight_decay must be >= 0");
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(bond_weight >= 0.0)) throw std::invalid_argument("train: bond_weight must be >= 0");
  if (!(huber_delta > 0.0)) throw std::invalid_argument("train: huber_delta must be positive");
}

double TrainConfig::lr_at(std::size_t epoch) const {
  if (epoch < 1) throw std::invalid_argument("train: epochs are counted from 1");
  return lr * std::pow(lr_decay, static_cast<double>(epoch - 1));
}

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,lr,train_loss,val_loss\n";
  char line[160];
  for (const EpochRecord& r : epochs) {
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", r.epoch, r.lr, r.train_loss,
                  r.val_loss);
    out += line;
  }
  return out;
}

void TrainHistory::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv();
}

model::ProGAE init_model_for(const trajdata::TrajectoryDataset& dataset,
                             const model::ModelConfig& config, std::uint64_t seed) {
  if (dataset.splits.train.empty()) throw std::invalid_argument("train: the train split is empty");
  return model::ProGAE(config, dataset.frames[dataset.splits.train.front()].coords, seed);
}

TrainHistory train_model(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                         const TrainConfig& config, const EpochCallback& on_epoch,
                         std::vector<ad::Parameter*> trainable) {
  config.validate();
  const std::vector<std::size_t>& train_idx = dataset.splits.train;
  if (train_idx.empty()) throw std::invalid_argument("train: the train split is empty");
  if (dataset.meta.atom_count != model.atom_count()) {
    throw std::invalid_argument("train: dataset has " + std::to_string(dataset.meta.atom_count) +
                                " atoms, model expects " + std::to_string(model.atom_count()));
  }

  std::vector<model::FrameInputs> inputs;
  inputs.reserve(train_idx.size());
  for (std::size_t i : train_idx) {
    inputs.push_back(model::prepare_frame(model.config(), dataset.frames[i].coords));
  }

  const std::vector<ad::Parameter*> all = model.parameters();
  if (trainable.empty()) trainable = all;
  Adam adam(trainable, {0.9, 0.999, 1e-8, config.weight_decay});
  std::mt19937_64 shuffle_rng(config.seed ^ 0x5851f42d4c957f2dULL);
  const model::LossConfig loss_cfg = config.loss();

  TrainHistory history;
  std::vector<std::size_t> order(inputs.size());
  for (std::size_t e = 1; e <= config.epochs; ++e) {
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    trajdata::deterministic_shuffle(order, shuffle_rng);
    const double lr = config.lr_at(e);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<const model::FrameInputs*> batch;
      std::vector<const Coords*> targets;
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(&inputs[order[k]]);
        targets.push_back(&inputs[order[k]].target);
      }
      for (ad::Parameter* p : all) p->zero_grad();
      ad::Tape tape;
      auto enc = model.encode(tape, batch, ad::Mode::kTrain);
      ad::Var pred = model.decode(tape, enc.z, ad::Mode::kTrain);
      ad::Var loss = model::batch_loss(pred, model::stack_coords(targets), batch.size(), loss_cfg);
      if (!std::isfinite(loss.value()[0])) {
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(e));
      }
      tape.backward(loss);
      adam.step(lr);
      loss_sum += loss.value()[0] * static_cast<double>(batch.size());
    }

    EpochRecord rec;
    rec.epoch = e;
    rec.lr = lr;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.val_loss = dataset.splits.val.empty()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : evaluate(model, dataset, trajdata::Split::kVal, loss_cfg).loss;
    history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return history;
}

}  // namespace conformer_forge::train
