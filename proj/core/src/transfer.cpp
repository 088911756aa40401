// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/train/transfer.hpp"

#include <map>
#include <stdexcept>

#include "conformer_forge/hashing.hpp"

namespace conformer_forge::train {

namespace {

constexpr const char* kDecoderDense = "dec.dense.W";

bool selected(const std::string& name, FilterSubset subset) {
  if (name.rfind("dec.", 0) == 0) return true;
  switch (subset) {
    case FilterSubset::kAll: return true;
    case FilterSubset::kIntrinsic: return name.rfind("enc_i.", 0) == 0;
    case FilterSubset::kExtrinsic: return name.rfind("enc_e.", 0) == 0;
  }
  return false;
}

}  // namespace

FilterSubset parse_filter_subset(const std::string& name) {
  if (name == "all") return FilterSubset::kAll;
  if (name == "intrinsic") return FilterSubset::kIntrinsic;
  if (name == "extrinsic") return FilterSubset::kExtrinsic;
  throw std::invalid_argument("unknown filter subset '" + name +
                              "' (expected all, intrinsic or extrinsic)");
}

const char* filter_subset_name(FilterSubset subset) {
  switch (subset) {
    case FilterSubset::kAll: return "all";
    case FilterSubset::kIntrinsic: return "intrinsic";
    case FilterSubset::kExtrinsic: return "extrinsic";
  }
  return "?";
}

std::string frozen_hash(const model::ProGAE& model) {
  Fnv1a64 h;
  for (const ad::Parameter* p : model.parameters()) {
    if (p->name == kDecoderDense) continue;
    h.update(p->name);
    for (double v : p->value.values()) h.update_double(v);
  }
  return h.hex();
}

TransferResult transfer_fit(const model::ProGAE& source, const trajdata::TrajectoryDataset& target,
                            const TransferConfig& config) {
  TransferResult result{init_model_for(target, source.config(), config.train.seed), {}, {}, {}, {}};
  model::ProGAE& m = result.model;

  if (!config.baseline) {
    model::ProGAE& src = const_cast<model::ProGAE&>(source);
    std::map<std::string, const ad::Tensor*> values;
    for (const ad::Parameter* p : source.parameters()) values[p->name] = &p->value;
    for (const model::NamedBuffer& b : src.buffers()) values[b.name] = b.tensor;

    auto copy = [&](const std::string& name, ad::Tensor& dst) {
      if (name == kDecoderDense || !selected(name, config.subset)) return;
      auto it = values.find(name);
      if (it == values.end()) throw DataError("transfer: source has no entry '" + name + "'");
      if (it->second->shape() != dst.shape()) {
        throw DataError("transfer: entry '" + name + "' has shape " + it->second->shape_string() +
                        " in the source but " + dst.shape_string() + " in the target model");
      }
      dst = *it->second;
    };
    for (ad::Parameter* p : m.parameters()) copy(p->name, p->value);
    for (const model::NamedBuffer& b : m.buffers()) copy(b.name, *b.tensor);
  }
  m.reinit_decoder_dense(config.train.seed);

  std::vector<ad::Parameter*> trainable{&m.dec_dense.W};
  result.frozen_before = frozen_hash(m);
  result.history = train_model(m, target, config.train, {}, trainable);
  result.frozen_after = frozen_hash(m);
  result.report = evaluate(m, target, trajdata::Split::kTest, config.train.loss());
  return result;
}

}  // namespace conformer_forge::train
