// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "conformer_forge/common.hpp"

namespace conformer_forge::trajdata {

/// One conformation of the chain. Coordinates are in Angstrom.
struct ConformationFrame {
  Coords coords;
  std::size_t frame_index = 0;
  int label_id = 0;
  std::map<std::string, double> properties;
};

struct DatasetMeta {
  std::size_t atom_count = 0;
  std::size_t frame_count = 0;
  std::vector<int> residue_index;
  std::vector<int> chain_id;
  std::vector<std::string> label_names;
  std::vector<std::string> property_names;
  std::string units = "angstrom";
};

struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;

  bool empty() const { return train.empty() && val.empty() && test.empty(); }
};

enum class Split { kTrain, kVal, kTest };

Split parse_split(const std::string& name);
const char* split_name(Split split);

struct TrajectoryDataset {
  DatasetMeta meta;
  std::vector<ConformationFrame> frames;
  SplitAssignment splits;

  const std::vector<std::size_t>& indices(Split split) const;
  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct SyntheticConfig {
  std::size_t atom_count = 64;
  std::size_t class_count = 3;
  std::size_t frames_per_class = 200;
  double spacing = 3.8;           // consecutive-atom distance of the base helix
  double mode_amplitude = 6.0;    // peak displacement of a class mode (Angstrom)
  double noise_sigma = 0.2;       // isotropic per-coordinate Gaussian noise (Angstrom)
  std::uint64_t seed = 7;

  void validate() const;
};

/// Reads `meta.json` + `coords.f32` from a dataset directory.
TrajectoryDataset load_dataset(const std::filesystem::path& dir);

/// Writes the directory layout read by load_dataset. Coordinates are stored as
/// little-endian float32, so frames should already be float-representable for
/// an exact round trip (generate_synthetic guarantees this).
void write_dataset(const TrajectoryDataset& dataset, const std::filesystem::path& dir);

/// Helix-plus-class-modes ensemble. Frame t of class k is
///   base + a * sin(w t + phi_k) * M_k + noise,
/// where M_k is a smooth hinge-bending displacement field unique to class k.
TrajectoryDataset generate_synthetic(const SyntheticConfig& config);

/// Displacement fields used by generate_synthetic, normalized to unit peak
/// displacement. Exposed for testing class separability.
std::vector<Coords> synthetic_modes(const SyntheticConfig& config);

/// The undeformed helix used by generate_synthetic.
Coords synthetic_base_chain(std::size_t atom_count, double spacing);

/// Deterministic shuffle-then-partition. Sizes are floor(f * n) for val and
/// test, with the remainder assigned to train.
SplitAssignment split_dataset(std::size_t frame_count, std::array<double, 3> fractions,
                              std::uint64_t seed);

/// Fisher-Yates over a 64-bit Mersenne twister with rejection-sampled indices,
/// so the permutation does not depend on the standard library's distributions.
void deterministic_shuffle(std::vector<std::size_t>& items, std::mt19937_64& rng);

}  // namespace conformer_forge::trajdata
