// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/trajdata.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Geometry>

#include "json.hpp"

namespace conformer_forge::trajdata {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kMetaFile = "meta.json";
constexpr const char* kCoordsFile = "coords.f32";

// Alpha-helix trace parameters, scaled so the rise makes the bond length exact.
constexpr double kHelixRadiusPerSpacing = 2.3 / 3.8;
constexpr double kHelixTurnDegrees = 100.0;
constexpr double kHingeWidth = 1.5;

std::uint32_t float_bits_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double to_float_precision(double v) { return static_cast<double>(static_cast<float>(v)); }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t n = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % n);
}

}  // namespace

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split '" + name + "' (expected train, val or test)");
}

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

const std::vector<std::size_t>& TrajectoryDataset::indices(Split split) const {
  switch (split) {
    case Split::kTrain: return splits.train;
    case Split::kVal: return splits.val;
    case Split::kTest: return splits.test;
  }
  return splits.train;
}

void TrajectoryDataset::validate() const {
  if (meta.atom_count < 5) throw std::invalid_argument("dataset needs at least 5 atoms per frame");
  if (meta.frame_count != frames.size()) {
    throw std::invalid_argument("frame_count does not match number of frames");
  }
  if (meta.residue_index.size() != meta.atom_count || meta.chain_id.size() != meta.atom_count) {
    throw std::invalid_argument("residue_index/chain_id must have one entry per atom");
  }
  for (std::size_t i = 1; i < meta.residue_index.size(); ++i) {
    if (meta.residue_index[i] < meta.residue_index[i - 1]) {
      throw std::invalid_argument("residue_index must be nondecreasing");
    }
  }
  for (const auto& f : frames) {
    if (f.coords.size() != meta.atom_count) {
      throw std::invalid_argument("frame " + std::to_string(f.frame_index) +
                                  " has the wrong atom count");
    }
    for (const auto& p : f.coords) {
      if (!p.allFinite()) throw std::invalid_argument("non-finite coordinate");
    }
  }
  if (!splits.empty()) {
    std::vector<char> seen(frames.size(), 0);
    for (const auto* part : {&splits.train, &splits.val, &splits.test}) {
      for (std::size_t idx : *part) {
        if (idx >= frames.size() || seen[idx]) {
          throw std::invalid_argument("split assignment is not a partition");
        }
        seen[idx] = 1;
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw std::invalid_argument("split assignment does not cover every frame");
    }
  }
}

void SyntheticConfig::validate() const {
  if (atom_count < 5) throw std::invalid_argument("synthetic chain needs at least 5 atoms");
  if (class_count < 2) throw std::invalid_argument("class_count must be >= 2");
  if (frames_per_class < 1) throw std::invalid_argument("frames_per_class must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (!(mode_amplitude >= 0.0)) throw std::invalid_argument("mode_amplitude must be >= 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
}

TrajectoryDataset load_dataset(const fs::path& dir) {
  const fs::path meta_path = dir / kMetaFile;
  const fs::path coords_path = dir / kCoordsFile;
  if (!fs::exists(meta_path)) throw DataError("missing " + meta_path.string());
  if (!fs::exists(coords_path)) throw DataError("missing " + coords_path.string());

  json meta_json;
  {
    std::ifstream in(meta_path);
    try {
      in >> meta_json;
    } catch (const json::exception& e) {
      throw DataError("malformed meta.json: " + std::string(e.what()));
    }
  }

  TrajectoryDataset ds;
  try {
    ds.meta.atom_count = meta_json.at("atom_count").get<std::size_t>();
    ds.meta.frame_count = meta_json.at("frame_count").get<std::size_t>();
    ds.meta.residue_index = meta_json.at("residue_index").get<std::vector<int>>();
    ds.meta.chain_id = meta_json.at("chain_id").get<std::vector<int>>();
    ds.meta.label_names = meta_json.value("label_names", std::vector<std::string>{});
    ds.meta.units = meta_json.value("units", std::string("angstrom"));
  } catch (const json::exception& e) {
    throw DataError("meta.json: " + std::string(e.what()));
  }
  if (ds.meta.units != "angstrom") throw DataError("meta.json: units must be \"angstrom\"");

  const std::size_t frames = ds.meta.frame_count;
  const std::size_t atoms = ds.meta.atom_count;
  std::vector<int> labels(frames, 0);
  if (meta_json.contains("labels")) {
    labels = meta_json["labels"].get<std::vector<int>>();
    if (labels.size() != frames) throw DataError("meta.json: labels length != frame_count");
  }
  std::map<std::string, std::vector<double>> properties;
  if (meta_json.contains("properties")) {
    for (const auto& [name, values] : meta_json["properties"].items()) {
      auto v = values.get<std::vector<double>>();
      if (v.size() != frames) {
        throw DataError("meta.json: property '" + name + "' length != frame_count");
      }
      properties.emplace(name, std::move(v));
    }
  }
  for (const auto& [name, _] : properties) ds.meta.property_names.push_back(name);

  const std::uintmax_t expected = 4ULL * frames * atoms * 3ULL;
  const std::uintmax_t actual = fs::file_size(coords_path);
  if (actual != expected) {
    std::ostringstream msg;
    msg << "payload length mismatch: coords.f32 has " << actual << " bytes, header implies "
        << expected;
    throw DataError(msg.str());
  }

  std::vector<unsigned char> raw(static_cast<std::size_t>(expected));
  {
    std::ifstream in(coords_path, std::ios::binary);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::uintmax_t>(in.gcount()) != expected) {
      throw DataError("payload length mismatch: short read of coords.f32");
    }
  }

  ds.frames.resize(frames);
  const unsigned char* p = raw.data();
  for (std::size_t f = 0; f < frames; ++f) {
    auto& frame = ds.frames[f];
    frame.frame_index = f;
    frame.label_id = labels[f];
    frame.coords.resize(atoms);
    for (std::size_t a = 0; a < atoms; ++a) {
      for (int c = 0; c < 3; ++c, p += 4) {
        const float v = std::bit_cast<float>(float_bits_le(p));
        if (!std::isfinite(v)) throw DataError("non-finite coordinate in coords.f32");
        frame.coords[a][c] = static_cast<double>(v);
      }
    }
    for (const auto& [name, values] : properties) frame.properties[name] = values[f];
  }
  try {
    ds.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return ds;
}

void write_dataset(const TrajectoryDataset& dataset, const fs::path& dir) {
  dataset.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  json meta;
  meta["atom_count"] = dataset.meta.atom_count;
  meta["frame_count"] = dataset.meta.frame_count;
  meta["residue_index"] = dataset.meta.residue_index;
  meta["chain_id"] = dataset.meta.chain_id;
  std::vector<int> labels;
  labels.reserve(dataset.frames.size());
  for (const auto& f : dataset.frames) labels.push_back(f.label_id);
  meta["labels"] = labels;
  meta["label_names"] = dataset.meta.label_names;
  meta["property_names"] = dataset.meta.property_names;
  json props = json::object();
  for (const auto& name : dataset.meta.property_names) {
    std::vector<double> values;
    values.reserve(dataset.frames.size());
    for (const auto& f : dataset.frames) {
      auto it = f.properties.find(name);
      if (it == f.properties.end()) {
        throw std::invalid_argument("frame missing property '" + name + "'");
      }
      values.push_back(it->second);
    }
    props[name] = values;
  }
  meta["properties"] = props;
  meta["units"] = "angstrom";

  {
    std::ofstream out(dir / kMetaFile);
    if (!out) throw DataError("cannot write " + (dir / kMetaFile).string());
    out << meta.dump(2) << '\n';
  }

  std::vector<unsigned char> raw;
  raw.reserve(4 * dataset.frames.size() * dataset.meta.atom_count * 3);
  for (const auto& f : dataset.frames) {
    for (const auto& pt : f.coords) {
      for (int c = 0; c < 3; ++c) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(pt[c]));
        for (int b = 0; b < 4; ++b) raw.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xff));
      }
    }
  }
  std::ofstream out(dir / kCoordsFile, std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / kCoordsFile).string());
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw DataError("write failed for " + (dir / kCoordsFile).string());
}

Coords synthetic_base_chain(std::size_t atom_count, double spacing) {
  const double radius = kHelixRadiusPerSpacing * spacing;
  const double turn = kHelixTurnDegrees * std::numbers::pi / 180.0;
  const double chord = 2.0 * radius * std::sin(turn / 2.0);
  const double rise = std::sqrt(spacing * spacing - chord * chord);

  Coords chain(atom_count);
  Vec3 centroid = Vec3::Zero();
  for (std::size_t i = 0; i < atom_count; ++i) {
    const double t = turn * static_cast<double>(i);
    chain[i] = Vec3(radius * std::cos(t), radius * std::sin(t), rise * static_cast<double>(i));
    centroid += chain[i];
  }
  centroid /= static_cast<double>(atom_count);
  for (auto& p : chain) p -= centroid;
  return chain;
}

std::vector<Coords> synthetic_modes(const SyntheticConfig& config) {
  config.validate();
  const std::size_t n = config.atom_count;
  const std::size_t k_count = config.class_count;
  const Coords base = synthetic_base_chain(n, config.spacing);

  std::mt19937_64 rng(config.seed ^ 0x6d6f646573ULL);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  std::vector<Coords> modes;
  modes.reserve(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    // Hinges are spread along the chain; each class bends about its own axis
    // perpendicular to the helix axis.
    const double frac = (static_cast<double>(k) + 1.0 + 0.25 * jitter(rng)) /
                        (static_cast<double>(k_count) + 1.0);
    const double hinge = frac * static_cast<double>(n - 1);
    const double psi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(k_count) +
                       0.2 * std::numbers::pi / static_cast<double>(k_count) * jitter(rng);
    const Vec3 axis(std::cos(psi), std::sin(psi), 0.0);

    const auto lo = static_cast<std::size_t>(std::floor(hinge));
    const auto hi = std::min(lo + 1, n - 1);
    const double w = hinge - static_cast<double>(lo);
    const Vec3 pivot(0.0, 0.0, (1.0 - w) * base[lo].z() + w * base[hi].z());

    Coords mode(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gate = 1.0 / (1.0 + std::exp(-(static_cast<double>(i) - hinge) / kHingeWidth));
      mode[i] = gate * axis.cross(base[i] - pivot);
      peak = std::max(peak, mode[i].norm());
    }
    if (peak > 0.0) {
      for (auto& d : mode) d /= peak;
    }
    modes.push_back(std::move(mode));
  }
  return modes;
}

TrajectoryDataset generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  const std::size_t n = config.atom_count;
  const std::size_t k_count = config.class_count;
  const std::size_t per_class = config.frames_per_class;

  const Coords base = synthetic_base_chain(n, config.spacing);
  const auto modes = synthetic_modes(config);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Phases keep sin(w t + phi) within [~0.55, 1] so every frame of a class is
  // displaced along the same side of its mode.
  const double omega = 0.5 * std::numbers::pi / static_cast<double>(per_class);
  std::vector<double> phase(k_count);
  for (auto& ph : phase) ph = 0.25 * std::numbers::pi + std::numbers::pi / 16.0 * unit(rng);

  TrajectoryDataset ds;
  ds.meta.atom_count = n;
  ds.meta.frame_count = k_count * per_class;
  ds.meta.residue_index.resize(n);
  std::iota(ds.meta.residue_index.begin(), ds.meta.residue_index.end(), 0);
  ds.meta.chain_id.assign(n, 0);
  for (std::size_t k = 0; k < k_count; ++k) ds.meta.label_names.push_back("drug_" + std::to_string(k));
  ds.meta.property_names = {"hbd_count", "molecular_weight", "tpsa"};

  ds.frames.reserve(ds.meta.frame_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double kd = static_cast<double>(k);
    for (std::size_t t = 0; t < per_class; ++t) {
      ConformationFrame frame;
      frame.frame_index = ds.frames.size();
      frame.label_id = static_cast<int>(k);
      const double s =
          config.mode_amplitude * std::sin(omega * static_cast<double>(t) + phase[k]);
      frame.coords.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
          double v = base[i][c] + s * modes[k][i][c];
          if (config.noise_sigma > 0.0) v += config.noise_sigma * gauss(rng);
          frame.coords[i][c] = to_float_precision(v);
        }
      }
      frame.properties["molecular_weight"] = 300.0 + 45.0 * kd;
      frame.properties["hbd_count"] = 1.0 + kd;
      frame.properties["tpsa"] = 60.0 + 12.5 * kd;
      ds.frames.push_back(std::move(frame));
    }
  }
  return ds;
}

void deterministic_shuffle(std::vector<std::size_t>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

SplitAssignment split_dataset(std::size_t frame_count, std::array<double, 3> fractions,
                              std::uint64_t seed) {
  if (frame_count < 3) throw std::invalid_argument("need at least 3 frames to split");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw std::invalid_argument("split fractions must be nonnegative");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");

  std::vector<std::size_t> order(frame_count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  deterministic_shuffle(order, rng);

  const auto floor_size = [&](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(frame_count) + 1e-9));
  };
  const std::size_t n_val = floor_size(fractions[1]);
  const std::size_t n_test = floor_size(fractions[2]);
  const std::size_t n_train = frame_count - n_val - n_test;

  SplitAssignment split;
  split.seed = seed;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                   order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  return split;
}

}  // namespace conformer_forge::trajdata
