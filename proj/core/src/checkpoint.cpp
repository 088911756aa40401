// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/model/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <vector>

#include "conformer_forge/hashing.hpp"
#include "json.hpp"

namespace conformer_forge::model {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kFormat = "conformer-forge-checkpoint";
constexpr int kVersion = 1;

void put_le(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
}

double get_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

json config_json(const ProGAE& model) {
  const ModelConfig& c = model.config();
  return {{"encoder_widths", c.encoder_widths},
          {"decoder_widths", c.decoder_widths},
          {"intrinsic_dim", c.intrinsic_dim},
          {"extrinsic_dim", c.extrinsic_dim},
          {"heads", c.heads},
          {"contact_cutoff", c.contact_cutoff},
          {"min_separation", c.min_separation},
          {"radius0", c.radius0},
          {"levels", c.levels},
          {"use_intrinsic", c.use_intrinsic},
          {"leaky_slope", c.leaky_slope},
          {"chain_links", c.chain_links},
          {"atom_count", model.atom_count()},
          {"reference_hash", coords_hash(model.reference())},
          {"output_scale", model.output_scale()}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.encoder_widths = j.at("encoder_widths").get<std::vector<std::size_t>>();
  c.decoder_widths = j.at("decoder_widths").get<std::vector<std::size_t>>();
  c.intrinsic_dim = j.at("intrinsic_dim").get<std::size_t>();
  c.extrinsic_dim = j.at("extrinsic_dim").get<std::size_t>();
  c.heads = j.at("heads").get<std::size_t>();
  c.contact_cutoff = j.at("contact_cutoff").get<double>();
  c.min_separation = j.at("min_separation").get<std::size_t>();
  c.radius0 = j.at("radius0").get<double>();
  c.levels = j.at("levels").get<std::size_t>();
  c.use_intrinsic = j.at("use_intrinsic").get<bool>();
  c.leaky_slope = j.at("leaky_slope").get<double>();
  c.chain_links = j.at("chain_links").get<bool>();
  return c;
}

}  // namespace

std::string coords_hash(std::span<const Vec3> coords) {
  Fnv1a64 h;
  for (const Vec3& p : coords) {
    for (int c = 0; c < 3; ++c) h.update_double(p[c]);
  }
  return h.hex();
}

std::string parameter_hash(const ProGAE& model) {
  Fnv1a64 h;
  for (const ad::Parameter* p : model.parameters()) {
    h.update(p->name);
    for (double v : p->value.values()) h.update_double(v);
  }
  return h.hex();
}

void save_checkpoint(ProGAE& model, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create checkpoint directory " + dir.string());

  std::vector<unsigned char> payload;
  json entries = json::array();
  std::size_t offset = 0;
  auto add = [&](const std::string& name, const char* kind, const std::vector<std::size_t>& shape,
                 std::span<const double> values) {
    entries.push_back({{"name", name},
                       {"kind", kind},
                       {"shape", shape},
                       {"offset", offset},
                       {"count", values.size()}});
    for (double v : values) put_le(payload, v);
    offset += values.size();
  };
  for (ad::Parameter* p : model.parameters()) add(p->name, "parameter", p->value.shape(), p->value.values());
  for (const NamedBuffer& b : model.buffers()) add(b.name, "buffer", b.tensor->shape(), b.tensor->values());
  std::vector<double> ref;
  for (const Vec3& p : model.reference()) ref.insert(ref.end(), {p[0], p[1], p[2]});
  add("reference", "reference", {model.atom_count(), 3}, ref);

  json manifest = {{"format", kFormat},
                   {"version", kVersion},
                   {"config", config_json(model)},
                   {"entries", entries},
                   {"payload_bytes", payload.size()}};

  std::ofstream bin(dir / kPayloadFile, std::ios::binary | std::ios::trunc);
  if (!bin) throw std::runtime_error("cannot write " + (dir / kPayloadFile).string());
  bin.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!bin) throw std::runtime_error("failed writing " + (dir / kPayloadFile).string());

  std::ofstream js(dir / kManifestFile, std::ios::trunc);
  if (!js) throw std::runtime_error("cannot write " + (dir / kManifestFile).string());
  js << manifest.dump(2) << '\n';
}

ProGAE load_checkpoint(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestFile;
  const fs::path payload_path = dir / kPayloadFile;
  if (!fs::exists(manifest_path)) throw DataError("missing " + manifest_path.string());
  if (!fs::exists(payload_path)) throw DataError("missing " + payload_path.string());

  json manifest;
  try {
    std::ifstream in(manifest_path);
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("malformed checkpoint manifest: " + std::string(e.what()));
  }

  std::vector<unsigned char> payload;
  {
    std::ifstream in(payload_path, std::ios::binary);
    payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  try {
    if (manifest.at("format").get<std::string>() != kFormat) {
      throw DataError("checkpoint: unknown format");
    }
    if (manifest.at("version").get<int>() != kVersion) {
      throw DataError("checkpoint: unsupported version");
    }
    const std::size_t declared = manifest.at("payload_bytes").get<std::size_t>();
    if (declared != payload.size()) {
      throw DataError("checkpoint: payload length mismatch (manifest says " +
                      std::to_string(declared) + " bytes, file has " +
                      std::to_string(payload.size()) + ")");
    }
    const json& cfg = manifest.at("config");
    const ModelConfig config = config_from_json(cfg);

    std::map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> table;
    for (const json& e : manifest.at("entries")) {
      const auto offset = e.at("offset").get<std::size_t>();
      const auto count = e.at("count").get<std::size_t>();
      const auto shape = e.at("shape").get<std::vector<std::size_t>>();
      if (ad::shape_size(shape) != count || 8 * (offset + count) > payload.size()) {
        throw DataError("checkpoint: entry '" + e.at("name").get<std::string>() +
                        "' does not fit the payload");
      }
      table[e.at("name").get<std::string>()] = {offset, shape};
    }
    auto read = [&](const std::string& name, ad::Tensor& dst) {
      auto it = table.find(name);
      if (it == table.end()) throw DataError("checkpoint: missing entry '" + name + "'");
      if (it->second.second != dst.shape()) {
        throw DataError("checkpoint: entry '" + name + "' has an incompatible shape");
      }
      const unsigned char* p = payload.data() + 8 * it->second.first;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = get_le(p + 8 * i);
    };

    const std::size_t atoms = cfg.at("atom_count").get<std::size_t>();
    ad::Tensor ref_t = ad::Tensor::matrix(atoms, 3);
    read("reference", ref_t);
    Coords reference(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
      reference[i] = Vec3(ref_t[3 * i], ref_t[3 * i + 1], ref_t[3 * i + 2]);
    }
    if (coords_hash(reference) != cfg.at("reference_hash").get<std::string>()) {
      throw DataError("checkpoint: reference hash mismatch");
    }

    ProGAE model(config, reference, 0, false);
    if (model.output_scale() != cfg.at("output_scale").get<double>()) {
      throw DataError("checkpoint: output scale does not match the reference frame");
    }
    for (ad::Parameter* p : model.parameters()) read(p->name, p->value);
    for (const NamedBuffer& b : model.buffers()) read(b.name, *b.tensor);
    return model;
  } catch (const json::exception& e) {
    throw DataError("checkpoint manifest: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw DataError("checkpoint config: " + std::string(e.what()));
  }
}

}  // namespace conformer_forge::model
