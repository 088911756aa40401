// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "conformer_forge/model/progae.hpp"

namespace conformer_forge::model {

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kPayloadFile = "params.f64";

/// Writes manifest.json (config echo plus name/shape/offset of every entry)
/// and params.f64 (little-endian float64: parameters, BatchNorm running
/// statistics, then the reference coordinates).
void save_checkpoint(ProGAE& model, const std::filesystem::path& dir);

/// Inverse of save_checkpoint. Throws DataError on a malformed manifest, a
/// payload whose length disagrees with it, or a reference hash mismatch.
ProGAE load_checkpoint(const std::filesystem::path& dir);

/// FNV-1a over the float64 bit patterns of the coordinates.
std::string coords_hash(std::span<const Vec3> coords);

/// FNV-1a over every parameter name and value, in traversal order.
std::string parameter_hash(const ProGAE& model);

}  // namespace conformer_forge::model
