// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace conformer_forge {

/// 64-bit FNV-1a, used for reproducibility fingerprints (not security).
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  void update_double(double value);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hash_file(const std::filesystem::path& path);

}  // namespace conformer_forge
