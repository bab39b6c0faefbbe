// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "billzeta/basis.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace billzeta {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Environment variable consulted when no cache directory is given explicitly.
inline constexpr const char* kCacheDirEnv = "BILLZETA_CACHE_DIR";
inline constexpr const char* kDefaultCacheDir = ".billzeta-cache";

/// Resolves flag > environment > default.
std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag);

/// On-disk store for SigmaPowerTable.
///
/// File layout (all integers and floats little-endian):
///   magic "BZSIGTAB" (8 bytes), u32 version, u32 max_power, u32 size,
///   u32 quadrature nodes, u64 key hash, u64 payload checksum,
///   (max_power + 1) * size * size f64 entries, row-major per power.
class TableCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const { return dir_; }

  /// Key of (basis, profile, J, quadrature settings).
  static std::string key(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                         const QuadratureSettings& settings);

  std::filesystem::path path_for(const std::string& key) const;

  /// Returns nothing when the entry is absent or fails any integrity check.
  std::optional<SigmaPowerTable> load(const std::string& key) const;
  void store(const std::string& key, const SigmaPowerTable& table) const;

  /// Load, or build and store. `rebuilt` reports whether a build happened.
  SigmaPowerTable get_or_build(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                               const QuadratureSettings& settings, bool* rebuilt = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace billzeta
