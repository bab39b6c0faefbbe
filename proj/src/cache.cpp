// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/cache.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>
#include <vector>

namespace billzeta {

namespace {

constexpr std::array<char, 8> kMagic{'B', 'Z', 'S', 'I', 'G', 'T', 'A', 'B'};
constexpr std::size_t kHeaderBytes = 8 + 4 * 4 + 8 * 2;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return v;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  return kDefaultCacheDir;
}

std::string TableCache::key(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                            const QuadratureSettings& settings) {
  char tol[64];
  std::snprintf(tol, sizeof tol, "%a", settings.tolerance);
  return "v" + std::to_string(kVersion) + "|" + basis.describe() + "|" + describe(profile) + "|J=" +
         std::to_string(max_power) + "|nodes=" + std::to_string(settings.nodes) +
         "|analytic=" + (settings.analytic_fourier ? "1" : "0") + "|tol=" + tol;
}

std::filesystem::path TableCache::path_for(const std::string& key) const {
  return dir_ / ("sigma-" + hex64(fnv1a64(key)) + ".bin");
}

std::optional<SigmaPowerTable> TableCache::load(const std::string& key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (blob.size() < kHeaderBytes || std::memcmp(blob.data(), kMagic.data(), kMagic.size()) != 0) return std::nullopt;

  const auto version = static_cast<std::uint32_t>(get_le(blob, 8, 4));
  const auto max_power = static_cast<std::uint32_t>(get_le(blob, 12, 4));
  const auto size = static_cast<std::uint32_t>(get_le(blob, 16, 4));
  const auto nodes = static_cast<std::uint32_t>(get_le(blob, 20, 4));
  const auto key_hash = get_le(blob, 24, 8);
  const auto checksum = get_le(blob, 32, 8);
  if (version != kVersion || key_hash != fnv1a64(key)) return std::nullopt;

  const std::size_t count = std::size_t(max_power + 1) * size * size;
  if (blob.size() != kHeaderBytes + 8 * count) return std::nullopt;
  const std::string_view payload(blob.data() + kHeaderBytes, 8 * count);
  if (fnv1a64(payload) != checksum) return std::nullopt;

  // rule name and sup are not stored; get_or_build restores them
  std::vector<MatrixXd> powers;
  std::size_t offset = kHeaderBytes;
  for (std::uint32_t j = 0; j <= max_power; ++j) {
    MatrixXd m(size, size);
    for (std::uint32_t r = 0; r < size; ++r)
      for (std::uint32_t c = 0; c < size; ++c) {
        m(r, c) = std::bit_cast<double>(get_le(blob, offset, 8));
        offset += 8;
      }
    powers.push_back(std::move(m));
  }
  QuadratureMeta meta;
  meta.nodes = static_cast<int>(nodes);
  return SigmaPowerTable(std::move(powers), meta);
}

void TableCache::store(const std::string& key, const SigmaPowerTable& table) const {
  std::string payload;
  payload.reserve(std::size_t(table.max_power() + 1) * table.size() * table.size() * 8);
  for (const auto& m : table.powers())
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) put_u64(payload, std::bit_cast<std::uint64_t>(m(r, c)));

  std::string blob(kMagic.begin(), kMagic.end());
  put_u32(blob, kVersion);
  put_u32(blob, static_cast<std::uint32_t>(table.max_power()));
  put_u32(blob, static_cast<std::uint32_t>(table.size()));
  put_u32(blob, static_cast<std::uint32_t>(table.quadrature_meta().nodes));
  put_u64(blob, fnv1a64(key));
  put_u64(blob, fnv1a64(payload));
  blob += payload;

  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const auto target = path_for(key);
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // cache is best effort
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) return;
  }
  std::filesystem::rename(tmp, target, ec);
}

SigmaPowerTable TableCache::get_or_build(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                                         const QuadratureSettings& settings, bool* rebuilt) const {
  const auto k = key(basis, profile, max_power, settings);
  if (auto hit = load(k)) {
    if (rebuilt) *rebuilt = false;
    QuadratureMeta meta = hit->quadrature_meta();
    meta.rule = "cached";
    std::vector<MatrixXd> powers = hit->powers();
    return SigmaPowerTable(std::move(powers), meta, profile_sup(basis, profile));
  }
  auto table = build_sigma_table(basis, profile, max_power, settings);
  store(k, table);
  if (rebuilt) *rebuilt = true;
  return table;
}

}  // namespace billzeta
