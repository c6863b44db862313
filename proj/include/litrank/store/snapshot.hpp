#pragma once

#include <cstdint>
#include <filesystem>

#include "litrank/store/dataset_store.hpp"

namespace litrank::store {

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Binary snapshot of a frozen store: little-endian, a fixed header, a section
// table (tag, offset, length, crc32) and the section payloads. Output bytes
// depend only on store content.
void snapshot_save(const DatasetStore& store, const std::filesystem::path& path);

// Throws SnapshotError on a bad magic, unsupported version, checksum mismatch
// or any structural inconsistency.
DatasetStore snapshot_load(const std::filesystem::path& path);

}  // namespace litrank::store
