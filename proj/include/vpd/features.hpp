#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vpd/types.hpp"

namespace vpd {

// 13 averaged MFCCs, then energy and Shannon entropy of the 63 wavelet
// packet nodes in node-index order (root first).
inline constexpr int kFeatureDim = 139;
inline constexpr int kEnergyOffset = 13;
inline constexpr int kEntropyOffset = 76;

VecX extract_features(const AudioSignal& signal);

struct LabeledDataset {
    MatX features;                  // one row per sample, kFeatureDim columns
    std::vector<int> labels;        // 0 healthy, 1 pathological
    std::vector<std::string> ids;

    Eigen::Index size() const { return features.rows(); }
};

struct ManifestEntry {
    std::string id;
    std::filesystem::path path;
    int label = 0;
};

// CSV with header `id,path,label`; relative paths are resolved against the
// manifest's own directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries);

struct ExtractFailure {
    std::string id;
    std::filesystem::path path;
    std::string message;
};

struct ExtractResult {
    LabeledDataset dataset;                // successes, in input order
    std::vector<ExtractFailure> failures;
};

// Per-file failures are collected, not fatal; throws only if nothing succeeds.
ExtractResult extract_dataset(const std::vector<ManifestEntry>& entries);

void write_features_csv(const std::filesystem::path& path, const LabeledDataset& dataset);
LabeledDataset read_features_csv(const std::filesystem::path& path);

}  // namespace vpd
