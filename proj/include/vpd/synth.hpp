#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "vpd/types.hpp"

namespace vpd {

// Sustained /a/ stand-in: jittered impulse train plus noise, shaped by a
// cascade of formant resonators. Classes differ only in perturbation levels.
struct SynthConfig {
    int sample_rate = 32000;
    double duration = 1.0;                       // seconds
    double f0_min = 100.0, f0_max = 180.0;       // Hz
    std::vector<std::pair<double, double>> formants = {
        {730.0, 90.0}, {1090.0, 110.0}, {2440.0, 120.0}};  // (center, bandwidth) Hz

    // Unset fields fall back to the class defaults: healthy 0.3 / 1 / 0.005,
    // pathological 2.5 / 8 / 0.05.
    std::optional<double> jitter_pct;
    std::optional<double> shimmer_pct;
    std::optional<double> noise_level;

    std::uint64_t seed = 0;
};

AudioSignal synth_voice(const SynthConfig& cfg, bool pathological);

struct SynthDatasetResult {
    std::filesystem::path manifest;
    int n_pathological = 0;
    int n_healthy = 0;
};

// Writes <id>.wav files plus manifest.csv into out_dir; per-file seeds are
// derived from cfg.seed so regeneration is byte-identical.
SynthDatasetResult synth_dataset(const SynthConfig& cfg, int n_pathological,
                                 int n_healthy, const std::filesystem::path& out_dir);

}  // namespace vpd
