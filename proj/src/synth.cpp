#include "vpd/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <system_error>

#include "vpd/features.hpp"
#include "vpd/rng.hpp"
#include "vpd/signal_io.hpp"

namespace vpd {

namespace {

struct Perturbation {
    double jitter_pct;
    double shimmer_pct;
    double noise_level;
};

Perturbation resolve_perturbation(const SynthConfig& cfg, bool pathological) {
    Perturbation p;
    p.jitter_pct = cfg.jitter_pct.value_or(pathological ? 2.5 : 0.3);
    p.shimmer_pct = cfg.shimmer_pct.value_or(pathological ? 8.0 : 1.0);
    p.noise_level = cfg.noise_level.value_or(pathological ? 0.05 : 0.005);
    if (p.jitter_pct < 0.0 || p.shimmer_pct < 0.0 || p.noise_level < 0.0) {
        throw Error(ErrorCode::bad_argument,
                    "synth_voice: jitter, shimmer and noise must be >= 0");
    }
    return p;
}

void check_config(const SynthConfig& cfg) {
    if (cfg.sample_rate < 1) {
        throw Error(ErrorCode::bad_argument, "synth_voice: sample_rate must be positive");
    }
    if (!(cfg.duration > 0.0)) {
        throw Error(ErrorCode::bad_argument, "synth_voice: duration must be positive");
    }
    const double nyquist = cfg.sample_rate / 2.0;
    if (!(cfg.f0_min > 0.0) || cfg.f0_min > cfg.f0_max || cfg.f0_max >= nyquist) {
        throw Error(ErrorCode::bad_argument,
                    "synth_voice: f0 range must satisfy 0 < min <= max < sample_rate/2");
    }
    for (const auto& [center, bandwidth] : cfg.formants) {
        if (!(center > 0.0) || center >= nyquist || !(bandwidth > 0.0)) {
            throw Error(ErrorCode::bad_argument,
                        "synth_voice: formants need 0 < center < sample_rate/2 and "
                        "bandwidth > 0");
        }
    }
}

// Two-pole resonator, in place: y[i] = A x[i] + B y[i-1] + C y[i-2].
void apply_resonator(VecX& x, double center_hz, double bandwidth_hz, int sample_rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth_hz / sample_rate);
    const double b = 2.0 * r * std::cos(2.0 * std::numbers::pi * center_hz / sample_rate);
    const double c = -r * r;
    const double a = 1.0 - b - c;
    double y1 = 0.0, y2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double y = a * x[i] + b * y1 + c * y2;
        y2 = y1;
        y1 = y;
        x[i] = y;
    }
}

}  // namespace

AudioSignal synth_voice(const SynthConfig& cfg, bool pathological) {
    check_config(cfg);
    const Perturbation p = resolve_perturbation(cfg, pathological);

    const Eigen::Index n = Eigen::Index(std::llround(cfg.sample_rate * cfg.duration));
    if (n < 1) {
        throw Error(ErrorCode::bad_argument, "synth_voice: duration too short");
    }

    Rng rng(cfg.seed);
    const double f0 = rng.uniform(cfg.f0_min, cfg.f0_max);

    VecX x = VecX::Zero(n);
    Eigen::Index idx = 0;
    while (idx < n) {
        const double jitter = rng.uniform(-1.0, 1.0);
        const double shimmer = rng.uniform(-1.0, 1.0);
        const double f = f0 * (1.0 + p.jitter_pct / 100.0 * jitter);
        x[idx] += 1.0 + p.shimmer_pct / 100.0 * shimmer;
        idx += std::max<Eigen::Index>(1, Eigen::Index(std::llround(cfg.sample_rate / f)));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] += p.noise_level * rng.uniform(-1.0, 1.0);
    }
    for (const auto& [center, bandwidth] : cfg.formants) {
        apply_resonator(x, center, bandwidth, cfg.sample_rate);
    }

    const double peak = x.cwiseAbs().maxCoeff();
    if (peak > 0.0) {
        x *= 0.9 / peak;
    }
    return AudioSignal{std::move(x), cfg.sample_rate};
}

SynthDatasetResult synth_dataset(const SynthConfig& cfg, int n_pathological,
                                 int n_healthy, const std::filesystem::path& out_dir) {
    if (n_pathological < 0 || n_healthy < 0) {
        throw Error(ErrorCode::bad_argument, "synth_dataset: counts must be >= 0");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::data_error,
                    "synth_dataset: cannot create " + out_dir.string() + ": " + ec.message());
    }

    std::vector<ManifestEntry> entries;
    int file_index = 0;
    auto emit = [&](const char* prefix, int count, bool pathological) {
        for (int i = 0; i < count; ++i, ++file_index) {
            char id[32];
            std::snprintf(id, sizeof id, "%s_%03d", prefix, i + 1);
            SynthConfig per_file = cfg;
            per_file.seed = mix_seed(cfg.seed, std::uint64_t(file_index));
            const std::string filename = std::string(id) + ".wav";
            write_wav(out_dir / filename, synth_voice(per_file, pathological));
            entries.push_back({id, filename, pathological ? 1 : 0});
        }
    };
    emit("path", n_pathological, true);
    emit("healthy", n_healthy, false);

    const std::filesystem::path manifest = out_dir / "manifest.csv";
    write_manifest(manifest, entries);
    return {manifest, n_pathological, n_healthy};
}

}  // namespace vpd
