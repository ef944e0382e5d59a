#include "vpd/spectral.hpp"

#include "vpd/signal_io.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace vpd {

namespace {

constexpr double kLinearSpacingHz = 133.33;
constexpr double kLogSpacingFactor = 1.0711703;
constexpr int kNumLinearFilters = 13;
constexpr double kLogEnergyFloor = 1e-10;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Center frequencies f_c(0)..f_c(41); index 0 is the 0 Hz extension and
// index 41 extrapolates the log factor for the last filter's upper edge.
VecX center_frequencies() {
    VecX fc(42);
    fc[0] = 0.0;
    for (int i = 1; i <= kNumLinearFilters; ++i) {
        fc[i] = kLinearSpacingHz * i;
    }
    for (int i = kNumLinearFilters + 1; i <= 41; ++i) {
        fc[i] = fc[i - 1] * kLogSpacingFactor;
    }
    return fc;
}

}  // namespace

Eigen::VectorXcd fft_radix2(Eigen::VectorXcd x, bool inverse) {
    const int n = static_cast<int>(x.size());
    if (!is_power_of_two(n)) {
        throw Error(ErrorCode::bad_argument,
                    "fft_radix2: size " + std::to_string(n) + " is not a power of two");
    }
    // bit-reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / len;
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                const auto u = x[i + k];
                const auto v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) x /= static_cast<double>(n);
    return x;
}

VecX fft_magnitude(const Eigen::Ref<const VecX>& frame, int fft_size) {
    if (!is_power_of_two(fft_size)) {
        throw Error(ErrorCode::bad_argument,
                    "fft_magnitude: fft_size " + std::to_string(fft_size) +
                        " is not a power of two");
    }
    if (frame.size() > fft_size) {
        throw Error(ErrorCode::bad_argument, "fft_magnitude: frame longer than fft_size");
    }
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(fft_size);
    x.head(frame.size()).real() = frame;
    x = fft_radix2(std::move(x));
    return x.head(fft_size / 2 + 1).cwiseAbs();
}

MelFilterbank build_mel_filterbank(int sample_rate, int fft_size) {
    if (sample_rate <= 0) {
        throw Error(ErrorCode::bad_argument, "build_mel_filterbank: bad sample rate");
    }
    if (!is_power_of_two(fft_size)) {
        throw Error(ErrorCode::bad_argument, "build_mel_filterbank: fft_size not a power of two");
    }
    const VecX fc = center_frequencies();
    const double nyquist = sample_rate / 2.0;
    if (nyquist <= fc[41]) {
        throw Error(ErrorCode::bad_argument,
                    "build_mel_filterbank: Nyquist " + std::to_string(nyquist) +
                        " Hz is below the final filter edge " + std::to_string(fc[41]) + " Hz");
    }

    MelFilterbank fb;
    fb.center_freqs = fc.segment(1, kNumMelFilters);
    fb.fft_size = fft_size;
    fb.sample_rate = sample_rate;
    const int bins = fft_size / 2 + 1;
    fb.weights = MatX::Zero(kNumMelFilters, bins);
    const double bin_hz = static_cast<double>(sample_rate) / fft_size;
    for (int i = 1; i <= kNumMelFilters; ++i) {
        const double lo = fc[i - 1], center = fc[i], hi = fc[i + 1];
        const double height = 2.0 / (hi - lo);  // equal-area normalization
        bool any = false;
        for (int b = 0; b < bins; ++b) {
            const double f = b * bin_hz;
            double w = 0.0;
            if (f > lo && f < hi) {
                w = (f <= center) ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
                w *= height;
            }
            if (w > 0.0) any = true;
            fb.weights(i - 1, b) = w;
        }
        if (!any) {
            throw Error(ErrorCode::bad_argument,
                        "build_mel_filterbank: filter " + std::to_string(i) +
                            " covers no FFT bin; increase fft_size");
        }
    }
    return fb;
}

MatX dct_matrix(int n_out, int n_in) {
    MatX d(n_out, n_in);
    const double scale = std::sqrt(2.0 / n_in);
    for (int j = 0; j < n_out; ++j) {
        for (int i = 0; i < n_in; ++i) {
            d(j, i) = scale * std::cos(std::numbers::pi * j * (i + 0.5) / n_in);
        }
    }
    if (n_out > 0) d.row(0) /= std::numbers::sqrt2;
    return d;
}

VecX mfcc_frame(const Eigen::Ref<const VecX>& frame, const MelFilterbank& fb) {
    const VecX windowed = frame.cwiseProduct(hamming_window(static_cast<int>(frame.size())));
    const VecX mag = fft_magnitude(windowed, fb.fft_size);
    const VecX power = mag.cwiseAbs2();
    VecX energies = fb.weights * power;
    const VecX logs = energies.cwiseMax(kLogEnergyFloor).array().log();
    return dct_matrix(kNumMfcc, fb.num_filters) * logs;
}

VecX mfcc_average(const AudioSignal& signal, int frame_len, int hop) {
    const int fft_size = next_power_of_two(frame_len);
    const MelFilterbank fb = build_mel_filterbank(signal.sample_rate, fft_size);
    const auto frames = frame_signal(signal, frame_len, hop);
    VecX sum = VecX::Zero(kNumMfcc);
    for (const auto& f : frames) {
        sum += mfcc_frame(f.samples, fb);
    }
    return sum / static_cast<double>(frames.size());
}

}  // namespace vpd
