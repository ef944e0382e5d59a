#pragma once

#include "vpd/types.hpp"

namespace vpd {

inline constexpr int kNumMelFilters = 40;
inline constexpr int kNumMfcc = 13;

/// Triangular filterbank over FFT bins: 13 linearly-spaced centers
/// (133.33 Hz apart) followed by 27 log-spaced centers (factor 1.0711703),
/// equal-area normalized. Requires Nyquist above the last filter's upper
/// edge (~11.88 kHz), i.e. sample rates above ~23.77 kHz.
struct MelFilterbank {
    int num_filters = kNumMelFilters;
    VecX center_freqs;  // Hz, strictly increasing
    MatX weights;       // num_filters x (fft_size/2 + 1)
    int fft_size = 0;
    int sample_rate = 0;
};

/// In-place radix-2 FFT (inverse applies the conjugate transform and 1/N).
/// Size must be a power of two.
Eigen::VectorXcd fft_radix2(Eigen::VectorXcd x, bool inverse = false);

/// Magnitude of DFT bins 0..fft_size/2; the frame is zero-padded up to
/// fft_size, which must be a power of two and >= the frame length.
VecX fft_magnitude(const Eigen::Ref<const VecX>& frame, int fft_size);

MelFilterbank build_mel_filterbank(int sample_rate, int fft_size);

/// Orthonormal DCT-II matrix (n_out x n_in).
MatX dct_matrix(int n_out, int n_in);

/// 13 cepstral coefficients of one frame: Hamming window, power spectrum,
/// filterbank energies, log with 1e-10 floor, orthonormal DCT-II.
VecX mfcc_frame(const Eigen::Ref<const VecX>& frame, const MelFilterbank& fb);

/// Per-coefficient arithmetic mean of mfcc_frame over all frames.
VecX mfcc_average(const AudioSignal& signal, int frame_len = 256, int hop = 128);

}  // namespace vpd
