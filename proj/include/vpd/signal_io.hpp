#pragma once

#include "vpd/types.hpp"

#include <filesystem>
#include <vector>

namespace vpd {

/// Fixed-length analysis window cut from a signal.
struct Frame {
    VecX samples;
    Eigen::Index start_index = 0;
};

/// Reads a RIFF/WAVE file with integer PCM samples (8/16/24-bit,
/// little-endian). Multichannel input is reduced by averaging channels;
/// integer samples are scaled to [-1, 1] by 2^(bits-1).
///
/// Error categories: ErrorCode::file_missing, wav_not_pcm, wav_malformed,
/// wav_empty_data.
AudioSignal read_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and quantized by
/// rounding x * 32768 (clipped to the int16 range).
void write_wav(const std::filesystem::path& path, const AudioSignal& signal);

/// Frames at offsets 0, hop, 2*hop, ...; a trailing partial frame is
/// discarded. Count = floor((N - frame_len)/hop) + 1.
std::vector<Frame> frame_signal(const AudioSignal& signal, int frame_len, int hop);

/// w[k] = 0.54 - 0.46*cos(2*pi*k/(n-1)); n = 1 returns [1.0].
VecX hamming_window(int n);

}  // namespace vpd
