#include "vpd/signal_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace vpd {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::file_missing, "cannot open WAV file: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t size = bytes.size();

    if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
        throw Error(ErrorCode::wav_malformed, "not a RIFF/WAVE file: " + path.string());
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;
    bool have_data = false;

    std::size_t off = 12;
    while (off + 8 <= size) {
        const char* id = bytes.data() + off;
        std::uint32_t len = read_u32(p + off + 4);
        off += 8;
        if (len > size - off) {
            throw Error(ErrorCode::wav_malformed,
                        "chunk exceeds file size (truncated?): " + path.string());
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) {
                throw Error(ErrorCode::wav_malformed, "fmt chunk too short: " + path.string());
            }
            format = read_u16(p + off);
            channels = read_u16(p + off + 2);
            sample_rate = read_u32(p + off + 4);
            bits = read_u16(p + off + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = p + off;
            data_len = len;
            have_data = true;
        }
        off += len + (len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || !have_data) {
        throw Error(ErrorCode::wav_malformed, "missing fmt or data chunk: " + path.string());
    }
    if (format != 1) {
        throw Error(ErrorCode::wav_not_pcm,
                    "unsupported encoding (audio format " + std::to_string(format) +
                        ", expected integer PCM): " + path.string());
    }
    if (bits != 8 && bits != 16 && bits != 24) {
        throw Error(ErrorCode::wav_not_pcm,
                    "unsupported bit depth " + std::to_string(bits) + ": " + path.string());
    }
    if (channels == 0 || sample_rate == 0) {
        throw Error(ErrorCode::wav_malformed, "bad fmt fields: " + path.string());
    }
    if (data_len == 0) {
        throw Error(ErrorCode::wav_empty_data, "zero-length data chunk: " + path.string());
    }

    const std::uint32_t bytes_per_sample = bits / 8;
    const std::uint32_t block = bytes_per_sample * channels;
    if (data_len % block != 0) {
        throw Error(ErrorCode::wav_malformed,
                    "data chunk length inconsistent with fmt header: " + path.string());
    }
    const std::uint32_t n = data_len / block;

    AudioSignal out;
    out.sample_rate = static_cast<int>(sample_rate);
    out.samples.resize(n);
    const double scale = 1.0 / static_cast<double>(1u << (bits - 1));
    for (std::uint32_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::uint32_t c = 0; c < channels; ++c) {
            const unsigned char* s = data + (i * channels + c) * bytes_per_sample;
            std::int32_t v = 0;
            switch (bits) {
                case 8: v = static_cast<std::int32_t>(s[0]) - 128; break;
                case 16: v = static_cast<std::int16_t>(s[0] | (s[1] << 8)); break;
                case 24:
                    v = s[0] | (s[1] << 8) | (s[2] << 16);
                    if (v & 0x800000) v -= 0x1000000;
                    break;
            }
            acc += static_cast<double>(v) * scale;
        }
        out.samples[i] = acc / channels;
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
    if (signal.sample_rate <= 0) {
        throw Error(ErrorCode::bad_argument, "write_wav: sample_rate must be positive");
    }
    const auto n = signal.samples.size();
    std::string body;
    body.reserve(44 + 2 * static_cast<std::size_t>(n));
    body += "RIFF";
    put_u32(body, 36 + 2 * static_cast<std::uint32_t>(n));
    body += "WAVEfmt ";
    put_u32(body, 16);
    put_u16(body, 1);  // integer PCM
    put_u16(body, 1);  // mono
    put_u32(body, static_cast<std::uint32_t>(signal.sample_rate));
    put_u32(body, static_cast<std::uint32_t>(signal.sample_rate) * 2);
    put_u16(body, 2);
    put_u16(body, 16);
    body += "data";
    put_u32(body, 2 * static_cast<std::uint32_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double x = std::clamp(signal.samples[i], -1.0, 1.0);
        long q = std::lround(x * 32768.0);
        q = std::clamp(q, -32768l, 32767l);
        put_u16(body, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) {
        throw Error(ErrorCode::data_error, "cannot write WAV file: " + path.string());
    }
}

std::vector<Frame> frame_signal(const AudioSignal& signal, int frame_len, int hop) {
    const auto n = signal.samples.size();
    if (frame_len <= 0 || hop <= 0) {
        throw Error(ErrorCode::bad_argument, "frame_signal: frame_len and hop must be positive");
    }
    if (frame_len > n) {
        throw Error(ErrorCode::bad_argument,
                    "frame_signal: frame_len " + std::to_string(frame_len) +
                        " exceeds signal length " + std::to_string(n));
    }
    const Eigen::Index count = (n - frame_len) / hop + 1;
    std::vector<Frame> frames;
    frames.reserve(count);
    for (Eigen::Index k = 0; k < count; ++k) {
        Frame f;
        f.start_index = k * hop;
        f.samples = signal.samples.segment(f.start_index, frame_len);
        frames.push_back(std::move(f));
    }
    return frames;
}

VecX hamming_window(int n) {
    if (n < 1) {
        throw Error(ErrorCode::bad_argument, "hamming_window: n must be >= 1");
    }
    VecX w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (int k = 0; k < n; ++k) {
        w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (n - 1));
    }
    return w;
}

}  // namespace vpd
