#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vpd/rng.hpp"
#include "vpd/signal_io.hpp"
#include "vpd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

using vpd::MatX;
using vpd::VecX;

namespace {

constexpr double kPi = std::numbers::pi;

// Quadratic-time DFT used as the transform oracle.
Eigen::VectorXcd dft_naive(const Eigen::VectorXcd& x) {
    const Eigen::Index n = x.size();
    Eigen::VectorXcd out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::complex<double> acc(0.0, 0.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double ang = -2.0 * kPi * double(j) * double(k) / double(n);
            acc += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[j] = acc;
    }
    return out;
}

// Straight-line restatement of the whole per-frame pipeline: window, direct
// DFT power, triangle filters rebuilt from the spacing constants, log floor,
// DCT-II sum. Shares no code with the library path.
VecX mfcc_frame_reference(const VecX& frame, int sample_rate, int fft_size) {
    const int n = int(frame.size());
    VecX wx(n);
    for (int k = 0; k < n; ++k) {
        const double w = (n == 1) ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * kPi * k / (n - 1));
        wx[k] = w * frame[k];
    }

    const int bins = fft_size / 2 + 1;
    VecX power(bins);
    for (int b = 0; b < bins; ++b) {
        double re = 0.0, im = 0.0;
        for (int k = 0; k < n; ++k) {
            const double ang = -2.0 * kPi * double(b) * double(k) / double(fft_size);
            re += wx[k] * std::cos(ang);
            im += wx[k] * std::sin(ang);
        }
        power[b] = re * re + im * im;
    }

    double fc[42];
    fc[0] = 0.0;
    for (int i = 1; i <= 13; ++i) fc[i] = 133.33 * i;
    for (int i = 14; i <= 41; ++i) fc[i] = fc[i - 1] * 1.0711703;

    VecX logs(40);
    for (int i = 1; i <= 40; ++i) {
        const double height = 2.0 / (fc[i + 1] - fc[i - 1]);
        double e = 0.0;
        for (int b = 0; b < bins; ++b) {
            const double f = double(b) * sample_rate / fft_size;
            if (f > fc[i - 1] && f < fc[i]) {
                e += height * (f - fc[i - 1]) / (fc[i] - fc[i - 1]) * power[b];
            } else if (f >= fc[i] && f < fc[i + 1]) {
                e += height * (fc[i + 1] - f) / (fc[i + 1] - fc[i]) * power[b];
            }
        }
        logs[i - 1] = std::log(std::max(e, 1e-10));
    }

    VecX c(13);
    for (int j = 0; j < 13; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 40; ++i) {
            acc += std::sqrt(2.0 / 40.0) * std::cos(kPi * j * (i + 0.5) / 40.0) * logs[i];
        }
        c[j] = (j == 0) ? acc / std::numbers::sqrt2 : acc;
    }
    return c;
}

}  // namespace

TEST_CASE("fft_magnitude of silence and of an impulse") {
    VecX zeros = VecX::Zero(64);
    VecX mz = vpd::fft_magnitude(zeros, 64);
    REQUIRE(mz.size() == 33);
    CHECK(mz.maxCoeff() == 0.0);

    VecX impulse = VecX::Zero(64);
    impulse[0] = 1.0;
    VecX mi = vpd::fft_magnitude(impulse, 64);
    for (Eigen::Index b = 0; b < mi.size(); ++b) {
        CHECK(mi[b] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("a bin-exact cosine concentrates all magnitude in its bin") {
    VecX frame(64);
    for (int k = 0; k < 64; ++k) frame[k] = std::cos(2.0 * kPi * 8.0 * k / 64.0);
    VecX m = vpd::fft_magnitude(frame, 64);
    CHECK(m[8] == doctest::Approx(32.0).epsilon(1e-12));
    for (Eigen::Index b = 0; b < m.size(); ++b) {
        if (b != 8) CHECK(std::abs(m[b]) < 1e-10);
    }
}

TEST_CASE("fft_radix2 matches the quadratic DFT and inverts cleanly") {
    vpd::Rng rng(11);
    for (int n = 2; n <= 256; n <<= 1) {
        Eigen::VectorXcd x(n);
        for (int k = 0; k < n; ++k) {
            x[k] = std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
        Eigen::VectorXcd fast = vpd::fft_radix2(x);
        Eigen::VectorXcd slow = dft_naive(x);
        const double scale = slow.cwiseAbs().maxCoeff();
        CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-9 * scale);

        Eigen::VectorXcd back = vpd::fft_radix2(fast, true);
        CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-12);

        // Parseval: sum |x|^2 == (1/N) sum |X|^2.
        const double time_e = x.cwiseAbs2().sum();
        const double freq_e = fast.cwiseAbs2().sum() / n;
        CHECK(freq_e == doctest::Approx(time_e).epsilon(1e-9));
    }
}

TEST_CASE("fft size must be a power of two") {
    CHECK_THROWS_AS(vpd::fft_radix2(Eigen::VectorXcd::Zero(48)), vpd::Error);
    CHECK_THROWS_AS(vpd::fft_magnitude(VecX::Zero(10), 48), vpd::Error);
    CHECK_THROWS_AS(vpd::fft_magnitude(VecX::Zero(100), 64), vpd::Error);
}

TEST_CASE("filterbank center frequencies follow the two-regime spacing") {
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 2048);
    REQUIRE(fb.center_freqs.size() == 40);
    for (int i = 0; i < 13; ++i) {
        CHECK(fb.center_freqs[i] == doctest::Approx(133.33 * (i + 1)).epsilon(1e-12));
    }
    CHECK(fb.center_freqs[12] == doctest::Approx(1733.29).epsilon(1e-12));
    CHECK(fb.center_freqs[13] == doctest::Approx(1733.29 * 1.0711703).epsilon(1e-12));
    for (int i = 13; i < 39; ++i) {
        CHECK(fb.center_freqs[i + 1] / fb.center_freqs[i] ==
              doctest::Approx(1.0711703).epsilon(1e-12));
    }
    CHECK(fb.center_freqs[39] == doctest::Approx(11093.0595).epsilon(1e-6));
}

TEST_CASE("filterbank rejects sample rates whose Nyquist is under the last edge") {
    CHECK_THROWS_AS(vpd::build_mel_filterbank(16000, 256), vpd::Error);
    CHECK_THROWS_AS(vpd::build_mel_filterbank(22050, 256), vpd::Error);

    // The hard boundary is twice the extrapolated upper edge f_c(41).
    double fc = 1733.29;
    for (int i = 14; i <= 41; ++i) fc *= 1.0711703;
    CHECK_THROWS_AS(vpd::build_mel_filterbank(int(2.0 * fc) - 2, 256), vpd::Error);
    CHECK_NOTHROW(vpd::build_mel_filterbank(int(2.0 * fc) + 2, 256));
    CHECK_NOTHROW(vpd::build_mel_filterbank(24000, 256));
}

TEST_CASE("each filter is nonnegative and unimodal with its peak at the center") {
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 2048);
    const double bin_hz = 32000.0 / 2048.0;
    for (int i = 0; i < fb.num_filters; ++i) {
        const VecX row = fb.weights.row(i);
        CHECK(row.minCoeff() >= 0.0);

        Eigen::Index peak = 0;
        row.maxCoeff(&peak);
        CHECK(std::abs(double(peak) * bin_hz - fb.center_freqs[i]) <= bin_hz);

        for (Eigen::Index b = 1; b < row.size(); ++b) {
            if (b <= peak) {
                CHECK(row[b] >= row[b - 1] - 1e-15);
            } else {
                CHECK(row[b] <= row[b - 1] + 1e-15);
            }
        }
    }
}

TEST_CASE("equal-area normalization: triangle heights are 2/(span)") {
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 8192);
    // With a 3.9 Hz grid the sampled peak approaches the analytic height.
    for (int i : {0, 12, 20, 39}) {
        const double lo = (i == 0) ? 0.0 : fb.center_freqs[i - 1];
        const double hi = (i == 39) ? fb.center_freqs[39] * 1.0711703 : fb.center_freqs[i + 1];
        const double height = 2.0 / (hi - lo);
        CHECK(fb.weights.row(i).maxCoeff() == doctest::Approx(height).epsilon(2e-2));
    }
}

TEST_CASE("an all-zero frame floors every filter: only c_0 is nonzero") {
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    VecX c = vpd::mfcc_frame(VecX::Zero(256), fb);
    REQUIRE(c.size() == 13);
    CHECK(c[0] == doctest::Approx(std::sqrt(40.0) * std::log(1e-10)).epsilon(1e-12));
    for (int j = 1; j < 13; ++j) {
        CHECK(std::abs(c[j]) < 1e-10);
    }
}

TEST_CASE("scaling a frame shifts c_0 and leaves c_1..c_12 unchanged") {
    vpd::Rng rng(3);
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    VecX frame(256);
    for (int k = 0; k < 256; ++k) frame[k] = rng.uniform(-0.8, 0.8);

    VecX c1 = vpd::mfcc_frame(frame, fb);
    VecX c2 = vpd::mfcc_frame(VecX(2.0 * frame), fb);
    CHECK(c2[0] - c1[0] == doctest::Approx(std::sqrt(40.0) * std::log(4.0)).epsilon(1e-8));
    for (int j = 1; j < 13; ++j) {
        CHECK(c2[j] == doctest::Approx(c1[j]).epsilon(1e-10));
    }
}

TEST_CASE("a sine at a center frequency lands in that filter") {
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 2048);
    const double f = fb.center_freqs[4];  // filter 5
    VecX frame(2048);
    for (int k = 0; k < 2048; ++k) frame[k] = std::sin(2.0 * kPi * f * k / 32000.0);

    const VecX windowed = frame.cwiseProduct(vpd::hamming_window(2048));
    const VecX power = vpd::fft_magnitude(windowed, 2048).cwiseAbs2();
    const VecX energies = fb.weights * power;
    Eigen::Index top = 0;
    energies.maxCoeff(&top);
    CHECK(top == 4);
}

TEST_CASE("dct_matrix rows are orthonormal") {
    MatX d = vpd::dct_matrix(13, 40);
    MatX gram = d * d.transpose();
    CHECK((gram - MatX::Identity(13, 13)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mfcc_frame agrees with a straight-line restatement") {
    vpd::Rng rng(17);
    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    VecX frame(256);
    for (int k = 0; k < 256; ++k) frame[k] = rng.uniform(-1.0, 1.0);

    VecX got = vpd::mfcc_frame(frame, fb);
    VecX want = mfcc_frame_reference(frame, 32000, 256);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("mfcc_average of a one-frame signal is that frame's vector") {
    vpd::Rng rng(5);
    vpd::AudioSignal s;
    s.sample_rate = 32000;
    s.samples.resize(256);
    for (int k = 0; k < 256; ++k) s.samples[k] = rng.uniform(-1.0, 1.0);

    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    VecX avg = vpd::mfcc_average(s);
    VecX one = vpd::mfcc_frame(s.samples, fb);
    CHECK((avg - one).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("identical frames average to the per-frame vector") {
    // A 128-periodic signal makes every 256/128 analysis frame identical.
    vpd::Rng rng(6);
    VecX block(128);
    for (int k = 0; k < 128; ++k) block[k] = rng.uniform(-1.0, 1.0);
    vpd::AudioSignal s;
    s.sample_rate = 32000;
    s.samples.resize(384);
    for (int k = 0; k < 384; ++k) s.samples[k] = block[k % 128];

    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    VecX avg = vpd::mfcc_average(s);
    VecX one = vpd::mfcc_frame(s.samples.head(256), fb);
    CHECK((avg - one).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("mfcc_average equals the frame-wise oracle on a sawtooth") {
    const int sr = 32000;
    vpd::AudioSignal s;
    s.sample_rate = sr;
    s.samples.resize(sr);
    for (int t = 0; t < sr; ++t) {
        const double phase = std::fmod(200.0 * t / sr, 1.0);
        s.samples[t] = 2.0 * phase - 1.0;
    }

    VecX want = VecX::Zero(13);
    int count = 0;
    for (int off = 0; off + 256 <= sr; off += 128, ++count) {
        want += mfcc_frame_reference(s.samples.segment(off, 256), sr, 256);
    }
    want /= count;

    VecX got = vpd::mfcc_average(s);
    CHECK(count == 249);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("mfcc_average does not depend on frame order") {
    vpd::Rng rng(9);
    vpd::AudioSignal s;
    s.sample_rate = 32000;
    s.samples.resize(2000);
    for (int k = 0; k < 2000; ++k) s.samples[k] = rng.uniform(-1.0, 1.0);

    vpd::MelFilterbank fb = vpd::build_mel_filterbank(32000, 256);
    auto frames = vpd::frame_signal(s, 256, 128);
    std::vector<VecX> per_frame;
    for (const auto& f : frames) per_frame.push_back(vpd::mfcc_frame(f.samples, fb));
    std::reverse(per_frame.begin(), per_frame.end());
    VecX mean = VecX::Zero(13);
    for (const auto& c : per_frame) mean += c;
    mean /= double(per_frame.size());

    CHECK((vpd::mfcc_average(s) - mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mfcc_average rejects signals shorter than one frame") {
    vpd::AudioSignal s;
    s.sample_rate = 32000;
    s.samples = VecX::Zero(100);
    CHECK_THROWS_AS(vpd::mfcc_average(s), vpd::Error);
}
