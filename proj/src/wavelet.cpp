#include "vpd/wavelet.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace vpd {

namespace {

constexpr int kTaps = 20;

constexpr double kDb10Lowpass[kTaps] = {
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-05,
    -1.3264202894521244e-05,
};

void validate_filters(const WaveletFilterPair& f) {
    constexpr double tol = 1e-10;
    const double sum_h = f.lowpass.sum();
    if (std::abs(sum_h - std::numbers::sqrt2) > tol) {
        throw std::logic_error("db10: sum of lowpass taps is not sqrt(2)");
    }
    if (std::abs(f.lowpass.squaredNorm() - 1.0) > tol) {
        throw std::logic_error("db10: lowpass taps are not unit-norm");
    }
    for (int i = 0; i < kTaps; ++i) {
        const double expected = ((i % 2) ? -1.0 : 1.0) * f.lowpass[kTaps - 1 - i];
        if (f.highpass[i] != expected) {
            throw std::logic_error("db10: quadrature mirror relation violated");
        }
    }
    if (std::abs(f.highpass.sum()) > tol) {
        throw std::logic_error("db10: highpass taps do not sum to zero");
    }
    for (int m = 1; m <= 9; ++m) {
        double dot = 0.0;
        for (int i = 0; i + 2 * m < kTaps; ++i) {
            dot += f.lowpass[i] * f.lowpass[i + 2 * m];
        }
        if (std::abs(dot) > tol) {
            throw std::logic_error("db10: shift orthonormality violated at m=" +
                                   std::to_string(m));
        }
    }
}

}  // namespace

const WaveletFilterPair& db10_filters() {
    static const WaveletFilterPair pair = [] {
        WaveletFilterPair f;
        for (int i = 0; i < kTaps; ++i) {
            f.lowpass[i] = kDb10Lowpass[i];
            f.highpass[i] = ((i % 2) ? -1.0 : 1.0) * kDb10Lowpass[kTaps - 1 - i];
        }
        validate_filters(f);
        return f;
    }();
    return pair;
}

VecX wp_step(const Eigen::Ref<const VecX>& coeffs,
             const Eigen::Matrix<double, 20, 1>& filter) {
    const Eigen::Index n = coeffs.size();
    if (n < 2 || n % 2 != 0) {
        throw Error(ErrorCode::bad_argument,
                    "wp_step: length " + std::to_string(n) + " is not even and >= 2");
    }
    VecX out(n / 2);
    for (Eigen::Index k = 0; k < n / 2; ++k) {
        double acc = 0.0;
        for (int i = 0; i < kTaps; ++i) {
            acc += filter[i] * coeffs[(2 * k + i) % n];
        }
        out[k] = acc;
    }
    return out;
}

WpTree wp_decompose(const Eigen::Ref<const VecX>& signal, int depth) {
    if (depth < 1) {
        throw Error(ErrorCode::bad_argument, "wp_decompose: depth must be >= 1");
    }
    const Eigen::Index block = Eigen::Index(1) << depth;
    const Eigen::Index truncated = signal.size() - signal.size() % block;
    if (truncated < block) {
        throw Error(ErrorCode::bad_argument,
                    "wp_decompose: signal shorter than " + std::to_string(block) +
                        " samples after truncation");
    }

    const auto& filters = db10_filters();
    WpTree tree;
    tree.depth = depth;
    tree.nodes.resize((std::size_t(1) << (depth + 1)) - 1);
    tree.nodes[0] = WpNode{0, 0, signal.head(truncated)};
    for (int level = 0; level < depth; ++level) {
        for (int pos = 0; pos < (1 << level); ++pos) {
            const auto& parent = tree.nodes[wp_node_index(level, pos)];
            tree.nodes[wp_node_index(level + 1, 2 * pos)] =
                WpNode{level + 1, 2 * pos, wp_step(parent.coeffs, filters.lowpass)};
            tree.nodes[wp_node_index(level + 1, 2 * pos + 1)] =
                WpNode{level + 1, 2 * pos + 1, wp_step(parent.coeffs, filters.highpass)};
        }
    }
    return tree;
}

WpTree wp_decompose(const AudioSignal& signal, int depth) {
    return wp_decompose(signal.samples, depth);
}

VecX wp_reconstruct(const WpTree& tree) {
    const int depth = tree.depth;
    const std::size_t expected = (std::size_t(1) << (depth + 1)) - 1;
    if (tree.nodes.size() != expected) {
        throw Error(ErrorCode::bad_argument, "wp_reconstruct: malformed tree (node count)");
    }
    const auto& filters = db10_filters();

    std::vector<VecX> current;
    current.reserve(std::size_t(1) << depth);
    for (int pos = 0; pos < (1 << depth); ++pos) {
        const auto& node = tree.nodes[wp_node_index(depth, pos)];
        if (node.coeffs.size() != tree.nodes[0].coeffs.size() >> depth) {
            throw Error(ErrorCode::bad_argument, "wp_reconstruct: malformed tree (node size)");
        }
        current.push_back(node.coeffs);
    }

    for (int level = depth; level >= 1; --level) {
        std::vector<VecX> merged;
        merged.reserve(current.size() / 2);
        for (std::size_t p = 0; p + 1 < current.size(); p += 2) {
            const VecX& lo = current[p];
            const VecX& hi = current[p + 1];
            const Eigen::Index n = 2 * lo.size();
            VecX out = VecX::Zero(n);
            // adjoint of wp_step: upsample and scatter through both filters
            for (Eigen::Index k = 0; k < lo.size(); ++k) {
                for (int i = 0; i < kTaps; ++i) {
                    out[(2 * k + i) % n] += filters.lowpass[i] * lo[k] +
                                            filters.highpass[i] * hi[k];
                }
            }
            merged.push_back(std::move(out));
        }
        current = std::move(merged);
    }
    return current[0];
}

double node_energy(const WpNode& node) { return node.coeffs.squaredNorm(); }

double node_shannon_entropy(const WpNode& node) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < node.coeffs.size(); ++i) {
        const double c2 = node.coeffs[i] * node.coeffs[i];
        if (c2 > 0.0) {
            h -= c2 * std::log(c2);
        }
    }
    return h;
}

}  // namespace vpd
