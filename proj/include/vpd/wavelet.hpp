#pragma once

#include "vpd/types.hpp"

#include <vector>

namespace vpd {

inline constexpr int kWpDepth = 5;
inline constexpr int kWpNodeCount = 63;  // levels 0..5 inclusive

/// 20-tap orthonormal analysis pair. The highpass is the quadrature mirror
/// of the lowpass: g[i] = (-1)^i * h[19-i].
struct WaveletFilterPair {
    Eigen::Matrix<double, 20, 1> lowpass;
    Eigen::Matrix<double, 20, 1> highpass;
};

/// Tenth-order Daubechies filters. The embedded constants are checked
/// against the orthonormality identities on first use.
const WaveletFilterPair& db10_filters();

struct WpNode {
    int level = 0;
    int position = 0;
    VecX coeffs;
};

/// Full binary coefficient tree, breadth-first natural order:
/// node k = 2^level - 1 + position; node 0 is the (truncated) input.
struct WpTree {
    int depth = kWpDepth;
    std::vector<WpNode> nodes;
};

inline int wp_node_index(int level, int position) { return (1 << level) - 1 + position; }

/// One analysis step: circular correlation with a 20-tap filter, then
/// downsampling by two. y[k] = sum_i filter[i] * x[(2k+i) mod n].
VecX wp_step(const Eigen::Ref<const VecX>& coeffs,
             const Eigen::Matrix<double, 20, 1>& filter);

/// Decomposes to `depth` levels with periodic boundary handling. The input
/// is truncated to the largest multiple of 2^depth; shorter signals are an
/// error.
WpTree wp_decompose(const Eigen::Ref<const VecX>& signal, int depth = kWpDepth);
WpTree wp_decompose(const AudioSignal& signal, int depth = kWpDepth);

/// Inverts the decomposition from the deepest level's nodes only.
VecX wp_reconstruct(const WpTree& tree);

/// Sum of squared coefficients.
double node_energy(const WpNode& node);

/// Non-normalized Shannon entropy: -sum c^2 * ln(c^2), with 0*ln(0) = 0.
double node_shannon_entropy(const WpNode& node);

}  // namespace vpd
