#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vpd {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Mono audio: amplitudes in [-1, 1] plus the sampling rate.
struct AudioSignal {
    VecX samples;
    int sample_rate = 0;
};

enum class ErrorCode {
    file_missing,
    wav_not_pcm,
    wav_malformed,
    wav_empty_data,
    bad_argument,
    data_error,
    diverged,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vpd
