#pragma once

#include <cstdint>

#include "vpd/types.hpp"

namespace vpd {

// One hidden layer, logistic activations on both layers, single output unit.
struct MlpModel {
    MatX w1;                   // hidden x input
    VecX b1;                   // hidden
    Eigen::RowVectorXd w2;     // 1 x hidden
    double b2 = 0.0;

    Eigen::Index input_dim() const { return w1.cols(); }
    Eigen::Index hidden_dim() const { return w1.rows(); }
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 2000;
    std::uint64_t seed = 0;
    int hidden = 5;
};

struct TrainResult {
    MlpModel model;
    VecX loss;   // mean cross-entropy after each epoch's update
};

struct MlpGradients {
    MatX w1;
    VecX b1;
    Eigen::RowVectorXd w2;
    double b2 = 0.0;
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
MlpModel init_mlp(Eigen::Index input_dim, const TrainConfig& cfg);

double mlp_forward(const MlpModel& model, const Eigen::Ref<const VecX>& x);
VecX mlp_forward_batch(const MlpModel& model, const MatX& rows);

// 1 (pathological) iff forward > 0.5, else 0 (healthy).
int mlp_predict(const MlpModel& model, const Eigen::Ref<const VecX>& x);

// Mean binary cross-entropy, computed from logits so it stays finite for
// pre-activations far beyond sigmoid saturation.
double mlp_loss(const MlpModel& model, const MatX& rows, const VecX& targets);

MlpGradients mlp_gradients(const MlpModel& model, const MatX& rows, const VecX& targets);

// Full-batch gradient descent. Targets are 0/1; both classes must appear.
TrainResult train_mlp(const MlpModel& init, const MatX& rows, const VecX& targets,
                      const TrainConfig& cfg);

// Central differences (step 1e-6) on every parameter against the analytic
// gradients; returns the maximum relative error.
double numerical_gradient_check(const MlpModel& model, const MatX& rows,
                                const VecX& targets);

}  // namespace vpd
