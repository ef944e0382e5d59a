#include "vpd/mlp.hpp"

#include <cmath>
#include <limits>

#include "vpd/rng.hpp"

namespace vpd {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z), overflow-free on both tails.
double softplus(double z) {
    return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0);
}

struct ForwardPass {
    MatX a1;     // n x hidden
    VecX z2;     // n logits
    VecX y;      // n sigmoid outputs, unclamped
};

ForwardPass run_forward(const MlpModel& model, const MatX& rows) {
    ForwardPass fp;
    fp.a1 = ((rows * model.w1.transpose()).rowwise() + model.b1.transpose())
                .unaryExpr([](double z) { return sigmoid(z); });
    fp.z2 = (fp.a1 * model.w2.transpose()).array() + model.b2;
    fp.y = fp.z2.unaryExpr([](double z) { return sigmoid(z); });
    return fp;
}

void check_batch(const MlpModel& model, const MatX& rows, const VecX& targets) {
    if (rows.rows() == 0) {
        throw Error(ErrorCode::bad_argument, "mlp: empty batch");
    }
    if (rows.cols() != model.input_dim()) {
        throw Error(ErrorCode::bad_argument,
                    "mlp: batch has " + std::to_string(rows.cols()) +
                        " columns, model expects " + std::to_string(model.input_dim()));
    }
    if (targets.size() != rows.rows()) {
        throw Error(ErrorCode::bad_argument, "mlp: batch/target size mismatch");
    }
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        if (targets[i] != 0.0 && targets[i] != 1.0) {
            throw Error(ErrorCode::data_error, "mlp: targets must be 0 or 1");
        }
    }
}

double loss_from(const ForwardPass& fp, const VecX& targets) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        acc += softplus(fp.z2[i]) - targets[i] * fp.z2[i];
    }
    return acc / double(targets.size());
}

MlpGradients gradients_from(const MlpModel& model, const MatX& rows,
                            const VecX& targets, const ForwardPass& fp) {
    const double n = double(rows.rows());
    const VecX delta2 = fp.y - targets;
    // delta1 = (delta2 * w2) .* a1 .* (1 - a1)
    const MatX delta1 =
        (delta2 * model.w2).cwiseProduct(fp.a1).cwiseProduct((1.0 - fp.a1.array()).matrix());

    MlpGradients g;
    g.w1 = delta1.transpose() * rows / n;
    g.b1 = delta1.colwise().sum().transpose() / n;
    g.w2 = delta2.transpose() * fp.a1 / n;
    g.b2 = delta2.sum() / n;
    return g;
}

}  // namespace

MlpModel init_mlp(Eigen::Index input_dim, const TrainConfig& cfg) {
    if (input_dim < 1) {
        throw Error(ErrorCode::bad_argument, "init_mlp: input_dim must be >= 1");
    }
    if (cfg.hidden < 1) {
        throw Error(ErrorCode::bad_argument, "init_mlp: hidden must be >= 1");
    }
    Rng rng(cfg.seed);
    const double bound1 = 1.0 / std::sqrt(double(input_dim));
    const double bound2 = 1.0 / std::sqrt(double(cfg.hidden));

    MlpModel model;
    model.w1.resize(cfg.hidden, input_dim);
    for (Eigen::Index r = 0; r < model.w1.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.w1.cols(); ++c) {
            model.w1(r, c) = rng.uniform(-bound1, bound1);
        }
    }
    model.b1 = VecX::Zero(cfg.hidden);
    model.w2.resize(cfg.hidden);
    for (Eigen::Index c = 0; c < model.w2.size(); ++c) {
        model.w2[c] = rng.uniform(-bound2, bound2);
    }
    model.b2 = 0.0;
    return model;
}

double mlp_forward(const MlpModel& model, const Eigen::Ref<const VecX>& x) {
    if (x.size() != model.input_dim()) {
        throw Error(ErrorCode::bad_argument,
                    "mlp_forward: vector has " + std::to_string(x.size()) +
                        " entries, model expects " + std::to_string(model.input_dim()));
    }
    const VecX a1 =
        (model.w1 * x + model.b1).unaryExpr([](double z) { return sigmoid(z); });
    const double y = sigmoid(model.w2.dot(a1) + model.b2);
    // keep the contract output strictly inside (0,1) even at saturation
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::min(std::max(y, lo), hi);
}

VecX mlp_forward_batch(const MlpModel& model, const MatX& rows) {
    VecX out(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        out[i] = mlp_forward(model, rows.row(i).transpose());
    }
    return out;
}

int mlp_predict(const MlpModel& model, const Eigen::Ref<const VecX>& x) {
    return mlp_forward(model, x) > 0.5 ? 1 : 0;
}

double mlp_loss(const MlpModel& model, const MatX& rows, const VecX& targets) {
    check_batch(model, rows, targets);
    return loss_from(run_forward(model, rows), targets);
}

MlpGradients mlp_gradients(const MlpModel& model, const MatX& rows, const VecX& targets) {
    check_batch(model, rows, targets);
    return gradients_from(model, rows, targets, run_forward(model, rows));
}

TrainResult train_mlp(const MlpModel& init, const MatX& rows, const VecX& targets,
                      const TrainConfig& cfg) {
    check_batch(init, rows, targets);
    // Zero is permitted as the degenerate no-step case.
    if (cfg.learning_rate < 0.0 || !std::isfinite(cfg.learning_rate)) {
        throw Error(ErrorCode::bad_argument, "train_mlp: learning_rate must be >= 0");
    }
    if (cfg.epochs < 1) {
        throw Error(ErrorCode::bad_argument, "train_mlp: epochs must be >= 1");
    }
    const bool has_healthy = (targets.array() == 0.0).any();
    const bool has_pathological = (targets.array() == 1.0).any();
    if (!has_healthy || !has_pathological) {
        throw Error(ErrorCode::data_error, "train_mlp: need at least one sample per class");
    }

    TrainResult result;
    result.model = init;
    result.loss.resize(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const ForwardPass fp = run_forward(result.model, rows);
        const MlpGradients g = gradients_from(result.model, rows, targets, fp);
        result.model.w1 -= cfg.learning_rate * g.w1;
        result.model.b1 -= cfg.learning_rate * g.b1;
        result.model.w2 -= cfg.learning_rate * g.w2;
        result.model.b2 -= cfg.learning_rate * g.b2;

        const double loss = mlp_loss(result.model, rows, targets);
        if (!std::isfinite(loss)) {
            throw Error(ErrorCode::diverged,
                        "train_mlp: loss diverged at epoch " + std::to_string(epoch));
        }
        result.loss[epoch] = loss;
    }
    return result;
}

double numerical_gradient_check(const MlpModel& model, const MatX& rows,
                                const VecX& targets) {
    check_batch(model, rows, targets);
    const MlpGradients analytic = mlp_gradients(model, rows, targets);
    constexpr double step = 1e-6;
    double max_rel = 0.0;

    MlpModel m = model;
    auto probe = [&](double* param, double ga) {
        const double saved = *param;
        *param = saved + step;
        const double up = mlp_loss(m, rows, targets);
        *param = saved - step;
        const double down = mlp_loss(m, rows, targets);
        *param = saved;
        const double gn = (up - down) / (2.0 * step);
        const double rel = std::abs(ga - gn) / std::max({std::abs(ga), std::abs(gn), 1e-8});
        max_rel = std::max(max_rel, rel);
    };

    for (Eigen::Index r = 0; r < m.w1.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.w1.cols(); ++c) {
            probe(&m.w1(r, c), analytic.w1(r, c));
        }
    }
    for (Eigen::Index i = 0; i < m.b1.size(); ++i) {
        probe(&m.b1[i], analytic.b1[i]);
    }
    for (Eigen::Index i = 0; i < m.w2.size(); ++i) {
        probe(&m.w2[i], analytic.w2[i]);
    }
    probe(&m.b2, analytic.b2);
    return max_rel;
}

}  // namespace vpd
