#include "vpd/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace vpd {

namespace {

VecX loading_scores(const PcaModel& model) {
    VecX scores = VecX::Zero(model.dim());
    for (Eigen::Index i = 0; i < model.k(); ++i) {
        scores += model.eigenvalues[i] * model.components.row(i).cwiseAbs2().transpose();
    }
    return scores;
}

}  // namespace

PcaModel fit_pca(const MatX& data, Eigen::Index k, bool standardize) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2) {
        throw Error(ErrorCode::bad_argument, "fit_pca: need at least 2 samples, got " +
                                                 std::to_string(n));
    }
    if (k < 1 || k > std::min(n - 1, d)) {
        throw Error(ErrorCode::bad_argument,
                    "fit_pca: k=" + std::to_string(k) + " outside [1, min(n-1, d)] = [1, " +
                        std::to_string(std::min(n - 1, d)) + "]");
    }

    PcaModel model;
    model.mode = PcaMode::project;
    model.mean = data.colwise().mean();
    if (standardize) {
        const VecX var =
            (data.rowwise() - model.mean.transpose()).cwiseAbs2().colwise().sum() /
            double(n - 1);
        model.scale = var.cwiseSqrt();
        for (Eigen::Index j = 0; j < d; ++j) {
            if (model.scale[j] <= 0.0) model.scale[j] = 1.0;
        }
    } else {
        model.scale = VecX::Ones(d);
    }

    MatX z = (data.rowwise() - model.mean.transpose());
    z.array().rowwise() /= model.scale.transpose().array();
    const MatX cov = z.transpose() * z / double(n - 1);

    Eigen::SelfAdjointEigenSolver<MatX> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::data_error, "fit_pca: eigendecomposition failed");
    }

    // Eigen returns ascending order; take the top k from the back.
    model.components.resize(k, d);
    model.eigenvalues.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::Index src = d - 1 - i;
        model.eigenvalues[i] = std::max(0.0, solver.eigenvalues()[src]);
        VecX row = solver.eigenvectors().col(src);
        Eigen::Index peak = 0;
        row.cwiseAbs().maxCoeff(&peak);
        if (row[peak] < 0.0) row = -row;
        model.components.row(i) = row.transpose();
    }
    return model;
}

PcaModel fit_pca(const LabeledDataset& dataset, Eigen::Index k) {
    return fit_pca(dataset.features, k);
}

VecX pca_transform(const PcaModel& model, const Eigen::Ref<const VecX>& v) {
    if (v.size() != model.dim()) {
        throw Error(ErrorCode::bad_argument,
                    "pca_transform: vector has " + std::to_string(v.size()) +
                        " entries, model expects " + std::to_string(model.dim()));
    }
    return model.components *
           ((v - model.mean).cwiseQuotient(model.scale));
}

MatX pca_transform_rows(const PcaModel& model, const MatX& rows) {
    if (rows.cols() != model.dim()) {
        throw Error(ErrorCode::bad_argument,
                    "pca_transform_rows: rows have " + std::to_string(rows.cols()) +
                        " columns, model expects " + std::to_string(model.dim()));
    }
    MatX z = rows.rowwise() - model.mean.transpose();
    z.array().rowwise() /= model.scale.transpose().array();
    return z * model.components.transpose();
}

std::vector<Eigen::Index> select_features_by_loadings(const PcaModel& model, Eigen::Index m) {
    if (m < 1 || m > model.dim()) {
        throw Error(ErrorCode::bad_argument,
                    "select_features_by_loadings: m=" + std::to_string(m) +
                        " outside [1, " + std::to_string(model.dim()) + "]");
    }
    const VecX scores = loading_scores(model);
    std::vector<Eigen::Index> order(std::size_t(model.dim()));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores[a] > scores[b];
    });
    order.resize(std::size_t(m));
    return order;
}

PcaModel make_selection_model(const PcaModel& model, Eigen::Index m) {
    const auto selected = select_features_by_loadings(model, m);
    const VecX scores = loading_scores(model);

    PcaModel out;
    out.mode = PcaMode::select;
    out.mean = model.mean;
    out.scale = model.scale;
    out.components = MatX::Zero(m, model.dim());
    out.eigenvalues.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        out.components(i, selected[std::size_t(i)]) = 1.0;
        out.eigenvalues[i] = scores[selected[std::size_t(i)]];
    }
    return out;
}

}  // namespace vpd
