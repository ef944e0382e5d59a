#pragma once

#include <vector>

#include "vpd/features.hpp"
#include "vpd/types.hpp"

namespace vpd {

// `project` reduces onto principal components; `select` keeps the original
// features ranked highest by eigenvalue-weighted loadings. Both transform
// through the same standardize-then-multiply path.
enum class PcaMode { project, select };

struct PcaModel {
    PcaMode mode = PcaMode::project;
    VecX mean;          // per-feature mean of the training data
    VecX scale;         // per-feature std dev; constant features get 1
    MatX components;    // k x d, rows orthonormal
    VecX eigenvalues;   // k entries, descending, clamped at 0

    Eigen::Index k() const { return components.rows(); }
    Eigen::Index dim() const { return components.cols(); }
};

// Rows of `data` are samples. Standardizes (unless disabled, which only
// centers), forms the (n-1)-normalized covariance, and keeps the top-k
// eigenpairs. Each component row is flipped so its largest-magnitude entry
// is positive.
PcaModel fit_pca(const MatX& data, Eigen::Index k, bool standardize = true);
PcaModel fit_pca(const LabeledDataset& dataset, Eigen::Index k);

VecX pca_transform(const PcaModel& model, const Eigen::Ref<const VecX>& v);
MatX pca_transform_rows(const PcaModel& model, const MatX& rows);

// Scores original feature j by sum_i eigenvalue_i * components(i,j)^2 and
// returns the m best indices, highest score first, ties to the lower index.
std::vector<Eigen::Index> select_features_by_loadings(const PcaModel& model, Eigen::Index m);

// Selection model over the same standardization: component rows are unit
// basis vectors at the selected indices, eigenvalues their loading scores.
PcaModel make_selection_model(const PcaModel& model, Eigen::Index m);

}  // namespace vpd
