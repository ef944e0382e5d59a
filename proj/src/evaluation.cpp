#include "vpd/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "text_util.hpp"
#include "vpd/rng.hpp"

namespace vpd {

namespace {

std::vector<Eigen::Index> shuffled_class_order(const std::vector<int>& labels, Rng& rng) {
    std::vector<Eigen::Index> order;
    order.reserve(labels.size());
    for (int cls : {0, 1}) {
        const std::size_t begin = order.size();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) order.push_back(Eigen::Index(i));
        }
        // Fisher-Yates over this class's slice
        for (std::size_t len = order.size() - begin; len > 1; --len) {
            const auto j = std::size_t(rng.uniform() * double(len));
            std::swap(order[begin + len - 1], order[begin + j]);
        }
    }
    return order;
}

MatX gather_rows(const MatX& features, const std::vector<Eigen::Index>& idx) {
    MatX out(Eigen::Index(idx.size()), features.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.row(Eigen::Index(i)) = features.row(idx[i]);
    }
    return out;
}

VecX gather_labels(const std::vector<int>& labels, const std::vector<Eigen::Index>& idx) {
    VecX out(Eigen::Index(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[Eigen::Index(i)] = labels[std::size_t(idx[i])];
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::data_error, "cannot write " + path.string());
    }
    return out;
}

}  // namespace

FoldSplit kfold_split(const std::vector<int>& labels, int k, std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (k < 1 || std::size_t(k) > n) {
        throw Error(ErrorCode::bad_argument,
                    "kfold_split: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(n) + "]");
    }
    for (int label : labels) {
        if (label != 0 && label != 1) {
            throw Error(ErrorCode::data_error, "kfold_split: labels must be 0 or 1");
        }
    }
    Rng rng(seed);
    const auto order = shuffled_class_order(labels, rng);

    FoldSplit split;
    split.k = k;
    split.assignments.resize(n);
    for (std::size_t j = 0; j < order.size(); ++j) {
        split.assignments[std::size_t(order[j])] = int(j % std::size_t(k));
    }
    return split;
}

EvalReport cross_validate(const LabeledDataset& dataset, int k_features, int hidden,
                          const EvalConfig& cfg) {
    const Eigen::Index n = dataset.size();
    const Eigen::Index d = dataset.features.cols();
    if (n != Eigen::Index(dataset.labels.size())) {
        throw Error(ErrorCode::data_error, "cross_validate: features/labels size mismatch");
    }
    if (k_features < 1 || k_features > d) {
        throw Error(ErrorCode::bad_argument,
                    "cross_validate: k_features=" + std::to_string(k_features) +
                        " outside [1, " + std::to_string(d) + "]");
    }

    EvalReport report;
    report.split = kfold_split(dataset.labels, cfg.folds, cfg.seed);

    for (int fold = 0; fold < cfg.folds; ++fold) {
        std::vector<Eigen::Index> train_idx, test_idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            (report.split.assignments[std::size_t(i)] == fold ? test_idx : train_idx)
                .push_back(i);
        }
        const MatX train_rows = gather_rows(dataset.features, train_idx);
        const VecX train_labels = gather_labels(dataset.labels, train_idx);
        if ((train_labels.array() == 0.0).all() || (train_labels.array() == 1.0).all()) {
            throw Error(ErrorCode::data_error,
                        "cross_validate: fold " + std::to_string(fold) +
                            " training split has a single class");
        }

        const Eigen::Index rank = std::min<Eigen::Index>(train_rows.rows() - 1, d);
        const Eigen::Index k_eff = std::min<Eigen::Index>(k_features, rank);
        // Selection scores come from the top-k_eff components only: summed
        // over every nonzero eigenpair the loadings reproduce the correlation
        // diagonal, which is 1 for all features, and the ranking degenerates.
        PcaModel pca;
        if (cfg.mode == PcaMode::project) {
            pca = fit_pca(train_rows, k_eff);
        } else {
            pca = make_selection_model(fit_pca(train_rows, k_eff), k_eff);
        }

        TrainConfig train_cfg;
        train_cfg.learning_rate = cfg.learning_rate;
        train_cfg.epochs = cfg.epochs;
        train_cfg.seed = cfg.seed + std::uint64_t(fold);
        train_cfg.hidden = hidden;
        const MlpModel model =
            train_mlp(init_mlp(k_eff, train_cfg), pca_transform_rows(pca, train_rows),
                      train_labels, train_cfg)
                .model;

        const MatX test_reduced = pca_transform_rows(pca, gather_rows(dataset.features, test_idx));
        long correct = 0;
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            const int actual = dataset.labels[std::size_t(test_idx[i])];
            const int predicted =
                mlp_predict(model, test_reduced.row(Eigen::Index(i)).transpose());
            ++report.confusion[std::size_t(actual)][std::size_t(predicted)];
            if (predicted == actual) ++correct;
        }
        report.per_fold.push_back(double(correct) / double(test_idx.size()));
        report.fold_pcas.push_back(std::move(pca));
        report.fold_models.push_back(model);
    }

    const auto& c = report.confusion;
    report.accuracy = double(c[0][0] + c[1][1]) / double(n);
    const long actual_path = c[1][0] + c[1][1];
    const long actual_healthy = c[0][0] + c[0][1];
    report.sensitivity = actual_path > 0 ? double(c[1][1]) / double(actual_path) : 0.0;
    report.specificity = actual_healthy > 0 ? double(c[0][0]) / double(actual_healthy) : 0.0;
    return report;
}

std::vector<SweepRow> sweep_hidden(const LabeledDataset& dataset, int k_features,
                                   const std::vector<int>& hidden_values,
                                   const EvalConfig& cfg) {
    if (hidden_values.empty()) {
        throw Error(ErrorCode::bad_argument, "sweep_hidden: empty value list");
    }
    std::vector<SweepRow> rows;
    for (int hidden : hidden_values) {
        const EvalReport report = cross_validate(dataset, k_features, hidden, cfg);
        rows.push_back({hidden, report.accuracy, report.sensitivity, report.specificity});
    }
    return rows;
}

FeatureSweepResult sweep_features(const LabeledDataset& dataset,
                                  const std::vector<int>& feature_counts, int hidden,
                                  const EvalConfig& cfg) {
    if (feature_counts.empty()) {
        throw Error(ErrorCode::bad_argument, "sweep_features: empty count list");
    }
    FeatureSweepResult result;
    for (int count : feature_counts) {
        const EvalReport report = cross_validate(dataset, count, hidden, cfg);
        result.rows.push_back({count, report.accuracy, report.sensitivity,
                               report.specificity});
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].accuracy > result.rows[best].accuracy) best = i;
    }
    result.best_count = result.rows[best].param;

    const Eigen::Index rank =
        std::min<Eigen::Index>(dataset.size() - 1, dataset.features.cols());
    const Eigen::Index k = std::min<Eigen::Index>(result.best_count, rank);
    const PcaModel scored = fit_pca(dataset.features, k);
    result.best_indices = select_features_by_loadings(scored, result.best_count);
    result.best_summary = describe_selected_features(result.best_indices);
    return result;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_output(path);
    out << "param,accuracy,sensitivity,specificity\n";
    for (const auto& row : rows) {
        out << row.param << ',' << detail::format_g17(row.accuracy) << ','
            << detail::format_g17(row.sensitivity) << ','
            << detail::format_g17(row.specificity) << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::data_error, "short write to " + path.string());
    }
}

void write_sweep_dat(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_output(path);
    out << "# param accuracy\n";
    for (const auto& row : rows) {
        out << row.param << ' ' << detail::format_g17(row.accuracy) << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::data_error, "short write to " + path.string());
    }
}

std::string format_index_ranges(std::vector<int> indices) {
    if (indices.empty()) return "none";
    std::sort(indices.begin(), indices.end());
    std::ostringstream out;
    std::size_t i = 0;
    while (i < indices.size()) {
        std::size_t j = i;
        while (j + 1 < indices.size() && indices[j + 1] == indices[j] + 1) ++j;
        if (i > 0) out << ", ";
        if (j > i) {
            out << indices[i] << '-' << indices[j];
        } else {
            out << indices[i];
        }
        i = j + 1;
    }
    return out.str();
}

std::string describe_selected_features(const std::vector<Eigen::Index>& indices) {
    std::vector<int> mfcc, energy, entropy;
    for (Eigen::Index index : indices) {
        if (index < kEnergyOffset) {
            mfcc.push_back(int(index) + 1);
        } else if (index < kEntropyOffset) {
            energy.push_back(int(index) - kEnergyOffset + 1);
        } else {
            entropy.push_back(int(index) - kEntropyOffset + 1);
        }
    }
    std::ostringstream out;
    out << "mfcc coefficients: " << format_index_ranges(std::move(mfcc)) << '\n'
        << "energy nodes: " << format_index_ranges(std::move(energy)) << '\n'
        << "entropy nodes: " << format_index_ranges(std::move(entropy));
    return out.str();
}

}  // namespace vpd
