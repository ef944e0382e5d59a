#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vpd/features.hpp"
#include "vpd/mlp.hpp"
#include "vpd/pca.hpp"

namespace vpd {

struct FoldSplit {
    int k = 0;
    std::vector<int> assignments;   // per-sample fold index, 0..k-1
};

// Stratified: each class is shuffled separately, then the concatenated order
// is dealt round-robin, keeping both fold sizes and per-fold class counts
// within one sample of balanced.
FoldSplit kfold_split(const std::vector<int>& labels, int k, std::uint64_t seed);

struct EvalConfig {
    int folds = 10;
    std::uint64_t seed = 0;          // drives the split and per-fold training
    double learning_rate = 0.05;
    int epochs = 2000;
    PcaMode mode = PcaMode::project;
};

struct EvalReport {
    double accuracy = 0.0;           // pooled over all held-out predictions
    std::array<std::array<long, 2>, 2> confusion{};  // [actual][predicted]
    double sensitivity = 0.0;        // pathological recall
    double specificity = 0.0;        // healthy recall
    std::vector<double> per_fold;
    FoldSplit split;
    // Per-fold artifacts, kept so leakage can be checked by bit comparison.
    std::vector<PcaModel> fold_pcas;
    std::vector<MlpModel> fold_models;
};

// Per fold: fit the reduction on the training portion only, train, score the
// held-out fold. PCA dimension is clamped to what the training portion can
// support (n_train - 1).
EvalReport cross_validate(const LabeledDataset& dataset, int k_features, int hidden,
                          const EvalConfig& cfg);

struct SweepRow {
    int param = 0;
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
};

// One cross_validate per value; the fold split and seeds are shared so only
// the swept parameter varies.
std::vector<SweepRow> sweep_hidden(const LabeledDataset& dataset, int k_features,
                                   const std::vector<int>& hidden_values,
                                   const EvalConfig& cfg);

struct FeatureSweepResult {
    std::vector<SweepRow> rows;
    int best_count = 0;                        // highest accuracy, first on ties
    std::vector<Eigen::Index> best_indices;    // loading-selected, whole dataset
    std::string best_summary;                  // grouped per feature block
};

FeatureSweepResult sweep_features(const LabeledDataset& dataset,
                                  const std::vector<int>& feature_counts, int hidden,
                                  const EvalConfig& cfg);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
// gnuplot-friendly two-column companion file: param and accuracy.
void write_sweep_dat(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

// Compresses sorted 1-based indices into "1-8, 10-13" style ranges.
std::string format_index_ranges(std::vector<int> indices);
// Reports feature indices as MFCC coefficients and energy/entropy node lists.
std::string describe_selected_features(const std::vector<Eigen::Index>& indices);

}  // namespace vpd
