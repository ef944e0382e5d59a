#pragma once

#include <filesystem>

#include "vpd/mlp.hpp"
#include "vpd/pca.hpp"

namespace vpd {

// One artifact carries the whole inference path: reduce, then classify.
struct PipelineModel {
    PcaModel pca;
    MlpModel mlp;
};

// Versioned text format, first line `VPMODEL 1`, values with 17 significant
// digits. Field counts are validated on load.
void save_model(const std::filesystem::path& path, const PipelineModel& model);
PipelineModel load_model(const std::filesystem::path& path);

}  // namespace vpd
