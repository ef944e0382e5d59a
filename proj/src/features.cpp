#include "vpd/features.hpp"

#include <fstream>
#include <sstream>

#include "text_util.hpp"
#include "vpd/signal_io.hpp"
#include "vpd/spectral.hpp"
#include "vpd/wavelet.hpp"

namespace vpd {

namespace {

std::string features_csv_header() {
    std::ostringstream out;
    out << "id,label";
    for (int i = 1; i <= kNumMfcc; ++i) out << ",mfcc_" << i;
    for (int i = 1; i <= kWpNodeCount; ++i) out << ",energy_" << i;
    for (int i = 1; i <= kWpNodeCount; ++i) out << ",entropy_" << i;
    return out.str();
}

int parse_label(const std::string& s, const std::string& where) {
    const long label = detail::parse_long(s, where);
    if (label != 0 && label != 1) {
        throw Error(ErrorCode::data_error, where + ": label must be 0 or 1, got " + s);
    }
    return int(label);
}

std::ifstream open_text_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::file_missing, "cannot open " + path.string());
    }
    return in;
}

std::ofstream open_text_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::data_error, "cannot write " + path.string());
    }
    return out;
}

}  // namespace

VecX extract_features(const AudioSignal& signal) {
    VecX v(kFeatureDim);
    v.head(kNumMfcc) = mfcc_average(signal);
    const WpTree tree = wp_decompose(signal);
    for (int node = 0; node < kWpNodeCount; ++node) {
        v[kEnergyOffset + node] = node_energy(tree.nodes[node]);
        v[kEntropyOffset + node] = node_shannon_entropy(tree.nodes[node]);
    }
    return v;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in = open_text_input(path);
    const std::filesystem::path base = path.parent_path();

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::data_error, path.string() + ": empty manifest");
    }
    detail::strip_cr(line);
    if (line != "id,path,label") {
        throw Error(ErrorCode::data_error,
                    path.string() + ": expected header 'id,path,label', got '" + line + "'");
    }

    std::vector<ManifestEntry> entries;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3) {
            throw Error(ErrorCode::data_error, where + ": expected 3 fields, got " +
                                                   std::to_string(fields.size()));
        }
        std::filesystem::path wav(fields[1]);
        if (wav.is_relative()) wav = base / wav;
        entries.push_back({fields[0], std::move(wav), parse_label(fields[2], where)});
    }
    return entries;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries) {
    std::ofstream out = open_text_output(path);
    out << "id,path,label\n";
    for (const auto& e : entries) {
        out << e.id << ',' << e.path.generic_string() << ',' << e.label << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::data_error, "short write to " + path.string());
    }
}

ExtractResult extract_dataset(const std::vector<ManifestEntry>& entries) {
    ExtractResult result;
    std::vector<VecX> rows;
    for (const auto& e : entries) {
        try {
            rows.push_back(extract_features(read_wav(e.path)));
            result.dataset.labels.push_back(e.label);
            result.dataset.ids.push_back(e.id);
        } catch (const Error& err) {
            result.failures.push_back({e.id, e.path, err.what()});
        }
    }
    if (rows.empty()) {
        throw Error(ErrorCode::data_error,
                    "no sample could be extracted (" +
                        std::to_string(result.failures.size()) + " failures)");
    }
    result.dataset.features.resize(Eigen::Index(rows.size()), kFeatureDim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        result.dataset.features.row(Eigen::Index(i)) = rows[i].transpose();
    }
    return result;
}

void write_features_csv(const std::filesystem::path& path, const LabeledDataset& dataset) {
    std::ofstream out = open_text_output(path);
    out << features_csv_header() << '\n';
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        out << dataset.ids[std::size_t(i)] << ',' << dataset.labels[std::size_t(i)];
        for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
            out << ',' << detail::format_g17(dataset.features(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::data_error, "short write to " + path.string());
    }
}

LabeledDataset read_features_csv(const std::filesystem::path& path) {
    std::ifstream in = open_text_input(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::data_error, path.string() + ": empty file");
    }
    detail::strip_cr(line);
    if (line != features_csv_header()) {
        throw Error(ErrorCode::data_error, path.string() + ": unexpected feature CSV header");
    }

    LabeledDataset dataset;
    std::vector<VecX> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != std::size_t(2 + kFeatureDim)) {
            throw Error(ErrorCode::data_error, where + ": expected " +
                                                   std::to_string(2 + kFeatureDim) +
                                                   " fields, got " +
                                                   std::to_string(fields.size()));
        }
        dataset.ids.push_back(fields[0]);
        dataset.labels.push_back(parse_label(fields[1], where));
        VecX row(kFeatureDim);
        for (int j = 0; j < kFeatureDim; ++j) {
            row[j] = detail::parse_double(fields[std::size_t(j) + 2], where);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::data_error, path.string() + ": no samples");
    }
    dataset.features.resize(Eigen::Index(rows.size()), kFeatureDim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        dataset.features.row(Eigen::Index(i)) = rows[i].transpose();
    }
    return dataset;
}

}  // namespace vpd
