#include "vpd/model_io.hpp"

#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace vpd {

namespace {

void write_values(std::ostream& out, const char* tag,
                  const Eigen::Ref<const Eigen::RowVectorXd>& values) {
    out << tag;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out << ' ' << detail::format_g17(values[i]);
    }
    out << '\n';
}

class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    // Returns the fields of the next line, which must start with `tag`.
    std::vector<std::string> expect(const std::string& tag, std::size_t count) {
        std::string line;
        if (!std::getline(in_, line)) {
            throw Error(ErrorCode::data_error,
                        name_ + ": unexpected end of file, wanted '" + tag + "'");
        }
        ++line_no_;
        detail::strip_cr(line);
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head != tag) {
            throw Error(ErrorCode::data_error, where() + ": expected '" + tag +
                                                   "', got '" + head + "'");
        }
        std::vector<std::string> out;
        std::string token;
        while (fields >> token) {
            out.push_back(token);
        }
        if (out.size() != count) {
            throw Error(ErrorCode::data_error,
                        where() + ": '" + tag + "' wants " + std::to_string(count) +
                            " values, got " + std::to_string(out.size()));
        }
        return out;
    }

    Eigen::RowVectorXd expect_values(const std::string& tag, Eigen::Index count) {
        const auto fields = expect(tag, std::size_t(count));
        Eigen::RowVectorXd values(count);
        for (Eigen::Index i = 0; i < count; ++i) {
            values[i] = detail::parse_double(fields[std::size_t(i)], where());
        }
        return values;
    }

    std::string where() const { return name_ + ":" + std::to_string(line_no_); }

private:
    std::istream& in_;
    std::string name_;
    int line_no_ = 0;
};

Eigen::Index parse_dim(const std::string& s, const std::string& where) {
    const long v = detail::parse_long(s, where);
    if (v < 1) {
        throw Error(ErrorCode::data_error, where + ": dimension must be positive, got " + s);
    }
    return Eigen::Index(v);
}

}  // namespace

void save_model(const std::filesystem::path& path, const PipelineModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::data_error, "cannot write " + path.string());
    }
    const PcaModel& pca = model.pca;
    const MlpModel& mlp = model.mlp;

    out << "VPMODEL 1\n";
    out << "pca " << (pca.mode == PcaMode::project ? "project" : "select") << ' '
        << pca.k() << ' ' << pca.dim() << '\n';
    write_values(out, "mean", pca.mean.transpose());
    write_values(out, "scale", pca.scale.transpose());
    write_values(out, "eigenvalues", pca.eigenvalues.transpose());
    for (Eigen::Index r = 0; r < pca.k(); ++r) {
        write_values(out, "component", pca.components.row(r));
    }

    out << "mlp " << mlp.input_dim() << ' ' << mlp.hidden_dim() << '\n';
    for (Eigen::Index r = 0; r < mlp.hidden_dim(); ++r) {
        write_values(out, "w1", mlp.w1.row(r));
    }
    write_values(out, "b1", mlp.b1.transpose());
    write_values(out, "w2", mlp.w2);
    write_values(out, "b2", Eigen::RowVectorXd::Constant(1, mlp.b2));

    if (!out) {
        throw Error(ErrorCode::data_error, "short write to " + path.string());
    }
}

PipelineModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::file_missing, "cannot open " + path.string());
    }
    LineReader reader(in, path.string());

    const auto magic = reader.expect("VPMODEL", 1);
    if (magic[0] != "1") {
        throw Error(ErrorCode::data_error,
                    path.string() + ": unsupported model version " + magic[0]);
    }

    PipelineModel model;
    const auto pca_head = reader.expect("pca", 3);
    if (pca_head[0] == "project") {
        model.pca.mode = PcaMode::project;
    } else if (pca_head[0] == "select") {
        model.pca.mode = PcaMode::select;
    } else {
        throw Error(ErrorCode::data_error,
                    reader.where() + ": unknown pca mode '" + pca_head[0] + "'");
    }
    const Eigen::Index k = parse_dim(pca_head[1], reader.where());
    const Eigen::Index d = parse_dim(pca_head[2], reader.where());
    model.pca.mean = reader.expect_values("mean", d).transpose();
    model.pca.scale = reader.expect_values("scale", d).transpose();
    model.pca.eigenvalues = reader.expect_values("eigenvalues", k).transpose();
    model.pca.components.resize(k, d);
    for (Eigen::Index r = 0; r < k; ++r) {
        model.pca.components.row(r) = reader.expect_values("component", d);
    }

    const auto mlp_head = reader.expect("mlp", 2);
    const Eigen::Index in_dim = parse_dim(mlp_head[0], reader.where());
    const Eigen::Index hidden = parse_dim(mlp_head[1], reader.where());
    if (in_dim != k) {
        throw Error(ErrorCode::data_error,
                    reader.where() + ": mlp input dim " + std::to_string(in_dim) +
                        " does not match pca output dim " + std::to_string(k));
    }
    model.mlp.w1.resize(hidden, in_dim);
    for (Eigen::Index r = 0; r < hidden; ++r) {
        model.mlp.w1.row(r) = reader.expect_values("w1", in_dim);
    }
    model.mlp.b1 = reader.expect_values("b1", hidden).transpose();
    model.mlp.w2 = reader.expect_values("w2", hidden);
    model.mlp.b2 = reader.expect_values("b2", 1)[0];
    return model;
}

}  // namespace vpd
