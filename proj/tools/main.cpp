// Command-line front end for the pathology detection pipeline:
// synthesize data, extract features, train, evaluate, classify, sweep.
//
// Exit codes: 0 success, 1 usage error, 2 data/processing error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "vpd/evaluation.hpp"
#include "vpd/features.hpp"
#include "vpd/model_io.hpp"
#include "vpd/signal_io.hpp"
#include "vpd/synth.hpp"

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

vpd::PcaMode parse_mode(const std::string& mode) {
    return mode == "select" ? vpd::PcaMode::select : vpd::PcaMode::project;
}

// Fits the chosen reduction on the full dataset (training-tool path; the
// evaluate command refits per fold instead).
vpd::PcaModel fit_reduction(const vpd::LabeledDataset& dataset, int k, vpd::PcaMode mode) {
    if (mode == vpd::PcaMode::project) {
        return vpd::fit_pca(dataset.features, k);
    }
    // Score against the top-k components only; over the full nonzero spectrum
    // the per-feature loadings all collapse to 1 and the ranking is vacuous.
    return vpd::make_selection_model(vpd::fit_pca(dataset.features, k), k);
}

void print_report(const vpd::EvalReport& report) {
    std::cout << "fold accuracies:";
    for (double acc : report.per_fold) {
        std::cout << ' ' << g17(acc);
    }
    std::cout << '\n';
    const auto& c = report.confusion;
    std::cout << "confusion (actual x predicted):\n"
              << "  healthy:      " << c[0][0] << ' ' << c[0][1] << '\n'
              << "  pathological: " << c[1][0] << ' ' << c[1][1] << '\n'
              << "sensitivity: " << g17(report.sensitivity) << '\n'
              << "specificity: " << g17(report.specificity) << '\n'
              << "pooled accuracy: " << g17(report.accuracy) << '\n';
}

void print_sweep(const std::vector<vpd::SweepRow>& rows, const char* param_name) {
    for (const auto& row : rows) {
        std::cout << param_name << '=' << row.param << " accuracy=" << g17(row.accuracy)
                  << " sensitivity=" << g17(row.sensitivity)
                  << " specificity=" << g17(row.specificity) << '\n';
    }
}

void write_sweep_files(const std::filesystem::path& csv,
                       const std::vector<vpd::SweepRow>& rows) {
    vpd::write_sweep_csv(csv, rows);
    std::filesystem::path dat = csv;
    dat.replace_extension(".dat");
    vpd::write_sweep_dat(dat, rows);
    std::cout << "wrote " << csv.string() << " and " << dat.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vocal fold pathology detection pipeline"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic sustained-vowel dataset");
    std::string synth_out;
    vpd::SynthConfig synth_cfg;
    int n_path = 75, n_healthy = 55;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_cfg.seed, "master seed (default 0)");
    synth->add_option("--n-path", n_path, "pathological count (default 75)");
    synth->add_option("--n-healthy", n_healthy, "healthy count (default 55)");
    synth->add_option("--sample-rate", synth_cfg.sample_rate, "Hz (default 32000)");
    synth->add_option("--duration", synth_cfg.duration, "seconds (default 1.0)");
    synth->callback([&] {
        const auto result = vpd::synth_dataset(synth_cfg, n_path, n_healthy, synth_out);
        std::cout << "wrote " << (result.n_pathological + result.n_healthy)
                  << " wav files (" << result.n_pathological << " pathological, "
                  << result.n_healthy << " healthy) and " << result.manifest.string()
                  << '\n';
    });

    // extract
    auto* extract = app.add_subcommand("extract", "Extract feature vectors from a manifest");
    std::string extract_manifest, extract_out;
    extract->add_option("--manifest", extract_manifest, "manifest CSV (id,path,label)")
        ->required();
    extract->add_option("--out", extract_out, "output feature CSV")->required();
    extract->callback([&] {
        const auto entries = vpd::read_manifest(extract_manifest);
        const auto result = vpd::extract_dataset(entries);
        for (const auto& failure : result.failures) {
            std::cerr << "warning: skipped " << failure.id << " ("
                      << failure.path.string() << "): " << failure.message << '\n';
        }
        vpd::write_features_csv(extract_out, result.dataset);
        std::cout << "extracted " << result.dataset.size() << " of " << entries.size()
                  << " samples -> " << extract_out << '\n';
    });

    // shared training/evaluation knobs
    std::string features_csv, mode = "project";
    int k_features = 36, hidden = 5, folds = 10, epochs = 2000;
    std::uint64_t seed = 0;
    double learning_rate = 0.05;
    auto add_common = [&](CLI::App* cmd, bool with_folds,
                          const char* k_help = "reduced feature count (default 36)") {
        cmd->add_option("--features", features_csv, "feature CSV from `extract`")->required();
        cmd->add_option("--k", k_features, k_help);
        cmd->add_option("--hidden", hidden, "hidden neurons (default 5)");
        cmd->add_option("--seed", seed, "seed (default 0)");
        cmd->add_option("--lr", learning_rate, "learning rate (default 0.05)");
        cmd->add_option("--epochs", epochs, "training epochs (default 2000)");
        cmd->add_option("--mode", mode, "reduction mode: project|select")
            ->check(CLI::IsMember({"project", "select"}));
        if (with_folds) {
            cmd->add_option("--folds", folds, "cross-validation folds (default 10)");
        }
    };
    auto eval_config = [&] {
        vpd::EvalConfig cfg;
        cfg.folds = folds;
        cfg.seed = seed;
        cfg.learning_rate = learning_rate;
        cfg.epochs = epochs;
        cfg.mode = parse_mode(mode);
        return cfg;
    };

    // train
    auto* train = app.add_subcommand("train", "Train on all samples and save the model");
    std::string train_out;
    add_common(train, false);
    train->add_option("--out", train_out, "output model file")->required();
    train->callback([&] {
        const auto dataset = vpd::read_features_csv(features_csv);
        const vpd::PcaModel pca = fit_reduction(dataset, k_features, parse_mode(mode));
        const vpd::MatX reduced = vpd::pca_transform_rows(pca, dataset.features);
        vpd::VecX targets(dataset.size());
        for (Eigen::Index i = 0; i < dataset.size(); ++i) {
            targets[i] = dataset.labels[std::size_t(i)];
        }
        vpd::TrainConfig cfg;
        cfg.learning_rate = learning_rate;
        cfg.epochs = epochs;
        cfg.seed = seed;
        cfg.hidden = hidden;
        const auto result =
            vpd::train_mlp(vpd::init_mlp(k_features, cfg), reduced, targets, cfg);

        long correct = 0;
        for (Eigen::Index i = 0; i < dataset.size(); ++i) {
            if (vpd::mlp_predict(result.model, reduced.row(i).transpose()) ==
                dataset.labels[std::size_t(i)]) {
                ++correct;
            }
        }
        vpd::save_model(train_out, {pca, result.model});
        std::cout << "saved " << train_out << " (k=" << k_features << ", hidden=" << hidden
                  << ", final loss=" << g17(result.loss[result.loss.size() - 1])
                  << ", training accuracy="
                  << g17(double(correct) / double(dataset.size())) << ")\n";
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "k-fold cross-validation");
    add_common(evaluate, true);
    evaluate->callback([&] {
        const auto dataset = vpd::read_features_csv(features_csv);
        print_report(vpd::cross_validate(dataset, k_features, hidden, eval_config()));
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Classify a single WAV file");
    std::string model_path, wav_path;
    classify->add_option("--model", model_path, "model file from `train`")->required();
    classify->add_option("--wav", wav_path, "input WAV file")->required();
    classify->callback([&] {
        const vpd::PipelineModel model = vpd::load_model(model_path);
        const vpd::VecX features = vpd::extract_features(vpd::read_wav(wav_path));
        const double p =
            vpd::mlp_forward(model.mlp, vpd::pca_transform(model.pca, features));
        std::cout << (p > 0.5 ? "pathological" : "healthy") << " probability=" << g17(p)
                  << '\n';
    });

    // sweep-neurons
    auto* sweep_n = app.add_subcommand("sweep-neurons", "Accuracy vs hidden layer size");
    std::string range = "1:15", sweep_n_out = "sweep-neurons.csv";
    add_common(sweep_n, true, "reduced feature count (default 139, the full vector)");
    sweep_n->add_option("--range", range, "hidden sizes START:END (default 1:15)");
    sweep_n->add_option("--out", sweep_n_out, "output CSV (default sweep-neurons.csv)");
    sweep_n->callback([&] {
        if (sweep_n->count("--k") == 0) {
            k_features = vpd::kFeatureDim;  // the neuron sweep defaults to the full vector
        }
        int lo = 0, hi = 0;
        char extra = 0;
        if (std::sscanf(range.c_str(), "%d:%d%c", &lo, &hi, &extra) != 2 || lo < 1 ||
            hi < lo) {
            throw CLI::ValidationError("--range", "expected START:END with 1 <= START <= END");
        }
        std::vector<int> values;
        for (int h = lo; h <= hi; ++h) values.push_back(h);
        const auto dataset = vpd::read_features_csv(features_csv);
        const auto rows = vpd::sweep_hidden(dataset, k_features, values, eval_config());
        print_sweep(rows, "hidden");
        write_sweep_files(sweep_n_out, rows);
    });

    // sweep-features
    auto* sweep_f = app.add_subcommand("sweep-features", "Accuracy vs reduced feature count");
    std::vector<int> counts;
    std::string sweep_f_out = "sweep-features.csv";
    add_common(sweep_f, true);
    sweep_f->add_option("--counts", counts, "comma-separated feature counts")
        ->required()
        ->delimiter(',');
    sweep_f->add_option("--out", sweep_f_out, "output CSV (default sweep-features.csv)");
    sweep_f->callback([&] {
        const auto dataset = vpd::read_features_csv(features_csv);
        const auto result = vpd::sweep_features(dataset, counts, hidden, eval_config());
        print_sweep(result.rows, "k");
        std::cout << "best feature count: " << result.best_count << '\n'
                  << result.best_summary << '\n';
        write_sweep_files(sweep_f_out, result.rows);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);   // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const vpd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
