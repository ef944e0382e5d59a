#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vpd/features.hpp"
#include "vpd/mlp.hpp"
#include "vpd/model_io.hpp"
#include "vpd/pca.hpp"
#include "vpd/signal_io.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr merged
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(VPD_CLI_PATH) + (args.empty() ? "" : " " + args) + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path test_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "vpd_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// One small corpus shared by the pipeline cases.
struct Corpus {
    fs::path wavs;
    fs::path features;
};

const Corpus& corpus() {
    static const Corpus c = [] {
        Corpus made;
        made.wavs = test_dir() / "wavs";
        made.features = test_dir() / "features.csv";
        RunResult synth = run_cli("synth --out " + made.wavs.string() +
                                  " --n-path 4 --n-healthy 4 --duration 0.3 --seed 3");
        REQUIRE(synth.code == 0);
        REQUIRE(synth.out.find("wrote 8 wav files (4 pathological, 4 healthy)") !=
                std::string::npos);
        RunResult extract =
            run_cli("extract --manifest " + (made.wavs / "manifest.csv").string() + " --out " +
                    made.features.string());
        REQUIRE(extract.code == 0);
        REQUIRE(extract.out.find("extracted 8 of 8 samples") != std::string::npos);
        return made;
    }();
    return c;
}

double parse_after(const std::string& text, const std::string& tag) {
    const auto pos = text.find(tag);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + tag.size()));
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("frobnicate").code == 1);
    CHECK(run_cli("evaluate --bogus-flag 1").code == 1);
    CHECK(run_cli("synth").code == 1);  // --out is required
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("evaluate --help").code == 0);
}

TEST_CASE("train/classify round-trip through the CLI") {
    const Corpus& c = corpus();
    fs::path model = test_dir() / "model.txt";
    RunResult train = run_cli("train --features " + c.features.string() + " --k 6 --out " +
                              model.string() + " --epochs 800");
    CHECK(train.code == 0);
    CHECK(train.out.find("saved ") != std::string::npos);
    CHECK(fs::exists(model));

    RunResult healthy = run_cli("classify --model " + model.string() + " --wav " +
                                (c.wavs / "healthy_001.wav").string());
    CHECK(healthy.code == 0);
    CHECK(healthy.out.rfind("healthy probability=", 0) == 0);
    CHECK(parse_after(healthy.out, "probability=") < 0.5);

    RunResult sick = run_cli("classify --model " + model.string() + " --wav " +
                             (c.wavs / "path_001.wav").string());
    CHECK(sick.code == 0);
    CHECK(sick.out.rfind("pathological probability=", 0) == 0);
    CHECK(parse_after(sick.out, "probability=") > 0.5);

    // The printed probability is exactly the persisted pipeline's output.
    vpd::PipelineModel pm = vpd::load_model(model);
    vpd::VecX features =
        vpd::extract_features(vpd::read_wav(c.wavs / "healthy_001.wav"));
    const double expected = vpd::mlp_forward(pm.mlp, vpd::pca_transform(pm.pca, features));
    CHECK(std::abs(parse_after(healthy.out, "probability=") - expected) < 1e-12);
}

TEST_CASE("data errors exit with 2") {
    const Corpus& c = corpus();
    RunResult too_many = run_cli("train --features " + c.features.string() +
                                 " --k 200 --out " + (test_dir() / "x.txt").string());
    CHECK(too_many.code == 2);
    CHECK(too_many.out.find("error:") != std::string::npos);

    RunResult no_model = run_cli("classify --model " + (test_dir() / "absent.txt").string() +
                                 " --wav " + (c.wavs / "healthy_001.wav").string());
    CHECK(no_model.code == 2);

    RunResult no_csv =
        run_cli("evaluate --features " + (test_dir() / "absent.csv").string());
    CHECK(no_csv.code == 2);
}

TEST_CASE("evaluate prints a parseable, repeatable report") {
    const Corpus& c = corpus();
    const std::string cmd = "evaluate --features " + c.features.string() +
                            " --k 6 --folds 4 --epochs 500 --seed 1";
    RunResult a = run_cli(cmd);
    CHECK(a.code == 0);
    const double acc = parse_after(a.out, "pooled accuracy: ");
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
    CHECK(a.out.find("fold accuracies:") != std::string::npos);
    CHECK(a.out.find("sensitivity:") != std::string::npos);

    RunResult b = run_cli(cmd);
    CHECK(a.out == b.out);
}

TEST_CASE("extract reports skipped files but still succeeds") {
    const Corpus& c = corpus();
    fs::path dir = test_dir() / "partial";
    fs::create_directories(dir);
    fs::copy_file(c.wavs / "healthy_001.wav", dir / "ok.wav");
    {
        std::ofstream manifest(dir / "manifest.csv");
        manifest << "id,path,label\nok,ok.wav,0\nghost,ghost.wav,1\n";
    }
    RunResult r = run_cli("extract --manifest " + (dir / "manifest.csv").string() + " --out " +
                          (dir / "features.csv").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("warning: skipped ghost") != std::string::npos);
    CHECK(r.out.find("extracted 1 of 2 samples") != std::string::npos);
}

TEST_CASE("sweep-neurons writes the table files") {
    const Corpus& c = corpus();
    fs::path csv = test_dir() / "neurons.csv";
    RunResult r = run_cli("sweep-neurons --features " + c.features.string() +
                          " --range 2:3 --k 6 --folds 4 --epochs 300 --out " + csv.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("hidden=2 accuracy=") != std::string::npos);
    CHECK(r.out.find("hidden=3 accuracy=") != std::string::npos);
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(test_dir() / "neurons.dat"));

    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "param,accuracy,sensitivity,specificity");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 2);

    CHECK(run_cli("sweep-neurons --features " + c.features.string() +
                  " --range nonsense --out " + csv.string())
              .code == 1);
}

TEST_CASE("sweep-features reports the winning count") {
    const Corpus& c = corpus();
    fs::path csv = test_dir() / "counts.csv";
    RunResult r = run_cli("sweep-features --features " + c.features.string() +
                          " --counts 2,4 --folds 4 --epochs 300 --out " + csv.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("k=2 accuracy=") != std::string::npos);
    CHECK(r.out.find("k=4 accuracy=") != std::string::npos);
    CHECK(r.out.find("best feature count: ") != std::string::npos);
    CHECK(r.out.find("mfcc coefficients:") != std::string::npos);
    CHECK(fs::exists(csv));
    CHECK(fs::exists(test_dir() / "counts.dat"));
}
