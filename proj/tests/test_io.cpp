#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <doctest.h>

#include "ratecode/datagen.hpp"
#include "ratecode/matrix_io.hpp"
#include "ratecode/report.hpp"
#include "ratecode/segmentation.hpp"
#include "support/oracles.hpp"

using namespace ratecode;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("ratecode_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("load_matrix transposes row-samples into column-samples") {
    TempDir dir;
    const std::string path = dir.file("zeros.csv");
    write_text(path, "0,0\n0,0\n");
    const Matrix m = load_matrix(path);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.cwiseAbs().maxCoeff() == 0.0);

    write_text(dir.file("rect.csv"), "1,2,3\n4,5,6\n");
    const Matrix r = load_matrix(dir.file("rect.csv"));
    CHECK(r.rows() == 3);  // ambient dimension
    CHECK(r.cols() == 2);  // samples
    CHECK(r(0, 1) == 4.0);
    CHECK(r(2, 0) == 3.0);
}

TEST_CASE("load_matrix reports the position of a bad cell") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    write_text(path, "1,2\n3,4\n5,oops\n");
    try {
        load_matrix(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 2);
    }
}

TEST_CASE("load_matrix rejects ragged rows") {
    TempDir dir;
    write_text(dir.file("ragged.csv"), "1,2\n3,4,5\n");
    CHECK_THROWS_AS(load_matrix(dir.file("ragged.csv")), ParseError);
}

TEST_CASE("load_matrix honors the header flag") {
    TempDir dir;
    write_text(dir.file("hdr.csv"), "x,y\n1.5,2.5\n");
    const Matrix m = load_matrix(dir.file("hdr.csv"), /*has_header=*/true);
    CHECK(m.cols() == 1);
    CHECK(m(1, 0) == 2.5);
    CHECK_THROWS_AS(load_matrix(dir.file("hdr.csv"), false), ParseError);
}

TEST_CASE("save/load round trip is bit exact") {
    TempDir dir;
    SplitMix64 rng(1);
    Matrix m = oracle::random_matrix(3, 20, rng);
    m(0, 0) = 0.1;
    m(1, 0) = -1e-300;
    m(2, 0) = 12345678.9012345678;
    m(0, 1) = 1e300;
    m(1, 1) = 1.0;
    const std::string path = dir.file("roundtrip.csv");
    save_matrix(path, m);
    const Matrix back = load_matrix(path);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    CHECK(back == m);  // exact, shortest round-trip formatting
}

TEST_CASE("labels round trip and reject non-integers") {
    TempDir dir;
    const std::vector<int> labels{3, -1, 0, 7, 7};
    save_labels(dir.file("labels.csv"), labels);
    CHECK(load_labels(dir.file("labels.csv")) == labels);

    write_text(dir.file("fractional.csv"), "1\n2.5\n");
    CHECK_THROWS_AS(load_labels(dir.file("fractional.csv")), ParseError);
}

TEST_CASE("save_curve emits two-column x,y rows") {
    TempDir dir;
    save_curve(dir.file("curve.csv"), {0.0, 1.0, 2.0}, {5.0, 4.5, 4.0});
    std::ifstream in(dir.file("curve.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "0,5");
    std::getline(in, line);
    CHECK(line == "1,4.5");
}

TEST_CASE("ExperimentConfig JSON round trip") {
    ExperimentConfig cfg;
    cfg.task = "select-eps";
    cfg.epsilon = 0.25;
    cfg.input = "data.csv";
    cfg.eps_grid = {0.1, 0.2};
    cfg.seed = 42;
    cfg.steps = 77;
    const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.task == cfg.task);
    CHECK(back.epsilon == cfg.epsilon);
    CHECK(back.eps_grid == cfg.eps_grid);
    CHECK(back.seed == cfg.seed);
    CHECK(back.steps == cfg.steps);
}

TEST_CASE("run(segment) reproduces the library result and echoes its config") {
    TempDir dir;
    MixtureSpec spec;
    spec.seed = 8;
    MixtureComponent a;
    a.weight = 0.5;
    a.mean = Vector::Zero(2);
    a.covariance = 0.02 * Matrix::Identity(2, 2);
    MixtureComponent b = a;
    b.mean = Vector::Constant(2, 7.0);
    spec.components = {a, b};
    const auto [data, labels] = sample_mixture(spec, 40);
    save_matrix(dir.file("data.csv"), data);

    ExperimentConfig cfg;
    cfg.task = "segment";
    cfg.input = dir.file("data.csv");
    cfg.epsilon = 0.1;
    const nlohmann::json report = run(cfg);

    CHECK(report["schema_version"] == 1);
    CHECK(report["task"] == "segment");
    CHECK(report["config"]["epsilon"] == 0.1);
    CHECK(report.contains("timings_ms"));

    const auto direct = segment_greedy(load_matrix(dir.file("data.csv")), Distortion(0.1));
    CHECK(report["results"]["num_groups"] == direct.partition.groups.size());
    CHECK(std::abs(report["results"]["total_length_bits"].get<double>() -
                   direct.total_length) <= 1e-6);

    // Reports are self-describing: a re-parse recovers every numeric field.
    const nlohmann::json reparsed = nlohmann::json::parse(report.dump());
    CHECK(reparsed == report);
}

TEST_CASE("run(gen) writes data and labels files deterministically") {
    TempDir dir;
    ExperimentConfig cfg;
    cfg.task = "gen";
    cfg.seed = 99;
    cfg.m = 30;
    cfg.data_out = dir.file("gen.csv");
    cfg.labels_out = dir.file("gen_labels.csv");
    cfg.mixture = nlohmann::json::parse(R"({
      "components": [
        {"weight": 0.5, "mean": [0, 0], "covariance": [[0.1, 0], [0, 0.1]]},
        {"weight": 0.5, "mean": [5, 5], "covariance": [[0.1, 0], [0, 0.1]]}
      ]
    })");
    const nlohmann::json first = run(cfg);
    const Matrix data1 = load_matrix(cfg.data_out);
    const auto labels1 = load_labels(cfg.labels_out);
    const nlohmann::json second = run(cfg);
    const Matrix data2 = load_matrix(cfg.data_out);
    CHECK(data1 == data2);
    CHECK(labels1 == load_labels(cfg.labels_out));
    CHECK(first["results"] == second["results"]);
    CHECK(data1.cols() == 30);
}

TEST_CASE("run(mcr2-train) reports a non-decreasing trajectory and orthogonal classes") {
    TempDir dir;
    // Two 3-dimensional subspace classes in R^8, unit-norm columns.
    SplitMix64 rng(3);
    const Matrix q = oracle::random_orthogonal(8, rng);
    Matrix mix = q.middleCols(3, 3) + 0.7 * q.leftCols(3);
    Eigen::HouseholderQR<Matrix> qr(mix);
    MixtureSpec spec;
    spec.seed = 51;
    MixtureComponent ca, cb;
    ca.weight = 0.5;
    ca.mean = Vector::Zero(8);
    ca.basis = q.leftCols(3);
    cb.weight = 0.5;
    cb.mean = Vector::Zero(8);
    cb.basis = Matrix(qr.householderQ()).leftCols(3);
    spec.components = {ca, cb};
    const auto [z0, labels] = sample_mixture(spec, 200);
    save_matrix(dir.file("features.csv"), z0);  // normalized inside the task
    save_labels(dir.file("labels.csv"), labels);

    ExperimentConfig cfg;
    cfg.task = "mcr2-train";
    cfg.input = dir.file("features.csv");
    cfg.labels = dir.file("labels.csv");
    cfg.epsilon = 0.5;
    cfg.steps = 1000;
    cfg.step_size = 1.0;
    cfg.curve_out = dir.file("trajectory.csv");
    const nlohmann::json report = run(cfg);

    const auto trajectory =
        report["results"]["trajectory_bits"].get<std::vector<double>>();
    for (std::size_t t = 1; t < trajectory.size(); ++t)
        CHECK(trajectory[t] >= trajectory[t - 1]);
    CHECK(report["results"]["between_class_coherence"].get<double>() <= 1e-2);
    CHECK(std::filesystem::exists(cfg.curve_out));
}

TEST_CASE("run rejects unknown tasks and missing inputs") {
    ExperimentConfig cfg;
    cfg.task = "dance";
    CHECK_THROWS_AS(run(cfg), InvalidInput);
    cfg.task = "segment";
    cfg.epsilon = 0.1;
    CHECK_THROWS_AS(run(cfg), InvalidInput);  // no --input
}

TEST_CASE("format_double survives round trips on awkward values") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e308, 4.9e-324, 0.0}) {
        const std::string text = format_double(v);
        double back = 0.0;
        const auto [ptr, ec] =
            std::from_chars(text.data(), text.data() + text.size(), back);
        REQUIRE(ec == std::errc());
        CHECK(back == v);
    }
}
