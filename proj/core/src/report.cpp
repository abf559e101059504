#include "ratecode/report.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <tuple>

#include "ratecode/coding.hpp"
#include "ratecode/datagen.hpp"
#include "ratecode/matrix_io.hpp"
#include "ratecode/mcr2.hpp"
#include "ratecode/micl.hpp"
#include "ratecode/segmentation.hpp"
#include "ratecode/version.hpp"

namespace ratecode {

namespace {

using nlohmann::json;

KernelSpec parse_kernel(const std::string& text) {
    if (text.empty() || text == "linear") return KernelSpec::linear();
    if (text.rfind("poly:", 0) == 0) {
        try {
            return KernelSpec::polynomial(std::stoi(text.substr(5)));
        } catch (const std::exception&) {
            throw InvalidInput("cannot parse polynomial degree in kernel '" + text + "'");
        }
    }
    if (text.rfind("rbf:", 0) == 0) {
        try {
            return KernelSpec::rbf(std::stod(text.substr(4)));
        } catch (const std::exception&) {
            throw InvalidInput("cannot parse rbf gamma in kernel '" + text + "'");
        }
    }
    throw InvalidInput("unknown kernel '" + text + "'; use linear, poly:<d> or rbf:<gamma>");
}

NormalizationMode parse_norm(const std::string& text) {
    if (text == "sphere" || text.empty()) return NormalizationMode::Sphere;
    if (text == "frobenius") return NormalizationMode::Frobenius;
    throw InvalidInput("unknown normalization '" + text + "'; use sphere or frobenius");
}

Vector to_vector(const json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
    return v;
}

Matrix to_matrix(const json& j) {
    if (j.empty()) return {};
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (static_cast<Index>(row.size()) != cols)
            throw InvalidSpec("matrix rows in config differ in length");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

MixtureSpec parse_mixture(const json& j, std::uint64_t seed) {
    MixtureSpec spec;
    spec.seed = seed;
    if (!j.contains("components") || !j["components"].is_array())
        throw InvalidSpec("mixture config needs a 'components' array");
    for (const auto& cj : j["components"]) {
        MixtureComponent c;
        c.weight = cj.at("weight").get<double>();
        c.mean = to_vector(cj.at("mean"));
        if (cj.contains("covariance")) c.covariance = to_matrix(cj["covariance"]);
        if (cj.contains("basis")) c.basis = to_matrix(cj["basis"]);
        c.scale = cj.value("scale", 1.0);
        c.sigma = cj.value("sigma", 0.0);
        spec.components.push_back(std::move(c));
    }
    return spec;
}

json partition_to_json(const Partition& p) {
    json groups = json::array();
    for (const auto& g : p.groups) groups.push_back(g);
    return groups;
}

json rate_report_to_json(const RateReport& r) {
    return json{
        {"rate_whole_bits", r.rate_whole},
        {"rate_partition_bits", r.rate_partition},
        {"delta_rate_bits", r.delta_rate},
        {"per_class_rates_bits", r.per_class_rates},
        {"skipped_classes", r.skipped_classes},
        {"epsilon", r.epsilon},
        {"normalization",
         r.normalization == NormalizationMode::Sphere ? "sphere" : "frobenius"},
        {"precision_condition", r.precision_condition},
        {"class_ranks", r.class_ranks},
    };
}

Distortion required_epsilon(const ExperimentConfig& config) {
    if (!(config.epsilon > 0.0))
        throw InvalidInput("task '" + config.task + "' requires --epsilon > 0");
    return Distortion(config.epsilon);
}

std::string required(const std::string& value, const char* flag, const std::string& task) {
    if (value.empty())
        throw InvalidInput("task '" + task + "' requires " + std::string(flag));
    return value;
}

json run_gen(const ExperimentConfig& config) {
    if (config.mixture.is_null()) throw InvalidSpec("task 'gen' needs a mixture config");
    Matrix data;
    std::vector<int> labels;
    if (config.mixture.contains("two_rings")) {
        const auto& rj = config.mixture["two_rings"];
        TwoRingsSpec spec;
        spec.m = config.m > 0 ? config.m : rj.value("m", 200);
        spec.radius_inner = rj.value("radius_inner", 1.0);
        spec.radius_outer = rj.value("radius_outer", 2.0);
        spec.sigma = rj.value("sigma", 0.05);
        spec.seed = config.seed;
        std::tie(data, labels) = sample_two_rings(spec);
    } else {
        if (config.m < 1) throw InvalidSpec("task 'gen' needs a positive sample count m");
        std::tie(data, labels) = sample_mixture(parse_mixture(config.mixture, config.seed),
                                                config.m);
    }
    if (!config.data_out.empty()) save_matrix(config.data_out, data);
    if (!config.labels_out.empty()) save_labels(config.labels_out, labels);

    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    json counts_json = json::object();
    for (const auto& [label, count] : counts) counts_json[std::to_string(label)] = count;
    return json{{"n", data.rows()},
                {"m", data.cols()},
                {"component_counts", counts_json},
                {"data_path", config.data_out},
                {"labels_path", config.labels_out}};
}

json run_segment(const ExperimentConfig& config) {
    const Matrix data = load_matrix(required(config.input, "--input", config.task),
                                    config.has_header);
    const SegmentationResult result = segment_greedy(data, required_epsilon(config));
    json trace = json::array();
    for (const auto& rec : result.merge_trace)
        trace.push_back(json{{"group_a", rec.group_a},
                             {"group_b", rec.group_b},
                             {"length_delta_bits", rec.length_delta}});
    json group_sizes = json::array();
    for (const auto& g : result.partition.groups) group_sizes.push_back(g.size());
    return json{{"num_groups", result.partition.groups.size()},
                {"groups", partition_to_json(result.partition)},
                {"group_sizes", group_sizes},
                {"per_group_length_bits", result.partition.per_group_length},
                {"total_length_bits", result.total_length},
                {"epsilon", result.epsilon},
                {"merge_trace", trace}};
}

json run_select_eps(const ExperimentConfig& config) {
    const Matrix data = load_matrix(required(config.input, "--input", config.task),
                                    config.has_header);
    if (config.eps_grid.empty())
        throw InvalidInput("task 'select-eps' requires --eps-grid");
    std::vector<Distortion> grid;
    grid.reserve(config.eps_grid.size());
    for (double e : config.eps_grid) grid.emplace_back(e);
    const DistortionSelection sel = select_distortion(data, grid);

    json curve = json::array();
    std::vector<double> xs, ys;
    for (const auto& point : sel.curve) {
        curve.push_back(json{{"epsilon", point.epsilon},
                             {"objective_bits", point.objective},
                             {"total_length_bits", point.total_length},
                             {"num_groups", point.num_groups}});
        xs.push_back(point.epsilon);
        ys.push_back(point.objective);
    }
    if (!config.curve_out.empty()) save_curve(config.curve_out, xs, ys);
    return json{{"epsilon_star", sel.epsilon_star},
                {"best_index", sel.best_index},
                {"curve", curve},
                {"curve_path", config.curve_out}};
}

json classification_results(const std::vector<Classification>& results,
                            const ClassifierState& state,
                            const std::vector<int>* truth) {
    json labels = json::array();
    json scores = json::array();
    for (const auto& r : results) {
        labels.push_back(r.label);
        scores.push_back(r.scores);
    }
    json class_labels = json::array();
    json class_stats = json::array();
    for (const auto& c : state.classes) {
        class_labels.push_back(c.label);
        const GaussianMoments mom = moments_of(c.samples);
        json mean = json::array();
        for (Index i = 0; i < mom.mean.size(); ++i) mean.push_back(mom.mean(i));
        json covariance = json::array();
        for (Index r = 0; r < mom.covariance.rows(); ++r) {
            json row = json::array();
            for (Index cc = 0; cc < mom.covariance.cols(); ++cc)
                row.push_back(mom.covariance(r, cc));
            covariance.push_back(row);
        }
        class_stats.push_back(json{{"label", c.label},
                                   {"prior", c.prior},
                                   {"count", mom.count},
                                   {"mean", mean},
                                   {"covariance", covariance}});
    }
    json out{{"labels", labels},
             {"delta_bits", scores},
             {"class_labels", class_labels},
             {"class_stats", class_stats}};
    if (truth != nullptr) {
        if (truth->size() != results.size())
            throw DimensionMismatch("test label count does not match test samples");
        std::size_t hits = 0;
        for (std::size_t i = 0; i < results.size(); ++i)
            if (results[i].label == (*truth)[i]) ++hits;
        out["accuracy"] = static_cast<double>(hits) / static_cast<double>(results.size());
    }
    return out;
}

json run_classify(const ExperimentConfig& config, bool kernelized) {
    const Matrix train = load_matrix(required(config.input, "--input", config.task),
                                     config.has_header);
    const auto labels = load_labels(required(config.labels, "--labels", config.task),
                                    config.has_header);
    if (static_cast<Index>(labels.size()) != train.cols())
        throw DimensionMismatch("training labels do not match training samples");
    const Matrix test = load_matrix(required(config.test, "--test", config.task),
                                    config.has_header);
    const PriorMode mode = config.prior == "uniform" ? PriorMode::Uniform
                                                     : PriorMode::Empirical;
    const ClassifierState state =
        ClassifierState::fit(train, labels, required_epsilon(config), mode);

    std::vector<Classification> results;
    if (kernelized) {
        const KernelSpec kernel = parse_kernel(config.kernel);
        results = classify_micl_kernel_batch(test, state, kernel);
    } else {
        results = classify_micl_batch(test, state);
    }

    std::vector<int> truth;
    const bool have_truth = !config.test_labels.empty();
    if (have_truth) truth = load_labels(config.test_labels, config.has_header);
    return classification_results(results, state, have_truth ? &truth : nullptr);
}

Membership membership_from_config(const ExperimentConfig& config, Index m) {
    const auto labels = load_labels(required(config.labels, "--labels", config.task),
                                    config.has_header);
    if (static_cast<Index>(labels.size()) != m)
        throw DimensionMismatch("label count does not match feature count");
    return Membership::hard(labels);
}

json run_mcr2_eval(const ExperimentConfig& config) {
    Matrix features = load_matrix(required(config.input, "--input", config.task),
                                  config.has_header);
    const Membership membership = membership_from_config(config, features.cols());
    const NormalizationMode mode = parse_norm(config.norm);
    features = normalize_features(features, mode, membership);
    const RateReport report = delta_rate(features, membership, required_epsilon(config), mode);
    return rate_report_to_json(report);
}

json run_mcr2_train(const ExperimentConfig& config) {
    Matrix features = load_matrix(required(config.input, "--input", config.task),
                                  config.has_header);
    const Membership membership = membership_from_config(config, features.cols());
    const Distortion eps = required_epsilon(config);
    features = normalize_features(features, NormalizationMode::Sphere, membership);

    OptimizeOptions options;
    options.max_steps = config.steps;
    options.step_size = config.step_size;
    const OptimizeResult result = optimize_features(features, membership, eps, options);

    const RateReport initial = delta_rate(features, membership, eps);
    const RateReport final_report = delta_rate(result.features, membership, eps);
    if (!config.features_out.empty()) save_matrix(config.features_out, result.features);
    if (!config.curve_out.empty()) {
        std::vector<double> xs(result.trajectory.size()), ys = result.trajectory;
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
        save_curve(config.curve_out, xs, ys);
    }
    return json{{"initial", rate_report_to_json(initial)},
                {"final", rate_report_to_json(final_report)},
                {"trajectory_bits", result.trajectory},
                {"steps_taken", result.steps_taken},
                {"between_class_coherence",
                 between_class_coherence(result.features, membership)},
                {"features_path", config.features_out},
                {"curve_path", config.curve_out}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.task = j.value("task", "");
    c.epsilon = j.value("epsilon", 0.0);
    c.kernel = j.value("kernel", "");
    c.input = j.value("input", "");
    c.labels = j.value("labels", "");
    c.test = j.value("test", "");
    c.test_labels = j.value("test_labels", "");
    c.output = j.value("output", "");
    c.data_out = j.value("data_out", "");
    c.labels_out = j.value("labels_out", "");
    c.curve_out = j.value("curve_out", "");
    c.features_out = j.value("features_out", "");
    c.seed = j.value("seed", static_cast<std::uint64_t>(0));
    c.norm = j.value("norm", "sphere");
    if (j.contains("eps_grid")) c.eps_grid = j["eps_grid"].get<std::vector<double>>();
    c.prior = j.value("prior", "empirical");
    c.steps = j.value("steps", 500);
    c.step_size = j.value("step_size", 1.0);
    c.m = j.value("m", static_cast<Index>(0));
    c.has_header = j.value("has_header", false);
    if (j.contains("mixture")) c.mixture = j["mixture"];
    return c;
}

json ExperimentConfig::to_json() const {
    json j{{"task", task},
           {"epsilon", epsilon},
           {"kernel", kernel},
           {"input", input},
           {"labels", labels},
           {"test", test},
           {"test_labels", test_labels},
           {"output", output},
           {"data_out", data_out},
           {"labels_out", labels_out},
           {"curve_out", curve_out},
           {"features_out", features_out},
           {"seed", seed},
           {"norm", norm},
           {"eps_grid", eps_grid},
           {"prior", prior},
           {"steps", steps},
           {"step_size", step_size},
           {"m", m},
           {"has_header", has_header}};
    if (!mixture.is_null()) j["mixture"] = mixture;
    return j;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

json run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    json results;
    if (config.task == "gen") {
        results = run_gen(config);
    } else if (config.task == "segment") {
        results = run_segment(config);
    } else if (config.task == "select-eps") {
        results = run_select_eps(config);
    } else if (config.task == "classify") {
        results = run_classify(config, /*kernelized=*/false);
    } else if (config.task == "classify-kernel") {
        results = run_classify(config, /*kernelized=*/true);
    } else if (config.task == "mcr2-eval") {
        results = run_mcr2_eval(config);
    } else if (config.task == "mcr2-train") {
        results = run_mcr2_train(config);
    } else {
        throw InvalidInput("unknown task '" + config.task + "'");
    }
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();

    json checks = json::object();
    if (results.contains("precision_condition"))
        checks["precision_condition"] = results["precision_condition"];
    if (results.contains("final") && results["final"].contains("precision_condition"))
        checks["precision_condition"] = results["final"]["precision_condition"];

    return json{{"schema_version", kReportSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"task", config.task},
                {"config", config.to_json()},
                {"results", results},
                {"checks", checks},
                {"timings_ms", json{{"total", elapsed_ms}}}};
}

void write_report(const std::string& path, const json& report) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << report.dump(2) << '\n';
    if (!out) throw InvalidInput("failed while writing '" + path + "'");
}

}  // namespace ratecode
