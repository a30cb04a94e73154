#pragma once

// Experiment runner behind the `enn` command-line tool. Every command writes
// only below its output directory and is a pure function of its config and
// seeds, so repeated runs produce byte-identical files.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enn/analysis.hpp"
#include "enn/gradcheck.hpp"
#include "enn/network.hpp"
#include "enn/tasks.hpp"
#include "enn/training.hpp"

namespace enn {

inline constexpr int kMetricsSchema = 1;

enum class Scale { desk, full };

inline Scale scale_from_string(std::string_view s) {
    if (s == "desk") return Scale::desk;
    if (s == "full") return Scale::full;
    throw std::invalid_argument("unknown scale `" + std::string(s) + "` (expected desk|full)");
}

/// Seeds derived from one base seed so a run is reproducible from a single number.
struct RunSeeds {
    std::uint64_t train_data = 0;
    std::uint64_t test_data = 0;
    std::uint64_t init = 0;
    std::uint64_t shuffle = 0;

    static RunSeeds from(std::uint64_t base) { return {base, base + 1, base + 2, base + 3}; }
};

struct ExperimentConfig {
    std::string problem = "P1";
    ModelKind model = ModelKind::enn;
    std::size_t m1 = 6;
    BasisConfig basis{};
    std::size_t train_size = 100000;
    std::size_t test_size = 20000;
    std::uint64_t seed = 1;
    LmsConfig lms{};
    bool record_wall_time = false;

    /// Sweep cells for `table`.
    std::vector<std::string> sweep_problems;
    std::vector<ModelKind> sweep_models;

    void apply_scale(Scale scale) {
        if (scale == Scale::full) {
            train_size = 800000;
            test_size = 50000;
        } else {
            train_size = 100000;
            test_size = 20000;
        }
    }

    void validate() const {
        basis.validate();
        lms.validate();
        if (m1 < 1) throw std::invalid_argument("config: m1 must be >= 1");
        if (train_size == 0 || test_size == 0) throw std::invalid_argument("config: dataset sizes must be > 0");
        (void)find_problem(problem);
        for (const auto& p : sweep_problems) (void)find_problem(p);
    }
};

/// Reads the nested JSON config. Unknown keys are rejected so typos fail loudly.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
    static const std::vector<std::string> known{"problem", "model", "m1", "q", "n", "train_size", "test_size",
                                                "epochs", "seed", "lms", "sweep", "record_wall_time"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("config: unknown key `" + key + "`");

    ExperimentConfig c;
    c.problem = j.value("problem", c.problem);
    if (j.contains("model")) c.model = model_kind_from_string(j.at("model").get<std::string>());
    c.m1 = j.value("m1", c.m1);
    c.basis.q = j.value("q", c.basis.q);
    c.basis.n = j.value("n", c.basis.n);
    c.train_size = j.value("train_size", c.train_size);
    c.test_size = j.value("test_size", c.test_size);
    c.lms.epochs = j.value("epochs", c.lms.epochs);
    c.seed = j.value("seed", c.seed);
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);

    if (j.contains("lms")) {
        const auto& l = j.at("lms");
        static const std::vector<std::string> lms_keys{"alpha_hidden_dct", "alpha_output_dct", "alpha_hidden_linear",
                                                       "alpha_output_linear", "beta"};
        for (const auto& [key, _] : l.items())
            if (std::find(lms_keys.begin(), lms_keys.end(), key) == lms_keys.end())
                throw std::invalid_argument("config: unknown lms key `" + key + "`");
        c.lms.alpha_hidden_dct = l.value("alpha_hidden_dct", c.lms.alpha_hidden_dct);
        c.lms.alpha_output_dct = l.value("alpha_output_dct", c.lms.alpha_output_dct);
        c.lms.alpha_hidden_linear = l.value("alpha_hidden_linear", c.lms.alpha_hidden_linear);
        c.lms.alpha_output_linear = l.value("alpha_output_linear", c.lms.alpha_output_linear);
        c.lms.beta = l.value("beta", c.lms.beta);
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (s.is_string()) {
            const std::string kind = s.get<std::string>();
            if (kind == "classification")
                c.sweep_problems = classification_problems();
            else if (kind == "regression")
                c.sweep_problems = regression_problems();
            else
                throw std::invalid_argument("config: sweep must be classification|regression or an object");
        } else {
            c.sweep_problems = s.value("problems", std::vector<std::string>{});
            for (const auto& m : s.value("models", std::vector<std::string>{}))
                c.sweep_models.push_back(model_kind_from_string(m));
        }
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    return path.empty() ? ExperimentConfig{} : parse_config(read_json_file(path));
}

struct RunResult {
    TaskKind task = TaskKind::classification;
    double metric = 0.0; ///< accuracy or mse
    TrainReport report;
    nlohmann::json model;
};

/// Generates data, trains the requested network and evaluates it on the test set.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemSpec problem = find_problem(cfg.problem);
    const RunSeeds seeds = RunSeeds::from(cfg.seed);
    const auto train_set = generate_dataset(problem, cfg.train_size, seeds.train_data);
    const auto test_set = generate_dataset(problem, cfg.test_size, seeds.test_data);
    LmsConfig lms = cfg.lms;
    lms.shuffle_seed = seeds.shuffle;

    RunResult r;
    r.task = problem.kind;
    auto finish = [&](const auto& model) {
        r.metric = problem.kind == TaskKind::classification ? accuracy(model, test_set) : mse(model, test_set);
        r.model = to_json(model, to_string(cfg.model));
    };
    if (cfg.model == ModelKind::enn) {
        EnnModel model = init_model(2, cfg.m1, cfg.basis, seeds.init);
        r.report = train(model, train_set, lms);
        finish(model);
    } else {
        BenchmarkModel model = make_benchmark(cfg.model, problem.kind, 2, cfg.m1, cfg.basis, seeds.init);
        r.report = train_benchmark(model, train_set, lms);
        finish(model);
    }
    return r;
}

namespace detail {
inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

template <class F>
void write_with(const std::filesystem::path& path, F&& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    f(out);
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}
} // namespace detail

/// model.json, train_report.csv and metrics.json under `out`. Returns the exit status.
inline int cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        log << "invalid config: " << e.what() << '\n';
        return 2;
    }
    std::filesystem::create_directories(out);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_json_file((out / "model.json").string(), r.model);
    detail::write_with(out / "train_report.csv", [&](std::ostream& os) { write_report_csv(os, r.report); });

    nlohmann::json metrics;
    metrics["schema"] = kMetricsSchema;
    metrics["problem"] = find_problem(cfg.problem).name;
    metrics["model"] = to_string(cfg.model);
    metrics[r.task == TaskKind::classification ? "accuracy" : "mse"] = r.metric;
    metrics["train_size"] = cfg.train_size;
    metrics["test_size"] = cfg.test_size;
    metrics["epochs"] = cfg.lms.epochs;
    metrics["iterations"] = r.report.iterations;
    metrics["seed"] = cfg.seed;
    metrics["diverged"] = r.report.diverged;
    metrics["wall_time"] = cfg.record_wall_time ? nlohmann::json(wall) : nlohmann::json(nullptr);
    write_json_file((out / "metrics.json").string(), metrics);

    if (r.report.diverged) {
        log << "training diverged: " << r.report.diagnostic << '\n';
        return 3;
    }
    log << metrics.dump() << '\n';
    return 0;
}

/// Runs every (problem, model) cell and writes table.csv `problem,model,metric`.
/// Defaults: all classification problems x all four models. `run` executes one
/// cell and is replaceable for testing.
template <class Run = RunResult (*)(const ExperimentConfig&)>
int cmd_table(const ExperimentConfig& base, const std::filesystem::path& out, std::ostream& log,
              Run run = &run_experiment) {
    std::vector<std::string> problems = base.sweep_problems.empty() ? classification_problems() : base.sweep_problems;
    std::vector<ModelKind> models = base.sweep_models;
    if (models.empty()) models = {ModelKind::relu, ModelKind::sigm, ModelKind::fdct, ModelKind::enn};
    try {
        base.validate();
        for (const auto& p : problems) (void)find_problem(p);
    } catch (const std::exception& e) {
        log << "invalid config: " << e.what() << '\n';
        return 2;
    }
    std::filesystem::create_directories(out);

    std::ostringstream table;
    table << "problem,model,metric\n";
    bool failed = false;
    for (const auto& p : problems) {
        for (const ModelKind m : models) {
            ExperimentConfig cell = base;
            cell.problem = p;
            cell.model = m;
            std::string value;
            try {
                const RunResult r = run(cell);
                if (r.report.diverged) {
                    value = "error";
                    failed = true;
                } else {
                    value = detail::format_double(r.metric);
                }
            } catch (const std::exception& e) {
                log << p << '/' << to_string(m) << ": " << e.what() << '\n';
                value = "error";
                failed = true;
            }
            table << find_problem(p).name << ',' << to_string(m) << ',' << value << '\n';
            log << find_problem(p).name << ',' << to_string(m) << ',' << value << '\n';
        }
    }
    detail::write_text(out / "table.csv", table.str());
    return failed ? 3 : 0;
}

struct ExportOptions {
    std::string model_path;
    std::string what;
    std::size_t resolution = kDefaultResolution;
    CurveRange range{};
    double tol = 0.01;
    std::string dataset_path; ///< optional, for activation operating ranges
};

/// bumps | map | response | activations | redundancy.
inline int cmd_export(const ExportOptions& opt, const std::filesystem::path& out, std::ostream& log) {
    static const std::vector<std::string> kinds{"bumps", "map", "response", "activations", "redundancy"};
    if (std::find(kinds.begin(), kinds.end(), opt.what) == kinds.end()) {
        log << "unknown export kind `" << opt.what << "` (expected bumps|map|response|activations|redundancy)\n";
        return 2;
    }
    BenchmarkModel model;
    try {
        model = network_from_json(read_json_file(opt.model_path));
    } catch (const std::exception& e) {
        log << "cannot load model: " << e.what() << '\n';
        return 2;
    }
    std::filesystem::create_directories(out);
    auto grid_files = [&](const std::string& stem, const GridMap& map) {
        detail::write_with(out / (stem + ".csv"), [&](std::ostream& os) { write_grid_csv(os, map); });
        detail::write_with(out / (stem + ".pgm"), [&](std::ostream& os) { write_grid_pgm(os, map); });
    };

    if (opt.what == "bumps") {
        for (std::size_t k = 0; k < model.m1; ++k) grid_files("bump_" + std::to_string(k + 1), bump(model, k, opt.resolution));
    } else if (opt.what == "map") {
        grid_files("decision_map", decision_map(model, opt.resolution));
    } else if (opt.what == "response") {
        grid_files("response", response_surface(model, opt.resolution));
    } else if (opt.what == "activations") {
        std::vector<Sample> data;
        if (!opt.dataset_path.empty()) {
            std::ifstream in(opt.dataset_path);
            if (!in) {
                log << "cannot open dataset " << opt.dataset_path << '\n';
                return 2;
            }
            data = read_dataset_csv(in);
        }
        nlohmann::json ranges = nlohmann::json::object();
        for (const auto& c : activation_report(model, data, opt.range)) {
            detail::write_with(out / ("activation_" + c.name + ".csv"), [&](std::ostream& os) { write_curve_csv(os, c); });
            ranges[c.name] = data.empty() ? nlohmann::json(nullptr)
                                          : nlohmann::json{{"min", c.observed_min}, {"max", c.observed_max}};
        }
        write_json_file((out / "operating_ranges.json").string(), ranges);
    } else {
        const auto pairs = redundancy_report(model, opt.resolution, opt.tol);
        detail::write_with(out / "redundancy.csv", [&](std::ostream& os) { write_redundancy_csv(os, pairs); });
        for (const auto& p : pairs)
            log << "neurons " << p.first + 1 << " and " << p.second + 1 << ": r=" << p.correlation
                << (p.cancelling ? " (cancelling)" : "") << '\n';
    }
    return 0;
}

/// Runs the finite-difference audit; exit 0 iff the max deviation is below 1e-5.
template <class Step = LmsStep>
int cmd_gradcheck(std::uint64_t seed, std::size_t trials, std::ostream& log, Step step = {}) {
    if (trials < 1) {
        log << "trials must be >= 1\n";
        return 2;
    }
    const GradientCheckResult r = gradient_check(seed, trials, {}, step);
    log << "trials " << r.trials << ", comparisons " << r.comparisons << ", max relative deviation "
        << std::setprecision(6) << r.max_deviation << '\n';
    if (!r.passed) {
        log << "FAILED at trial " << r.worst_trial << ", " << describe(r.worst) << ": analytic " << r.worst_analytic
            << " vs finite difference " << r.worst_numeric << '\n';
        return 1;
    }
    return 0;
}

/// dataset.csv (`x1,x2,y`) plus manifest.json.
inline int cmd_dataset(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    ProblemSpec problem;
    try {
        problem = find_problem(cfg.problem);
        if (cfg.train_size == 0) throw std::invalid_argument("train_size must be > 0");
    } catch (const std::exception& e) {
        log << "invalid config: " << e.what() << '\n';
        return 2;
    }
    std::filesystem::create_directories(out);
    const auto data = generate_dataset(problem, cfg.train_size, cfg.seed);
    detail::write_with(out / "dataset.csv", [&](std::ostream& os) { write_dataset_csv(os, data); });
    write_json_file((out / "manifest.json").string(), dataset_manifest(problem, cfg.train_size, cfg.seed));
    return 0;
}

} // namespace enn
