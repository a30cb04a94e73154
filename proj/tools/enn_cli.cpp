// enn: train, sweep, export and audit two-layer networks with adaptive
// DCT activations.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "enn/experiment.hpp"

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::string scale = "desk";
    bool wall_time = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON config file");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--seed", c.seed, "base seed (overrides config)");
    cmd->add_option("--scale", c.scale, "desk (100k/20k) or full (800k/50k)")->check(CLI::IsMember({"desk", "full"}));
}

enn::ExperimentConfig resolve(const Common& c, bool scale_given) {
    enn::ExperimentConfig cfg = enn::load_config(c.config);
    // an explicit --scale wins over sizes in the config file
    if (scale_given || c.config.empty()) cfg.apply_scale(enn::scale_from_string(c.scale));
    if (c.seed) cfg.seed = *c.seed;
    if (c.wall_time) cfg.record_wall_time = true;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer networks with trainable DCT activations"};
    app.require_subcommand(1);

    Common train_opts, table_opts, dataset_opts;
    auto* train = app.add_subcommand("train", "train one model; writes model.json, train_report.csv, metrics.json");
    add_common(train, train_opts);
    train->add_flag("--wall-time", train_opts.wall_time, "record wall time in metrics.json (breaks byte-identity)");

    auto* table = app.add_subcommand("table", "run a problem x model sweep; writes table.csv");
    add_common(table, table_opts);
    std::string sweep;
    table->add_option("--sweep", sweep, "classification or regression (overrides config)")
        ->check(CLI::IsMember({"classification", "regression"}));

    auto* dataset = app.add_subcommand("dataset", "write a labelled dataset; writes dataset.csv, manifest.json");
    add_common(dataset, dataset_opts);

    enn::ExportOptions export_opts;
    std::string export_out = "out";
    auto* exp = app.add_subcommand("export", "analysis artifacts from a trained model.json");
    exp->add_option("what", export_opts.what, "bumps|map|response|activations|redundancy")->required();
    exp->add_option("--model", export_opts.model_path, "model.json")->required();
    exp->add_option("--out", export_out, "output directory");
    exp->add_option("--resolution", export_opts.resolution, "grid points per axis");
    exp->add_option("--tol", export_opts.tol, "redundancy correlation tolerance");
    exp->add_option("--dataset", export_opts.dataset_path, "dataset CSV for activation operating ranges");

    std::uint64_t gc_seed = 1;
    std::size_t gc_trials = 200;
    auto* gradcheck = app.add_subcommand("gradcheck", "audit the LMS rules against finite differences");
    gradcheck->add_option("--seed", gc_seed, "seed");
    gradcheck->add_option("--trials", gc_trials, "random (model, sample) draws");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed())
            return enn::cmd_train(resolve(train_opts, train->count("--scale") > 0), train_opts.out, std::cout);
        if (table->parsed()) {
            auto cfg = resolve(table_opts, table->count("--scale") > 0);
            if (!sweep.empty())
                cfg.sweep_problems = sweep == "regression" ? enn::regression_problems() : enn::classification_problems();
            return enn::cmd_table(cfg, table_opts.out, std::cout);
        }
        if (dataset->parsed())
            return enn::cmd_dataset(resolve(dataset_opts, dataset->count("--scale") > 0), dataset_opts.out, std::cout);
        if (exp->parsed()) return enn::cmd_export(export_opts, export_out, std::cerr);
        if (gradcheck->parsed()) return enn::cmd_gradcheck(gc_seed, gc_trials, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
