// Command-line driver: one subcommand per experiment plus `compare`.
//
// Option precedence, lowest to highest: per-subcommand defaults, then a
// --config key = value file, then explicit command-line flags. The effective
// configuration is echoed into the run's manifest.json.

#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhrmt/common.hpp"
#include "nhrmt/experiments.hpp"
#include "nhrmt/io.hpp"

namespace {

using nhrmt::experiments::Experiment;

struct CommonOpts {
    std::string config_path;
    std::string cls;
    int dim = 0;
    double width = 0.0;
    std::string replicas;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::string grid;
    std::string out;
    int threads = 0;
    int bins = 0;
    double window_fraction = 0.0;
    std::string kind;

    CLI::Option* o_cls = nullptr;
    CLI::Option* o_dim = nullptr;
    CLI::Option* o_width = nullptr;
    CLI::Option* o_replicas = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_grid = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_threads = nullptr;
    CLI::Option* o_bins = nullptr;
    CLI::Option* o_window = nullptr;
    CLI::Option* o_kind = nullptr;
};

void add_common_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path,
                    "key = value config file applied before other flags");
    o.o_cls = cmd->add_option("--class", o.cls, "symmetry class: A | AIdagger | AIIdagger");
    o.o_dim = cmd->add_option("--dim", o.dim,
                              "dimension parameter N (matrix is N x N; 2N x 2N when self-dual)");
    o.o_width = cmd->add_option("--width", o.width, "ensemble width g");
    o.o_replicas =
        cmd->add_option("--replicas", o.replicas, "comma-separated replica indices, e.g. 1,2");
    o.o_samples = cmd->add_option("--samples", o.samples, "number of matrix realizations");
    o.o_seed = cmd->add_option("--seed", o.seed, "base RNG seed");
    o.o_grid = cmd->add_option("--grid", o.grid, "argument grid min:max:count");
    o.o_out = cmd->add_option("--out", o.out, "output directory");
    o.o_threads = cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    o.o_bins = cmd->add_option("--bins", o.bins, "annular bin count (girko; 0 = default)");
    o.o_window = cmd->add_option("--window-fraction", o.window_fraction,
                                 "pair window radius / spectral radius (r2-bulk)");
    o.o_kind = cmd->add_option("--kind", o.kind, "nlsm-eval integral: one_point | two_point");
}

nhrmt::experiments::ExperimentConfig build_config(
    Experiment e, const CommonOpts& o, const std::map<std::string, std::string>& defaults) {
    std::map<std::string, std::string> kv = defaults;
    kv["experiment"] = nhrmt::experiments::to_string(e);
    if (!o.config_path.empty()) {
        for (const auto& [key, value] : nhrmt::io::read_key_values(o.config_path)) {
            if (key == "experiment" && value != kv["experiment"]) {
                throw nhrmt::ParameterError("config file experiment '" + value +
                                            "' conflicts with subcommand '" + kv["experiment"] +
                                            "'");
            }
            kv[key] = value;
        }
    }
    if (o.o_cls->count()) kv["class"] = o.cls;
    if (o.o_dim->count()) kv["N"] = std::to_string(o.dim);
    if (o.o_width->count()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", o.width);
        kv["g"] = buf;
    }
    if (o.o_replicas->count()) kv["n_list"] = o.replicas;
    if (o.o_samples->count()) kv["n_samples"] = std::to_string(o.samples);
    if (o.o_seed->count()) kv["seed"] = std::to_string(o.seed);
    if (o.o_grid->count()) kv["grid"] = o.grid;
    if (o.o_out->count()) kv["output_dir"] = o.out;
    if (o.o_threads->count()) kv["threads"] = std::to_string(o.threads);
    if (o.o_bins->count()) kv["bins"] = std::to_string(o.bins);
    if (o.o_window->count()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", o.window_fraction);
        kv["window_fraction"] = buf;
    }
    if (o.o_kind->count()) kv["nlsm_kind"] = o.kind;
    return nhrmt::experiments::ExperimentConfig::from_key_values(kv);
}

int run_and_report(Experiment e, const CommonOpts& o,
                   const std::map<std::string, std::string>& defaults) {
    const auto cfg = build_config(e, o, defaults);
    const nhrmt::experiments::RunManifest man = nhrmt::experiments::run_experiment(cfg);
    for (const auto& rec : man.outputs) {
        std::cout << cfg.output_dir << "/" << rec.file << "  rows=" << rec.n_rows
                  << "  sha256=" << rec.sha256 << "\n";
    }
    if (man.dropped_samples > 0) {
        std::cout << "dropped_samples=" << man.dropped_samples << "\n";
    }
    for (const auto& note : man.notes) std::cout << "note: " << note << "\n";
    std::cout << "manifest: " << cfg.output_dir << "/manifest.json  (wall "
              << man.wall_seconds << " s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerics toolkit for Gaussian non-Hermitian random-matrix ensembles"};
    app.require_subcommand(1);

    struct Sub {
        Experiment experiment;
        CLI::App* cmd;
        CommonOpts opts;
        std::map<std::string, std::string> defaults;
    };
    // CLI11 stores references to the CommonOpts members, so each Sub needs a
    // stable address.
    std::vector<std::unique_ptr<Sub>> subs;
    const auto add_sub = [&](Experiment e, const char* name, const char* help,
                             std::map<std::string, std::string> defaults) {
        subs.push_back(std::make_unique<Sub>(
            Sub{e, app.add_subcommand(name, help), CommonOpts{}, std::move(defaults)}));
        add_common_options(subs.back()->cmd, subs.back()->opts);
    };

    add_sub(Experiment::sample, "sample", "dump raw eigenvalues of a few realizations",
            {{"N", "100"}, {"n_samples", "10"}});
    add_sub(Experiment::girko, "girko", "bulk radial density vs the flat circular-law value",
            {{"N", "500"}, {"n_samples", "1000"}});
    add_sub(Experiment::dos_edge, "dos-edge",
            "radial density near the spectral edge vs the closed form",
            {{"N", "500"}, {"n_samples", "2000"}, {"grid", "0:5:20"}});
    add_sub(Experiment::r2_bulk, "r2-bulk",
            "bulk pair correlation vs the large-separation closed form",
            {{"N", "1000"}, {"g", "1"}, {"n_samples", "200"}, {"grid", "0:6.75:27"}});
    add_sub(Experiment::charpoly1, "charpoly1",
            "one-point characteristic-polynomial moment vs replica quadrature",
            {{"N", "10"}, {"n_samples", "100000"}, {"grid", "0:3:20"}, {"n_list", "1"}});
    add_sub(Experiment::charpoly2, "charpoly2",
            "two-point characteristic-polynomial moment vs replica quadrature",
            {{"N", "10"}, {"n_samples", "100000"}, {"grid", "0:3:20"}, {"n_list", "1"}});
    add_sub(Experiment::spacing_surmise, "spacing",
            "two-level spacing distribution vs the class surmise",
            {{"N", "2"}, {"n_samples", "100000"}, {"grid", "0:4:40"}});
    add_sub(Experiment::nlsm_eval, "nlsm-eval",
            "deterministic replica quadrature values on a grid",
            {{"N", "10"}, {"grid", "0:3:20"}, {"n_list", "1"}});

    CLI::App* cmp = app.add_subcommand(
        "compare", "z-score an estimate CSV against a prediction CSV on the same grid");
    std::string cmp_est, cmp_pred;
    double cmp_tol = 5.0;
    cmp->add_option("estimates", cmp_est, "estimate CSV (value + std_error columns)")
        ->required();
    cmp->add_option("predictions", cmp_pred, "prediction CSV (value + valid columns)")
        ->required();
    cmp->add_option("--tol", cmp_tol, "per-row |z| tolerance (default 5)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmp->parsed()) {
            const auto rep = nhrmt::experiments::compare(cmp_est, cmp_pred, cmp_tol);
            std::cout << rep.text << "\n";
            return rep.pass ? 0 : 1;
        }
        for (const auto& s : subs) {
            if (s->cmd->parsed()) return run_and_report(s->experiment, s->opts, s->defaults);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const nhrmt::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const nhrmt::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
