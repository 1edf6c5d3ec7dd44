#include <cstdio>
#include <exception>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "ptgain/experiment.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int run(const std::string& experiment, const Options& opt) {
    ptgain::ExperimentConfig config;
    if (!opt.config_path.empty())
        config = ptgain::load_config(opt.config_path, experiment);
    else
        config.experiment = experiment;
    if (opt.seed_set) config.master_seed = opt.seed;
    config.out_dir = opt.out_dir;
    config.validate();

    const auto tables = ptgain::run_experiment(config);
    ptgain::emit_all(tables, config.out_dir);
    for (const auto& table : tables)
        std::printf("wrote %s/%s.csv (%zu columns, %zu rows)\n", config.out_dir.c_str(),
                    table.name.c_str(), table.columns.size(),
                    table.data.empty() ? 0 : table.data[0].size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ptgain: feedback-engineered gain and PT-symmetric dynamics experiments"};
    app.require_subcommand(1);

    Options opt;
    std::string experiment;
    const std::pair<const char*, const char*> subcommands[] = {
        {"fig2", "trajectory-averaged feedback dynamics vs the unconditional master equation"},
        {"fig3", "balanced gain/loss dynamics: ideal, effective and three-level models"},
        {"spectrum", "two-level spectrum across the exceptional point"},
        {"decay-check", "integrator self-test against the exponential-decay oracle"},
    };
    for (const auto& [name, description] : subcommands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", opt.config_path, "JSON configuration file");
        sub->add_option("--out", opt.out_dir, "output directory for CSV/SVG");
        sub->add_option("--seed", opt.seed, "master seed (overrides config)")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->callback([&, name] { experiment = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(experiment, opt);
    } catch (const ptgain::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
