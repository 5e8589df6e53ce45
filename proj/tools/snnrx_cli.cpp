// Command-line driver: experiment configuration, seeding, sweeps and result
// persistence. See README for the config format and available presets.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "snnrx/experiment.hpp"
#include "snnrx/version.hpp"

namespace {

snnrx::exp::json load_config(const std::string& config_path, const std::string& preset_name) {
    if (!preset_name.empty()) return snnrx::exp::preset(preset_name);
    if (config_path.empty())
        throw CLI::ValidationError("either --config or --preset is required");
    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("cannot open config: " + config_path);
    return snnrx::exp::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snnrx - spiking neural network receiver experiments"};
    app.set_version_flag("--version", snnrx::kVersion);
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir = ".";
    uint64_t seed = 0;
    int threads = 1;
    std::size_t samples = 0;

    const auto add_common = [&](CLI::App* cmd, bool needs_cfg) {
        if (needs_cfg) {
            cmd->add_option("--config", config_path, "JSON experiment config");
            cmd->add_option("--preset", preset_name, "named preset (see `presets`)");
        }
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--samples", samples, "override evaluation sample count");
    };

    auto* cmd_train = app.add_subcommand("train", "train a model and write a checkpoint");
    auto* cmd_eval = app.add_subcommand("evaluate", "evaluate (trains when no checkpoint)");
    auto* cmd_sweep = app.add_subcommand("sweep", "train + evaluate over the sweep axis");
    auto* cmd_bench = app.add_subcommand("bench", "timing report");
    auto* cmd_presets = app.add_subcommand("presets", "list named presets");
    bool dump = false;
    cmd_presets->add_option("--dump", preset_name, "print one preset config");
    (void)dump;
    for (auto* c : {cmd_train, cmd_eval, cmd_sweep, cmd_bench}) add_common(c, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_presets->parsed()) {
            if (!preset_name.empty())
                std::cout << snnrx::exp::preset(preset_name).dump(2) << "\n";
            else
                for (const auto& n : snnrx::exp::preset_names()) std::cout << n << "\n";
            return 0;
        }

        snnrx::exp::RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        opt.seed_override = seed;
        opt.samples_override = samples;

        auto cfg = load_config(config_path, preset_name);

        if (cmd_bench->parsed()) {
            std::cout << snnrx::exp::bench(cfg, opt) << "\n";
            return 0;
        }
        if (cmd_train->parsed()) {
            // a train-only run is a sweep with no evaluation points
            cfg["sweep"] = {{"sigma2_db", snnrx::exp::json::array()},
                            {"ebn0_db", snnrx::exp::json::array()},
                            {"n_hid", snnrx::exp::json::array()}};
        }
        std::cout << snnrx::exp::run(cfg, opt) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
