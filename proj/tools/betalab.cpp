// betalab command line: one subcommand per experiment kind plus `run <config>`.

#include <CLI11.hpp>

#include "betalab/experiments.hpp"

#include <iostream>
#include <optional>
#include <sstream>

using betalab::experiments::ExperimentConfig;
using betalab::experiments::Kind;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<long long> replicates;
    std::optional<std::string> out;
};

void apply(ExperimentConfig& cfg, const Overrides& ov) {
    if (ov.seed) {
        cfg.seed = *ov.seed;
        cfg.raw["seed"] = std::to_string(*ov.seed);
    }
    if (ov.replicates) {
        cfg.replicates = *ov.replicates;
        cfg.raw["replicates"] = std::to_string(*ov.replicates);
    }
    if (ov.out) {
        cfg.out = *ov.out;
        cfg.raw["out"] = *ov.out;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation laboratory for Gaussian beta-ensemble characteristic polynomials"};
    app.require_subcommand(1);

    Overrides ov;

    // run <config-file>
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment described by a config file");
    run_cmd->add_option("config", config_path, "flat key=value config file")->required();
    run_cmd->add_option("--seed", ov.seed, "override master seed");
    run_cmd->add_option("--replicates", ov.replicates, "override replicate count");
    run_cmd->add_option("--out", ov.out, "override output directory");

    // direct subcommands assemble a config from flags
    struct Flags {
        std::string beta = "2";
        std::string n_list, degree_list, lambda_list;
        double z = 0.3, x = 0.2, t_exclusion = 1.0, t_end = 1.0, window = 5.0;
        double t_max = 8.0, t_min = -10.0;
        long long steps = 0, replicates = 1;
        std::uint64_t seed = 1;
        int sign = 1, threads = 0;
        std::string out = "out";
    } fl;

    std::vector<CLI::App*> kind_cmds;
    for (const char* name :
         {"hermite-check", "charpoly-sample", "phase-trace", "fields-cov", "variance-slope",
          "zeta-ratio", "sine-sim", "sine-points", "airy-sim", "edge-compare",
          "omega-tightness"}) {
        auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        cmd->add_option("--beta", fl.beta, "beta (or 'inf')");
        cmd->add_option("--n", fl.n_list, "matrix size(s), comma separated");
        cmd->add_option("--degrees", fl.degree_list, "hermite degrees, comma separated");
        cmd->add_option("--z", fl.z, "spectral parameter z");
        cmd->add_option("--x", fl.x, "second spectral parameter x");
        cmd->add_option("--lambda", fl.lambda_list, "lambda value(s), comma separated");
        cmd->add_option("--replicates", fl.replicates, "replicate count");
        cmd->add_option("--seed", fl.seed, "master seed");
        cmd->add_option("--t-exclusion", fl.t_exclusion, "turning point exclusion multiplier");
        cmd->add_option("--steps", fl.steps, "SDE solver steps (kind-specific default)");
        cmd->add_option("--t-end", fl.t_end, "SDE end time");
        cmd->add_option("--window", fl.window, "sine-points window end");
        cmd->add_option("--sign", fl.sign, "edge sign (+1/-1)");
        cmd->add_option("--t-max", fl.t_max, "airy matching time");
        cmd->add_option("--t-min", fl.t_min, "airy lowest time");
        cmd->add_option("--threads", fl.threads, "parallel degree (0 = auto)");
        cmd->add_option("--out", fl.out, "output directory");
        kind_cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (run_cmd->parsed()) {
            cfg = betalab::experiments::parse_config_file(config_path);
            apply(cfg, ov);
        } else {
            const CLI::App* active = app.get_subcommands().front();
            std::ostringstream text;
            text << "kind = " << active->get_name() << "\n";
            text << "beta = " << fl.beta << "\n";
            if (!fl.n_list.empty()) text << "n-list = " << fl.n_list << "\n";
            if (!fl.degree_list.empty()) text << "degree-list = " << fl.degree_list << "\n";
            text << "z = " << fl.z << "\nx = " << fl.x << "\n";
            if (!fl.lambda_list.empty()) text << "lambda-list = " << fl.lambda_list << "\n";
            text << "replicates = " << fl.replicates << "\nseed = " << fl.seed << "\n";
            text << "t-exclusion = " << fl.t_exclusion << "\n";
            if (fl.steps > 0) text << "steps = " << fl.steps << "\n";
            text << "t-end = " << fl.t_end << "\nwindow = " << fl.window << "\n";
            text << "sign = " << fl.sign << "\nt-max = " << fl.t_max << "\nt-min = " << fl.t_min
                 << "\n";
            text << "threads = " << fl.threads << "\nout = " << fl.out << "\n";
            cfg = betalab::experiments::parse_config_text(text.str());
        }
        return betalab::experiments::run(cfg);
    } catch (const betalab::experiments::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
