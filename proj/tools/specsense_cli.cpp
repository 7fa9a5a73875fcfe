// Command-line front-end: plan inspection, Monte-Carlo runs, parameter
// sweeps and ROC generation, driven by presets or a JSON config.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "specsense/config.hpp"
#include "specsense/di.hpp"
#include "specsense/gt.hpp"
#include "specsense/sim.hpp"

namespace {

using namespace specsense;

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_path;
    std::string policy_list;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--preset", args.preset_name,
                    "named preset (fig3_ss, fig3_radar, fig4_k10, fig4_k30, fig5_k10, fig5_k30, "
                    "fig6_10db, fig6_20db)");
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--policy", args.policy_list, "comma-separated policy list override");
    cmd->add_option("--seed", args.seed, "master seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--trials", args.trials, "Monte-Carlo trials override");
    cmd->add_option("--workers", args.workers, "worker threads (0 = hardware)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    if (!args.config_path.empty() && !args.preset_name.empty())
        throw std::invalid_argument("pass either --config or --preset, not both");
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    else if (!args.preset_name.empty()) cfg = preset(args.preset_name);
    else throw std::invalid_argument("one of --config or --preset is required");

    if (args.seed_set) cfg.master_seed = args.seed;
    if (args.trials > 0) cfg.trials = args.trials;
    if (args.workers >= 0) cfg.workers = args.workers;
    if (!args.policy_list.empty()) {
        cfg.policies.clear();
        std::stringstream ss(args.policy_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) cfg.policies.push_back(parse_policy(tok));
        }
    }
    if (!args.out_path.empty()) cfg.output_path = args.out_path;
    cfg.require_valid();
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

void print_plan(std::ostream& os, const std::string& name, const SensingPlan& plan, int horizon) {
    os << name << ": kappa=" << plan.kappa() << " expected_utility=" << fmt_num(plan.expected_utility)
       << " (horizon " << horizon << ")\n";
    os << "  cycle            gamma        alpha        beta_max     unit_utility\n";
    for (const auto& c : plan.cycles) {
        std::string members = "{";
        for (std::size_t j = 0; j < c.members.size(); ++j)
            members += (j ? "," : "") + std::to_string(c.members[j]);
        members += "}";
        char line[160];
        std::snprintf(line, sizeof line, "  %-16s %-12.6g %-12.6g %-12.6g %-12.6g\n",
                      members.c_str(), c.threshold, c.alpha, c.beta_max, c.unit_utility);
        os << line;
    }
}

int cmd_plan(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    if (cfg.axis != SweepAxis::none && !cfg.axis_values.empty())
        std::cout << "note: plan uses the first sweep value " << fmt_num(cfg.axis_values.front())
                  << "\n";
    const ExperimentConfig at = cfg.axis == SweepAxis::none || cfg.axis_values.empty()
                                    ? cfg
                                    : config_at_axis(cfg, cfg.axis_values.front());
    const ResourceEnsemble ens = build_ensemble(at, 0);
    std::cout << "mode=" << mode_name(ens.mode) << " N=" << ens.size() << " K=" << ens.horizon
              << " power_floor=" << fmt_num(ens.min_signal_power) << "\n";
    for (const auto& spec : at.policies) {
        switch (spec.kind) {
            case PolicyKind::DI: print_plan(std::cout, "DI", di_plan(ens, ens.horizon), ens.horizon);
                break;
            case PolicyKind::GT:
                print_plan(std::cout, spec.label(), greedy_plan(ens, ens.horizon, spec.pool),
                           ens.horizon);
                break;
            default: break;  // MAP/LASSO reuse the GT design; MWC has no plan
        }
    }
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    const auto rows = monte_carlo(cfg);
    if (!cfg.output_path.empty()) {
        auto f = open_out(cfg.output_path);
        write_sweep_header(f);
        for (const auto& r : rows) write_sweep_row(f, r);
    }
    std::printf("%-8s %14s %12s %8s %10s %10s %8s\n", "policy", "mean_utility", "std_err", "kappa",
                "alpha", "beta", "trials");
    for (const auto& r : rows)
        std::printf("%-8s %14.6g %12.4g %8.4g %10.4g %10.4g %8ld\n", r.policy.c_str(),
                    r.mean_utility, r.std_err, r.mean_kappa, r.mean_alpha, r.mean_beta, r.trials);
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    if (!cfg.output_path.empty()) {
        auto f = open_out(cfg.output_path);
        sweep(cfg, f);
        std::cout << "wrote " << cfg.output_path << "\n";
    } else {
        sweep(cfg, std::cout);
    }
    return 0;
}

int cmd_roc(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    const auto points = roc(cfg);
    if (!cfg.output_path.empty()) {
        auto f = open_out(cfg.output_path);
        write_roc_csv(f, points);
        std::cout << "wrote " << cfg.output_path << "\n";
    } else {
        write_roc_csv(std::cout, points);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"active sub-Nyquist spectrum-sensing planner and simulator"};
    app.require_subcommand(1);

    CommonArgs plan_args, sim_args, sweep_args, roc_args;
    add_common(app.add_subcommand("plan", "print the optimized sensing plans for a config"),
               plan_args);
    add_common(app.add_subcommand("simulate", "Monte-Carlo run at a single operating point"),
               sim_args);
    add_common(app.add_subcommand("sweep", "Monte-Carlo sweep over the configured axis"),
               sweep_args);
    add_common(app.add_subcommand("roc", "detection/false-alarm curves vs the static baseline"),
               roc_args);

    CLI11_PARSE(app, argc, argv);
    try {
        if (app.got_subcommand("plan")) return cmd_plan(plan_args);
        if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
        if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
        if (app.got_subcommand("roc")) return cmd_roc(roc_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
