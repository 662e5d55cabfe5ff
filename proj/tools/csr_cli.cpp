// Command-line front end: run, bound, sweep and inspect-agent.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csr/config.hpp"
#include "csr/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("config", f.config, "YAML experiment file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "base seed; repetition r runs with seed + r");
    cmd->add_option("--out", f.out, "output directory (overrides config and CSR_OUTPUT_DIR)");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", f.workers, "parallel repetitions")->check(CLI::PositiveNumber);
}

csr::ExperimentConfig resolve(const CommonFlags& f) {
    csr::ExperimentConfig cfg = csr::load_config(f.config);
    if (f.seed) {
        cfg.seed = *f.seed;
        cfg.seeds.clear();
    }
    if (f.out) cfg.output = *f.out;
    if (f.format) cfg.format = csr::output_format_from_string(*f.format);
    if (f.workers) cfg.workers = *f.workers;
    cfg.validate();
    return cfg;
}

void print_files(const std::vector<std::filesystem::path>& files) {
    for (const auto& p : files) std::cout << p.string() << "\n";
}

int cmd_run(const CommonFlags& f, std::optional<int> steps, std::optional<int> reps) {
    auto cfg = resolve(f);
    if (steps) cfg.steps = *steps;
    if (reps) {
        cfg.repetitions = *reps;
        cfg.seeds.clear();
    }
    const auto res = csr::run_experiment(cfg);
    print_files(csr::write_outputs(res, cfg.output));
    if (!res.schedule) {
        const auto& s = res.summary;
        std::cout << "policy " << s["policy"].get<std::string>() << ": mean "
                  << csr::fmt_num(s["mean_effective_rate_mbps"].get<double>()) << " Mb/s, last 10% "
                  << csr::fmt_num(s["tail_effective_rate_mbps"]["mean"].get<double>()) << " Mb/s";
        if (s["convergence"]["converged"].get<bool>()) {
            std::cout << ", converged at step " << s["convergence"]["step"].get<std::size_t>();
        } else {
            std::cout << ", not converged";
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_bound(const CommonFlags& f, const std::string& mode, std::optional<std::string> power_mode,
              std::optional<std::string> export_lp) {
    auto cfg = resolve(f);
    if (mode == "throughput") {
        cfg.policy = csr::PolicyKind::t_optimal;
    } else if (mode == "fairness") {
        cfg.policy = csr::PolicyKind::f_optimal;
    } else if (!csr::is_optimal(cfg.policy)) {
        cfg.policy = csr::PolicyKind::t_optimal;
    }
    if (power_mode) cfg.optimizer.power_mode = csr::power_mode_from_string(*power_mode);
    if (export_lp) cfg.optimizer.export_dir = *export_lp;
    const auto res = csr::run_experiment(cfg);
    print_files(csr::write_outputs(res, cfg.output));
    const auto& s = *res.schedule;
    std::cout << csr::to_string(s.mode) << " bound: objective " << csr::fmt_num(s.objective) << ", total "
              << csr::fmt_num(s.total_throughput()) << " Mb/s, min station " << csr::fmt_num(s.min_throughput)
              << " Mb/s, " << s.sets.size() << " sets, " << s.iterations << " iterations, "
              << csr::fmt_num(s.wall_time_s) << " s\n";
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_sweep(const CommonFlags& f, const std::vector<int>& ap_counts, int reps) {
    const auto cfg = resolve(f);
    const auto res =
        csr::run_scalability_sweep(cfg.scenario, ap_counts, reps, cfg.mcs, cfg.power, cfg.optimizer.power_mode);
    nlohmann::json header = csr::reproducibility_header(cfg);
    header["ap_counts"] = ap_counts;
    header["sweep_repetitions"] = reps;
    std::filesystem::create_directories(cfg.output);
    std::filesystem::path file;
    if (cfg.format == csr::OutputFormat::csv) {
        file = cfg.output / "sweep.csv";
        std::ofstream os(file, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + file.string());
        csr::write_sweep_csv(os, res, header);
    } else {
        file = cfg.output / "sweep.json";
        csr::write_text(file, csr::to_json(res, header).dump(2) + "\n");
    }
    std::cout << file.string() << "\nTheil-Sen log-log slope " << csr::fmt_num(res.slope) << "\n";
    return 0;
}

int cmd_inspect(const CommonFlags& f) {
    const auto cfg = resolve(f);
    const auto state = csr::inspect_agent(cfg, cfg.resolved_seeds().front());
    if (f.out) {
        const auto file = cfg.output / "agent.json";
        csr::write_text(file, state.dump(2) + "\n");
        std::cout << file.string() << "\n";
    } else {
        std::cout << state.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordinated spatial reuse laboratory"};
    app.require_subcommand(1);

    CommonFlags run_flags, bound_flags, sweep_flags, inspect_flags;
    std::optional<int> steps, reps;
    auto* run = app.add_subcommand("run", "simulate the configured policy and write per-step CSV plus summary JSON");
    add_common(run, run_flags);
    run->add_option("--steps", steps, "TXOPs per episode")->check(CLI::PositiveNumber);
    run->add_option("--repetitions", reps, "independent episodes")->check(CLI::PositiveNumber);

    std::string mode = "config";
    std::optional<std::string> power_mode, export_lp;
    auto* bound = app.add_subcommand("bound", "compute an upper-bound schedule by column generation");
    add_common(bound, bound_flags);
    bound->add_option("--mode", mode, "throughput, fairness or config (use the config policy)")
        ->check(CLI::IsMember({"throughput", "fairness", "config"}));
    bound->add_option("--power-mode", power_mode, "continuous or grid")->check(CLI::IsMember({"continuous", "grid"}));
    bound->add_option("--export-lp", export_lp, "write every main and pricing problem in LP format here");

    std::vector<int> ap_counts{4, 6, 9};
    int sweep_reps = 10;
    auto* sweep = app.add_subcommand("sweep", "time the optimizer over network sizes");
    add_common(sweep, sweep_flags);
    sweep->add_option("--ap-counts", ap_counts, "ascending AP counts")->delimiter(',');
    sweep->add_option("--reps", sweep_reps, "repetitions per size")->check(CLI::PositiveNumber);

    auto* inspect = app.add_subcommand("inspect-agent", "run one episode and dump the learned agent state");
    add_common(inspect, inspect_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (run->parsed()) return cmd_run(run_flags, steps, reps);
        if (bound->parsed()) return cmd_bound(bound_flags, mode, power_mode, export_lp);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, ap_counts, sweep_reps);
        if (inspect->parsed()) return cmd_inspect(inspect_flags);
    } catch (const csr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
