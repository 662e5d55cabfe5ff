#pragma once

// Experiment orchestration: repeated seeded episodes, summaries, output files
// and the optimizer runtime sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "csr/agents.hpp"
#include "csr/analysis.hpp"
#include "csr/optimizer.hpp"
#include "csr/scenario.hpp"
#include "csr/sim.hpp"
#include "json.hpp"

namespace csr {

enum class PolicyKind { dcf, sr, flat_mab, hmab, clustered_flat, clustered_hmab, t_optimal, f_optimal };
enum class OutputFormat { csv, json };

inline std::string to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::dcf: return "dcf";
        case PolicyKind::sr: return "sr";
        case PolicyKind::flat_mab: return "flat_mab";
        case PolicyKind::hmab: return "hmab";
        case PolicyKind::clustered_flat: return "clustered_flat";
        case PolicyKind::clustered_hmab: return "clustered_hmab";
        case PolicyKind::t_optimal: return "t_optimal";
        case PolicyKind::f_optimal: return "f_optimal";
    }
    return "?";
}

inline PolicyKind policy_kind_from_string(const std::string& s) {
    for (auto k : {PolicyKind::dcf, PolicyKind::sr, PolicyKind::flat_mab, PolicyKind::hmab, PolicyKind::clustered_flat,
                   PolicyKind::clustered_hmab, PolicyKind::t_optimal, PolicyKind::f_optimal}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown policy '" + s + "'");
}

inline bool is_optimal(PolicyKind k) { return k == PolicyKind::t_optimal || k == PolicyKind::f_optimal; }

inline bool is_agent(PolicyKind k) {
    return k == PolicyKind::flat_mab || k == PolicyKind::hmab || k == PolicyKind::clustered_flat ||
           k == PolicyKind::clustered_hmab;
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

inline PowerMode power_mode_from_string(const std::string& s) {
    if (s == "continuous") return PowerMode::continuous;
    if (s == "grid") return PowerMode::grid;
    throw std::invalid_argument("unknown power mode '" + s + "' (expected continuous or grid)");
}

struct OptimizerSettings {
    PowerMode power_mode = PowerMode::continuous;
    double tolerance = 1e-6;
    long node_limit = 1000000;
    std::optional<std::filesystem::path> export_dir;
};

struct ExperimentConfig {
    ScenarioSpec scenario;
    PolicyKind policy = PolicyKind::hmab;
    /// Flat agents default to softmax, the hierarchy to UCB.
    BanditParams bandit{BanditKind::softmax};
    HierarchyParams hierarchy;
    PowerConfig power;
    McsTable mcs = McsTable::ax_20mhz();
    SimParams sim;
    SrParams sr;
    ConvergenceParams convergence;
    OptimizerSettings optimizer;
    int steps = 10000;
    int repetitions = 10;
    /// Base seed; repetition r uses seed + r unless `seeds` is given.
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;
    std::optional<int> mutation_step;
    std::filesystem::path output = "out";
    OutputFormat format = OutputFormat::csv;
    int workers = 1;

    void validate() const {
        scenario.validate();
        power.validate();
        mcs.validate();
        sim.validate();
        if (steps < 1) throw std::invalid_argument("steps must be at least 1");
        if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
        if (!seeds.empty() && seeds.size() != static_cast<std::size_t>(repetitions)) {
            throw std::invalid_argument("seed list length must equal repetitions");
        }
        if (mutation_step && (*mutation_step < 0 || *mutation_step >= steps)) {
            throw std::invalid_argument("mutation step outside the episode");
        }
        if (workers < 1) throw std::invalid_argument("workers must be at least 1");
        if ((policy == PolicyKind::clustered_flat || policy == PolicyKind::clustered_hmab) && !scenario.clusters) {
            throw std::invalid_argument("clustered policies need a cluster map");
        }
    }

    std::vector<std::uint64_t> resolved_seeds() const {
        if (!seeds.empty()) return seeds;
        std::vector<std::uint64_t> out;
        for (int r = 0; r < repetitions; ++r) out.push_back(seed + static_cast<std::uint64_t>(r));
        return out;
    }
};

// ---- JSON view of the resolved configuration ----

inline nlohmann::json to_json(const BanditParams& p) {
    return {{"kind", to_string(p.kind)},         {"epsilon", p.epsilon},
            {"epsilon_decay", p.epsilon_decay},  {"temperature", p.temperature},
            {"temperature_decay", p.temperature_decay}, {"ucb_c", p.ucb_c},
            {"prior_mean", p.prior_mean},        {"prior_variance", p.prior_variance},
            {"noise_variance", p.noise_variance}};
}

inline nlohmann::json to_json(const ScenarioSpec& s) {
    nlohmann::json j{{"kind", to_string(s.kind)},
                     {"rows", s.rows},
                     {"cols", s.cols},
                     {"room_size", s.room_size},
                     {"area_side", s.area_side},
                     {"ap_count", {s.ap_count.lo, s.ap_count.hi}},
                     {"stations_per_ap", {s.stations_per_ap.lo, s.stations_per_ap.hi}},
                     {"station_spread", s.station_spread},
                     {"seed", s.seed},
                     {"legacy_ap_count", s.legacy_ap_count},
                     {"max_power_dbm", s.max_power_dbm},
                     {"channel",
                      {{"frequency_ghz", s.channel.frequency_ghz},
                       {"noise_floor_dbm", s.channel.noise_floor_dbm},
                       {"wall_loss_db", s.channel.wall_loss_db},
                       {"breakpoint_m", s.channel.breakpoint_m},
                       {"min_distance_m", s.channel.min_distance_m}}}};
    if (s.clusters) {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [ap, id] : *s.clusters) c[std::to_string(ap)] = id;
        j["clusters"] = c;
    }
    if (s.kind == ScenarioKind::explicit_layout) {
        nlohmann::json aps = nlohmann::json::array(), stas = nlohmann::json::array(), walls = nlohmann::json::array();
        for (const auto& p : s.layout.aps) aps.push_back({p.x, p.y});
        for (const auto& [p, ap] : s.layout.stations) stas.push_back({p.x, p.y, ap});
        for (const auto& w : s.layout.walls) walls.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
        j["layout"] = {{"aps", aps}, {"stations", stas}, {"walls", walls}};
    }
    return j;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j{
        {"policy", to_string(c.policy)},
        {"scenario", to_json(c.scenario)},
        {"bandit", to_json(c.bandit)},
        {"hierarchy",
         {{"level1", to_json(c.hierarchy.level1)},
          {"level2", to_json(c.hierarchy.level2)},
          {"level3", to_json(c.hierarchy.level3)}}},
        {"power", {{"min_dbm", c.power.min_power_dbm}, {"max_dbm", c.power.max_power_dbm}, {"levels_dbm", c.power.levels_dbm}}},
        {"mcs", {{"rates_mbps", c.mcs.rates_mbps}, {"min_sinr_db", c.mcs.min_sinr_db}}},
        {"sim",
         {{"txop_duration_s", c.sim.txop_duration_s},
          {"frame_size_bytes", c.sim.frame_size_bytes},
          {"reward_normalizer_mbps", c.sim.reward_normalizer_mbps}}},
        {"sr", {{"obss_pd_dbm", c.sr.obss_pd_dbm}, {"max_power_reduction_db", c.sr.max_power_reduction_db}}},
        {"convergence",
         {{"alpha", c.convergence.alpha},
          {"beta", c.convergence.beta},
          {"threshold", c.convergence.threshold},
          {"patience", c.convergence.patience},
          {"smoothing", c.convergence.smoothing}}},
        {"optimizer",
         {{"power_mode", to_string(c.optimizer.power_mode)},
          {"tolerance", c.optimizer.tolerance},
          {"node_limit", c.optimizer.node_limit}}},
        {"steps", c.steps},
        {"repetitions", c.repetitions},
        {"seeds", c.resolved_seeds()},
        {"mutation_step", c.mutation_step ? nlohmann::json(*c.mutation_step) : nlohmann::json(nullptr)},
        {"format", to_string(c.format)},
    };
    if (c.optimizer.export_dir) j["optimizer"]["export_dir"] = c.optimizer.export_dir->string();
    return j;
}

// ---- policies and episodes ----

inline std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg, const Network& net) {
    const auto& levels = cfg.power.levels_dbm;
    switch (cfg.policy) {
        case PolicyKind::dcf: return std::make_unique<DcfPolicy>();
        case PolicyKind::sr: return std::make_unique<SrPolicy>(cfg.sr);
        case PolicyKind::flat_mab: return std::make_unique<FlatPolicy>(cfg.bandit, levels);
        case PolicyKind::hmab: return std::make_unique<HierarchicalPolicy>(cfg.hierarchy, levels);
        case PolicyKind::clustered_flat:
            return std::make_unique<ClusteredPolicy>(net, *cfg.scenario.clusters, [&](std::vector<ApId> scope) {
                return std::unique_ptr<AgentPolicy>(std::make_unique<FlatPolicy>(cfg.bandit, levels, std::move(scope)));
            });
        case PolicyKind::clustered_hmab:
            return std::make_unique<ClusteredPolicy>(net, *cfg.scenario.clusters, [&](std::vector<ApId> scope) {
                return std::unique_ptr<AgentPolicy>(
                    std::make_unique<HierarchicalPolicy>(cfg.hierarchy, levels, std::move(scope)));
            });
        case PolicyKind::t_optimal:
        case PolicyKind::f_optimal: break;
    }
    throw std::invalid_argument("policy " + to_string(cfg.policy) + " does not run episodes");
}

inline std::optional<MutationPlan> mutation_plan(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (!cfg.mutation_step) return std::nullopt;
    return MutationPlan{*cfg.mutation_step, cfg.scenario, Rng::derive(seed, 0x6d75)};
}

struct Repetition {
    std::uint64_t seed = 0;
    std::vector<StepRecord> records;
};

/// Runs `job(r)` for r in [0, count) on up to `workers` threads. The first
/// exception by repetition index is rethrown.
template <class Job>
void parallel_for(int count, int workers, const Job& job) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int r = next++; r < count; r = next++) {
            try {
                job(r);
            } catch (...) {
                errors[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min(workers, count));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct ExperimentResult {
    ExperimentConfig config;
    Network network;
    std::vector<Repetition> repetitions;
    std::optional<Schedule> schedule;
    nlohmann::json summary;
};

inline nlohmann::json reproducibility_header(const ExperimentConfig& cfg) {
    return {{"generator", "csr"}, {"config", to_json(cfg)}, {"seeds", cfg.resolved_seeds()}};
}

/// Per-step effective rate of one repetition.
inline std::vector<double> rate_series(const Repetition& rep) {
    std::vector<double> out;
    out.reserve(rep.records.size());
    for (const auto& r : rep.records) out.push_back(r.result.effective_rate_mbps);
    return out;
}

struct MeanCi {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    double m = 0.0;
    for (double x : xs) m += x / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    const double h = t_half_width(sd, xs.size());
    return {m, m - h, m + h};
}

/// Mean effective rate over the trailing `fraction` of steps, per repetition.
inline std::vector<double> tail_means(const std::vector<Repetition>& reps, double fraction = 0.1) {
    std::vector<double> out;
    for (const auto& rep : reps) {
        const std::size_t n = rep.records.size();
        const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
        double s = 0.0;
        for (std::size_t i = n - k; i < n; ++i) s += rep.records[i].result.effective_rate_mbps;
        out.push_back(s / static_cast<double>(k));
    }
    return out;
}

/// Mean effective rate over the steps won by a coordinated AP, per repetition.
inline std::vector<double> coordinated_winner_means(const std::vector<Repetition>& reps) {
    std::vector<double> out;
    for (const auto& rep : reps) {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& r : rep.records) {
            if (!r.coordinated_winner) continue;
            s += r.result.effective_rate_mbps;
            ++n;
        }
        out.push_back(n ? s / static_cast<double>(n) : 0.0);
    }
    return out;
}

inline nlohmann::json to_json(const MeanCi& m) { return {{"mean", m.mean}, {"ci_low", m.low}, {"ci_high", m.high}}; }

inline nlohmann::json summarize_episodes(const ExperimentConfig& cfg, const Network& net, const std::vector<Repetition>& reps) {
    std::vector<std::vector<double>> runs;
    for (const auto& rep : reps) runs.push_back(rate_series(rep));

    const std::size_t stations = net.stations().size();
    std::vector<std::vector<double>> station_rates;
    std::vector<double> txops(stations, 0.0), rates(stations, 0.0);
    for (const auto& rep : reps) {
        std::vector<double> bytes(stations, 0.0);
        for (const auto& r : rep.records) {
            for (const auto& l : r.result.per_link) {
                bytes[l.station.index()] += static_cast<double>(l.delivered_bytes);
                txops[l.station.index()] += 1.0 / static_cast<double>(reps.size());
            }
        }
        std::vector<double> row;
        const double seconds = static_cast<double>(rep.records.size()) * cfg.sim.txop_duration_s;
        for (std::size_t s = 0; s < stations; ++s) {
            row.push_back(bytes[s] * 8.0 / seconds / 1e6);
            rates[s] += row.back() / static_cast<double>(reps.size());
        }
        station_rates.push_back(std::move(row));
    }
    const RunSummary sum = summarize(runs, station_rates);
    const ConvergenceVerdict v = detect_convergence(sum.mean, cfg.convergence);

    nlohmann::json per_station = nlohmann::json::array();
    for (const auto& s : net.stations()) {
        per_station.push_back({{"station", s.id.value},
                               {"ap", s.ap.value},
                               {"mean_txop_count", txops[s.id.index()]},
                               {"mean_rate_mbps", rates[s.id.index()]}});
    }
    nlohmann::json cdf = nlohmann::json::array();
    for (const auto& p : sum.station_cdf) cdf.push_back({{"rate_mbps", p.value}, {"quantile", p.quantile}});

    double overall = 0.0;
    for (double m : sum.mean) overall += m / static_cast<double>(sum.mean.size());

    return {{"header", reproducibility_header(cfg)},
            {"policy", to_string(cfg.policy)},
            {"mean_effective_rate_mbps", overall},
            {"tail_effective_rate_mbps", to_json(mean_ci(tail_means(reps)))},
            {"coordinated_winner_rate_mbps", to_json(mean_ci(coordinated_winner_means(reps)))},
            {"convergence",
             {{"converged", v.converged},
              {"step", v.step ? nlohmann::json(*v.step) : nlohmann::json(nullptr)},
              {"threshold", v.threshold},
              {"patience", v.patience}}},
            {"stations", per_station},
            {"station_cdf", cdf},
            {"series", {{"mean", sum.mean}, {"ci_low", sum.ci_low}, {"ci_high", sum.ci_high}}}};
}

inline ColumnGenerationOptions optimizer_options(const ExperimentConfig& cfg, ObjectiveMode mode) {
    ColumnGenerationOptions o;
    o.mode = mode;
    o.power_mode = cfg.optimizer.power_mode;
    o.tolerance = cfg.optimizer.tolerance;
    o.milp.node_limit = cfg.optimizer.node_limit;
    o.export_dir = cfg.optimizer.export_dir;
    return o;
}

/// Runs the configured experiment in memory. Episodes use the network built
/// from the scenario; repetitions differ only in their run seed.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out{cfg, build_network(cfg.scenario), {}, std::nullopt, {}};
    if (is_optimal(cfg.policy)) {
        const auto mode = cfg.policy == PolicyKind::t_optimal ? ObjectiveMode::throughput : ObjectiveMode::fairness;
        out.schedule = column_generation(out.network, cfg.mcs, cfg.power, optimizer_options(cfg, mode));
        out.summary = to_json(*out.schedule);
        out.summary["header"] = reproducibility_header(cfg);
        return out;
    }
    const auto seeds = cfg.resolved_seeds();
    out.repetitions.resize(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), cfg.workers, [&](int r) {
        const auto seed = seeds[static_cast<std::size_t>(r)];
        auto policy = make_policy(cfg, out.network);
        out.repetitions[static_cast<std::size_t>(r)] = {
            seed, run_episode(*policy, out.network, cfg.mcs, cfg.sim, cfg.steps, seed, mutation_plan(cfg, seed))};
    });
    out.summary = summarize_episodes(cfg, out.network, out.repetitions);
    return out;
}

/// Learned state of an agent policy after one episode with the given seed.
inline nlohmann::json inspect_agent(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (!is_agent(cfg.policy)) throw std::invalid_argument("policy " + to_string(cfg.policy) + " has no agent state");
    const Network net = build_network(cfg.scenario);
    auto policy = make_policy(cfg, net);
    run_episode(*policy, net, cfg.mcs, cfg.sim, cfg.steps, seed, mutation_plan(cfg, seed));
    return {{"header", reproducibility_header(cfg)},
            {"seed", seed},
            {"state", dynamic_cast<const AgentPolicy&>(*policy).state()}};
}

// ---- output files ----

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_header_comment(std::ostream& os, const nlohmann::json& header) {
    os << "# " << header.dump() << "\r\n";
}

/// Per-step rows for all repetitions. The first line is a '#' comment
/// holding the reproducibility header.
inline void write_steps_csv(std::ostream& os, const ExperimentResult& res) {
    write_header_comment(os, reproducibility_header(res.config));
    const auto& stations = res.network.stations();
    os << "step,repetition,seed,sharing_ap,config_id,effective_rate_mbps,reward";
    for (const auto& s : stations) os << ",sta" << s.id.value << "_bytes";
    os << "\r\n";
    for (std::size_t r = 0; r < res.repetitions.size(); ++r) {
        const auto& rep = res.repetitions[r];
        std::vector<std::int64_t> bytes(stations.size());
        for (const auto& rec : rep.records) {
            std::fill(bytes.begin(), bytes.end(), 0);
            for (const auto& l : rec.result.per_link) bytes[l.station.index()] = l.delivered_bytes;
            os << rec.step << ',' << r << ',' << rep.seed << ',' << rec.winner.ap.value << ',' << csv_field(rec.config_id)
               << ',' << fmt_num(rec.result.effective_rate_mbps) << ',' << fmt_num(rec.result.reward);
            for (auto b : bytes) os << ',' << b;
            os << "\r\n";
        }
    }
}

inline nlohmann::json steps_json(const ExperimentResult& res) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < res.repetitions.size(); ++r) {
        const auto& rep = res.repetitions[r];
        for (const auto& rec : rep.records) {
            nlohmann::json bytes = nlohmann::json::object();
            for (const auto& l : rec.result.per_link) bytes[std::to_string(l.station.value)] = l.delivered_bytes;
            rows.push_back({{"step", rec.step},
                            {"repetition", r},
                            {"seed", rep.seed},
                            {"sharing_ap", rec.winner.ap.value},
                            {"config_id", rec.config_id},
                            {"effective_rate_mbps", rec.result.effective_rate_mbps},
                            {"reward", rec.result.reward},
                            {"delivered_bytes", bytes}});
        }
    }
    return {{"header", reproducibility_header(res.config)}, {"steps", rows}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

/// Writes result files into `dir`, returning their paths.
inline std::vector<std::filesystem::path> write_outputs(const ExperimentResult& res, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    std::filesystem::create_directories(dir);
    if (res.schedule) {
        files.push_back(dir / "schedule.json");
        write_text(files.back(), res.summary.dump(2) + "\n");
        return files;
    }
    if (res.config.format == OutputFormat::csv) {
        files.push_back(dir / "steps.csv");
        std::ofstream os(files.back(), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + files.back().string());
        write_steps_csv(os, res);
    } else {
        files.push_back(dir / "steps.json");
        write_text(files.back(), steps_json(res).dump() + "\n");
    }
    files.push_back(dir / "summary.json");
    write_text(files.back(), res.summary.dump(2) + "\n");
    return files;
}

// ---- runtime sweep ----

struct SweepRow {
    int ap_count = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    double objective = 0.0;
    int iterations = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;
};

/// Near-square grid with n rooms: rows is the largest divisor not above sqrt(n).
inline std::pair<int, int> grid_for(int n) {
    int rows = 1;
    for (int r = 1; r * r <= n; ++r) {
        if (n % r == 0) rows = r;
    }
    return {rows, n / rows};
}

inline ScenarioSpec sized_scenario(ScenarioSpec base, int ap_count) {
    if (base.kind == ScenarioKind::multi_room || base.kind == ScenarioKind::symmetric_enterprise) {
        std::tie(base.rows, base.cols) = grid_for(ap_count);
        base.clusters.reset();
    } else if (base.kind == ScenarioKind::open_space) {
        base.ap_count = {ap_count, ap_count};
    } else {
        throw std::invalid_argument("explicit layouts cannot be resized");
    }
    return base;
}

/// Theil-Sen slope of log(wall time) against log(AP count).
inline double scaling_slope(const std::vector<SweepRow>& rows) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        xs.push_back(std::log(static_cast<double>(r.ap_count)));
        ys.push_back(std::log(std::max(r.wall_time_s, 1e-9)));
    }
    return theil_sen_slope(xs, ys);
}

/// Times throughput-mode column generation `reps` times per size. Repetition
/// r of every size draws its topology from base.seed + r.
inline SweepResult run_scalability_sweep(const ScenarioSpec& base, const std::vector<int>& ap_counts, int reps,
                                         const McsTable& mcs = McsTable::ax_20mhz(), const PowerConfig& power = {},
                                         PowerMode power_mode = PowerMode::continuous) {
    if (ap_counts.empty()) throw std::invalid_argument("no sizes to sweep");
    if (!std::is_sorted(ap_counts.begin(), ap_counts.end())) throw std::invalid_argument("AP counts must be ascending");
    if (ap_counts.front() < 1) throw std::invalid_argument("AP counts must be positive");
    if (reps < 1) throw std::invalid_argument("repetitions must be at least 1");
    SweepResult out;
    for (int n : ap_counts) {
        for (int r = 0; r < reps; ++r) {
            ScenarioSpec spec = sized_scenario(base, n);
            spec.seed = base.seed + static_cast<std::uint64_t>(r);
            const Network net = build_network(spec);
            ColumnGenerationOptions o;
            o.mode = ObjectiveMode::throughput;
            o.power_mode = power_mode;
            const Schedule s = column_generation(net, mcs, power, o);
            out.rows.push_back({n, r, spec.seed, s.wall_time_s, s.objective, s.iterations});
        }
    }
    out.slope = scaling_slope(out.rows);
    return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res, const nlohmann::json& header) {
    write_header_comment(os, header);
    os << "ap_count,repetition,seed,wall_time_s,objective_mbps,iterations\r\n";
    for (const auto& r : res.rows) {
        os << r.ap_count << ',' << r.repetition << ',' << r.seed << ',' << fmt_num(r.wall_time_s) << ','
           << fmt_num(r.objective) << ',' << r.iterations << "\r\n";
    }
}

inline nlohmann::json to_json(const SweepResult& res, const nlohmann::json& header) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.rows) {
        rows.push_back({{"ap_count", r.ap_count},
                        {"repetition", r.repetition},
                        {"seed", r.seed},
                        {"wall_time_s", r.wall_time_s},
                        {"objective_mbps", r.objective},
                        {"iterations", r.iterations}});
    }
    return {{"header", header}, {"rows", rows}, {"theil_sen_loglog_slope", res.slope}};
}

}  // namespace csr
