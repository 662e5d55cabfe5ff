#pragma once

// YAML experiment configuration. Errors carry "source:line:column" and the
// dotted field path. Unknown keys are rejected.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "csr/experiment.hpp"

namespace csr {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output directory override; the only environment variable consulted.
inline constexpr const char* kOutputDirEnv = "CSR_OUTPUT_DIR";

namespace detail {

class YamlReader {
public:
    explicit YamlReader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& msg) const {
        std::ostringstream os;
        os << source_;
        if (node.IsDefined() && node.Mark().line >= 0) os << ':' << node.Mark().line + 1 << ':' << node.Mark().column + 1;
        if (!path.empty()) os << ": field '" << path << "'";
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    template <class T>
    T get(const YAML::Node& node, const std::string& path, const char* type) const {
        if (!node.IsScalar()) fail(node, path, std::string("expected ") + type);
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, path, std::string("expected ") + type + ", got '" + node.Scalar() + "'");
        }
    }

    double real(const YAML::Node& n, const std::string& p) const { return get<double>(n, p, "a number"); }
    int integer(const YAML::Node& n, const std::string& p) const { return get<int>(n, p, "an integer"); }
    long long_int(const YAML::Node& n, const std::string& p) const { return get<long>(n, p, "an integer"); }
    std::uint64_t unsigned_int(const YAML::Node& n, const std::string& p) const {
        return get<std::uint64_t>(n, p, "a non-negative integer");
    }
    std::string text(const YAML::Node& n, const std::string& p) const { return get<std::string>(n, p, "a string"); }

    std::vector<double> reals(const YAML::Node& n, const std::string& p) const {
        if (!n.IsSequence()) fail(n, p, "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(real(n[i], p + "[" + std::to_string(i) + "]"));
        return out;
    }

    void map_keys(const YAML::Node& n, const std::string& p, const std::set<std::string>& allowed) const {
        if (!n.IsMap()) fail(n, p, "expected a mapping");
        for (const auto& kv : n) {
            const std::string key = kv.first.as<std::string>();
            if (!allowed.contains(key)) fail(kv.first, p.empty() ? key : p + "." + key, "unknown key");
        }
    }

    /// Runs `check` and reports its invalid_argument at `node`.
    template <class F>
    void validated(const YAML::Node& n, const std::string& p, F&& check) const {
        try {
            check();
        } catch (const std::invalid_argument& e) {
            fail(n, p, e.what());
        }
    }

    template <class F>
    auto converted(const YAML::Node& n, const std::string& p, F&& convert) const {
        try {
            return convert(text(n, p));
        } catch (const std::invalid_argument& e) {
            fail(n, p, e.what());
        }
    }

private:
    std::string source_;
};

inline std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

inline IntRange read_range(const YamlReader& r, const YAML::Node& n, const std::string& p) {
    if (n.IsScalar()) {
        const int v = r.integer(n, p);
        return {v, v};
    }
    if (!n.IsSequence() || n.size() != 2) r.fail(n, p, "expected an integer or [lo, hi]");
    return {r.integer(n[0], p + "[0]"), r.integer(n[1], p + "[1]")};
}

inline Vec2 read_point(const YamlReader& r, const YAML::Node& n, const std::string& p) {
    if (!n.IsSequence() || n.size() != 2) r.fail(n, p, "expected [x, y]");
    return {r.real(n[0], p + "[0]"), r.real(n[1], p + "[1]")};
}

inline void read_channel(const YamlReader& r, const YAML::Node& n, const std::string& p, ChannelParams& c) {
    r.map_keys(n, p, {"frequency_ghz", "noise_floor_dbm", "wall_loss_db", "breakpoint_m", "min_distance_m"});
    if (n["frequency_ghz"]) c.frequency_ghz = r.real(n["frequency_ghz"], join(p, "frequency_ghz"));
    if (n["noise_floor_dbm"]) c.noise_floor_dbm = r.real(n["noise_floor_dbm"], join(p, "noise_floor_dbm"));
    if (n["wall_loss_db"]) c.wall_loss_db = r.real(n["wall_loss_db"], join(p, "wall_loss_db"));
    if (n["breakpoint_m"]) c.breakpoint_m = r.real(n["breakpoint_m"], join(p, "breakpoint_m"));
    if (n["min_distance_m"]) c.min_distance_m = r.real(n["min_distance_m"], join(p, "min_distance_m"));
    r.validated(n, p, [&] { c.validate(); });
}

inline void read_layout(const YamlReader& r, const YAML::Node& n, const std::string& p, ExplicitLayout& l) {
    r.map_keys(n, p, {"aps", "stations", "walls"});
    if (const auto aps = n["aps"]) {
        if (!aps.IsSequence()) r.fail(aps, p + ".aps", "expected a list of [x, y]");
        for (std::size_t i = 0; i < aps.size(); ++i) l.aps.push_back(read_point(r, aps[i], p + ".aps[" + std::to_string(i) + "]"));
    }
    if (const auto st = n["stations"]) {
        if (!st.IsSequence()) r.fail(st, p + ".stations", "expected a list of [x, y, ap]");
        for (std::size_t i = 0; i < st.size(); ++i) {
            const std::string q = p + ".stations[" + std::to_string(i) + "]";
            if (!st[i].IsSequence() || st[i].size() != 3) r.fail(st[i], q, "expected [x, y, ap]");
            const int ap = r.integer(st[i][2], q + "[2]");
            if (ap < 0 || static_cast<std::size_t>(ap) >= l.aps.size()) r.fail(st[i][2], q + "[2]", "unknown AP index");
            l.stations.push_back({{r.real(st[i][0], q + "[0]"), r.real(st[i][1], q + "[1]")}, ap});
        }
    }
    if (const auto w = n["walls"]) {
        if (!w.IsSequence()) r.fail(w, p + ".walls", "expected a list of [x1, y1, x2, y2]");
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::string q = p + ".walls[" + std::to_string(i) + "]";
            if (!w[i].IsSequence() || w[i].size() != 4) r.fail(w[i], q, "expected [x1, y1, x2, y2]");
            l.walls.push_back({{r.real(w[i][0], q + "[0]"), r.real(w[i][1], q + "[1]")},
                               {r.real(w[i][2], q + "[2]"), r.real(w[i][3], q + "[3]")}});
        }
    }
}

/// Either an explicit {ap: cluster} map or {block: [rows, cols]} for grids.
inline std::map<int, int> read_clusters(const YamlReader& r, const YAML::Node& n, const std::string& p,
                                        const ScenarioSpec& s) {
    if (!n.IsMap()) r.fail(n, p, "expected a mapping");
    if (n["block"]) {
        r.map_keys(n, p, {"block"});
        const auto b = n["block"];
        if (!b.IsSequence() || b.size() != 2) r.fail(b, p + ".block", "expected [block_rows, block_cols]");
        const int br = r.integer(b[0], p + ".block[0]");
        const int bc = r.integer(b[1], p + ".block[1]");
        if (br < 1 || bc < 1) r.fail(b, p + ".block", "block sizes must be positive");
        if (s.kind != ScenarioKind::multi_room && s.kind != ScenarioKind::symmetric_enterprise) {
            r.fail(b, p + ".block", "block clusters need a grid scenario");
        }
        return block_clusters(s.rows, s.cols, br, bc);
    }
    std::map<int, int> out;
    for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        out[r.integer(kv.first, join(p, key))] = r.integer(kv.second, join(p, key));
    }
    return out;
}

inline void read_scenario(const YamlReader& r, const YAML::Node& n, const std::string& p, ScenarioSpec& s) {
    r.map_keys(n, p,
               {"kind", "rows", "cols", "room_size", "area_side", "ap_count", "stations_per_ap", "station_spread", "seed",
                "clusters", "legacy_ap_count", "channel", "layout"});
    if (n["kind"]) s.kind = r.converted(n["kind"], p + ".kind", scenario_kind_from_string);
    if (n["rows"]) s.rows = r.integer(n["rows"], p + ".rows");
    if (n["cols"]) s.cols = r.integer(n["cols"], p + ".cols");
    if (n["room_size"]) s.room_size = r.real(n["room_size"], p + ".room_size");
    if (n["area_side"]) s.area_side = r.real(n["area_side"], p + ".area_side");
    if (n["ap_count"]) s.ap_count = read_range(r, n["ap_count"], p + ".ap_count");
    if (n["stations_per_ap"]) s.stations_per_ap = read_range(r, n["stations_per_ap"], p + ".stations_per_ap");
    if (n["station_spread"]) s.station_spread = r.real(n["station_spread"], p + ".station_spread");
    if (n["seed"]) s.seed = r.unsigned_int(n["seed"], p + ".seed");
    if (n["legacy_ap_count"]) s.legacy_ap_count = r.integer(n["legacy_ap_count"], p + ".legacy_ap_count");
    if (n["channel"]) read_channel(r, n["channel"], p + ".channel", s.channel);
    if (n["layout"]) read_layout(r, n["layout"], p + ".layout", s.layout);
    if (n["clusters"]) s.clusters = read_clusters(r, n["clusters"], p + ".clusters", s);
    r.validated(n, p, [&] { s.validate(); });
}

inline void read_bandit(const YamlReader& r, const YAML::Node& n, const std::string& p, BanditParams& b) {
    r.map_keys(n, p,
               {"kind", "epsilon", "epsilon_decay", "temperature", "temperature_decay", "ucb_c", "prior_mean",
                "prior_variance", "noise_variance"});
    if (n["kind"]) b.kind = r.converted(n["kind"], p + ".kind", bandit_kind_from_string);
    if (n["epsilon"]) b.epsilon = r.real(n["epsilon"], p + ".epsilon");
    if (n["epsilon_decay"]) b.epsilon_decay = r.real(n["epsilon_decay"], p + ".epsilon_decay");
    if (n["temperature"]) b.temperature = r.real(n["temperature"], p + ".temperature");
    if (n["temperature_decay"]) b.temperature_decay = r.real(n["temperature_decay"], p + ".temperature_decay");
    if (n["ucb_c"]) b.ucb_c = r.real(n["ucb_c"], p + ".ucb_c");
    if (n["prior_mean"]) b.prior_mean = r.real(n["prior_mean"], p + ".prior_mean");
    if (n["prior_variance"]) b.prior_variance = r.real(n["prior_variance"], p + ".prior_variance");
    if (n["noise_variance"]) b.noise_variance = r.real(n["noise_variance"], p + ".noise_variance");
    r.validated(n, p, [&] { b.validate(); });
}

}  // namespace detail

/// Parses YAML text; `source` names it in diagnostics.
inline ExperimentConfig parse_config(const std::string& yaml, const std::string& source = "<config>") {
    const detail::YamlReader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                          ": " + e.msg);
    }
    ExperimentConfig c;
    if (root.IsNull()) return c;
    r.map_keys(root, "",
               {"policy", "steps", "repetitions", "seed", "seeds", "mutation_step", "output", "format", "workers",
                "scenario", "power", "mcs", "sim", "sr", "bandit", "hierarchy", "convergence", "optimizer"});
    if (root["policy"]) c.policy = r.converted(root["policy"], "policy", policy_kind_from_string);
    if (root["steps"]) c.steps = r.integer(root["steps"], "steps");
    if (root["repetitions"]) c.repetitions = r.integer(root["repetitions"], "repetitions");
    if (root["seed"]) c.seed = r.unsigned_int(root["seed"], "seed");
    if (const auto s = root["seeds"]) {
        if (!s.IsSequence()) r.fail(s, "seeds", "expected a list of integers");
        for (std::size_t i = 0; i < s.size(); ++i) c.seeds.push_back(r.unsigned_int(s[i], "seeds[" + std::to_string(i) + "]"));
        if (!root["repetitions"]) c.repetitions = static_cast<int>(c.seeds.size());
    }
    if (root["mutation_step"]) c.mutation_step = r.integer(root["mutation_step"], "mutation_step");
    if (root["output"]) c.output = r.text(root["output"], "output");
    if (root["format"]) c.format = r.converted(root["format"], "format", output_format_from_string);
    if (root["workers"]) c.workers = r.integer(root["workers"], "workers");

    if (const auto n = root["power"]) {
        r.map_keys(n, "power", {"min_dbm", "max_dbm", "levels_dbm"});
        if (n["min_dbm"]) c.power.min_power_dbm = r.real(n["min_dbm"], "power.min_dbm");
        if (n["max_dbm"]) c.power.max_power_dbm = r.real(n["max_dbm"], "power.max_dbm");
        if (n["levels_dbm"]) c.power.levels_dbm = r.reals(n["levels_dbm"], "power.levels_dbm");
        r.validated(n, "power", [&] { c.power.validate(); });
    }
    c.scenario.max_power_dbm = c.power.max_power_dbm;
    if (root["scenario"]) detail::read_scenario(r, root["scenario"], "scenario", c.scenario);

    if (const auto n = root["mcs"]) {
        r.map_keys(n, "mcs", {"rates_mbps", "min_sinr_db"});
        if (n["rates_mbps"]) c.mcs.rates_mbps = r.reals(n["rates_mbps"], "mcs.rates_mbps");
        if (n["min_sinr_db"]) c.mcs.min_sinr_db = r.reals(n["min_sinr_db"], "mcs.min_sinr_db");
        r.validated(n, "mcs", [&] { c.mcs.validate(); });
    }
    if (const auto n = root["sim"]) {
        r.map_keys(n, "sim", {"txop_duration_s", "frame_size_bytes", "reward_normalizer_mbps"});
        if (n["txop_duration_s"]) c.sim.txop_duration_s = r.real(n["txop_duration_s"], "sim.txop_duration_s");
        if (n["frame_size_bytes"]) c.sim.frame_size_bytes = r.integer(n["frame_size_bytes"], "sim.frame_size_bytes");
        if (n["reward_normalizer_mbps"]) {
            c.sim.reward_normalizer_mbps = r.real(n["reward_normalizer_mbps"], "sim.reward_normalizer_mbps");
        }
        r.validated(n, "sim", [&] { c.sim.validate(); });
    }
    if (const auto n = root["sr"]) {
        r.map_keys(n, "sr", {"obss_pd_dbm", "max_power_reduction_db"});
        if (n["obss_pd_dbm"]) c.sr.obss_pd_dbm = r.real(n["obss_pd_dbm"], "sr.obss_pd_dbm");
        if (n["max_power_reduction_db"]) {
            c.sr.max_power_reduction_db = r.real(n["max_power_reduction_db"], "sr.max_power_reduction_db");
        }
    }
    if (root["bandit"]) detail::read_bandit(r, root["bandit"], "bandit", c.bandit);
    if (const auto n = root["hierarchy"]) {
        r.map_keys(n, "hierarchy", {"level1", "level2", "level3"});
        if (n["level1"]) detail::read_bandit(r, n["level1"], "hierarchy.level1", c.hierarchy.level1);
        if (n["level2"]) detail::read_bandit(r, n["level2"], "hierarchy.level2", c.hierarchy.level2);
        if (n["level3"]) detail::read_bandit(r, n["level3"], "hierarchy.level3", c.hierarchy.level3);
    }
    if (const auto n = root["convergence"]) {
        r.map_keys(n, "convergence", {"alpha", "beta", "threshold", "patience", "smoothing"});
        if (n["alpha"]) c.convergence.alpha = r.real(n["alpha"], "convergence.alpha");
        if (n["beta"]) c.convergence.beta = r.real(n["beta"], "convergence.beta");
        if (n["threshold"]) c.convergence.threshold = r.real(n["threshold"], "convergence.threshold");
        if (n["patience"]) c.convergence.patience = r.integer(n["patience"], "convergence.patience");
        if (n["smoothing"]) c.convergence.smoothing = r.real(n["smoothing"], "convergence.smoothing");
        r.validated(n, "convergence", [&] { c.convergence.validate(); });
    }
    if (const auto n = root["optimizer"]) {
        r.map_keys(n, "optimizer", {"power_mode", "tolerance", "node_limit", "export_dir"});
        if (n["power_mode"]) c.optimizer.power_mode = r.converted(n["power_mode"], "optimizer.power_mode", power_mode_from_string);
        if (n["tolerance"]) c.optimizer.tolerance = r.real(n["tolerance"], "optimizer.tolerance");
        if (n["node_limit"]) c.optimizer.node_limit = r.long_int(n["node_limit"], "optimizer.node_limit");
        if (n["export_dir"]) c.optimizer.export_dir = r.text(n["export_dir"], "optimizer.export_dir");
    }
    r.validated(root, "", [&] { c.validate(); });
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) c.output = dir;
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

}  // namespace csr
