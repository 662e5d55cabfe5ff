#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "csr/config.hpp"

using namespace csr;

namespace {

std::string error_of(const std::string& yaml) {
    try {
        parse_config(yaml, "test.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

class NoEnv : public ::testing::Test {
protected:
    void SetUp() override { unsetenv(kOutputDirEnv); }
    void TearDown() override { unsetenv(kOutputDirEnv); }
};

}  // namespace

TEST_F(NoEnv, EmptyDocumentGivesDefaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c.policy, PolicyKind::hmab);
    EXPECT_EQ(c.repetitions, 10);
    EXPECT_EQ(c.steps, 10000);
    EXPECT_EQ(c.scenario.kind, ScenarioKind::multi_room);
}

TEST_F(NoEnv, FullDocument) {
    const auto c = parse_config(R"(
policy: clustered_flat
steps: 500
seed: 9
mutation_step: 250
output: results/x
format: json
workers: 3
scenario:
  kind: multi_room
  rows: 4
  cols: 4
  room_size: 15
  legacy_ap_count: 2
  clusters: {block: [2, 2]}
  channel: {wall_loss_db: 5}
power: {min_dbm: 2, max_dbm: 18, levels_dbm: [2, 10, 18]}
sim: {txop_duration_s: 0.001}
bandit: {kind: thompson, prior_mean: 0.3}
hierarchy:
  level1: {ucb_c: 2.0}
convergence: {threshold: 0.002, patience: 30, smoothing: 0.05}
optimizer: {power_mode: grid, node_limit: 1000}
)");
    EXPECT_EQ(c.policy, PolicyKind::clustered_flat);
    EXPECT_EQ(c.steps, 500);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.mutation_step, 250);
    EXPECT_EQ(c.output, std::filesystem::path("results/x"));
    EXPECT_EQ(c.format, OutputFormat::json);
    EXPECT_EQ(c.workers, 3);
    EXPECT_EQ(c.scenario.rows, 4);
    EXPECT_DOUBLE_EQ(c.scenario.room_size, 15);
    EXPECT_EQ(c.scenario.legacy_ap_count, 2);
    ASSERT_TRUE(c.scenario.clusters);
    EXPECT_EQ(c.scenario.clusters->size(), 16u);
    EXPECT_EQ(c.scenario.clusters->at(15), 3);
    EXPECT_DOUBLE_EQ(c.scenario.channel.wall_loss_db, 5);
    EXPECT_DOUBLE_EQ(c.scenario.max_power_dbm, 18);
    EXPECT_EQ(c.power.levels_dbm, (std::vector<double>{2, 10, 18}));
    EXPECT_DOUBLE_EQ(c.sim.txop_duration_s, 0.001);
    EXPECT_EQ(c.bandit.kind, BanditKind::thompson);
    EXPECT_DOUBLE_EQ(c.bandit.prior_mean, 0.3);
    EXPECT_DOUBLE_EQ(c.hierarchy.level1.ucb_c, 2.0);
    EXPECT_DOUBLE_EQ(c.hierarchy.level3.ucb_c, 0.1);
    EXPECT_EQ(c.convergence.patience, 30);
    EXPECT_DOUBLE_EQ(c.convergence.smoothing, 0.05);
    EXPECT_EQ(c.optimizer.power_mode, PowerMode::grid);
    EXPECT_EQ(c.optimizer.node_limit, 1000);
}

TEST_F(NoEnv, SeedsListSetsRepetitions) {
    const auto c = parse_config("seeds: [4, 8, 15]\n");
    EXPECT_EQ(c.repetitions, 3);
    EXPECT_EQ(c.resolved_seeds(), (std::vector<std::uint64_t>{4, 8, 15}));
    const auto d = parse_config("seed: 7\nrepetitions: 3\n");
    EXPECT_EQ(d.resolved_seeds(), (std::vector<std::uint64_t>{7, 8, 9}));
}

TEST_F(NoEnv, ExplicitLayoutAndClusterMap) {
    const auto c = parse_config(R"(
scenario:
  kind: explicit
  layout:
    aps: [[0, 0], [30, 0]]
    stations: [[1, 0, 0], [31, 0, 1]]
    walls: [[15, -5, 15, 5]]
  clusters: {0: 0, 1: 1}
)");
    EXPECT_EQ(c.scenario.kind, ScenarioKind::explicit_layout);
    EXPECT_EQ(c.scenario.layout.aps.size(), 2u);
    EXPECT_EQ(c.scenario.layout.stations[1].second, 1);
    EXPECT_EQ(c.scenario.layout.walls.size(), 1u);
    EXPECT_EQ(c.scenario.clusters->at(1), 1);
}

TEST_F(NoEnv, UnknownKeyReportsPathAndPosition) {
    const auto msg = error_of("steps: 10\nscenario:\n  rows: 2\n  colums: 3\n");
    EXPECT_NE(msg.find("test.yaml:4:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("scenario.colums"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST_F(NoEnv, TypeErrors) {
    EXPECT_NE(error_of("steps: many\n").find("field 'steps': expected an integer"), std::string::npos);
    EXPECT_NE(error_of("power: {levels_dbm: 3}\n").find("expected a list of numbers"), std::string::npos);
    EXPECT_NE(error_of("policy: greedy\n").find("field 'policy'"), std::string::npos);
    EXPECT_NE(error_of("scenario: {ap_count: [1, 2, 3]}\n").find("scenario.ap_count"), std::string::npos);
    EXPECT_NE(error_of("scenario:\n  kind: explicit\n  layout: {aps: [[0, 0]], stations: [[1, 0, 4]]}\n")
                  .find("unknown AP index"),
              std::string::npos);
}

TEST_F(NoEnv, RangeErrors) {
    EXPECT_FALSE(error_of("bandit: {epsilon: 2}\n").empty());
    EXPECT_FALSE(error_of("convergence: {patience: 0}\n").empty());
    EXPECT_FALSE(error_of("convergence: {smoothing: 1.5}\n").empty());
    EXPECT_FALSE(error_of("power: {levels_dbm: [30]}\n").empty());
    EXPECT_FALSE(error_of("steps: 0\n").empty());
    EXPECT_FALSE(error_of("scenario: {kind: open_space, clusters: {block: [1, 1]}}\n").empty());
}

TEST_F(NoEnv, SyntaxErrorHasPosition) {
    const auto msg = error_of("steps: [1, 2\n");
    EXPECT_EQ(msg.rfind("test.yaml:", 0), 0u) << msg;
}

TEST_F(NoEnv, EnvironmentOverridesOutput) {
    setenv(kOutputDirEnv, "/tmp/csr_env_out", 1);
    EXPECT_EQ(parse_config("output: a\n").output, std::filesystem::path("/tmp/csr_env_out"));
}

TEST_F(NoEnv, LoadFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "csr_test_config.yaml";
    {
        std::ofstream os(path);
        os << "policy: dcf\nsteps: 42\n";
    }
    const auto c = load_config(path);
    EXPECT_EQ(c.policy, PolicyKind::dcf);
    EXPECT_EQ(c.steps, 42);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path), ConfigError);
}

TEST_F(NoEnv, ShippedConfigsParse) {
    const std::filesystem::path dir = CSR_CONFIG_DIR;
    int n = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".yaml") continue;
        EXPECT_NO_THROW(load_config(e.path())) << e.path();
        ++n;
    }
    EXPECT_GT(n, 0);
}
