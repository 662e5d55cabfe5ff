#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csr/experiment.hpp"

using namespace csr;

namespace {

ExperimentConfig small(PolicyKind policy, int steps = 200, int reps = 3) {
    ExperimentConfig c;
    c.policy = policy;
    c.steps = steps;
    c.repetitions = reps;
    c.seed = 5;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("csr_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Experiment, WorkersDoNotChangeResults) {
    auto a = small(PolicyKind::hmab);
    auto b = a;
    b.workers = 3;
    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    ASSERT_EQ(ra.repetitions.size(), 3u);
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_EQ(ra.repetitions[r].seed, 5u + r);
        ASSERT_EQ(ra.repetitions[r].records.size(), rb.repetitions[r].records.size());
        for (std::size_t t = 0; t < ra.repetitions[r].records.size(); ++t) {
            EXPECT_EQ(ra.repetitions[r].records[t].config_id, rb.repetitions[r].records[t].config_id);
        }
    }
    EXPECT_EQ(ra.summary.dump(), rb.summary.dump());
}

TEST(Experiment, SummaryFields) {
    const auto res = run_experiment(small(PolicyKind::sr));
    const auto& s = res.summary;
    for (const char* key : {"header", "policy", "mean_effective_rate_mbps", "tail_effective_rate_mbps",
                            "coordinated_winner_rate_mbps", "convergence", "stations", "station_cdf", "series"}) {
        EXPECT_TRUE(s.contains(key)) << key;
    }
    EXPECT_EQ(s["policy"], "sr");
    EXPECT_EQ(s["stations"].size(), 16u);
    EXPECT_EQ(s["station_cdf"].size(), 16u);
    EXPECT_EQ(s["series"]["mean"].size(), 200u);
    EXPECT_EQ(s["header"]["seeds"], nlohmann::json({5, 6, 7}));
    double txops = 0;
    for (const auto& st : s["stations"]) txops += st["mean_txop_count"].get<double>();
    EXPECT_GE(txops, 200.0);
}

TEST(Experiment, HmabSummaryHasConvergenceStep) {
    auto c = small(PolicyKind::hmab, 10000, 10);
    c.workers = 4;
    const auto res = run_experiment(c);
    EXPECT_TRUE(res.summary["convergence"]["converged"].get<bool>());
    EXPECT_TRUE(res.summary["convergence"]["step"].is_number_integer());
}

TEST(Experiment, CsvOutput) {
    const auto dir = scratch("csv");
    const auto res = run_experiment(small(PolicyKind::dcf, 50, 2));
    const auto files = write_outputs(res, dir);
    ASSERT_EQ(files.size(), 2u);
    const std::string csv = slurp(dir / "steps.csv");
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        ASSERT_FALSE(line.empty());
        EXPECT_EQ(line.back(), '\r');
        lines.push_back(line.substr(0, line.size() - 1));
    }
    ASSERT_EQ(lines.size(), 2u + 100u);
    EXPECT_EQ(lines[0].rfind("# {", 0), 0u);
    EXPECT_EQ(nlohmann::json::parse(lines[0].substr(2))["config"]["policy"], "dcf");
    EXPECT_EQ(lines[1].rfind("step,repetition,seed,sharing_ap,config_id,effective_rate_mbps,reward,sta0_bytes", 0), 0u);
    EXPECT_EQ(lines[2].rfind("0,0,5,", 0), 0u);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(summary["policy"], "dcf");
    std::filesystem::remove_all(dir);
}

TEST(Experiment, JsonOutputAndRepeatability) {
    const auto d1 = scratch("json1");
    const auto d2 = scratch("json2");
    auto c = small(PolicyKind::flat_mab, 60, 2);
    c.format = OutputFormat::json;
    write_outputs(run_experiment(c), d1);
    write_outputs(run_experiment(c), d2);
    const auto steps = nlohmann::json::parse(slurp(d1 / "steps.json"));
    EXPECT_EQ(steps["steps"].size(), 120u);
    EXPECT_EQ(slurp(d1 / "steps.json"), slurp(d2 / "steps.json"));
    EXPECT_EQ(slurp(d1 / "summary.json"), slurp(d2 / "summary.json"));
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST(Experiment, OptimalPolicyWritesSchedule) {
    const auto dir = scratch("opt");
    auto c = small(PolicyKind::t_optimal);
    const auto res = run_experiment(c);
    ASSERT_TRUE(res.schedule);
    const auto files = write_outputs(res, dir);
    ASSERT_EQ(files.size(), 1u);
    const auto j = nlohmann::json::parse(slurp(dir / "schedule.json"));
    EXPECT_EQ(j["mode"], "throughput");
    EXPECT_TRUE(j.contains("header"));
    EXPECT_GT(j["objective"].get<double>(), 0.0);
    std::filesystem::remove_all(dir);
}

TEST(Experiment, MutationAndClusteredPolicies) {
    auto c = small(PolicyKind::clustered_hmab, 100, 1);
    c.scenario.rows = 2;
    c.scenario.cols = 4;
    c.scenario.clusters = block_clusters(2, 4, 2, 2);
    c.mutation_step = 50;
    const auto res = run_experiment(c);
    EXPECT_EQ(res.repetitions[0].records.size(), 100u);
    const auto state = inspect_agent(c, 5);
    EXPECT_EQ(state["state"]["type"], "clustered");
    EXPECT_EQ(state["state"]["clusters"].size(), 2u);
}

TEST(Experiment, Validation) {
    auto c = small(PolicyKind::clustered_flat);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small(PolicyKind::hmab);
    c.mutation_step = 500;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small(PolicyKind::hmab);
    c.seeds = {1, 2};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_THROW(inspect_agent(small(PolicyKind::dcf), 1), std::invalid_argument);
    EXPECT_THROW(policy_kind_from_string("x"), std::invalid_argument);
    EXPECT_EQ(policy_kind_from_string("f_optimal"), PolicyKind::f_optimal);
}

TEST(Experiment, ParallelForRethrowsFirstError) {
    try {
        parallel_for(8, 4, [](int r) {
            if (r == 5) throw std::runtime_error("five");
            if (r == 2) throw std::runtime_error("two");
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "two");
    }
}

TEST(Output, CsvQuoting) {
    EXPECT_EQ(csv_field("0:1@16|1:5@4"), "0:1@16|1:5@4");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(fmt_num(0.1), "0.1");
    EXPECT_EQ(fmt_num(142.2319474835886), "142.2319475");
}

TEST(Sweep, GridsAndRows) {
    EXPECT_EQ(grid_for(4), std::make_pair(2, 2));
    EXPECT_EQ(grid_for(6), std::make_pair(2, 3));
    EXPECT_EQ(grid_for(9), std::make_pair(3, 3));
    EXPECT_EQ(grid_for(7), std::make_pair(1, 7));
    const auto res = run_scalability_sweep(ScenarioSpec{}, {1, 2, 4}, 2);
    EXPECT_EQ(res.rows.size(), 6u);
    EXPECT_EQ(res.rows[3].ap_count, 2);
    EXPECT_EQ(res.rows[3].seed, 2u);
    std::ostringstream os;
    write_sweep_csv(os, res, {{"x", 1}});
    const std::string text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
    EXPECT_THROW(run_scalability_sweep(ScenarioSpec{}, {4, 2}, 1), std::invalid_argument);
}

TEST(Sweep, SlopeFromRows) {
    // wall time = n^2 gives slope 2 in log-log space.
    std::vector<SweepRow> rows;
    for (int n : {2, 4, 8}) rows.push_back({n, 0, 0, static_cast<double>(n * n), 0, 0});
    EXPECT_NEAR(scaling_slope(rows), 2.0, 1e-12);
}
