#include <gtest/gtest.h>

#include <map>
#include <set>

#include "csr/sim.hpp"

using namespace csr;

namespace {

Network line_pair(double sep) {
    std::vector<AccessPoint> aps{{ApId{0}, {0, 0}, 16.0, true, std::nullopt}, {ApId{1}, {sep, 0}, 16.0, true, std::nullopt}};
    std::vector<Station> st{{StationId{0}, {-1, 0}, ApId{0}}, {StationId{1}, {sep + 1, 0}, ApId{1}}};
    return Network(aps, st, {}, ChannelParams{});
}

class CountingPolicy final : public Policy {
public:
    TransmissionConfig propose(const Network& net, SharingPair pair, Rng&) override {
        ++proposals;
        return single_link(net, pair);
    }
    void update(double r) override { rewards.push_back(r); }
    std::string name() const override { return "counting"; }

    int proposals = 0;
    std::vector<double> rewards;
};

}  // namespace

TEST(Txop, QuantizedSingleLink) {
    const Network net = line_pair(200);
    const auto mcs = McsTable::ax_20mhz();
    const SimParams sim;
    const auto r = execute_txop({{{ApId{0}, StationId{0}, 16.0}}}, net, mcs, sim);
    ASSERT_EQ(r.per_link.size(), 1u);
    EXPECT_EQ(r.per_link[0].mcs, 11u);
    // floor(143.4e6 * 5.484e-3 / 12000) = 65 frames.
    EXPECT_EQ(r.per_link[0].delivered_bytes, 65 * 1500);
    EXPECT_NEAR(r.effective_rate_mbps, 142.2319474835886, 1e-9);
    EXPECT_NEAR(r.reward, 142.2319474835886 / (143.4 * 2), 1e-12);
}

TEST(Txop, FarApartPairDoublesRate) {
    const Network net = line_pair(500);
    const auto r = execute_txop({{{ApId{0}, StationId{0}, 16.0}, {ApId{1}, StationId{1}, 16.0}}}, net,
                                McsTable::ax_20mhz(), SimParams{});
    EXPECT_NEAR(r.effective_rate_mbps, 2 * 142.2319474835886, 1e-9);
    EXPECT_LE(r.reward, 1.0);
}

TEST(Txop, RewardClippedAndCustomNormalizer) {
    const Network net = line_pair(200);
    SimParams sim;
    sim.reward_normalizer_mbps = 10.0;
    const auto r = execute_txop({{{ApId{0}, StationId{0}, 16.0}}}, net, McsTable::ax_20mhz(), sim);
    EXPECT_DOUBLE_EQ(r.reward, 1.0);
}

TEST(Txop, EmptyConfigDeliversNothing) {
    const auto r = execute_txop({}, line_pair(50), McsTable::ax_20mhz(), SimParams{});
    EXPECT_EQ(r.effective_rate_mbps, 0.0);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(Txop, BackgroundOnlyInterferes) {
    const Network net = line_pair(15);
    const auto mcs = McsTable::ax_20mhz();
    const TransmissionConfig cfg{{{ApId{0}, StationId{0}, 16.0}}};
    const std::vector<Transmission> bg{{ApId{1}, StationId{1}, 16.0}};
    const auto alone = execute_txop(cfg, net, mcs, SimParams{});
    const auto noisy = execute_txop(cfg, net, mcs, SimParams{}, bg);
    EXPECT_EQ(noisy.per_link.size(), 1u);
    EXPECT_LT(noisy.per_link[0].sinr_db, alone.per_link[0].sinr_db);
    EXPECT_LE(noisy.effective_rate_mbps, alone.effective_rate_mbps);
}

TEST(Config, RejectsInvalid) {
    const Network net = line_pair(50);
    const auto mcs = McsTable::ax_20mhz();
    auto expect_invalid = [&](const TransmissionConfig& cfg) {
        try {
            execute_txop(cfg, net, mcs, SimParams{});
            FAIL();
        } catch (const std::invalid_argument& e) {
            EXPECT_EQ(std::string(e.what()).rfind("invalid configuration", 0), 0u);
        }
    };
    expect_invalid({{{ApId{0}, StationId{1}, 16.0}}});
    expect_invalid({{{ApId{0}, StationId{0}, 16.0}, {ApId{0}, StationId{0}, 10.0}}});
    expect_invalid({{{ApId{0}, StationId{0}, 20.0}}});
    expect_invalid({{{ApId{5}, StationId{0}, 16.0}}});
    expect_invalid({{{ApId{0}, StationId{0}, std::nan("")}}});
}

TEST(Config, CanonicalId) {
    const TransmissionConfig a{{{ApId{1}, StationId{1}, 10.0}, {ApId{0}, StationId{0}, 16.0}}};
    const TransmissionConfig b{{{ApId{0}, StationId{0}, 16.0}, {ApId{1}, StationId{1}, 10.0}}};
    EXPECT_EQ(a.id(), "0:0@16|1:1@10");
    EXPECT_EQ(a.id(), b.id());
    EXPECT_TRUE(a.contains_ap(ApId{1}));
    EXPECT_FALSE(TransmissionConfig{}.contains_ap(ApId{0}));
}

TEST(Contention, UniformOverAps) {
    const Network net = gen_multi_room(2, 2, 20, 3);
    Rng rng(17);
    std::map<int, int> counts;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const auto p = select_sharing_pair(net, rng);
        EXPECT_EQ(net.station(p.station).ap, p.ap);
        ++counts[p.ap.value];
    }
    for (const auto& [ap, c] : counts) EXPECT_NEAR(c, n / 4, n / 4 * 0.05);
}

TEST(Contention, SameDrawsAsSelectionWithoutLegacy) {
    const Network net = gen_multi_room(2, 2, 20, 3);
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(contend(net, a), select_sharing_pair(net, b));
}

TEST(Contention, LegacyApsCompete) {
    const Network net = add_legacy_aps(gen_multi_room(2, 2, 20, 3), 4, 9);
    Rng rng(2);
    int legacy = 0;
    const int n = 8000;
    for (int i = 0; i < n; ++i) legacy += !net.ap(contend(net, rng).ap).coordinated;
    EXPECT_NEAR(legacy, n / 2, n * 0.03);
    Rng r2(2);
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(net.ap(select_sharing_pair(net, r2).ap).coordinated);
}

TEST(Dcf, OneTransmitterAtMaxPower) {
    const Network net = gen_multi_room(2, 2, 20, 3);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto r = dcf_txop(net, McsTable::ax_20mhz(), SimParams{}, rng);
        EXPECT_EQ(r.per_link.size(), 1u);
        EXPECT_GT(r.effective_rate_mbps, 0.0);
    }
}

TEST(SpatialReuse, DistantApJoinsWithReducedPower) {
    // 16 dBm through ~101 dB at 100 m: detected near -85 dBm, margin above the cap.
    const Network net = line_pair(100);
    Rng rng(3);
    const auto cfg = sr_config(net, {ApId{0}, StationId{0}}, SrParams{}, rng);
    ASSERT_EQ(cfg.entries.size(), 2u);
    EXPECT_DOUBLE_EQ(cfg.entries[1].power_dbm, 16.0 - 12.0);
}

TEST(SpatialReuse, MarginBelowCap) {
    const Network net = line_pair(60);
    const double detected = 16.0 - net.ap_to_ap_loss_db(ApId{0}, ApId{1});
    ASSERT_LT(detected, -72.0);
    ASSERT_GT(detected, -84.0);
    Rng rng(3);
    const auto cfg = sr_config(net, {ApId{0}, StationId{0}}, SrParams{}, rng);
    ASSERT_EQ(cfg.entries.size(), 2u);
    EXPECT_NEAR(cfg.entries[1].power_dbm, 16.0 - (-72.0 - detected), 1e-9);
}

TEST(SpatialReuse, CloseApDefers) {
    const Network net = line_pair(5);
    Rng rng(3);
    EXPECT_EQ(sr_config(net, {ApId{0}, StationId{0}}, SrParams{}, rng).entries.size(), 1u);
}

TEST(Episode, DeterministicAndPolicyUpdatedOncePerStep) {
    const Network net = gen_multi_room(2, 2, 20, 3);
    CountingPolicy p1, p2;
    const auto a = run_episode(p1, net, McsTable::ax_20mhz(), SimParams{}, 300, 77);
    const auto b = run_episode(p2, net, McsTable::ax_20mhz(), SimParams{}, 300, 77);
    ASSERT_EQ(a.size(), 300u);
    EXPECT_EQ(p1.proposals, 300);
    EXPECT_EQ(p1.rewards.size(), 300u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].config_id, b[i].config_id);
        EXPECT_EQ(a[i].result.effective_rate_mbps, b[i].result.effective_rate_mbps);
    }
}

TEST(Episode, LegacyWinnerSkipsPolicy) {
    const Network net = add_legacy_aps(gen_multi_room(2, 2, 20, 3), 4, 1);
    CountingPolicy p;
    const auto recs = run_episode(p, net, McsTable::ax_20mhz(), SimParams{}, 1000, 4);
    int legacy = 0;
    for (const auto& r : recs) legacy += !r.coordinated_winner;
    EXPECT_GT(legacy, 0);
    EXPECT_EQ(p.proposals, 1000 - legacy);
    EXPECT_EQ(static_cast<int>(p.rewards.size()), 1000 - legacy);
}

TEST(Episode, LegacyBackgroundFollowsHostSilence) {
    const Network net = add_legacy_aps(gen_multi_room(2, 2, 20, 3), 4, 1);
    Rng rng(1);
    const TransmissionConfig host0{{{ApId{0}, net.served_by(ApId{0})[0], 16.0}}};
    const auto bg = legacy_background(net, host0, rng);
    EXPECT_EQ(bg.size(), 3u);
    for (const auto& t : bg) {
        EXPECT_FALSE(net.ap(t.ap).coordinated);
        EXPECT_NE(*legacy_host(net, t.ap), ApId{0});
    }
}

TEST(Episode, MutationChangesPositionsOnce) {
    ScenarioSpec spec;
    const Network net = build_network(spec);
    DcfPolicy p;
    std::set<int> changes;
    std::optional<Network> prev;
    run_episode(p, net, McsTable::ax_20mhz(), SimParams{}, 20, 3, MutationPlan{10, spec, 5},
                [&](int step, const Network& n) {
                    if (prev && !(*prev == n)) changes.insert(step);
                    prev = n;
                });
    EXPECT_EQ(changes, std::set<int>{10});
}

TEST(Episode, RejectsZeroSteps) {
    DcfPolicy p;
    EXPECT_THROW(run_episode(p, line_pair(10), McsTable::ax_20mhz(), SimParams{}, 0, 1), std::invalid_argument);
}

TEST(Contention, PerStationShareWithinTwoPercent) {
    const Network net = gen_multi_room(2, 2, 20, 3);
    Rng rng(23);
    std::vector<int> counts(net.stations().size(), 0);
    const int n = 1000000;
    for (int i = 0; i < n; ++i) ++counts[select_sharing_pair(net, rng).station.index()];
    const double expected = static_cast<double>(n) / 16.0;
    for (int c : counts) EXPECT_NEAR(c, expected, 0.02 * expected);
}
