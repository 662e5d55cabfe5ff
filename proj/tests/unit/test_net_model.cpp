#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "csr/net_model.hpp"

using namespace csr;

namespace {

Network two_ap_line(double sep, Vec2 sta_a, Vec2 sta_b) {
    std::vector<AccessPoint> aps{{ApId{0}, {0, 0}, 16.0, true, std::nullopt}, {ApId{1}, {sep, 0}, 16.0, true, std::nullopt}};
    std::vector<Station> st{{StationId{0}, sta_a, ApId{0}}, {StationId{1}, sta_b, ApId{1}}};
    return Network(aps, st, {}, ChannelParams{});
}

}  // namespace

TEST(PathLoss, OneMetreAtFiveGigahertz) {
    const ChannelParams ch;
    // 40.05 + 20 log10(5 / 2.4) + 0
    EXPECT_NEAR(path_loss_db({0, 0}, {1, 0}, {}, ch), 46.4251, 0.01);
}

TEST(PathLoss, WallAddsItsLoss) {
    const ChannelParams ch;
    const std::vector<Segment> walls{{{0.5, -1}, {0.5, 1}}};
    EXPECT_NEAR(path_loss_db({0, 0}, {1, 0}, walls, ch), 53.4251, 0.01);
    EXPECT_EQ(count_wall_crossings({0, 0}, {1, 0}, walls), 1);
}

TEST(PathLoss, ContinuousAtBreakpoint) {
    const ChannelParams ch;
    const double at = path_loss_db({0, 0}, {ch.breakpoint_m, 0}, {}, ch);
    const double below = path_loss_db({0, 0}, {ch.breakpoint_m - 1e-9, 0}, {}, ch);
    const double above = path_loss_db({0, 0}, {ch.breakpoint_m + 1e-9, 0}, {}, ch);
    EXPECT_NEAR(at, 40.05 + 20 * std::log10(5.0 / 2.4) + 20.0, 1e-9);
    EXPECT_NEAR(below, at, 1e-6);
    EXPECT_NEAR(above, at, 1e-6);
}

TEST(PathLoss, BeyondBreakpointSlope) {
    const ChannelParams ch;
    EXPECT_NEAR(path_loss_db({0, 0}, {100, 0}, {}, ch) - path_loss_db({0, 0}, {10, 0}, {}, ch), 35.0, 1e-9);
}

TEST(PathLoss, ClampedAtMinimumDistance) {
    const ChannelParams ch;
    EXPECT_DOUBLE_EQ(path_loss_db({0, 0}, {0, 0}, {}, ch), path_loss_db({0, 0}, {ch.min_distance_m, 0}, {}, ch));
}

TEST(PathLoss, MonotoneInDistanceAndWalls) {
    const ChannelParams ch;
    std::vector<Segment> walls;
    double prev = -1.0;
    for (double d = 0.05; d < 200.0; d *= 1.3) {
        const double l = path_loss_db({0, 0}, {d, 0}, walls, ch);
        EXPECT_GE(l, prev);
        prev = l;
    }
    double prev_w = path_loss_db({0, 0}, {10, 0}, walls, ch);
    for (int k = 1; k <= 4; ++k) {
        walls.push_back({{2.0 * k, -1}, {2.0 * k, 1}});
        const double l = path_loss_db({0, 0}, {10, 0}, walls, ch);
        EXPECT_GT(l, prev_w);
        prev_w = l;
    }
}

TEST(PathLoss, SharedWallEndpointCountsOnce) {
    const std::vector<Segment> walls{{{5, -10}, {5, 0}}, {{5, 0}, {5, 10}}};
    EXPECT_EQ(count_wall_crossings({0, 0}, {10, 0}, walls), 1);
}

TEST(Sinr, SingleLinkEqualsSnr) {
    // RSSI -30.43 dBm: 16 dBm through 46.43 dB.
    ChannelParams ch;
    std::vector<AccessPoint> aps{{ApId{0}, {0, 0}, 16.0, true, std::nullopt}};
    std::vector<Station> st{{StationId{0}, {1, 0}, ApId{0}}};
    Network net(aps, st, {}, ch);
    const std::vector<Transmission> active{{ApId{0}, StationId{0}, 16.0}};
    const double rssi = 16.0 - path_loss_db({0, 0}, {1, 0}, {}, ch);
    EXPECT_NEAR(rssi, -30.43, 0.01);
    EXPECT_NEAR(sinr_db(net, Link{ApId{0}, StationId{0}}, active), rssi + 94.0, 1e-9);
    EXPECT_NEAR(sinr_db(net, Link{ApId{0}, StationId{0}}, active), 63.57, 0.01);
}

TEST(Sinr, CoLocatedEqualPowerGivesZeroDb) {
    ChannelParams ch;
    ch.noise_floor_dbm = -300.0;
    std::vector<AccessPoint> aps{{ApId{0}, {0, 0}, 16.0, true, std::nullopt}, {ApId{1}, {0, 0}, 16.0, true, std::nullopt}};
    std::vector<Station> st{{StationId{0}, {5, 0}, ApId{0}}, {StationId{1}, {0, 5}, ApId{1}}};
    Network net(aps, st, {}, ch);
    const std::vector<Transmission> active{{ApId{0}, StationId{0}, 16.0}, {ApId{1}, StationId{1}, 16.0}};
    EXPECT_NEAR(sinr_db(net, Link{ApId{0}, StationId{0}}, active), 0.0, 1e-9);
}

TEST(Sinr, InactiveLinkIsAnError) {
    const Network net = two_ap_line(30, {-3, 0}, {33, 0});
    const std::vector<Transmission> active{{ApId{0}, StationId{0}, 16.0}};
    EXPECT_THROW(sinr_db(net, Link{ApId{1}, StationId{1}}, active), std::invalid_argument);
}

TEST(Sinr, CollidingInnerStation) {
    // AP 0's station sits much closer to AP 1.
    const Network net = two_ap_line(40, {30, 0}, {45, 0});
    const std::vector<Transmission> active{{ApId{0}, StationId{0}, 16.0}, {ApId{1}, StationId{1}, 16.0}};
    const double s = sinr_db(net, Link{ApId{0}, StationId{0}}, active);
    EXPECT_LT(s, McsTable::ax_20mhz().min_sinr_db.front());
    EXPECT_FALSE(best_mcs(s, McsTable::ax_20mhz()).has_value());
}

TEST(Sinr, MonotoneInPowers) {
    const Network net = two_ap_line(20, {-3, 0}, {24, 0});
    const Link target{ApId{0}, StationId{0}};
    double prev = std::numeric_limits<double>::infinity();
    for (double p = 4; p <= 16; p += 1) {
        const std::vector<Transmission> active{{ApId{0}, StationId{0}, 10.0}, {ApId{1}, StationId{1}, p}};
        const double s = sinr_db(net, target, active);
        EXPECT_LT(s, prev);
        prev = s;
    }
    prev = -std::numeric_limits<double>::infinity();
    for (double p = 4; p <= 16; p += 1) {
        const std::vector<Transmission> active{{ApId{0}, StationId{0}, p}, {ApId{1}, StationId{1}, 10.0}};
        const double s = sinr_db(net, target, active);
        EXPECT_GT(s, prev);
        prev = s;
    }
}

TEST(Mcs, BelowLowestThreshold) {
    const auto t = McsTable::ax_20mhz();
    EXPECT_FALSE(best_mcs(t.min_sinr_db[0] - 0.1, t).has_value());
}

TEST(Mcs, SaturatesAtTop) {
    const auto t = McsTable::ax_20mhz();
    const auto c = best_mcs(1e9, t);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->index, t.size() - 1);
    EXPECT_DOUBLE_EQ(c->rate_mbps, t.rates_mbps.back());
}

TEST(Mcs, ThresholdIsInclusive) {
    const auto t = McsTable::ax_20mhz();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto c = best_mcs(t.min_sinr_db[k], t);
        ASSERT_TRUE(c);
        EXPECT_EQ(c->index, k);
        if (k > 0) {
            EXPECT_EQ(best_mcs(std::nextafter(t.min_sinr_db[k], -1e9), t)->index, k - 1);
        }
    }
}

TEST(Mcs, MonotoneInSinr) {
    const auto t = McsTable::ax_20mhz();
    double prev = 0.0;
    for (double s = -10; s < 60; s += 0.25) {
        const auto c = best_mcs(s, t);
        const double r = c ? c->rate_mbps : 0.0;
        EXPECT_GE(r, prev);
        prev = r;
    }
}

TEST(Mcs, AddingInterfererNeverRaisesRate) {
    const auto t = McsTable::ax_20mhz();
    const Network net = two_ap_line(25, {-4, 0}, {20, 0});
    const std::vector<Transmission> alone{{ApId{0}, StationId{0}, 16.0}};
    const std::vector<Transmission> both{{ApId{0}, StationId{0}, 16.0}, {ApId{1}, StationId{1}, 16.0}};
    const auto a = best_mcs(sinr_db(net, Link{ApId{0}, StationId{0}}, alone), t);
    const auto b = best_mcs(sinr_db(net, Link{ApId{0}, StationId{0}}, both), t);
    EXPECT_GE(a ? a->rate_mbps : 0.0, b ? b->rate_mbps : 0.0);
}

TEST(Mcs, TableValidation) {
    EXPECT_NO_THROW(McsTable::ax_20mhz().validate());
    EXPECT_THROW((McsTable{{1, 2}, {3}}).validate(), std::invalid_argument);
    EXPECT_THROW((McsTable{{1, 1}, {3, 4}}).validate(), std::invalid_argument);
    EXPECT_THROW((McsTable{{}, {}}).validate(), std::invalid_argument);
}

TEST(Units, RoundTrip) {
    for (double mw : {1e-12, 3.7e-6, 0.5, 1.0, 39.81, 1e4}) {
        EXPECT_NEAR(dbm_to_mw(mw_to_dbm(mw)), mw, 1e-9 * mw);
    }
}

TEST(Network, Invariants) {
    const Network net = two_ap_line(10, {1, 1}, {12, 0});
    EXPECT_EQ(net.served_by(ApId{0}).size(), 1u);
    EXPECT_EQ(net.links().size(), 2u);
    for (const auto& a : net.aps()) {
        for (const auto& s : net.stations()) {
            EXPECT_GT(net.loss(a.id, s.id), 0.0);
            EXPECT_TRUE(std::isfinite(net.loss(a.id, s.id)));
        }
    }
    std::vector<AccessPoint> aps{{ApId{0}, {0, 0}, 16.0, true, std::nullopt}};
    std::vector<Station> bad{{StationId{0}, {1, 0}, ApId{3}}};
    EXPECT_THROW(Network(aps, bad, {}, ChannelParams{}), std::invalid_argument);
}

TEST(Channel, Validation) {
    ChannelParams ch;
    ch.noise_floor_dbm = 1.0;
    EXPECT_THROW(ch.validate(), std::invalid_argument);
    ch = {};
    ch.wall_loss_db = -1;
    EXPECT_THROW(ch.validate(), std::invalid_argument);
    ch = {};
    ch.breakpoint_m = 0;
    EXPECT_THROW(ch.validate(), std::invalid_argument);
    ch = {};
    ch.min_distance_m = 0;
    EXPECT_THROW(ch.validate(), std::invalid_argument);
}

TEST(PowerConfig, LevelsWithinBounds) {
    PowerConfig p;
    EXPECT_NO_THROW(p.validate());
    p.levels_dbm = {2.0};
    EXPECT_THROW(p.validate(), std::invalid_argument);
}
