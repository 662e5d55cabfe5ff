#pragma once

// Radio-layer model shared by the simulator and the optimizer: node
// placement, TGax enterprise path loss, SINR and MCS selection.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csr/units.hpp"

namespace csr {

template <typename Tag>
struct StrongId {
    int value = -1;

    constexpr StrongId() = default;
    constexpr explicit StrongId(int v) : value(v) {}
    constexpr auto operator<=>(const StrongId&) const = default;
    constexpr std::size_t index() const { return static_cast<std::size_t>(value); }
};

using ApId = StrongId<struct ApTag>;
using StationId = StrongId<struct StationTag>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Segment {
    Vec2 a;
    Vec2 b;

    constexpr bool operator==(const Segment&) const = default;
};

struct Rect {
    Vec2 lo;
    Vec2 hi;

    constexpr bool operator==(const Rect&) const = default;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

struct ChannelParams {
    double frequency_ghz = 5.0;
    double noise_floor_dbm = -94.0;
    double wall_loss_db = 7.0;
    double breakpoint_m = 10.0;
    double min_distance_m = 0.1;

    void validate() const {
        if (!(noise_floor_dbm < 0.0)) throw std::invalid_argument("noise floor must be below 0 dBm");
        if (!(wall_loss_db >= 0.0)) throw std::invalid_argument("wall loss must be non-negative");
        if (!(breakpoint_m > 0.0)) throw std::invalid_argument("breakpoint distance must be positive");
        if (!(min_distance_m > 0.0)) throw std::invalid_argument("min distance must be positive");
        if (!(frequency_ghz > 0.0)) throw std::invalid_argument("frequency must be positive");
    }

    double noise_mw() const { return dbm_to_mw(noise_floor_dbm); }
};

/// Data rate and minimum SINR per MCS index.
struct McsTable {
    std::vector<double> rates_mbps;
    std::vector<double> min_sinr_db;

    /// 802.11ax, 20 MHz, one spatial stream, 800 ns guard interval.
    static McsTable ax_20mhz() {
        return {{8.6, 17.2, 25.8, 34.4, 51.6, 68.8, 77.4, 86.0, 103.2, 114.7, 129.0, 143.4},
                {2.0, 5.0, 9.0, 11.0, 15.0, 18.0, 20.0, 25.0, 29.0, 31.0, 34.0, 37.0}};
    }

    std::size_t size() const { return rates_mbps.size(); }
    double max_rate() const { return rates_mbps.back(); }

    void validate() const {
        if (rates_mbps.empty() || rates_mbps.size() != min_sinr_db.size()) {
            throw std::invalid_argument("MCS table needs equally sized, non-empty rate and SINR lists");
        }
        for (std::size_t i = 1; i < size(); ++i) {
            if (!(rates_mbps[i] > rates_mbps[i - 1]) || !(min_sinr_db[i] > min_sinr_db[i - 1])) {
                throw std::invalid_argument("MCS rates and thresholds must be strictly increasing");
            }
        }
    }
};

struct McsChoice {
    std::size_t index = 0;
    double rate_mbps = 0.0;
};

/// Highest MCS whose threshold is met; thresholds are inclusive.
inline std::optional<McsChoice> best_mcs(double sinr_db, const McsTable& mcs) {
    const auto it = std::upper_bound(mcs.min_sinr_db.begin(), mcs.min_sinr_db.end(), sinr_db);
    if (it == mcs.min_sinr_db.begin()) {
        return std::nullopt;
    }
    const auto index = static_cast<std::size_t>(std::distance(mcs.min_sinr_db.begin(), it)) - 1;
    return McsChoice{index, mcs.rates_mbps[index]};
}

struct PowerConfig {
    double min_power_dbm = 4.0;
    double max_power_dbm = 16.0;
    /// Discrete levels offered to the bandit agents and the grid-restricted optimizer.
    std::vector<double> levels_dbm = {4.0, 10.0, 16.0};

    void validate() const {
        if (!(min_power_dbm <= max_power_dbm)) throw std::invalid_argument("min power exceeds max power");
        if (levels_dbm.empty()) throw std::invalid_argument("at least one power level required");
        for (double p : levels_dbm) {
            if (p < min_power_dbm || p > max_power_dbm) {
                throw std::invalid_argument("power level outside [min_power, max_power]");
            }
        }
        if (!std::is_sorted(levels_dbm.begin(), levels_dbm.end())) {
            throw std::invalid_argument("power levels must be sorted ascending");
        }
    }
};

namespace detail {

inline double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Path p->q crosses wall w->z strictly inside the path and within [w, z) on
// the wall. The half-open wall parameter keeps collinear wall pieces that
// share an endpoint from being counted twice.
inline bool crosses(Vec2 p, Vec2 q, const Segment& wall) {
    const Vec2 r{q.x - p.x, q.y - p.y};
    const Vec2 s{wall.b.x - wall.a.x, wall.b.y - wall.a.y};
    const double denom = r.x * s.y - r.y * s.x;
    if (std::abs(denom) < 1e-12) {
        return false;
    }
    const Vec2 d{wall.a.x - p.x, wall.a.y - p.y};
    const double t = (d.x * s.y - d.y * s.x) / denom;
    const double u = (d.x * r.y - d.y * r.x) / denom;
    return t > 0.0 && t < 1.0 && u >= 0.0 && u < 1.0;
}

}  // namespace detail

inline int count_wall_crossings(Vec2 tx, Vec2 rx, std::span<const Segment> walls) {
    return static_cast<int>(
        std::count_if(walls.begin(), walls.end(), [&](const Segment& w) { return detail::crosses(tx, rx, w); }));
}

/// TGax enterprise path loss in dB.
inline double path_loss_db(Vec2 tx, Vec2 rx, std::span<const Segment> walls, const ChannelParams& ch) {
    const double d = std::max(distance(tx, rx), ch.min_distance_m);
    const double bp = ch.breakpoint_m;
    double loss = 40.05 + 20.0 * std::log10(ch.frequency_ghz / 2.4) + 20.0 * std::log10(std::min(d, bp));
    if (d > bp) {
        loss += 35.0 * std::log10(d / bp);
    }
    return loss + ch.wall_loss_db * count_wall_crossings(tx, rx, walls);
}

struct AccessPoint {
    ApId id;
    Vec2 position;
    double max_power_dbm = 16.0;
    bool coordinated = true;
    /// Room the AP lives in, when the topology has rooms.
    std::optional<Rect> room;
};

struct Station {
    StationId id;
    Vec2 position;
    ApId ap;
};

struct Link {
    ApId ap;
    StationId station;

    constexpr bool operator==(const Link&) const = default;
};

/// Bipartite AP/station graph with a precomputed linear loss matrix.
///
/// Ids are dense: the i-th AP has ApId{i} and the i-th station StationId{i}.
/// Each station is associated with exactly one AP, so the link set is given by
/// the associations. Immutable after construction.
class Network {
public:
    Network() = default;

    Network(std::vector<AccessPoint> aps, std::vector<Station> stations, std::vector<Segment> walls,
            ChannelParams channel)
        : aps_(std::move(aps)), stations_(std::move(stations)), walls_(std::move(walls)), channel_(channel) {
        channel_.validate();
        for (std::size_t i = 0; i < aps_.size(); ++i) {
            if (aps_[i].id.index() != i) throw std::invalid_argument("AP ids must be dense and ordered");
            if (!std::isfinite(aps_[i].position.x) || !std::isfinite(aps_[i].position.y)) {
                throw std::invalid_argument("AP position not finite");
            }
        }
        served_.resize(aps_.size());
        for (std::size_t j = 0; j < stations_.size(); ++j) {
            const Station& s = stations_[j];
            if (s.id.index() != j) throw std::invalid_argument("station ids must be dense and ordered");
            if (s.ap.value < 0 || s.ap.index() >= aps_.size()) {
                throw std::invalid_argument("station associated with unknown AP");
            }
            if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y)) {
                throw std::invalid_argument("station position not finite");
            }
            served_[s.ap.index()].push_back(s.id);
        }
        loss_.resize(aps_.size() * stations_.size());
        for (const auto& a : aps_) {
            for (const auto& s : stations_) {
                const double l = db_to_ratio(path_loss_db(a.position, s.position, walls_, channel_));
                if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("invalid path loss");
                loss_[a.id.index() * stations_.size() + s.id.index()] = l;
            }
        }
    }

    const std::vector<AccessPoint>& aps() const { return aps_; }
    const std::vector<Station>& stations() const { return stations_; }
    const std::vector<Segment>& walls() const { return walls_; }
    const ChannelParams& channel() const { return channel_; }

    const AccessPoint& ap(ApId id) const { return aps_.at(id.index()); }
    const Station& station(StationId id) const { return stations_.at(id.index()); }

    /// Stations associated with an AP (the outgoing links of the AP).
    const std::vector<StationId>& served_by(ApId id) const { return served_.at(id.index()); }

    /// Linear path loss l(a, s).
    double loss(ApId a, StationId s) const { return loss_[a.index() * stations_.size() + s.index()]; }
    double loss_db(ApId a, StationId s) const { return ratio_to_db(loss(a, s)); }

    double ap_to_ap_loss_db(ApId a, ApId b) const {
        return path_loss_db(ap(a).position, ap(b).position, walls_, channel_);
    }

    std::vector<Link> links() const {
        std::vector<Link> out;
        out.reserve(stations_.size());
        for (const auto& s : stations_) out.push_back({s.ap, s.id});
        return out;
    }

    std::vector<ApId> coordinated_aps() const {
        std::vector<ApId> out;
        for (const auto& a : aps_) {
            if (a.coordinated) out.push_back(a.id);
        }
        return out;
    }

    std::size_t coordinated_count() const {
        return static_cast<std::size_t>(
            std::count_if(aps_.begin(), aps_.end(), [](const AccessPoint& a) { return a.coordinated; }));
    }

    bool operator==(const Network& other) const {
        if (aps_.size() != other.aps_.size() || stations_.size() != other.stations_.size()) return false;
        for (std::size_t i = 0; i < aps_.size(); ++i) {
            const auto& a = aps_[i];
            const auto& b = other.aps_[i];
            if (a.position != b.position || a.max_power_dbm != b.max_power_dbm || a.coordinated != b.coordinated ||
                a.room != b.room) {
                return false;
            }
        }
        for (std::size_t i = 0; i < stations_.size(); ++i) {
            if (stations_[i].position != other.stations_[i].position || stations_[i].ap != other.stations_[i].ap) {
                return false;
            }
        }
        return walls_ == other.walls_ && loss_ == other.loss_;
    }

private:
    std::vector<AccessPoint> aps_;
    std::vector<Station> stations_;
    std::vector<Segment> walls_;
    ChannelParams channel_;
    std::vector<std::vector<StationId>> served_;
    std::vector<double> loss_;
};

/// One downlink transmission within a TXOP.
struct Transmission {
    ApId ap;
    StationId station;
    double power_dbm = 0.0;

    bool operator==(const Transmission&) const = default;
};

/// SINR in dB of `active[target]`, with every other entry of `active` acting
/// as an interferer.
inline double sinr_db(const Network& net, std::span<const Transmission> active, std::size_t target) {
    const Transmission& link = active[target];
    const double signal = dbm_to_mw(link.power_dbm) / net.loss(link.ap, link.station);
    double interference = net.channel().noise_mw();
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (i == target || active[i].ap == link.ap) continue;
        interference += dbm_to_mw(active[i].power_dbm) / net.loss(active[i].ap, link.station);
    }
    return ratio_to_db(signal / interference);
}

/// SINR in dB of the link (ap, station) within a set of active transmissions.
inline double sinr_db(const Network& net, Link link, std::span<const Transmission> active) {
    const auto it = std::find_if(active.begin(), active.end(), [&](const Transmission& t) {
        return t.ap == link.ap && t.station == link.station;
    });
    if (it == active.end()) {
        throw std::invalid_argument("inactive link");
    }
    return sinr_db(net, active, static_cast<std::size_t>(std::distance(active.begin(), it)));
}

}  // namespace csr
