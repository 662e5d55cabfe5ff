#pragma once

// Seeded topology generators: multi-room grids, open space, the symmetric
// enterprise lattice, and legacy (uncoordinated) AP injection.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csr/net_model.hpp"
#include "csr/rng.hpp"

namespace csr {

enum class ScenarioKind { multi_room, open_space, symmetric_enterprise, explicit_layout };

struct IntRange {
    int lo = 0;
    int hi = 0;

    bool operator==(const IntRange&) const = default;
};

/// Positions for explicitly listed topologies.
struct ExplicitLayout {
    std::vector<Vec2> aps;
    std::vector<std::pair<Vec2, int>> stations;  // position, index of the serving AP
    std::vector<Segment> walls;
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::multi_room;
    int rows = 2;
    int cols = 2;
    double room_size = 20.0;
    double area_side = 75.0;
    IntRange ap_count{2, 5};
    IntRange stations_per_ap{3, 5};
    double station_spread = 10.0;
    std::uint64_t seed = 1;
    /// AP id -> cluster id.
    std::optional<std::map<int, int>> clusters;
    int legacy_ap_count = 0;
    double max_power_dbm = 16.0;
    ChannelParams channel;
    ExplicitLayout layout;

    void validate() const {
        if (rows < 1 || cols < 1) throw std::invalid_argument("grid must have at least one row and column");
        if (!(room_size > 0.0)) throw std::invalid_argument("room size must be positive");
        if (!(area_side > 0.0)) throw std::invalid_argument("area side must be positive");
        if (ap_count.lo > ap_count.hi || ap_count.lo < 1) throw std::invalid_argument("empty AP count range");
        if (stations_per_ap.lo > stations_per_ap.hi || stations_per_ap.lo < 1) {
            throw std::invalid_argument("empty stations-per-AP range");
        }
        if (station_spread < 0.0) throw std::invalid_argument("station spread must be non-negative");
        if (legacy_ap_count < 0) throw std::invalid_argument("legacy AP count must be non-negative");
        channel.validate();
    }
};

inline std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::multi_room: return "multi_room";
        case ScenarioKind::open_space: return "open_space";
        case ScenarioKind::symmetric_enterprise: return "symmetric_enterprise";
        case ScenarioKind::explicit_layout: return "explicit";
    }
    return "unknown";
}

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "multi_room") return ScenarioKind::multi_room;
    if (s == "open_space") return ScenarioKind::open_space;
    if (s == "symmetric_enterprise") return ScenarioKind::symmetric_enterprise;
    if (s == "explicit") return ScenarioKind::explicit_layout;
    throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

namespace detail {

inline Vec2 uniform_in(const Rect& r, Rng& rng) {
    const double x = rng.uniform(r.lo.x, r.hi.x);
    const double y = rng.uniform(r.lo.y, r.hi.y);
    return {x, y};
}

inline Vec2 gaussian_around(Vec2 mean, double sigma, double side, Rng& rng) {
    const double x = rng.normal(mean.x, sigma);
    const double y = rng.normal(mean.y, sigma);
    return {std::clamp(x, 0.0, side), std::clamp(y, 0.0, side)};
}

inline std::vector<Segment> interior_walls(int rows, int cols, double rho) {
    std::vector<Segment> walls;
    for (int c = 1; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            walls.push_back({{c * rho, r * rho}, {c * rho, (r + 1) * rho}});
        }
    }
    for (int r = 1; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            walls.push_back({{c * rho, r * rho}, {(c + 1) * rho, r * rho}});
        }
    }
    return walls;
}

// Region used to place legacy APs next to a host that has no room.
inline Rect legacy_region(const AccessPoint& host) {
    if (host.room) return *host.room;
    constexpr double half = 10.0;
    return {{host.position.x - half, host.position.y - half}, {host.position.x + half, host.position.y + half}};
}

}  // namespace detail

/// rows x cols grid of rho x rho rooms, one AP and four stations per room,
/// all uniformly placed inside their room. Room (r, c) holds AP r * cols + c.
inline Network gen_multi_room(int rows, int cols, double rho, std::uint64_t seed, const ChannelParams& ch = {},
                              double max_power_dbm = 16.0) {
    if (rows < 1 || cols < 1 || !(rho > 0.0)) throw std::invalid_argument("invalid multi-room dimensions");
    Rng rng(seed);
    std::vector<AccessPoint> aps;
    std::vector<Station> stations;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Rect room{{c * rho, r * rho}, {(c + 1) * rho, (r + 1) * rho}};
            const ApId ap{static_cast<int>(aps.size())};
            aps.push_back({ap, detail::uniform_in(room, rng), max_power_dbm, true, room});
            for (int k = 0; k < 4; ++k) {
                stations.push_back({StationId{static_cast<int>(stations.size())}, detail::uniform_in(room, rng), ap});
            }
        }
    }
    return Network(std::move(aps), std::move(stations), detail::interior_walls(rows, cols, rho), ch);
}

/// Wall-free square; AP count and per-AP station counts drawn from the
/// configured ranges, stations Gaussian around their AP and clamped into the square.
inline Network gen_open_space(std::uint64_t seed, double sigma = 10.0, double side = 75.0,
                              IntRange ap_count = {2, 5}, IntRange per_ap = {3, 5}, const ChannelParams& ch = {},
                              double max_power_dbm = 16.0) {
    Rng rng(seed);
    const Rect area{{0.0, 0.0}, {side, side}};
    const int n = rng.uniform_int(ap_count.lo, ap_count.hi);
    std::vector<AccessPoint> aps;
    for (int i = 0; i < n; ++i) {
        aps.push_back({ApId{i}, detail::uniform_in(area, rng), max_power_dbm, true, std::nullopt});
    }
    std::vector<Station> stations;
    for (const auto& a : aps) {
        const int k = rng.uniform_int(per_ap.lo, per_ap.hi);
        for (int j = 0; j < k; ++j) {
            stations.push_back({StationId{static_cast<int>(stations.size())},
                                detail::gaussian_around(a.position, sigma, side, rng), a.id});
        }
    }
    return Network(std::move(aps), std::move(stations), {}, ch);
}

/// APs on a lattice with spacing rho, four stations 2 m away along the axes.
inline Network gen_symmetric_enterprise(int rows, int cols, double rho, const ChannelParams& ch = {},
                                        double max_power_dbm = 16.0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("invalid lattice dimensions");
    constexpr double offset = 2.0;
    std::vector<AccessPoint> aps;
    std::vector<Station> stations;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const ApId ap{static_cast<int>(aps.size())};
            const Vec2 p{c * rho, r * rho};
            aps.push_back({ap, p, max_power_dbm, true, std::nullopt});
            for (Vec2 d : {Vec2{offset, 0.0}, Vec2{0.0, offset}, Vec2{-offset, 0.0}, Vec2{0.0, -offset}}) {
                stations.push_back({StationId{static_cast<int>(stations.size())}, {p.x + d.x, p.y + d.y}, ap});
            }
        }
    }
    return Network(std::move(aps), std::move(stations), {}, ch);
}

inline Network gen_explicit(const ExplicitLayout& layout, const ChannelParams& ch = {}, double max_power_dbm = 16.0) {
    std::vector<AccessPoint> aps;
    for (std::size_t i = 0; i < layout.aps.size(); ++i) {
        aps.push_back({ApId{static_cast<int>(i)}, layout.aps[i], max_power_dbm, true, std::nullopt});
    }
    std::vector<Station> stations;
    for (std::size_t j = 0; j < layout.stations.size(); ++j) {
        stations.push_back({StationId{static_cast<int>(j)}, layout.stations[j].first, ApId{layout.stations[j].second}});
    }
    return Network(std::move(aps), std::move(stations), layout.walls, ch);
}

/// Appends `count` uncoordinated APs, assigned round-robin to the coordinated
/// APs in id order. Each one is placed uniformly in its host's room and gets a
/// single dummy station placed the same way.
inline Network add_legacy_aps(const Network& net, int count, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("legacy AP count must be non-negative");
    if (count == 0) return net;
    const auto hosts = net.coordinated_aps();
    if (hosts.empty()) throw std::invalid_argument("no coordinated AP to host legacy APs");
    Rng rng(seed);
    auto aps = net.aps();
    auto stations = net.stations();
    for (int j = 0; j < count; ++j) {
        const AccessPoint& host = net.ap(hosts[static_cast<std::size_t>(j) % hosts.size()]);
        const Rect region = detail::legacy_region(host);
        const ApId id{static_cast<int>(aps.size())};
        aps.push_back({id, detail::uniform_in(region, rng), host.max_power_dbm, false, region});
        stations.push_back({StationId{static_cast<int>(stations.size())}, detail::uniform_in(region, rng), id});
    }
    return Network(std::move(aps), std::move(stations), net.walls(), net.channel());
}

/// For a legacy AP, the coordinated AP it contends with (round-robin order
/// of add_legacy_aps).
inline std::optional<ApId> legacy_host(const Network& net, ApId legacy) {
    if (net.ap(legacy).coordinated) return std::nullopt;
    const auto hosts = net.coordinated_aps();
    int rank = 0;
    for (const auto& a : net.aps()) {
        if (a.id == legacy) break;
        if (!a.coordinated) ++rank;
    }
    return hosts.at(static_cast<std::size_t>(rank) % hosts.size());
}

/// Redraws positions under the generator's rules, keeping counts and
/// associations. Multi-room nodes stay inside their rooms; open-space nodes
/// are fully redrawn. The symmetric lattice is deterministic and comes back
/// unchanged.
inline Network mutate_positions(const Network& net, const ScenarioSpec& spec, std::uint64_t seed) {
    if (spec.kind == ScenarioKind::explicit_layout) {
        throw std::invalid_argument("not mutable");
    }
    if (spec.kind == ScenarioKind::symmetric_enterprise) {
        return net;
    }
    Rng rng(seed);
    auto aps = net.aps();
    auto stations = net.stations();
    const Rect area{{0.0, 0.0}, {spec.area_side, spec.area_side}};
    for (auto& a : aps) {
        if (a.room) {
            a.position = detail::uniform_in(*a.room, rng);
        } else {
            a.position = detail::uniform_in(area, rng);
        }
        for (StationId s : net.served_by(a.id)) {
            Station& st = stations[s.index()];
            if (a.room) {
                st.position = detail::uniform_in(*a.room, rng);
            } else {
                st.position = detail::gaussian_around(a.position, spec.station_spread, spec.area_side, rng);
            }
        }
    }
    return Network(std::move(aps), std::move(stations), net.walls(), net.channel());
}

/// Builds the network a spec describes, legacy APs included.
inline Network build_network(const ScenarioSpec& spec) {
    spec.validate();
    Network net;
    switch (spec.kind) {
        case ScenarioKind::multi_room:
            net = gen_multi_room(spec.rows, spec.cols, spec.room_size, spec.seed, spec.channel, spec.max_power_dbm);
            break;
        case ScenarioKind::open_space:
            net = gen_open_space(spec.seed, spec.station_spread, spec.area_side, spec.ap_count, spec.stations_per_ap,
                                 spec.channel, spec.max_power_dbm);
            break;
        case ScenarioKind::symmetric_enterprise:
            net = gen_symmetric_enterprise(spec.rows, spec.cols, spec.room_size, spec.channel, spec.max_power_dbm);
            break;
        case ScenarioKind::explicit_layout:
            net = gen_explicit(spec.layout, spec.channel, spec.max_power_dbm);
            break;
    }
    if (spec.clusters) {
        for (const auto& a : net.aps()) {
            if (a.coordinated && !spec.clusters->contains(a.id.value)) {
                throw std::invalid_argument("cluster map does not cover AP " + std::to_string(a.id.value));
            }
        }
    }
    return add_legacy_aps(net, spec.legacy_ap_count, Rng::derive(spec.seed, 0x1e9));
}

/// Groups a rows x cols grid into rectangular blocks of block_rows x block_cols
/// rooms; cluster ids are assigned in row-major block order.
inline std::map<int, int> block_clusters(int rows, int cols, int block_rows, int block_cols) {
    std::map<int, int> out;
    const int blocks_per_row = (cols + block_cols - 1) / block_cols;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out[r * cols + c] = (r / block_rows) * blocks_per_row + c / block_cols;
        }
    }
    return out;
}

}  // namespace csr
