#pragma once

// TXOP-level execution engine. One call to execute_txop evaluates one
// coordinated downlink TXOP; run_episode chains TXOPs under a policy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csr/net_model.hpp"
#include "csr/rng.hpp"
#include "csr/scenario.hpp"

namespace csr {

struct TransmissionConfig {
    std::vector<Transmission> entries;

    /// Canonical, CSV-safe identifier: "ap:station@power" joined by '|', AP order.
    std::string id() const {
        auto sorted = entries;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.ap < b.ap; });
        std::string out;
        for (const auto& t : sorted) {
            if (!out.empty()) out += '|';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%d:%d@%g", t.ap.value, t.station.value, t.power_dbm);
            out += buf;
        }
        return out;
    }

    bool contains_ap(ApId ap) const {
        return std::any_of(entries.begin(), entries.end(), [&](const auto& t) { return t.ap == ap; });
    }
};

struct SimParams {
    double txop_duration_s = 5.484e-3;
    int frame_size_bytes = 1500;
    /// Non-positive means: top MCS rate times the number of coordinated APs.
    double reward_normalizer_mbps = 0.0;

    void validate() const {
        if (!(txop_duration_s > 0.0) || frame_size_bytes <= 0) {
            throw std::invalid_argument("TXOP duration and frame size must be positive");
        }
    }

    double normalizer(const Network& net, const McsTable& mcs) const {
        if (reward_normalizer_mbps > 0.0) return reward_normalizer_mbps;
        return mcs.max_rate() * static_cast<double>(std::max<std::size_t>(1, net.coordinated_count()));
    }
};

struct LinkOutcome {
    ApId ap;
    StationId station;
    double sinr_db = 0.0;
    std::optional<std::size_t> mcs;
    double rate_mbps = 0.0;
    std::int64_t delivered_bytes = 0;
};

struct TxopResult {
    std::vector<LinkOutcome> per_link;
    double effective_rate_mbps = 0.0;
    double reward = 0.0;
};

struct SharingPair {
    ApId ap;
    StationId station;

    bool operator==(const SharingPair&) const = default;
};

/// Throws "invalid configuration" unless every AP and station appears at
/// most once, every pair follows the association and powers are finite and
/// not above the AP's maximum.
inline void validate_config(const TransmissionConfig& cfg, const Network& net) {
    std::vector<char> ap_seen(net.aps().size(), 0);
    std::vector<char> sta_seen(net.stations().size(), 0);
    for (const auto& t : cfg.entries) {
        if (t.ap.value < 0 || t.ap.index() >= net.aps().size() || t.station.value < 0 ||
            t.station.index() >= net.stations().size()) {
            throw std::invalid_argument("invalid configuration: unknown node");
        }
        if (ap_seen[t.ap.index()]++ || sta_seen[t.station.index()]++) {
            throw std::invalid_argument("invalid configuration: duplicate AP or station");
        }
        if (net.station(t.station).ap != t.ap) {
            throw std::invalid_argument("invalid configuration: station not associated with AP");
        }
        if (!std::isfinite(t.power_dbm) || t.power_dbm > net.ap(t.ap).max_power_dbm + 1e-9) {
            throw std::invalid_argument("invalid configuration: transmit power out of range");
        }
    }
}

/// Runs one TXOP. `background` transmissions (uncoordinated APs) add
/// interference but are not part of the result.
inline TxopResult execute_txop(const TransmissionConfig& cfg, const Network& net, const McsTable& mcs,
                               const SimParams& sim, std::span<const Transmission> background = {}) {
    validate_config(cfg, net);
    std::vector<Transmission> all(cfg.entries.begin(), cfg.entries.end());
    all.insert(all.end(), background.begin(), background.end());

    const double frame_bits = 8.0 * sim.frame_size_bytes;
    TxopResult out;
    std::int64_t total_bytes = 0;
    for (std::size_t i = 0; i < cfg.entries.size(); ++i) {
        LinkOutcome link{cfg.entries[i].ap, cfg.entries[i].station, sinr_db(net, all, i), std::nullopt, 0.0, 0};
        if (const auto choice = best_mcs(link.sinr_db, mcs)) {
            link.mcs = choice->index;
            link.rate_mbps = choice->rate_mbps;
            const auto frames = static_cast<std::int64_t>(std::floor(choice->rate_mbps * 1e6 * sim.txop_duration_s / frame_bits));
            link.delivered_bytes = frames * sim.frame_size_bytes;
        }
        total_bytes += link.delivered_bytes;
        out.per_link.push_back(link);
    }
    out.effective_rate_mbps = static_cast<double>(total_bytes) * 8.0 / sim.txop_duration_s / 1e6;
    out.reward = std::min(1.0, out.effective_rate_mbps / sim.normalizer(net, mcs));
    return out;
}

namespace detail {

inline SharingPair pick_pair(const Network& net, std::span<const ApId> candidates, Rng& rng) {
    if (candidates.empty()) throw std::invalid_argument("no AP can win channel access");
    const ApId ap = candidates[rng.uniform_index(candidates.size())];
    const auto& served = net.served_by(ap);
    if (served.empty()) throw std::invalid_argument("winning AP has no associated station");
    return {ap, served[rng.uniform_index(served.size())]};
}

}  // namespace detail

/// Sharing AP uniform over coordinated APs, then a uniform station of that AP.
inline SharingPair select_sharing_pair(const Network& net, Rng& rng) {
    const auto aps = net.coordinated_aps();
    if (aps.empty()) throw std::invalid_argument("no coordinated APs");
    return detail::pick_pair(net, aps, rng);
}

/// Channel access winner over all APs, legacy ones included. Draws the same
/// random numbers as select_sharing_pair when every AP is coordinated.
inline SharingPair contend(const Network& net, Rng& rng) {
    std::vector<ApId> aps;
    for (const auto& a : net.aps()) aps.push_back(a.id);
    return detail::pick_pair(net, aps, rng);
}

inline TransmissionConfig single_link(const Network& net, SharingPair pair) {
    return {{{pair.ap, pair.station, net.ap(pair.ap).max_power_dbm}}};
}

/// Legacy DCF: one winner transmits alone at maximum power.
inline TxopResult dcf_txop(const Network& net, const McsTable& mcs, const SimParams& sim, Rng& rng) {
    return execute_txop(single_link(net, contend(net, rng)), net, mcs, sim);
}

struct SrParams {
    double obss_pd_dbm = -72.0;
    double max_power_reduction_db = 12.0;
};

/// OBSS-PD spatial reuse on top of a given first winner. Every other AP, in
/// random order, joins when the strongest signal it hears from the APs already
/// transmitting is below the OBSS-PD threshold. A joining AP lowers its power
/// by the margin between threshold and detected level, capped by
/// max_power_reduction_db.
inline TransmissionConfig sr_config(const Network& net, SharingPair first, const SrParams& sr, Rng& rng) {
    TransmissionConfig cfg = single_link(net, first);
    std::vector<ApId> order;
    for (const auto& a : net.aps()) {
        if (a.id != first.ap && !net.served_by(a.id).empty()) order.push_back(a.id);
    }
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    for (ApId candidate : order) {
        double strongest = -std::numeric_limits<double>::infinity();
        for (const auto& t : cfg.entries) {
            strongest = std::max(strongest, t.power_dbm - net.ap_to_ap_loss_db(t.ap, candidate));
        }
        if (strongest >= sr.obss_pd_dbm) continue;
        const double margin = std::clamp(sr.obss_pd_dbm - strongest, 0.0, sr.max_power_reduction_db);
        const auto& served = net.served_by(candidate);
        const StationId sta = served[rng.uniform_index(served.size())];
        cfg.entries.push_back({candidate, sta, net.ap(candidate).max_power_dbm - margin});
    }
    return cfg;
}

inline TxopResult sr_txop(const Network& net, const McsTable& mcs, const SimParams& sim, Rng& rng,
                          const SrParams& sr = {}) {
    const SharingPair first = contend(net, rng);
    return execute_txop(sr_config(net, first, sr, rng), net, mcs, sim);
}

/// Decision maker for coordinated TXOPs. propose() is always followed by
/// exactly one update() with the TXOP reward.
class Policy {
public:
    virtual ~Policy() = default;
    virtual TransmissionConfig propose(const Network& net, SharingPair pair, Rng& rng) = 0;
    virtual void update(double /*reward*/) {}
    virtual std::string name() const = 0;
};

class DcfPolicy final : public Policy {
public:
    TransmissionConfig propose(const Network& net, SharingPair pair, Rng&) override { return single_link(net, pair); }
    std::string name() const override { return "dcf"; }
};

class SrPolicy final : public Policy {
public:
    explicit SrPolicy(SrParams params = {}) : params_(params) {}
    TransmissionConfig propose(const Network& net, SharingPair pair, Rng& rng) override {
        return sr_config(net, pair, params_, rng);
    }
    std::string name() const override { return "sr"; }

private:
    SrParams params_;
};

struct StepRecord {
    int step = 0;
    SharingPair winner;
    bool coordinated_winner = true;
    std::string config_id;
    TxopResult result;
};

struct MutationPlan {
    int at_step = 0;
    ScenarioSpec spec;
    std::uint64_t seed = 0;
};

/// Uncoordinated APs whose host AP stays silent sense an idle channel and
/// transmit to one of their stations at maximum power.
inline std::vector<Transmission> legacy_background(const Network& net, const TransmissionConfig& cfg, Rng& rng) {
    std::vector<Transmission> out;
    for (const auto& a : net.aps()) {
        if (a.coordinated) continue;
        const auto host = legacy_host(net, a.id);
        if (cfg.contains_ap(a.id) || (host && cfg.contains_ap(*host))) continue;
        const auto& served = net.served_by(a.id);
        if (served.empty()) continue;
        out.push_back({a.id, served[rng.uniform_index(served.size())], a.max_power_dbm});
    }
    return out;
}

/// Runs `steps` TXOPs. A coordinated winner hands its sharing pair to the
/// policy, which is updated with the reward; a legacy winner transmits alone
/// and the policy is not consulted. With a mutation plan, node positions are
/// redrawn before step `at_step` and the policy keeps its state.
inline std::vector<StepRecord> run_episode(Policy& policy, Network net, const McsTable& mcs, const SimParams& sim,
                                           int steps, std::uint64_t seed,
                                           const std::optional<MutationPlan>& mutation = std::nullopt,
                                           const std::function<void(int, const Network&)>& on_step = {}) {
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    Rng rng(seed);
    std::vector<StepRecord> records;
    records.reserve(static_cast<std::size_t>(steps));
    for (int step = 0; step < steps; ++step) {
        if (mutation && step == mutation->at_step) {
            net = mutate_positions(net, mutation->spec, mutation->seed);
        }
        if (on_step) on_step(step, net);
        StepRecord rec;
        rec.step = step;
        rec.winner = contend(net, rng);
        rec.coordinated_winner = net.ap(rec.winner.ap).coordinated;
        if (!rec.coordinated_winner) {
            const auto cfg = single_link(net, rec.winner);
            rec.config_id = cfg.id();
            rec.result = execute_txop(cfg, net, mcs, sim);
        } else {
            const auto cfg = policy.propose(net, rec.winner, rng);
            const auto background = legacy_background(net, cfg, rng);
            rec.config_id = cfg.id();
            rec.result = execute_txop(cfg, net, mcs, sim, background);
            policy.update(rec.result.reward);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace csr
