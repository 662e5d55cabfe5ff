#pragma once

// C-SR schedulers built from bandit policies: the flat agent (one arm per
// full configuration), the three-level hierarchical agent, and the clustered
// wrapper that gives every AP cluster its own independent agent.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csr/bandit.hpp"
#include "csr/net_model.hpp"
#include "csr/rng.hpp"
#include "csr/sim.hpp"
#include "json.hpp"

namespace csr {

namespace detail {

inline std::vector<ApId> resolve_scope(const Network& net, const std::vector<ApId>& scope) {
    std::vector<ApId> out = scope.empty() ? net.coordinated_aps() : scope;
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
        throw std::overflow_error("configuration space exceeds 2^64 arms");
    }
    return a * b;
}

}  // namespace detail

/// Mixed-radix bijection between arm indices and the configurations that
/// contain a fixed sharing pair. The lowest digit is the sharing AP's power
/// level; each other AP in scope (ascending id) contributes a digit that is
/// 0 when the AP stays silent and 1 + station * |P| + power otherwise.
class FlatActionSpace {
public:
    FlatActionSpace(const Network& net, SharingPair pair, std::vector<double> levels, const std::vector<ApId>& scope = {})
        : pair_(pair), levels_(std::move(levels)) {
        if (levels_.empty()) throw std::invalid_argument("no power levels");
        if (net.station(pair.station).ap != pair.ap) throw std::invalid_argument("sharing pair not associated");
        for (ApId a : detail::resolve_scope(net, scope)) {
            if (a == pair.ap) continue;
            others_.push_back(a);
            stations_.push_back(net.served_by(a));
        }
        size_ = levels_.size();
        for (const auto& served : stations_) {
            size_ = detail::checked_mul(size_, 1 + served.size() * levels_.size());
        }
    }

    std::uint64_t size() const { return size_; }

    TransmissionConfig decode(std::uint64_t index) const {
        if (index >= size_) throw std::out_of_range("arm index out of range");
        const std::uint64_t p = levels_.size();
        TransmissionConfig cfg;
        cfg.entries.push_back({pair_.ap, pair_.station, levels_[index % p]});
        index /= p;
        for (std::size_t i = 0; i < others_.size(); ++i) {
            const std::uint64_t radix = 1 + stations_[i].size() * p;
            const std::uint64_t digit = index % radix;
            index /= radix;
            if (digit == 0) continue;
            cfg.entries.push_back({others_[i], stations_[i][(digit - 1) / p], levels_[(digit - 1) % p]});
        }
        return cfg;
    }

    /// Inverse of decode; nullopt when the configuration is not in this space.
    std::optional<std::uint64_t> encode(const TransmissionConfig& cfg) const {
        const std::uint64_t p = levels_.size();
        auto level_of = [&](double dbm) -> std::optional<std::uint64_t> {
            for (std::size_t k = 0; k < levels_.size(); ++k) {
                if (levels_[k] == dbm) return k;
            }
            return std::nullopt;
        };
        std::optional<std::uint64_t> sharing_level;
        std::vector<std::uint64_t> digits(others_.size(), 0);
        std::size_t matched = 0;
        for (const auto& t : cfg.entries) {
            const auto level = level_of(t.power_dbm);
            if (!level) return std::nullopt;
            if (t.ap == pair_.ap) {
                if (t.station != pair_.station) return std::nullopt;
                sharing_level = level;
                ++matched;
                continue;
            }
            const auto it = std::find(others_.begin(), others_.end(), t.ap);
            if (it == others_.end()) return std::nullopt;
            const auto i = static_cast<std::size_t>(std::distance(others_.begin(), it));
            const auto sit = std::find(stations_[i].begin(), stations_[i].end(), t.station);
            if (sit == stations_[i].end()) return std::nullopt;
            digits[i] = 1 + static_cast<std::uint64_t>(std::distance(stations_[i].begin(), sit)) * p + *level;
            ++matched;
        }
        if (!sharing_level || matched != cfg.entries.size()) return std::nullopt;
        std::uint64_t index = 0;
        for (std::size_t i = others_.size(); i-- > 0;) {
            index = index * (1 + stations_[i].size() * p) + digits[i];
        }
        return index * p + *sharing_level;
    }

private:
    SharingPair pair_;
    std::vector<double> levels_;
    std::vector<ApId> others_;
    std::vector<std::vector<StationId>> stations_;
    std::uint64_t size_ = 0;
};

/// Every configuration containing the sharing pair, in canonical arm order.
inline std::vector<TransmissionConfig> flat_enumerate(const Network& net, SharingPair pair,
                                                      const std::vector<double>& levels,
                                                      const std::vector<ApId>& scope = {}) {
    const FlatActionSpace space(net, pair, levels, scope);
    if (space.size() > (1u << 22)) throw std::invalid_argument("configuration space too large to enumerate");
    std::vector<TransmissionConfig> out;
    out.reserve(static_cast<std::size_t>(space.size()));
    for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back(space.decode(i));
    return out;
}

/// Flat C-SR agent: one bandit per sharing pair, arms enumerate complete
/// configurations.
class FlatAgent {
public:
    FlatAgent(BanditParams params, std::vector<double> levels, std::vector<ApId> scope = {})
        : params_(params), levels_(std::move(levels)), scope_(std::move(scope)) {}

    TransmissionConfig select(const Network& net, SharingPair pair, Rng& rng) {
        auto it = agents_.find(pair.station.value);
        if (it == agents_.end()) {
            FlatActionSpace space(net, pair, levels_, scope_);
            it = agents_.emplace(pair.station.value, Entry{space, BanditPolicy(space.size(), params_)}).first;
        }
        pending_ = {pair.station.value, it->second.policy.sample(rng)};
        return it->second.space.decode(pending_->second);
    }

    void update(double reward) {
        if (!pending_) throw std::logic_error("stale trace: update without a pending selection");
        agents_.at(pending_->first).policy.update(pending_->second, reward);
        pending_.reset();
    }

    const BanditPolicy* policy_for(StationId sharing_station) const {
        const auto it = agents_.find(sharing_station.value);
        return it == agents_.end() ? nullptr : &it->second.policy;
    }

    nlohmann::json to_json() const {
        nlohmann::json agents = nlohmann::json::object();
        for (const auto& [sta, e] : agents_) agents["station_" + std::to_string(sta)] = e.policy.to_json();
        return {{"type", "flat"}, {"agents", agents}};
    }

private:
    struct Entry {
        FlatActionSpace space;
        BanditPolicy policy;
    };

    BanditParams params_;
    std::vector<double> levels_;
    std::vector<ApId> scope_;
    std::map<int, Entry> agents_;
    std::optional<std::pair<int, std::uint64_t>> pending_;
};

/// Hyperparameters for the three levels of the hierarchy.
struct HierarchyParams {
    BanditParams level1{BanditKind::ucb, 0.1, 0.999, 0.1, 0.999, 1.0};
    BanditParams level2{BanditKind::ucb, 0.1, 0.999, 0.1, 0.999, 0.3};
    BanditParams level3{BanditKind::ucb, 0.1, 0.999, 0.1, 0.999, 0.1};
};

/// Record of one hierarchical selection, consumed by the matching update.
struct HmabTrace {
    std::uint64_t serial = 0;
    SharingPair sharing;
    std::uint64_t subset_arm = 0;
    std::uint64_t ap_set = 0;  // bitmask of transmitting APs (global AP index)
    std::vector<std::pair<ApId, std::uint64_t>> station_choices;
    std::vector<std::pair<StationId, std::uint64_t>> power_choices;

    std::size_t decisions() const { return 1 + station_choices.size() + power_choices.size(); }
};

/// Three-level hierarchy: level 1 (per sharing station) picks the subset of
/// other APs, level 2 (per AP and transmitting set) picks the AP's station,
/// level 3 (per station and transmitting set) picks the transmit power.
/// Agents are created on first use.
class HierarchicalAgent {
public:
    HierarchicalAgent(HierarchyParams params, std::vector<double> levels, std::vector<ApId> scope = {})
        : params_(params), levels_(std::move(levels)), scope_(std::move(scope)) {
        if (levels_.empty()) throw std::invalid_argument("no power levels");
    }

    struct Selection {
        TransmissionConfig config;
        HmabTrace trace;
    };

    Selection select(const Network& net, SharingPair pair, Rng& rng) {
        const auto scope = detail::resolve_scope(net, scope_);
        if (scope.size() > 63 || net.aps().size() > 64) throw std::invalid_argument("hierarchy supports at most 64 APs");
        std::vector<ApId> others;
        for (ApId a : scope) {
            if (a != pair.ap) others.push_back(a);
        }
        HmabTrace trace;
        trace.serial = ++issued_;
        trace.sharing = pair;

        BanditPolicy& first = level1_.try_emplace(pair.station.value, std::uint64_t{1} << others.size(), params_.level1)
                                  .first->second;
        trace.subset_arm = first.sample(rng);

        std::uint64_t set = bit(pair.ap);
        std::vector<ApId> shared;
        for (std::size_t j = 0; j < others.size(); ++j) {
            if (trace.subset_arm >> j & 1u) {
                shared.push_back(others[j]);
                set |= bit(others[j]);
            }
        }
        trace.ap_set = set;

        Selection sel;
        std::vector<std::pair<ApId, StationId>> pairs{{pair.ap, pair.station}};
        for (ApId a : shared) {
            const auto& served = net.served_by(a);
            if (served.empty()) continue;
            BanditPolicy& second = level2_.try_emplace({a.value, set}, served.size(), params_.level2).first->second;
            const std::uint64_t arm = second.sample(rng);
            trace.station_choices.push_back({a, arm});
            pairs.push_back({a, served[static_cast<std::size_t>(arm)]});
        }
        for (const auto& [a, s] : pairs) {
            BanditPolicy& third = level3_.try_emplace({s.value, set}, levels_.size(), params_.level3).first->second;
            const std::uint64_t arm = third.sample(rng);
            trace.power_choices.push_back({s, arm});
            sel.config.entries.push_back({a, s, levels_[static_cast<std::size_t>(arm)]});
        }
        sel.trace = std::move(trace);
        outstanding_ = sel.trace.serial;
        return sel;
    }

    /// Level 3 first, then level 2 for the shared APs, then level 1, all with
    /// the same reward.
    void update(const HmabTrace& trace, double reward) {
        if (!outstanding_ || trace.serial != *outstanding_) throw std::logic_error("stale trace");
        outstanding_.reset();
        for (const auto& [sta, arm] : trace.power_choices) level3_.at({sta.value, trace.ap_set}).update(arm, reward);
        for (const auto& [ap, arm] : trace.station_choices) level2_.at({ap.value, trace.ap_set}).update(arm, reward);
        level1_.at(trace.sharing.station.value).update(trace.subset_arm, reward);
    }

    std::size_t level1_count() const { return level1_.size(); }
    std::size_t level2_count() const { return level2_.size(); }
    std::size_t level3_count() const { return level3_.size(); }

    const BanditPolicy* level1_for(StationId sta) const {
        const auto it = level1_.find(sta.value);
        return it == level1_.end() ? nullptr : &it->second;
    }

    std::uint64_t total_updates(int level) const {
        std::uint64_t n = 0;
        auto add = [&](const auto& m) {
            for (const auto& [k, p] : m) n += p.total_pulls();
        };
        if (level == 1) add(level1_);
        if (level == 2) add(level2_);
        if (level == 3) add(level3_);
        return n;
    }

    nlohmann::json to_json() const {
        nlohmann::json l1 = nlohmann::json::object();
        nlohmann::json l2 = nlohmann::json::object();
        nlohmann::json l3 = nlohmann::json::object();
        for (const auto& [sta, p] : level1_) l1["station_" + std::to_string(sta)] = p.to_json();
        for (const auto& [key, p] : level2_) {
            l2["ap_" + std::to_string(key.first) + "/set_" + std::to_string(key.second)] = p.to_json();
        }
        for (const auto& [key, p] : level3_) {
            l3["station_" + std::to_string(key.first) + "/set_" + std::to_string(key.second)] = p.to_json();
        }
        return {{"type", "hmab"}, {"level1", l1}, {"level2", l2}, {"level3", l3}};
    }

private:
    static std::uint64_t bit(ApId a) { return std::uint64_t{1} << a.index(); }

    HierarchyParams params_;
    std::vector<double> levels_;
    std::vector<ApId> scope_;
    std::map<int, BanditPolicy> level1_;
    std::map<std::pair<int, std::uint64_t>, BanditPolicy> level2_;
    std::map<std::pair<int, std::uint64_t>, BanditPolicy> level3_;
    std::uint64_t issued_ = 0;
    std::optional<std::uint64_t> outstanding_;
};

/// Policy that can also dump its learned state.
class AgentPolicy : public Policy {
public:
    virtual nlohmann::json state() const = 0;
};

class FlatPolicy final : public AgentPolicy {
public:
    FlatPolicy(BanditParams params, std::vector<double> levels, std::vector<ApId> scope = {})
        : agent_(params, std::move(levels), std::move(scope)) {}

    TransmissionConfig propose(const Network& net, SharingPair pair, Rng& rng) override {
        return agent_.select(net, pair, rng);
    }
    void update(double reward) override { agent_.update(reward); }
    std::string name() const override { return "flat_mab"; }
    nlohmann::json state() const override { return agent_.to_json(); }
    const FlatAgent& agent() const { return agent_; }

private:
    FlatAgent agent_;
};

class HierarchicalPolicy final : public AgentPolicy {
public:
    HierarchicalPolicy(HierarchyParams params, std::vector<double> levels, std::vector<ApId> scope = {})
        : agent_(params, std::move(levels), std::move(scope)) {}

    TransmissionConfig propose(const Network& net, SharingPair pair, Rng& rng) override {
        auto sel = agent_.select(net, pair, rng);
        trace_ = std::move(sel.trace);
        return std::move(sel.config);
    }
    void update(double reward) override {
        if (!trace_) throw std::logic_error("stale trace");
        agent_.update(*trace_, reward);
        trace_.reset();
    }
    std::string name() const override { return "hmab"; }
    nlohmann::json state() const override { return agent_.to_json(); }
    const HierarchicalAgent& agent() const { return agent_; }

private:
    HierarchicalAgent agent_;
    std::optional<HmabTrace> trace_;
};

/// One independent agent per cluster. The cluster holding the sharing AP
/// decides over its own APs, and only that agent learns from the TXOP.
class ClusteredPolicy final : public AgentPolicy {
public:
    using Factory = std::function<std::unique_ptr<AgentPolicy>(std::vector<ApId> scope)>;

    ClusteredPolicy(const Network& net, const std::map<int, int>& cluster_map, const Factory& make) {
        std::map<int, std::vector<ApId>> members;
        for (ApId a : net.coordinated_aps()) {
            const auto it = cluster_map.find(a.value);
            if (it == cluster_map.end()) {
                throw std::invalid_argument("AP " + std::to_string(a.value) + " has no cluster");
            }
            members[it->second].push_back(a);
            cluster_of_[a.value] = it->second;
        }
        for (auto& [id, aps] : members) clusters_.emplace(id, make(aps));
    }

    TransmissionConfig propose(const Network& net, SharingPair pair, Rng& rng) override {
        const auto it = cluster_of_.find(pair.ap.value);
        if (it == cluster_of_.end()) throw std::invalid_argument("AP without cluster");
        active_ = it->second;
        return clusters_.at(*active_)->propose(net, pair, rng);
    }

    void update(double reward) override {
        if (!active_) throw std::logic_error("stale trace");
        clusters_.at(*active_)->update(reward);
        active_.reset();
    }

    std::string name() const override { return "clustered"; }

    nlohmann::json state() const override {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [id, p] : clusters_) out["cluster_" + std::to_string(id)] = p->state();
        return {{"type", "clustered"}, {"clusters", out}};
    }

    const AgentPolicy& cluster(int id) const { return *clusters_.at(id); }
    std::size_t cluster_count() const { return clusters_.size(); }

private:
    std::map<int, std::unique_ptr<AgentPolicy>> clusters_;
    std::map<int, int> cluster_of_;
    std::optional<int> active_;
};

}  // namespace csr
