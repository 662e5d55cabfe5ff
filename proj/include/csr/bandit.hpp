#pragma once

// Multi-armed bandit policies with lazily materialized arm statistics, so
// that action spaces far larger than memory (flat C-SR agents in dense
// topologies) can still be sampled exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "csr/rng.hpp"
#include "json.hpp"

namespace csr {

enum class BanditKind { epsilon_greedy, softmax, ucb, thompson };

inline std::string to_string(BanditKind kind) {
    switch (kind) {
        case BanditKind::epsilon_greedy: return "epsilon_greedy";
        case BanditKind::softmax: return "softmax";
        case BanditKind::ucb: return "ucb";
        case BanditKind::thompson: return "thompson";
    }
    return "unknown";
}

inline BanditKind bandit_kind_from_string(const std::string& s) {
    if (s == "epsilon_greedy") return BanditKind::epsilon_greedy;
    if (s == "softmax") return BanditKind::softmax;
    if (s == "ucb") return BanditKind::ucb;
    if (s == "thompson") return BanditKind::thompson;
    throw std::invalid_argument("unknown bandit kind '" + s + "'");
}

struct BanditParams {
    BanditKind kind = BanditKind::ucb;
    double epsilon = 0.1;
    double epsilon_decay = 0.999;
    double temperature = 0.1;
    double temperature_decay = 0.999;
    double ucb_c = 1.0;
    double prior_mean = 0.5;
    double prior_variance = 1.0;
    /// Observation noise variance assumed by Thompson sampling.
    double noise_variance = 0.05;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
        if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0) || !(temperature_decay > 0.0 && temperature_decay <= 1.0)) {
            throw std::invalid_argument("decay factors must lie in (0, 1]");
        }
        if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
        if (!(ucb_c >= 0.0)) throw std::invalid_argument("UCB exploration constant must be non-negative");
        if (!(prior_variance > 0.0) || !(noise_variance > 0.0)) throw std::invalid_argument("variances must be positive");
    }
};

struct ArmStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
};

/// Arms never pulled carry mean 0 (and the prior under Thompson sampling);
/// only pulled arms are stored.
class BanditPolicy {
public:
    BanditPolicy(std::uint64_t arms, BanditParams params)
        : arms_(arms), params_(params), epsilon_(params.epsilon), temperature_(params.temperature) {
        if (arms_ == 0) throw std::invalid_argument("bandit needs at least one arm");
        params_.validate();
    }

    std::uint64_t arm_count() const { return arms_; }
    std::uint64_t total_pulls() const { return total_; }
    const BanditParams& params() const { return params_; }
    const std::map<std::uint64_t, ArmStats>& tried() const { return stats_; }
    double epsilon() const { return epsilon_; }
    double temperature() const { return temperature_; }

    ArmStats stats(std::uint64_t arm) const {
        check(arm);
        const auto it = stats_.find(arm);
        return it == stats_.end() ? ArmStats{} : it->second;
    }

    std::uint64_t sample(Rng& rng) const {
        switch (params_.kind) {
            case BanditKind::epsilon_greedy: return sample_epsilon_greedy(rng);
            case BanditKind::softmax: return sample_softmax(rng);
            case BanditKind::ucb: return sample_ucb();
            case BanditKind::thompson: return sample_thompson(rng);
        }
        throw std::logic_error("unreachable");
    }

    void update(std::uint64_t arm, double reward) {
        check(arm);
        ArmStats& s = stats_[arm];
        ++s.count;
        const double delta = reward - s.mean;
        s.mean += delta / static_cast<double>(s.count);
        s.m2 += delta * (reward - s.mean);
        ++total_;
        if (params_.kind == BanditKind::epsilon_greedy) epsilon_ *= params_.epsilon_decay;
        if (params_.kind == BanditKind::softmax) {
            temperature_ = std::max(kMinTemperature, temperature_ * params_.temperature_decay);
        }
    }

    /// Sampling distribution over all arms; not defined for Thompson sampling.
    std::vector<double> probabilities() const {
        if (arms_ > (1u << 20)) throw std::invalid_argument("too many arms to list probabilities");
        const auto n = static_cast<std::size_t>(arms_);
        std::vector<double> p(n, 0.0);
        switch (params_.kind) {
            case BanditKind::epsilon_greedy: {
                const double best = best_mean();
                std::vector<std::size_t> ties;
                for (std::size_t i = 0; i < n; ++i) {
                    if (stats(i).mean == best) ties.push_back(i);
                }
                for (std::size_t i = 0; i < n; ++i) p[i] = epsilon_ / static_cast<double>(n);
                for (std::size_t i : ties) p[i] += (1.0 - epsilon_) / static_cast<double>(ties.size());
                break;
            }
            case BanditKind::softmax: {
                const double best = best_mean();
                double total = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    p[i] = std::exp((stats(i).mean - best) / temperature_);
                    total += p[i];
                }
                for (double& v : p) v /= total;
                break;
            }
            case BanditKind::ucb: p[static_cast<std::size_t>(sample_ucb())] = 1.0; break;
            case BanditKind::thompson: throw std::invalid_argument("Thompson sampling has no closed-form distribution");
        }
        return p;
    }

    nlohmann::json to_json() const {
        nlohmann::json arms = nlohmann::json::array();
        for (const auto& [arm, s] : stats_) {
            arms.push_back({{"arm", arm}, {"count", s.count}, {"mean", s.mean}});
        }
        return {{"kind", to_string(params_.kind)}, {"arm_count", arms_}, {"total_pulls", total_}, {"arms", arms}};
    }

private:
    static constexpr double kMinTemperature = 1e-6;

    void check(std::uint64_t arm) const {
        if (arm >= arms_) throw std::out_of_range("invalid arm");
    }

    std::uint64_t untried_count() const { return arms_ - stats_.size(); }

    double best_mean() const {
        double best = untried_count() > 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        for (const auto& [arm, s] : stats_) best = std::max(best, s.mean);
        return best;
    }

    // Uniform draw over arms that were never pulled.
    std::uint64_t random_untried(Rng& rng) const {
        const std::uint64_t untried = untried_count();
        if (stats_.size() * 2 < arms_) {
            for (;;) {
                const std::uint64_t arm = rng.uniform_index(arms_);
                if (!stats_.contains(arm)) return arm;
            }
        }
        std::uint64_t k = rng.uniform_index(untried);
        for (std::uint64_t arm = 0; arm < arms_; ++arm) {
            if (stats_.contains(arm)) continue;
            if (k-- == 0) return arm;
        }
        throw std::logic_error("untried arm bookkeeping");
    }

    std::uint64_t lowest_untried() const {
        std::uint64_t expected = 0;
        for (const auto& [arm, s] : stats_) {
            if (arm != expected) break;
            ++expected;
        }
        return expected;
    }

    std::uint64_t sample_epsilon_greedy(Rng& rng) const {
        if (rng.uniform01() < epsilon_) return rng.uniform_index(arms_);
        const double best = best_mean();
        std::vector<std::uint64_t> ties;
        for (const auto& [arm, s] : stats_) {
            if (s.mean == best) ties.push_back(arm);
        }
        const std::uint64_t untied = best == 0.0 ? untried_count() : 0;
        const std::uint64_t pick = rng.uniform_index(ties.size() + untied);
        return pick < ties.size() ? ties[static_cast<std::size_t>(pick)] : random_untried(rng);
    }

    std::uint64_t sample_softmax(Rng& rng) const {
        const double best = best_mean();
        double total = 0.0;
        std::vector<double> weights;
        weights.reserve(stats_.size());
        for (const auto& [arm, s] : stats_) {
            weights.push_back(std::exp((s.mean - best) / temperature_));
            total += weights.back();
        }
        const double untried_weight = static_cast<double>(untried_count()) * std::exp(-best / temperature_);
        total += untried_weight;
        double u = rng.uniform01() * total;
        std::size_t i = 0;
        for (const auto& [arm, s] : stats_) {
            if (u < weights[i]) return arm;
            u -= weights[i++];
        }
        if (untried_weight > 0.0) return random_untried(rng);
        return std::prev(stats_.end())->first;
    }

    std::uint64_t sample_ucb() const {
        if (untried_count() > 0) return lowest_untried();
        const double log_t = std::log(static_cast<double>(total_));
        std::uint64_t best_arm = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& [arm, s] : stats_) {
            const double score = s.mean + params_.ucb_c * std::sqrt(log_t / static_cast<double>(s.count));
            if (score > best) {
                best = score;
                best_arm = arm;
            }
        }
        return best_arm;
    }

    std::uint64_t sample_thompson(Rng& rng) const {
        const double prior_precision = 1.0 / params_.prior_variance;
        std::uint64_t best_arm = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& [arm, s] : stats_) {
            const double precision = prior_precision + static_cast<double>(s.count) / params_.noise_variance;
            const double mean =
                (params_.prior_mean * prior_precision + static_cast<double>(s.count) * s.mean / params_.noise_variance) /
                precision;
            const double draw = rng.normal(mean, std::sqrt(1.0 / precision));
            if (draw > best) {
                best = draw;
                best_arm = arm;
            }
        }
        if (const std::uint64_t k = untried_count(); k > 0) {
            // Maximum of k prior draws: F^k inverted, computed on the upper tail.
            const double u = std::max(rng.uniform01(), std::numeric_limits<double>::min());
            const double tail = -std::expm1(std::log(u) / static_cast<double>(k));
            const boost::math::normal prior(params_.prior_mean, std::sqrt(params_.prior_variance));
            const double draw = tail > 0.0 ? boost::math::quantile(boost::math::complement(prior, tail))
                                           : std::numeric_limits<double>::infinity();
            if (draw > best) return random_untried(rng);
        }
        return best_arm;
    }

    std::uint64_t arms_;
    BanditParams params_;
    double epsilon_;
    double temperature_;
    std::uint64_t total_ = 0;
    std::map<std::uint64_t, ArmStats> stats_;
};

}  // namespace csr
