#pragma once

// Upper-bound schedules by column generation: a main LP over a family of
// transmission sets and a pricing MILP that proposes new sets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csr/lp.hpp"
#include "csr/net_model.hpp"
#include "csr/sim.hpp"
#include "csr/units.hpp"
#include "json.hpp"

namespace csr {

enum class ObjectiveMode { fairness, throughput };
enum class PowerMode { continuous, grid };

inline std::string to_string(ObjectiveMode m) { return m == ObjectiveMode::fairness ? "fairness" : "throughput"; }
inline std::string to_string(PowerMode m) { return m == PowerMode::continuous ? "continuous" : "grid"; }

struct ActiveLink {
    ApId ap;
    StationId station;
    double power_mw = 0.0;
    std::optional<std::size_t> mcs;
};

struct TransmissionSet {
    /// Mb/s, indexed by station.
    std::vector<double> rates;
    std::vector<ActiveLink> links;

    TransmissionConfig to_config() const {
        TransmissionConfig cfg;
        for (const auto& l : links) cfg.entries.push_back({l.ap, l.station, mw_to_dbm(l.power_mw)});
        return cfg;
    }
};

struct DualValues {
    double alpha = 0.0;
    std::vector<double> beta;
};

struct Schedule {
    ObjectiveMode mode = ObjectiveMode::fairness;
    std::vector<TransmissionSet> sets;
    std::vector<double> shares;
    std::vector<double> station_throughput;
    double min_throughput = 0.0;
    double objective = 0.0;
    int iterations = 0;
    int pricing_calls = 0;
    double wall_time_s = 0.0;
    std::vector<double> objective_history;
    std::vector<std::string> warnings;

    double total_throughput() const {
        double s = 0.0;
        for (std::size_t i = 0; i < station_throughput.size(); ++i) s += station_throughput[i];
        return s;
    }
};

struct MainSolution {
    Schedule schedule;
    DualValues duals;
};

/// Stations that take part in optimization: those served by coordinated APs.
inline std::vector<char> optimized_stations(const Network& net) {
    std::vector<char> mask(net.stations().size(), 0);
    for (const auto& s : net.stations()) mask[s.id.index()] = net.ap(s.ap).coordinated ? 1 : 0;
    return mask;
}

/// Main LP. `included` selects the stations constrained by the fairness rows
/// and counted in the throughput objective (all stations when empty).
inline lp::Model build_main_model(const std::vector<TransmissionSet>& family, ObjectiveMode mode,
                                  const std::vector<char>& included) {
    const std::size_t ns = family.front().rates.size();
    lp::Model m;
    m.maximize = true;
    std::vector<int> w;
    for (std::size_t t = 0; t < family.size(); ++t) w.push_back(m.add_var(0.0, lp::kInf, 0.0, "w_" + std::to_string(t)));
    std::vector<int> r(ns, -1);
    for (std::size_t s = 0; s < ns; ++s) {
        if (!included[s]) continue;
        r[s] = m.add_var(-lp::kInf, lp::kInf, mode == ObjectiveMode::throughput ? 1.0 : 0.0, "R_" + std::to_string(s));
    }
    const int rmin = mode == ObjectiveMode::fairness ? m.add_var(-lp::kInf, lp::kInf, 1.0, "Rmin") : -1;

    std::vector<lp::Term> conv;
    for (int v : w) conv.push_back({v, 1.0});
    m.add_row(conv, lp::Sense::eq, 1.0, "convexity");
    for (std::size_t s = 0; s < ns; ++s) {
        if (r[s] < 0) continue;
        std::vector<lp::Term> terms{{r[s], 1.0}};
        for (std::size_t t = 0; t < family.size(); ++t) {
            if (family[t].rates[s] != 0.0) terms.push_back({w[t], -family[t].rates[s]});
        }
        m.add_row(terms, lp::Sense::eq, 0.0, "throughput_" + std::to_string(s));
    }
    if (rmin >= 0) {
        for (std::size_t s = 0; s < ns; ++s) {
            if (r[s] >= 0) m.add_row({{rmin, 1.0}, {r[s], -1.0}}, lp::Sense::le, 0.0, "fair_" + std::to_string(s));
        }
    }
    return m;
}

inline MainSolution solve_main(const std::vector<TransmissionSet>& family, ObjectiveMode mode,
                               std::vector<char> included = {}) {
    if (family.empty()) throw std::invalid_argument("transmission set family is empty");
    const std::size_t ns = family.front().rates.size();
    for (const auto& t : family) {
        if (t.rates.size() != ns) throw std::invalid_argument("rate vectors differ in length");
    }
    if (included.empty()) included.assign(ns, 1);
    if (included.size() != ns) throw std::invalid_argument("station mask does not match rate vectors");

    const lp::Model model = build_main_model(family, mode, included);
    const lp::Result res = lp::solve(model);
    if (res.status != lp::Status::optimal) throw std::runtime_error("main problem: " + lp::to_string(res.status));

    MainSolution out;
    Schedule& sch = out.schedule;
    sch.mode = mode;
    sch.sets = family;
    sch.shares.assign(family.size(), 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < family.size(); ++t) {
        sch.shares[t] = std::max(0.0, res.x[t]);
        total += sch.shares[t];
    }
    for (double& w : sch.shares) w /= total;
    sch.station_throughput.assign(ns, 0.0);
    for (std::size_t t = 0; t < family.size(); ++t) {
        for (std::size_t s = 0; s < ns; ++s) sch.station_throughput[s] += family[t].rates[s] * sch.shares[t];
    }
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < ns; ++s) {
        if (included[s]) lo = std::min(lo, sch.station_throughput[s]);
    }
    sch.min_throughput = std::isfinite(lo) ? lo : 0.0;
    sch.objective = res.objective;

    out.duals.alpha = res.duals[0];
    out.duals.beta.assign(ns, 0.0);
    std::size_t row = 1;
    for (std::size_t s = 0; s < ns; ++s) {
        if (!included[s]) continue;
        const double y = res.duals[row++];
        out.duals.beta[s] = mode == ObjectiveMode::fairness ? y : y - 1.0;
    }
    return out;
}

struct PricingInstance {
    const Network* net = nullptr;
    McsTable mcs = McsTable::ax_20mhz();
    PowerConfig power;
    DualValues duals;
    ObjectiveMode mode = ObjectiveMode::fairness;
    PowerMode power_mode = PowerMode::continuous;

    double max_power_mw(ApId a) const { return dbm_to_mw(std::min(power.max_power_dbm, net->ap(a).max_power_dbm)); }
    double min_power_mw() const { return dbm_to_mw(power.min_power_dbm); }

    std::vector<double> grid_mw(ApId a) const {
        std::vector<double> out;
        for (double dbm : power.levels_dbm) {
            if (dbm <= net->ap(a).max_power_dbm + 1e-9) out.push_back(dbm_to_mw(dbm));
        }
        return out;
    }

    /// Power used by the seed and single-link sets.
    double single_link_power_mw(ApId a) const {
        if (power_mode == PowerMode::continuous) return max_power_mw(a);
        const auto g = grid_mw(a);
        if (g.empty()) throw std::invalid_argument("no power level within AP limit");
        return *std::max_element(g.begin(), g.end());
    }

    double station_weight(StationId s) const {
        const double b = duals.beta.at(s.index());
        return mode == ObjectiveMode::fairness ? b : 1.0 + b;
    }

    std::vector<ApId> aps() const { return net->coordinated_aps(); }

    void validate() const {
        if (net == nullptr) throw std::invalid_argument("pricing instance without network");
        power.validate();
        mcs.validate();
        if (duals.beta.size() != net->stations().size()) throw std::invalid_argument("dual vector size mismatch");
    }
};

/// Upper bound of the interference-plus-noise side of the SINR row for link
/// (a, s) and mode m: every other coordinated AP at its maximum power.
inline double big_m(ApId a, StationId s, std::size_t m, const PricingInstance& inst) {
    const Network& net = *inst.net;
    double zeta = net.channel().noise_mw();
    for (ApId c : inst.aps()) {
        if (c != a) zeta += inst.max_power_mw(c) / net.loss(c, s);
    }
    return net.loss(a, s) * db_to_ratio(inst.mcs.min_sinr_db[m]) * zeta;
}

struct PricingModel {
    lp::Model model;
    struct LinkVars {
        ApId ap;
        StationId station;
        int y = -1;
        /// (mcs index, v variable) for the modes reachable without interference,
        /// ascending. v = 1 iff the selected mode is at least this one; the
        /// first entry is y itself.
        std::vector<std::pair<std::size_t, int>> modes;
    };
    std::vector<LinkVars> links;
    std::vector<std::pair<ApId, int>> power_vars;
    /// Branching priority per variable: links, then APs, then modes.
    std::vector<int> priority;
};

namespace detail {

// Can links (a -> s) and (b -> t) hold SINR targets ia and ib (linear) at
// the same time with only these two APs on?
inline bool pair_compatible(const PricingInstance& inst, ApId a, StationId s, double ia, ApId b, StationId t,
                            double ib) {
    const Network& net = *inst.net;
    const double noise = net.channel().noise_mw();
    const double A = net.loss(a, s) * ia / net.loss(b, s);
    const double B = net.loss(b, t) * ib / net.loss(a, t);
    const double ca = net.loss(a, s) * ia * noise;
    const double cb = net.loss(b, t) * ib * noise;
    const double ha = inst.max_power_mw(a) * (1.0 + 1e-9);
    const double hb = inst.max_power_mw(b) * (1.0 + 1e-9);
    if (inst.power_mode == PowerMode::grid) {
        for (double pa : inst.grid_mw(a)) {
            for (double pb : inst.grid_mw(b)) {
                if (pa * (1.0 + 1e-9) >= A * pb + ca && pb * (1.0 + 1e-9) >= B * pa + cb) return true;
            }
        }
        return false;
    }
    // Least point of pa >= max(L, A pb + ca), pb >= max(L, B pa + cb): the
    // componentwise minimum over the fixed points of the four affine pieces.
    if (A * B >= 1.0) return false;
    const double L = inst.min_power_mw();
    double best_a = lp::kInf;
    double best_b = lp::kInf;
    auto consider = [&](double pa, double pb) {
        const double tol = 1e-12 * std::max(pa, pb);
        if (pa + tol < L || pb + tol < L || pa + tol < A * pb + ca || pb + tol < B * pa + cb) return;
        best_a = std::min(best_a, pa);
        best_b = std::min(best_b, pb);
    };
    consider(L, L);
    consider(L, B * L + cb);
    consider(A * L + ca, L);
    consider((ca + A * cb) / (1.0 - A * B), (cb + B * ca) / (1.0 - A * B));
    return best_a <= ha && best_b <= hb;
}

}  // namespace detail

/// Builds the pricing MILP. Mode choice uses the cumulative encoding
/// v_em = sum of u_em' over m' >= m, which has the same integer points as the
/// one-hot form; u_em = v_em - v_e(m+1). Links whose station has non-positive
/// weight and modes unreachable even without interference are left out,
/// since neither can improve the objective.
inline PricingModel build_pricing_model(const PricingInstance& inst) {
    inst.validate();
    const Network& net = *inst.net;
    const double noise = net.channel().noise_mw();
    PricingModel pm;
    lp::Model& m = pm.model;
    m.maximize = true;
    m.objective_offset = -inst.duals.alpha;

    const std::vector<ApId> aps = inst.aps();
    std::vector<int> xvar(net.aps().size(), -1);
    std::vector<int> pvar(net.aps().size(), -1);
    std::vector<int> kind;
    auto track = [&](int var, int k) {
        kind.resize(static_cast<std::size_t>(var) + 1, 0);
        kind[static_cast<std::size_t>(var)] = k;
        return var;
    };
    for (ApId a : aps) {
        std::vector<PricingModel::LinkVars> mine;
        const double pmax = inst.max_power_mw(a);
        for (StationId s : net.served_by(a)) {
            const double weight = inst.station_weight(s);
            if (!(weight > 1e-12)) continue;
            PricingModel::LinkVars lv{a, s, -1, {}};
            for (std::size_t k = 0; k < inst.mcs.size(); ++k) {
                if (pmax / (net.loss(a, s) * noise) < db_to_ratio(inst.mcs.min_sinr_db[k])) break;
                lv.modes.push_back({k, -1});
            }
            if (!lv.modes.empty()) mine.push_back(std::move(lv));
        }
        if (mine.empty()) continue;
        const std::string an = std::to_string(a.value);
        xvar[a.index()] = track(m.add_binary(0.0, "x_" + an), 1);
        pvar[a.index()] = track(m.add_var(0.0, pmax, 0.0, "p_" + an), 0);
        pm.power_vars.push_back({a, pvar[a.index()]});
        for (auto& lv : mine) {
            const std::string en = an + "_" + std::to_string(lv.station.value);
            const double weight = inst.station_weight(lv.station);
            double prev = 0.0;
            for (std::size_t j = 0; j < lv.modes.size(); ++j) {
                auto& [k, v] = lv.modes[j];
                const double gain = weight * (inst.mcs.rates_mbps[k] - prev);
                prev = inst.mcs.rates_mbps[k];
                v = j == 0 ? track(m.add_binary(gain, "y_" + en), 2)
                           : track(m.add_binary(gain, "v_" + en + "_" + std::to_string(k)), 0);
            }
            lv.y = lv.modes.front().second;
            pm.links.push_back(std::move(lv));
        }
    }

    for (ApId a : aps) {
        const int x = xvar[a.index()];
        if (x < 0) continue;
        const int p = pvar[a.index()];
        const std::string an = std::to_string(a.value);
        std::vector<lp::Term> on{{x, 1.0}};
        for (const auto& lv : pm.links) {
            if (lv.ap == a) on.push_back({lv.y, -1.0});
        }
        m.add_row(on, lp::Sense::eq, 0.0, "ap_on_" + an);
        if (inst.power_mode == PowerMode::continuous) {
            m.add_row({{p, 1.0}, {x, -inst.min_power_mw()}}, lp::Sense::ge, 0.0, "pmin_" + an);
            m.add_row({{p, 1.0}, {x, -inst.max_power_mw(a)}}, lp::Sense::le, 0.0, "pmax_" + an);
        } else {
            const auto grid = inst.grid_mw(a);
            std::vector<lp::Term> pick{{x, -1.0}};
            std::vector<lp::Term> level{{p, 1.0}};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const int z = track(m.add_binary(0.0, "z_" + an + "_" + std::to_string(k)), 1);
                pick.push_back({z, 1.0});
                level.push_back({z, -grid[k]});
            }
            m.add_row(pick, lp::Sense::eq, 0.0, "grid_pick_" + an);
            m.add_row(level, lp::Sense::eq, 0.0, "grid_level_" + an);
        }
    }

    for (const auto& lv : pm.links) {
        const std::string en = std::to_string(lv.ap.value) + "_" + std::to_string(lv.station.value);
        for (std::size_t j = 1; j < lv.modes.size(); ++j) {
            m.add_row({{lv.modes[j].second, 1.0}, {lv.modes[j - 1].second, -1.0}}, lp::Sense::le, 0.0,
                      "order_" + en + "_" + std::to_string(lv.modes[j].first));
        }
        const double l = net.loss(lv.ap, lv.station);
        for (const auto& [k, v] : lv.modes) {
            const double i = db_to_ratio(inst.mcs.min_sinr_db[k]);
            const double big = big_m(lv.ap, lv.station, k, inst);
            // p_a + M (1 - v) >= l i (sum_c p_c / l_c + N)
            std::vector<lp::Term> terms{{pvar[lv.ap.index()], 1.0}, {v, -big}};
            for (ApId c : aps) {
                if (c == lv.ap || pvar[c.index()] < 0) continue;
                terms.push_back({pvar[c.index()], -l * i / net.loss(c, lv.station)});
            }
            m.add_row(terms, lp::Sense::ge, l * i * noise - big, "sinr_" + en + "_" + std::to_string(k));
        }
    }
    // Conflict rows: mode k on link e excludes, for each other AP, every
    // link at or above the lowest mode that cannot coexist with it even when
    // the two APs are alone. Rows identical in their conflict set to the one
    // for a lower mode are dominated and skipped.
    for (const auto& le : pm.links) {
        const std::string en = std::to_string(le.ap.value) + "_" + std::to_string(le.station.value);
        for (ApId b : aps) {
            if (b == le.ap || xvar[b.index()] < 0) continue;
            std::vector<int> previous;
            for (const auto& [k, v] : le.modes) {
                const double ik = db_to_ratio(inst.mcs.min_sinr_db[k]);
                std::vector<int> conflict;
                for (const auto& lf : pm.links) {
                    if (lf.ap != b) continue;
                    for (const auto& [k2, v2] : lf.modes) {
                        const double ik2 = db_to_ratio(inst.mcs.min_sinr_db[k2]);
                        if (!detail::pair_compatible(inst, le.ap, le.station, ik, b, lf.station, ik2)) {
                            conflict.push_back(v2);
                            break;
                        }
                    }
                }
                if (conflict.empty() || conflict == previous) continue;
                previous = conflict;
                std::vector<lp::Term> terms{{v, 1.0}};
                for (int c : conflict) terms.push_back({c, 1.0});
                m.add_row(terms, lp::Sense::le, 1.0,
                          "conflict_" + en + "_" + std::to_string(k) + "_" + std::to_string(b.value));
            }
        }
    }
    kind.resize(m.var_count(), 0);
    pm.priority = std::move(kind);
    return pm;
}

struct PricingResult {
    TransmissionSet set;
    double reduced_cost = 0.0;
    long nodes = 0;
};

inline TransmissionSet single_link_set(const Network& net, const McsTable& mcs, ApId a, StationId s, double power_mw) {
    TransmissionSet t;
    t.rates.assign(net.stations().size(), 0.0);
    const Transmission tx{a, s, mw_to_dbm(power_mw)};
    const auto choice = best_mcs(sinr_db(net, std::span<const Transmission>(&tx, 1), 0), mcs);
    t.links.push_back({a, s, power_mw, choice ? std::optional<std::size_t>(choice->index) : std::nullopt});
    if (choice) t.rates[s.index()] = choice->rate_mbps;
    return t;
}

enum class PricingMethod { search, milp };

inline std::string to_string(PricingMethod m) { return m == PricingMethod::search ? "search" : "milp"; }

namespace detail {

struct Candidate {
    ApId ap;
    StationId station;
    double weight = 0.0;
    /// Highest mode reachable without interference.
    int alone_max = -1;
};

// Least power vector meeting every link's SINR target with the other links
// as interferers, or none. Continuous powers use the monotone fixed point
// p = max(P_min, F p + eta); grid powers round each step up to the next
// level. Both converge to the least feasible point when one exists.
class PowerSolver {
public:
    explicit PowerSolver(const PricingInstance& inst) : inst_(inst), noise_(inst.net->channel().noise_mw()) {}

    struct Entry {
        ApId ap;
        StationId station;
        double target = 0.0;  // linear SINR
    };

    std::optional<std::vector<double>> solve(const std::vector<Entry>& links) const {
        const std::size_t n = links.size();
        const Network& net = *inst_.net;
        std::vector<double> hi(n);
        std::vector<std::vector<double>> grid(n);
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            hi[i] = inst_.max_power_mw(links[i].ap);
            if (inst_.power_mode == PowerMode::grid) {
                grid[i] = inst_.grid_mw(links[i].ap);
                std::sort(grid[i].begin(), grid[i].end());
                p[i] = grid[i].front();
            } else {
                p[i] = inst_.min_power_mw();
            }
        }
        auto need = [&](std::size_t i) {
            double zeta = noise_;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) zeta += p[j] / net.loss(links[j].ap, links[i].station);
            }
            return net.loss(links[i].ap, links[i].station) * links[i].target * zeta;
        };
        for (int it = 0; it < 2000; ++it) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                double want = need(i);
                if (want <= p[i]) continue;
                if (inst_.power_mode == PowerMode::grid) {
                    const auto up = std::lower_bound(grid[i].begin(), grid[i].end(), want * (1.0 - 1e-12));
                    if (up == grid[i].end()) return std::nullopt;
                    want = *up;
                    if (want <= p[i]) continue;
                } else if (want > hi[i] * (1.0 + 1e-12)) {
                    return std::nullopt;
                }
                if (want > p[i] * (1.0 + 1e-13)) changed = true;
                p[i] = std::min(std::max(want, p[i]), hi[i]);
            }
            if (!changed) return p;
        }
        if (inst_.power_mode == PowerMode::grid) return p;
        return solve_lp(links);
    }

private:
    // Slow convergence (spectral radius close to one): decide exactly.
    std::optional<std::vector<double>> solve_lp(const std::vector<Entry>& links) const {
        const Network& net = *inst_.net;
        lp::Model m;
        m.maximize = false;
        std::vector<int> v;
        for (const auto& l : links) v.push_back(m.add_var(inst_.min_power_mw(), inst_.max_power_mw(l.ap), 1.0));
        for (std::size_t i = 0; i < links.size(); ++i) {
            const double li = net.loss(links[i].ap, links[i].station) * links[i].target;
            std::vector<lp::Term> t{{v[i], 1.0}};
            for (std::size_t j = 0; j < links.size(); ++j) {
                if (j != i) t.push_back({v[j], -li / net.loss(links[j].ap, links[i].station)});
            }
            m.add_row(t, lp::Sense::ge, li * noise_);
        }
        const auto r = lp::solve(m);
        if (r.status != lp::Status::optimal) return std::nullopt;
        return r.x;
    }

    const PricingInstance& inst_;
    double noise_;
};

// Depth-first branch and bound over AP groups in id order. Each group picks
// one (station, mode) or stays silent. At every node, minimum powers of the
// picked links are propagated; together with pairwise compatibility they cap
// the reachable mode of every open link. The bound adds the best capped value
// of each open group, tightened over a greedy partition of open groups into
// pairs that cannot both reach their best. Leaves are checked for exact power
// feasibility.
class PricingSearch {
public:
    /// With `truncate`, running out of nodes ends the search with the best
    /// set found so far instead of throwing.
    PricingSearch(const PricingInstance& inst, double cutoff, long node_limit, bool truncate = false)
        : inst_(inst), power_(inst), incumbent_(cutoff), node_limit_(node_limit), truncate_(truncate) {
        const Network& net = *inst.net;
        noise_ = net.channel().noise_mw();
        for (std::size_t k = 0; k < inst.mcs.size(); ++k) targets_.push_back(db_to_ratio(inst.mcs.min_sinr_db[k]));
        for (ApId a : inst.aps()) {
            Group g{a, {}, inst.max_power_mw(a), 0.0, {}};
            for (StationId s : net.served_by(a)) {
                const double w = inst.station_weight(s);
                if (!(w > 1e-12)) continue;
                Candidate c{a, s, w, -1};
                for (std::size_t k = 0; k < targets_.size(); ++k) {
                    if (g.pmax / (net.loss(a, s) * noise_) < targets_[k]) break;
                    c.alone_max = static_cast<int>(k);
                }
                if (c.alone_max < 0) continue;
                g.cands.push_back(cands_.size());
                cands_.push_back(c);
            }
            if (g.cands.empty()) continue;
            if (inst.power_mode == PowerMode::grid) {
                g.grid = inst.grid_mw(a);
                std::sort(g.grid.begin(), g.grid.end());
                g.pmin = g.grid.front();
            } else {
                g.pmin = inst.min_power_mw();
            }
            groups_.push_back(std::move(g));
        }
        const std::size_t n = cands_.size();
        group_of_.assign(n, 0);
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            for (std::size_t e : groups_[g].cands) group_of_[e] = g;
        }
        // compat_[(e * modes + k) * n + f]: highest mode of f compatible with e at k.
        const std::size_t modes = targets_.size();
        compat_.assign(n * modes * n, -1);
        for (std::size_t e = 0; e < n; ++e) {
            for (int k = 0; k <= cands_[e].alone_max; ++k) {
                for (std::size_t f = 0; f < n; ++f) {
                    if (group_of_[f] == group_of_[e]) continue;
                    int best = -1;
                    for (int k2 = cands_[f].alone_max; k2 >= 0; --k2) {
                        if (pair_compatible(inst, cands_[e].ap, cands_[e].station, targets_[static_cast<std::size_t>(k)],
                                            cands_[f].ap, cands_[f].station, targets_[static_cast<std::size_t>(k2)])) {
                            best = k2;
                            break;
                        }
                    }
                    compat_[(e * modes + static_cast<std::size_t>(k)) * n + f] = best;
                }
            }
        }
        on_.assign(groups_.size(), -1);
        pick_.assign(groups_.size(), {-1, -1});
        floor_.assign(groups_.size(), 0.0);
        capv_.assign(n, -1);
        best_.assign(groups_.size(), 0.0);
    }

    struct Choice {
        std::size_t cand;
        int mode;
        double power_mw;
    };

    /// Best assignment strictly above the cutoff, if any.
    std::optional<std::vector<Choice>> run() {
        const auto root = evaluate();
        root_bound_ = root ? *root : -lp::kInf;
        try {
            if (root && *root > incumbent_ + gap()) dfs(0);
        } catch (const Truncated&) {
            truncated_ = true;
        }
        if (!found_) return std::nullopt;
        return incumbent_set_;
    }

    double incumbent() const { return incumbent_; }
    long nodes() const { return nodes_; }
    bool truncated() const { return truncated_; }
    const std::vector<Candidate>& candidates() const { return cands_; }

private:
    struct Truncated {};

    struct Group {
        ApId ap;
        std::vector<std::size_t> cands;
        double pmax;
        double pmin;
        std::vector<double> grid;
    };

    double gap() const { return 1e-9 * std::max(1.0, std::abs(incumbent_)); }

    double value(std::size_t e, int k) const {
        return cands_[e].weight * inst_.mcs.rates_mbps[static_cast<std::size_t>(k)];
    }

    // Interference plus noise at candidate e's station from the other
    // transmitting groups at their floors.
    double zeta(std::size_t e) const {
        const Network& net = *inst_.net;
        double z = noise_;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            if (pick_[g].first >= 0 && g != group_of_[e]) z += floor_[g] / net.loss(groups_[g].ap, cands_[e].station);
        }
        return z;
    }

    // Highest mode of e compatible with the decided links and reachable at
    // full power against the floors; -1 if none.
    int cap(std::size_t e) const {
        const std::size_t n = cands_.size();
        int k = cands_[e].alone_max;
        for (std::size_t g = 0; g < groups_.size() && k >= 0; ++g) {
            if (pick_[g].first < 0) continue;
            const auto c = static_cast<std::size_t>(pick_[g].first);
            k = std::min(k, compat_[(c * targets_.size() + static_cast<std::size_t>(pick_[g].second)) * n + e]);
        }
        if (k < 0) return -1;
        const double sinr = groups_[group_of_[e]].pmax / (inst_.net->loss(cands_[e].ap, cands_[e].station) * zeta(e));
        while (k >= 0 && targets_[static_cast<std::size_t>(k)] > sinr * (1.0 + 1e-12)) --k;
        return k;
    }

    double round_up(std::size_t g, double p) const {
        if (groups_[g].grid.empty()) return p;
        const auto& grid = groups_[g].grid;
        const auto it = std::lower_bound(grid.begin(), grid.end(), p * (1.0 - 1e-12));
        return it == grid.end() ? lp::kInf : *it;
    }

    // Propagates floors and returns the node bound, or none if infeasible.
    std::optional<double> evaluate() {
        ++nodes_;
        if (nodes_ > node_limit_) {
            if (truncate_) throw Truncated{};
            throw lp::NodeLimitExceeded(incumbent_, root_bound_);
        }
        const Network& net = *inst_.net;
        for (std::size_t g = 0; g < groups_.size(); ++g) floor_[g] = pick_[g].first >= 0 ? groups_[g].pmin : 0.0;
        for (int it = 0; it < 100; ++it) {
            bool changed = false;
            for (std::size_t g = 0; g < groups_.size(); ++g) {
                if (pick_[g].first < 0) continue;
                const auto e = static_cast<std::size_t>(pick_[g].first);
                double need =
                    net.loss(cands_[e].ap, cands_[e].station) * targets_[static_cast<std::size_t>(pick_[g].second)] * zeta(e);
                need = round_up(g, need);
                if (need > groups_[g].pmax * (1.0 + 1e-12)) return std::nullopt;
                if (need > floor_[g] * (1.0 + 1e-12)) {
                    floor_[g] = std::min(need, groups_[g].pmax);
                    changed = true;
                }
            }
            if (!changed) break;
        }
        double bound = -inst_.duals.alpha;
        open_.clear();
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            if (pick_[g].first >= 0) {
                bound += value(static_cast<std::size_t>(pick_[g].first), pick_[g].second);
                continue;
            }
            if (on_[g] == 0) continue;
            double best = 0.0;
            for (std::size_t e : groups_[g].cands) {
                capv_[e] = cap(e);
                if (capv_[e] >= 0) best = std::max(best, value(e, capv_[e]));
            }
            best_[g] = best;
            bound += best;
            if (best > 0.0) open_.push_back(g);
        }
        // Disjoint pairs of open groups: subtract what their joint best
        // loses against the two independent bests.
        if (open_.size() >= 2) {
            savings_.clear();
            for (std::size_t i = 0; i < open_.size(); ++i) {
                for (std::size_t j = i + 1; j < open_.size(); ++j) {
                    const double joint = pair_best(open_[i], open_[j]);
                    const double save = best_[open_[i]] + best_[open_[j]] - joint;
                    if (save > 0.0) savings_.push_back({save, {open_[i], open_[j]}});
                }
            }
            std::sort(savings_.begin(), savings_.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
            used_.assign(groups_.size(), 0);
            for (const auto& [save, gh] : savings_) {
                if (used_[gh.first] || used_[gh.second]) continue;
                used_[gh.first] = used_[gh.second] = 1;
                bound -= save;
            }
        }
        return bound;
    }

    double pair_best(std::size_t g, std::size_t h) const {
        const std::size_t n = cands_.size();
        double joint = std::max(best_[g], best_[h]);
        for (std::size_t e : groups_[g].cands) {
            for (int k = capv_[e]; k >= 0; --k) {
                const double ve = value(e, k);
                if (ve + best_[h] <= joint) break;
                double partner = 0.0;
                for (std::size_t f : groups_[h].cands) {
                    const int kf = std::min(capv_[f], compat_[(e * targets_.size() + static_cast<std::size_t>(k)) * n + f]);
                    if (kf >= 0) partner = std::max(partner, value(f, kf));
                }
                joint = std::max(joint, ve + partner);
            }
        }
        return joint;
    }

    void leaf() {
        std::vector<PowerSolver::Entry> entries;
        std::vector<Choice> choice;
        double total = -inst_.duals.alpha;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            if (on_[g] != 1) continue;
            const auto e = static_cast<std::size_t>(pick_[g].first);
            entries.push_back({cands_[e].ap, cands_[e].station, targets_[static_cast<std::size_t>(pick_[g].second)]});
            choice.push_back({e, pick_[g].second, 0.0});
            total += value(e, pick_[g].second);
        }
        if (choice.empty() || total <= incumbent_ + gap()) return;
        const auto powers = power_.solve(entries);
        if (!powers) return;
        for (std::size_t i = 0; i < choice.size(); ++i) choice[i].power_mw = (*powers)[i];
        incumbent_ = total;
        incumbent_set_ = std::move(choice);
        found_ = true;
    }

    void dfs(std::size_t g) {
        if (g == groups_.size()) {
            leaf();
            return;
        }
        const auto here = evaluate();
        if (!here || *here <= incumbent_ + gap()) return;
        std::vector<std::pair<double, std::pair<int, int>>> options;
        for (std::size_t e : groups_[g].cands) {
            for (int k = cap(e); k >= 0; --k) options.push_back({value(e, k), {static_cast<int>(e), k}});
        }
        std::stable_sort(options.begin(), options.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        // Bound on everything but g: the node with g silent.
        on_[g] = 0;
        const auto rest = evaluate();
        if (!rest) {
            on_[g] = -1;
            return;
        }
        on_[g] = 1;
        for (const auto& [v, ek] : options) {
            if (*rest + v <= incumbent_ + gap()) break;
            pick_[g] = ek;
            dfs(g + 1);
        }
        pick_[g] = {-1, -1};
        on_[g] = 0;
        if (*rest > incumbent_ + gap()) dfs(g + 1);
        on_[g] = -1;
    }

    const PricingInstance& inst_;
    PowerSolver power_;
    double noise_ = 0.0;
    std::vector<double> targets_;
    std::vector<Candidate> cands_;
    std::vector<Group> groups_;
    std::vector<std::size_t> group_of_;
    std::vector<int> compat_;
    std::vector<int> on_;
    std::vector<std::pair<int, int>> pick_;
    std::vector<double> floor_;
    std::vector<int> capv_;
    std::vector<double> best_;
    std::vector<std::size_t> open_;
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> savings_;
    std::vector<char> used_;
    std::vector<Choice> incumbent_set_;
    bool found_ = false;
    double incumbent_;
    double root_bound_ = lp::kInf;
    long node_limit_;
    bool truncate_;
    bool truncated_ = false;
    long nodes_ = 0;
};

}  // namespace detail

/// Returns the best new set when its reduced cost exceeds `tolerance`.
/// A positive `budget` caps the search at that many nodes; the result is then
/// an improving set but not necessarily the best one, and none proves nothing.
inline std::optional<PricingResult> solve_pricing(const PricingInstance& inst, double tolerance = 1e-6,
                                                  PricingMethod method = PricingMethod::search,
                                                  const lp::MilpOptions& milp = {}, long budget = 0) {
    inst.validate();
    const Network& net = *inst.net;

    // Best single link gives the initial cutoff.
    std::optional<TransmissionSet> single;
    double single_value = -lp::kInf;
    for (ApId a : inst.aps()) {
        for (StationId s : net.served_by(a)) {
            if (!(inst.station_weight(s) > 1e-12)) continue;
            auto t = single_link_set(net, inst.mcs, a, s, inst.single_link_power_mw(a));
            const double v = -inst.duals.alpha + inst.station_weight(s) * t.rates[s.index()];
            if (v > single_value) {
                single_value = v;
                single = std::move(t);
            }
        }
    }
    const double cutoff = std::max(tolerance, single_value);

    PricingResult out;
    out.set.rates.assign(net.stations().size(), 0.0);
    if (method == PricingMethod::search) {
        detail::PricingSearch search(inst, cutoff, budget > 0 ? budget : milp.node_limit, budget > 0);
        const auto best = search.run();
        out.nodes = search.nodes();
        if (best) {
            out.reduced_cost = search.incumbent();
            for (const auto& c : *best) {
                const auto& cand = search.candidates()[c.cand];
                const auto mode = static_cast<std::size_t>(c.mode);
                out.set.links.push_back({cand.ap, cand.station, c.power_mw, mode});
                out.set.rates[cand.station.index()] = inst.mcs.rates_mbps[mode];
            }
            return out;
        }
    } else {
        const PricingModel pm = build_pricing_model(inst);
        lp::MilpOptions opt = milp;
        opt.cutoff = cutoff;
        const lp::MilpResult res =
            pm.model.var_count() == 0 ? lp::MilpResult{} : lp::solve_milp(pm.model, opt, pm.priority);
        out.nodes = res.nodes;
        if (res.status == lp::MilpStatus::optimal) {
            out.reduced_cost = res.objective;
            for (const auto& lv : pm.links) {
                if (res.x[static_cast<std::size_t>(lv.y)] < 0.5) continue;
                std::size_t mode = lv.modes.front().first;
                for (const auto& [k, v] : lv.modes) {
                    if (res.x[static_cast<std::size_t>(v)] > 0.5) mode = k;
                }
                double p = 0.0;
                for (const auto& [a, v] : pm.power_vars) {
                    if (a == lv.ap) p = res.x[static_cast<std::size_t>(v)];
                }
                out.set.links.push_back({lv.ap, lv.station, p, mode});
                out.set.rates[lv.station.index()] = inst.mcs.rates_mbps[mode];
            }
            return out;
        }
    }
    if (single && single_value > tolerance) {
        out.reduced_cost = single_value;
        out.set = std::move(*single);
        return out;
    }
    return std::nullopt;
}

struct ColumnGenerationOptions {
    ObjectiveMode mode = ObjectiveMode::fairness;
    PowerMode power_mode = PowerMode::continuous;
    double tolerance = 1e-6;
    int max_iterations = 100000;
    PricingMethod pricing = PricingMethod::search;
    lp::MilpOptions milp;
    /// Node budget of the truncated search tried before each exact pricing
    /// call. Zero disables it.
    long heuristic_nodes = 5000;
    /// When set, every main and pricing instance is written there in LP format.
    std::optional<std::filesystem::path> export_dir;
};

namespace detail {

inline bool same_rates(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-9) return false;
    }
    return true;
}

inline void export_model(const std::optional<std::filesystem::path>& dir, const std::string& name, const lp::Model& m) {
    if (!dir) return;
    std::filesystem::create_directories(*dir);
    std::ofstream os(*dir / name);
    if (!os) throw std::runtime_error("cannot write " + (*dir / name).string());
    lp::write_lp_format(os, m);
}

}  // namespace detail

inline Schedule column_generation(const Network& net, const McsTable& mcs, const PowerConfig& power,
                                  const ColumnGenerationOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<char> included = optimized_stations(net);
    PricingInstance inst;
    inst.net = &net;
    inst.mcs = mcs;
    inst.power = power;
    inst.mode = opt.mode;
    inst.power_mode = opt.power_mode;

    std::vector<TransmissionSet> family;
    for (ApId a : net.coordinated_aps()) {
        if (net.served_by(a).empty()) throw std::invalid_argument("AP " + std::to_string(a.value) + " has no station");
        for (StationId s : net.served_by(a)) family.push_back(single_link_set(net, mcs, a, s, inst.single_link_power_mw(a)));
    }
    if (family.empty()) throw std::invalid_argument("no coordinated AP");

    Schedule result;
    std::vector<double> history;
    std::vector<std::string> warnings;
    int pricing_calls = 0;
    int rejected = 0;
    int iteration = 0;
    for (;; ++iteration) {
        if (iteration >= opt.max_iterations) {
            warnings.push_back("iteration limit reached");
            break;
        }
        detail::export_model(opt.export_dir, "main_" + std::to_string(iteration) + ".lp",
                             build_main_model(family, opt.mode, included));
        MainSolution main = solve_main(family, opt.mode, included);
        history.push_back(main.schedule.objective);
        result = std::move(main.schedule);
        inst.duals = std::move(main.duals);
        if (opt.export_dir) {
            detail::export_model(opt.export_dir, "pricing_" + std::to_string(iteration) + ".lp",
                                 build_pricing_model(inst).model);
        }
        ++pricing_calls;
        std::optional<PricingResult> priced;
        if (opt.pricing == PricingMethod::search && opt.heuristic_nodes > 0) {
            priced = solve_pricing(inst, opt.tolerance, opt.pricing, opt.milp, opt.heuristic_nodes);
        }
        if (!priced) {
            try {
                priced = solve_pricing(inst, opt.tolerance, opt.pricing, opt.milp);
            } catch (const lp::NodeLimitExceeded& e) {
                // Any column improves the objective by at most its reduced cost.
                warnings.push_back("pricing node limit reached; objective within " +
                                   std::to_string(std::max(0.0, e.best_bound())) + " of optimal");
                break;
            }
        }
        if (!priced) break;
        const bool duplicate = std::any_of(family.begin(), family.end(),
                                           [&](const auto& t) { return detail::same_rates(t.rates, priced->set.rates); });
        if (duplicate) {
            if (++rejected >= 2) {
                warnings.push_back("pricing repeated an existing transmission set; stopped");
                break;
            }
            continue;
        }
        rejected = 0;
        family.push_back(std::move(priced->set));
    }
    result.iterations = iteration + 1;
    result.pricing_calls = pricing_calls;
    result.objective_history = std::move(history);
    result.warnings = std::move(warnings);
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Exhaustive oracle over AP subsets, one station per AP and grid powers.
inline Schedule brute_force_schedule(const Network& net, const McsTable& mcs, const std::vector<double>& levels_dbm,
                                     ObjectiveMode mode) {
    const auto aps = net.coordinated_aps();
    std::size_t station_count = 0;
    for (ApId a : aps) station_count += net.served_by(a).size();
    if (aps.size() > 4 || station_count > 12) throw std::invalid_argument("brute force limited to 4 APs and 12 stations");
    if (levels_dbm.empty()) throw std::invalid_argument("empty power grid");

    std::vector<TransmissionSet> family;
    // Per AP choice: 0 = silent, otherwise 1 + station * levels + level.
    std::vector<std::size_t> radix;
    for (ApId a : aps) radix.push_back(1 + net.served_by(a).size() * levels_dbm.size());
    std::vector<std::size_t> digit(aps.size(), 0);
    for (;;) {
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == radix[i]) digit[i++] = 0;
        if (i == digit.size()) break;

        std::vector<Transmission> active;
        for (std::size_t k = 0; k < aps.size(); ++k) {
            if (digit[k] == 0) continue;
            const std::size_t c = digit[k] - 1;
            const auto& served = net.served_by(aps[k]);
            active.push_back({aps[k], served[c / levels_dbm.size()], levels_dbm[c % levels_dbm.size()]});
        }
        TransmissionSet t;
        t.rates.assign(net.stations().size(), 0.0);
        for (std::size_t k = 0; k < active.size(); ++k) {
            const auto choice = best_mcs(sinr_db(net, active, k), mcs);
            t.links.push_back({active[k].ap, active[k].station, dbm_to_mw(active[k].power_dbm),
                               choice ? std::optional<std::size_t>(choice->index) : std::nullopt});
            if (choice) t.rates[active[k].station.index()] = choice->rate_mbps;
        }
        const bool seen = std::any_of(family.begin(), family.end(),
                                      [&](const auto& u) { return detail::same_rates(u.rates, t.rates); });
        if (!seen) family.push_back(std::move(t));
    }
    Schedule s = solve_main(family, mode, optimized_stations(net)).schedule;
    s.iterations = 1;
    return s;
}

inline nlohmann::json to_json(const Schedule& s) {
    nlohmann::json sets = nlohmann::json::array();
    for (std::size_t t = 0; t < s.sets.size(); ++t) {
        nlohmann::json links = nlohmann::json::array();
        for (const auto& l : s.sets[t].links) {
            nlohmann::json lj{{"ap", l.ap.value}, {"station", l.station.value}, {"power_dbm", mw_to_dbm(l.power_mw)}};
            lj["mcs"] = l.mcs ? nlohmann::json(*l.mcs) : nlohmann::json(nullptr);
            links.push_back(lj);
        }
        sets.push_back({{"share", s.shares[t]}, {"rates_mbps", s.sets[t].rates}, {"links", links}});
    }
    return {{"mode", to_string(s.mode)},
            {"objective", s.objective},
            {"min_throughput_mbps", s.min_throughput},
            {"total_throughput_mbps", s.total_throughput()},
            {"station_throughput_mbps", s.station_throughput},
            {"iterations", s.iterations},
            {"pricing_calls", s.pricing_calls},
            {"wall_time_s", s.wall_time_s},
            {"objective_history", s.objective_history},
            {"warnings", s.warnings},
            {"sets", sets}};
}

}  // namespace csr
