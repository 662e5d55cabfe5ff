#pragma once

// Dense bounded-variable primal simplex with dual values, plus a
// best-bound branch-and-bound driver for mixed binary programs.
//
// Problems are small (a few hundred rows), so the full tableau is kept in
// memory. Rows are equilibrated before solving; reported duals and reduced
// costs refer to the unscaled model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csr::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { le, ge, eq };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Row {
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
    std::string name;
};

struct Model {
    bool maximize = true;
    double objective_offset = 0.0;
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<char> integer;
    std::vector<std::string> names;
    std::vector<Row> rows;

    int add_var(double lo, double hi, double obj, std::string name = {}, bool is_integer = false) {
        objective.push_back(obj);
        lower.push_back(lo);
        upper.push_back(hi);
        integer.push_back(is_integer ? 1 : 0);
        names.push_back(name.empty() ? "x" + std::to_string(objective.size() - 1) : std::move(name));
        return static_cast<int>(objective.size()) - 1;
    }

    int add_binary(double obj, std::string name = {}) { return add_var(0.0, 1.0, obj, std::move(name), true); }

    int add_row(std::vector<Term> terms, Sense sense, double rhs, std::string name = {}) {
        for (const auto& t : terms) {
            if (t.var < 0 || static_cast<std::size_t>(t.var) >= objective.size()) {
                throw std::out_of_range("row references unknown variable");
            }
        }
        rows.push_back({std::move(terms), sense, rhs, name.empty() ? "r" + std::to_string(rows.size()) : std::move(name)});
        return static_cast<int>(rows.size()) - 1;
    }

    std::size_t var_count() const { return objective.size(); }
    std::size_t row_count() const { return rows.size(); }
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    int max_iterations = 200000;
};

struct Result {
    Status status = Status::infeasible;
    double objective = 0.0;
    std::vector<double> x;
    /// d(objective)/d(rhs) per row, in the model's own optimization sense.
    std::vector<double> duals;
    /// Objective change per unit increase of each variable from its bound.
    std::vector<double> reduced_costs;
    int iterations = 0;
};

namespace detail {

class Tableau {
public:
    Tableau(const Model& model, std::span<const double> lower, std::span<const double> upper, const Options& opt)
        : opt_(opt), n_(model.var_count()), m_(model.row_count()) {
        build(model, lower, upper);
    }

    Result run(const Model& model) {
        Result res;
        if (trivially_infeasible_) {
            res.status = Status::infeasible;
            return res;
        }
        if (art_count_ > 0) {
            std::vector<double> phase1(cols_, 0.0);
            for (std::size_t k = 0; k < art_count_; ++k) phase1[n_ + m_ + k] = -1.0;
            const Status s = optimize(phase1);
            res.iterations = iterations_;
            if (s == Status::iteration_limit) {
                res.status = s;
                return res;
            }
            double infeasibility = 0.0;
            for (std::size_t k = 0; k < art_count_; ++k) infeasibility += value(n_ + m_ + k);
            if (infeasibility > opt_.feasibility_tol * std::max<double>(1.0, static_cast<double>(m_))) {
                res.status = Status::infeasible;
                return res;
            }
            drive_out_artificials();
        }
        const Status s = optimize(cost_);
        res.iterations = iterations_;
        res.status = s;
        if (s != Status::optimal) return res;

        refresh_basic_values();
        res.x.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) res.x[j] = value(j);
        const double sign = model.maximize ? 1.0 : -1.0;
        res.objective = model.objective_offset;
        for (std::size_t j = 0; j < n_; ++j) res.objective += model.objective[j] * res.x[j];
        res.duals.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) res.duals[i] = -sign * d_[n_ + i] * row_scale_[i];
        res.reduced_costs.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) res.reduced_costs[j] = sign * d_[j];
        return res;
    }

private:
    double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

    double value(std::size_t j) const { return row_of_[j] >= 0 ? xb_[static_cast<std::size_t>(row_of_[j])] : xn_[j]; }

    void build(const Model& model, std::span<const double> lower, std::span<const double> upper) {
        row_scale_.assign(m_, 1.0);
        std::vector<std::vector<Term>> rows(m_);
        std::vector<double> rhs(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const Row& r = model.rows[i];
            double big = 0.0;
            for (const auto& t : r.terms) big = std::max(big, std::abs(t.coef));
            if (big == 0.0) {
                const bool ok = (r.sense == Sense::le && r.rhs >= -opt_.feasibility_tol) ||
                                (r.sense == Sense::ge && r.rhs <= opt_.feasibility_tol) ||
                                (r.sense == Sense::eq && std::abs(r.rhs) <= opt_.feasibility_tol);
                if (!ok) trivially_infeasible_ = true;
                big = 1.0;
            }
            row_scale_[i] = 1.0 / big;
            for (const auto& t : r.terms) rows[i].push_back({t.var, t.coef * row_scale_[i]});
            rhs[i] = r.rhs * row_scale_[i];
        }

        lo_.assign(n_ + m_, 0.0);
        hi_.assign(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = lower[j];
            hi_[j] = upper[j];
            if (lo_[j] > hi_[j] + opt_.feasibility_tol) trivially_infeasible_ = true;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const Sense s = model.rows[i].sense;
            lo_[n_ + i] = s == Sense::ge ? -kInf : 0.0;
            hi_[n_ + i] = s == Sense::le ? kInf : 0.0;
        }

        xn_.assign(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            if (std::isfinite(lo_[j])) {
                xn_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                xn_[j] = hi_[j];
            }
        }

        // Logical value each row would need, given structurals at their bounds.
        std::vector<double> need(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = rhs[i];
            for (const auto& t : rows[i]) acc -= t.coef * xn_[static_cast<std::size_t>(t.var)];
            need[i] = acc;
        }
        std::vector<int> art_row;
        std::vector<double> art_sign;
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t s = n_ + i;
            if (need[i] < lo_[s] - opt_.feasibility_tol || need[i] > hi_[s] + opt_.feasibility_tol) {
                art_row.push_back(static_cast<int>(i));
                art_sign.push_back(need[i] > hi_[s] ? 1.0 : -1.0);
            }
        }
        art_count_ = art_row.size();
        cols_ = n_ + m_ + art_count_;
        lo_.resize(cols_, 0.0);
        hi_.resize(cols_, kInf);
        xn_.resize(cols_, 0.0);
        row_of_.assign(cols_, -1);
        basis_.assign(m_, 0);
        xb_.assign(m_, 0.0);
        t_.assign(m_ * cols_, 0.0);
        cost_.assign(cols_, 0.0);
        const double sign = model.maximize ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = sign * model.objective[j];

        columns_.assign(cols_, {});
        for (std::size_t i = 0; i < m_; ++i) {
            for (const auto& t : rows[i]) columns_[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(i), t.coef});
            columns_[n_ + i].push_back({static_cast<int>(i), 1.0});
        }
        rhs_ = rhs;

        std::vector<double> row_div(m_, 1.0);
        for (std::size_t k = 0; k < art_count_; ++k) {
            const auto i = static_cast<std::size_t>(art_row[k]);
            const std::size_t a = n_ + m_ + k;
            columns_[a].push_back({static_cast<int>(i), art_sign[k]});
            row_div[i] = art_sign[k];
            const std::size_t s = n_ + i;
            xn_[s] = art_sign[k] > 0 ? hi_[s] : lo_[s];
            basis_[i] = a;
            row_of_[a] = static_cast<int>(i);
            xb_[i] = (need[i] - xn_[s]) / art_sign[k];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (row_div[i] == 1.0 && !is_art_row(art_row, i)) {
                basis_[i] = n_ + i;
                row_of_[n_ + i] = static_cast<int>(i);
                xb_[i] = need[i];
            }
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            for (const auto& t : columns_[j]) {
                const auto i = static_cast<std::size_t>(t.var);
                at(i, j) = t.coef / row_div[i];
            }
        }
    }

    static bool is_art_row(const std::vector<int>& art_row, std::size_t i) {
        return std::find(art_row.begin(), art_row.end(), static_cast<int>(i)) != art_row.end();
    }

    void compute_reduced_costs(const std::vector<double>& c) {
        d_ = c;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &t_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
        }
        for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
    }

    // xB = B^-1 (b - N xN), with B^-1 read from the logical columns.
    void refresh_basic_values() {
        std::vector<double> r = rhs_;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (row_of_[j] >= 0 || xn_[j] == 0.0) continue;
            for (const auto& t : columns_[j]) r[static_cast<std::size_t>(t.var)] -= t.coef * xn_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            const double* row = &t_[i * cols_ + n_];
            for (std::size_t k = 0; k < m_; ++k) acc += row[k] * r[k];
            xb_[i] = acc;
        }
    }

    Status optimize(const std::vector<double>& c) {
        compute_reduced_costs(c);
        int degenerate = 0;
        bool bland = false;
        std::vector<std::size_t> nz;
        for (;;) {
            if (iterations_ >= opt_.max_iterations) return Status::iteration_limit;
            if (iterations_ % 200 == 199) {
                refresh_basic_values();
                compute_reduced_costs(c);
            }

            // Pricing.
            std::size_t enter = cols_;
            double enter_dir = 0.0;
            double best = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
                const double dj = d_[j];
                double dir = 0.0;
                if (dj > opt_.optimality_tol && xn_[j] < hi_[j]) dir = 1.0;
                if (dj < -opt_.optimality_tol && xn_[j] > lo_[j]) dir = -1.0;
                if (dir == 0.0) continue;
                if (bland) {
                    enter = j;
                    enter_dir = dir;
                    break;
                }
                if (std::abs(dj) > best) {
                    best = std::abs(dj);
                    enter = j;
                    enter_dir = dir;
                }
            }
            if (enter == cols_) return Status::optimal;

            // Ratio test over basic variables, then the entering bound flip.
            double theta = kInf;
            std::size_t leave_row = m_;
            double leave_mag = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double alpha = at(i, enter);
                if (std::abs(alpha) <= opt_.pivot_tol) continue;
                const double rate = -enter_dir * alpha;  // change of x_B[i] per unit step
                const std::size_t b = basis_[i];
                double limit = kInf;
                if (rate < 0.0 && std::isfinite(lo_[b])) limit = (xb_[i] - lo_[b]) / -rate;
                if (rate > 0.0 && std::isfinite(hi_[b])) limit = (hi_[b] - xb_[i]) / rate;
                if (!std::isfinite(limit)) continue;
                limit = std::max(limit, 0.0);
                const bool better = limit < theta - 1e-12 ||
                                    (limit <= theta + 1e-12 &&
                                     (bland ? basis_[i] < basis_[leave_row] : std::abs(alpha) > leave_mag));
                if (leave_row == m_ || better) {
                    theta = limit;
                    leave_row = i;
                    leave_mag = std::abs(alpha);
                }
            }
            const double flip = hi_[enter] - lo_[enter];
            ++iterations_;
            if (std::isfinite(flip) && flip <= theta) {
                xn_[enter] += enter_dir * flip;
                for (std::size_t i = 0; i < m_; ++i) xb_[i] -= enter_dir * flip * at(i, enter);
                degenerate = 0;
                bland = false;
                continue;
            }
            if (leave_row == m_) return Status::unbounded;

            if (theta < 1e-12) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }

            const std::size_t r = leave_row;
            const std::size_t leaving = basis_[r];
            const double alpha_r = at(r, enter);
            const double rate_r = -enter_dir * alpha_r;
            for (std::size_t i = 0; i < m_; ++i) xb_[i] -= enter_dir * theta * at(i, enter);
            const double entering_value = xn_[enter] + enter_dir * theta;
            xn_[leaving] = rate_r < 0.0 ? lo_[leaving] : hi_[leaving];

            // Pivot.
            double* prow = &t_[r * cols_];
            const double inv = 1.0 / alpha_r;
            nz.clear();
            for (std::size_t j = 0; j < cols_; ++j) {
                if (prow[j] != 0.0) {
                    prow[j] *= inv;
                    nz.push_back(j);
                }
            }
            prow[enter] = 1.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == r) continue;
                double* row = &t_[i * cols_];
                const double f = row[enter];
                if (f == 0.0) continue;
                for (std::size_t j : nz) row[j] -= f * prow[j];
                row[enter] = 0.0;
            }
            const double fd = d_[enter];
            if (fd != 0.0) {
                for (std::size_t j : nz) d_[j] -= fd * prow[j];
                d_[enter] = 0.0;
            }
            row_of_[leaving] = -1;
            row_of_[enter] = static_cast<int>(r);
            basis_[r] = enter;
            xb_[r] = entering_value;
        }
    }

    // After phase 1: pivot basic artificials (at zero) out where possible and
    // pin every artificial to zero.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + m_) continue;
            std::size_t best_j = cols_;
            double best_mag = 1e-7;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (row_of_[j] >= 0) continue;
                if (std::abs(at(i, j)) > best_mag) {
                    best_mag = std::abs(at(i, j));
                    best_j = j;
                }
            }
            if (best_j == cols_) continue;
            const std::size_t leaving = basis_[i];
            double* prow = &t_[i * cols_];
            const double inv = 1.0 / prow[best_j];
            for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
            for (std::size_t k = 0; k < m_; ++k) {
                if (k == i) continue;
                double* row = &t_[k * cols_];
                const double f = row[best_j];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
            }
            row_of_[leaving] = -1;
            xn_[leaving] = 0.0;
            row_of_[best_j] = static_cast<int>(i);
            basis_[i] = best_j;
        }
        for (std::size_t k = 0; k < art_count_; ++k) {
            lo_[n_ + m_ + k] = 0.0;
            hi_[n_ + m_ + k] = 0.0;
            if (row_of_[n_ + m_ + k] < 0) xn_[n_ + m_ + k] = 0.0;
        }
        refresh_basic_values();
    }

    Options opt_;
    std::size_t n_;
    std::size_t m_;
    std::size_t cols_ = 0;
    std::size_t art_count_ = 0;
    bool trivially_infeasible_ = false;
    int iterations_ = 0;
    std::vector<double> t_;
    std::vector<double> d_;
    std::vector<double> cost_;
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::vector<double> xn_;
    std::vector<double> xb_;
    std::vector<double> rhs_;
    std::vector<double> row_scale_;
    std::vector<std::size_t> basis_;
    std::vector<int> row_of_;
    std::vector<std::vector<Term>> columns_;
};

}  // namespace detail

/// Solves the LP relaxation of `model` (integrality ignored) under the given
/// variable bounds.
inline Result solve(const Model& model, std::span<const double> lower, std::span<const double> upper,
                    const Options& opt = {}) {
    if (lower.size() != model.var_count() || upper.size() != model.var_count()) {
        throw std::invalid_argument("bound vectors do not match the model");
    }
    detail::Tableau tableau(model, lower, upper, opt);
    return tableau.run(model);
}

inline Result solve(const Model& model, const Options& opt = {}) {
    return solve(model, model.lower, model.upper, opt);
}

struct MilpOptions {
    long node_limit = 1'000'000;
    double integrality_tol = 1e-6;
    double absolute_gap = 1e-7;
    /// Only solutions strictly better than this value are of interest.
    std::optional<double> cutoff;
    Options lp;
};

enum class MilpStatus { optimal, infeasible, node_limit };

struct MilpResult {
    MilpStatus status = MilpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
    double best_bound = 0.0;
    long nodes = 0;
};

class NodeLimitExceeded : public std::runtime_error {
public:
    NodeLimitExceeded(double incumbent, double bound)
        : std::runtime_error("MILP node limit exceeded (incumbent " + std::to_string(incumbent) + ", best bound " +
                             std::to_string(bound) + ")"),
          incumbent_(incumbent),
          bound_(bound) {}
    double incumbent() const { return incumbent_; }
    double best_bound() const { return bound_; }

private:
    double incumbent_;
    double bound_;
};

/// Branch and bound for maximization models with integer variables: best
/// bound node selection with depth-first tie-break, branching on the most
/// fractional integer variable. `priority` (optional, one entry per
/// variable) restricts branching to the fractional variables of the highest
/// priority present.
inline MilpResult solve_milp(const Model& model, const MilpOptions& opt = {}, std::span<const int> priority = {}) {
    if (!model.maximize) throw std::invalid_argument("solve_milp expects a maximization model");
    struct Node {
        double bound;
        int depth;
        long serial;
        std::vector<std::pair<int, std::pair<double, double>>> fixes;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.serial < b.serial;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    MilpResult best;
    double incumbent = opt.cutoff.value_or(-kInf);
    bool have_solution = false;
    long serial = 0;
    open.push({kInf, 0, serial++, {}});

    std::vector<double> lo;
    std::vector<double> hi;
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        const double gap = opt.absolute_gap + 1e-9 * std::abs(incumbent);
        if (node.bound <= incumbent + gap && std::isfinite(incumbent)) continue;
        if (best.nodes >= opt.node_limit) {
            throw NodeLimitExceeded(incumbent, node.bound);
        }
        ++best.nodes;

        lo = model.lower;
        hi = model.upper;
        for (const auto& [var, b] : node.fixes) {
            lo[static_cast<std::size_t>(var)] = b.first;
            hi[static_cast<std::size_t>(var)] = b.second;
        }
        const Result lp = solve(model, lo, hi, opt.lp);
        if (lp.status == Status::infeasible) continue;
        if (lp.status != Status::optimal) {
            throw std::runtime_error("LP relaxation failed: " + to_string(lp.status));
        }
        if (lp.objective <= incumbent + gap && std::isfinite(incumbent)) continue;

        int branch_var = -1;
        int branch_priority = std::numeric_limits<int>::min();
        double branch_score = -1.0;
        for (std::size_t j = 0; j < model.var_count(); ++j) {
            if (!model.integer[j]) continue;
            const double frac = lp.x[j] - std::floor(lp.x[j]);
            if (frac <= opt.integrality_tol || frac >= 1.0 - opt.integrality_tol) continue;
            const int prio = priority.empty() ? 0 : priority[j];
            const double score = 0.5 - std::abs(frac - 0.5);
            if (prio > branch_priority || (prio == branch_priority && score > branch_score)) {
                branch_priority = prio;
                branch_score = score;
                branch_var = static_cast<int>(j);
            }
        }
        if (branch_var < 0) {
            incumbent = lp.objective;
            have_solution = true;
            best.objective = lp.objective;
            best.x = lp.x;
            for (std::size_t j = 0; j < model.var_count(); ++j) {
                if (model.integer[j]) best.x[j] = std::round(best.x[j]);
            }
            continue;
        }
        const double v = lp.x[static_cast<std::size_t>(branch_var)];
        const auto j = static_cast<std::size_t>(branch_var);
        Node down{lp.objective, node.depth + 1, serial++, node.fixes};
        down.fixes.push_back({branch_var, {lo[j], std::floor(v)}});
        Node up{lp.objective, node.depth + 1, serial++, std::move(node.fixes)};
        up.fixes.push_back({branch_var, {std::ceil(v), hi[j]}});
        open.push(std::move(down));
        open.push(std::move(up));
    }
    best.status = have_solution ? MilpStatus::optimal : MilpStatus::infeasible;
    best.best_bound = have_solution ? best.objective : incumbent;
    return best;
}

/// Writes the model in CPLEX LP text format.
inline void write_lp_format(std::ostream& os, const Model& model) {
    auto term = [&](double coef, int var, bool first) {
        if (coef >= 0.0 && !first) os << " + ";
        if (coef < 0.0) os << (first ? "-" : " - ");
        os << std::abs(coef) << ' ' << model.names[static_cast<std::size_t>(var)];
    };
    os.precision(17);
    os << (model.maximize ? "Maximize\n" : "Minimize\n") << " obj:";
    bool first = true;
    for (std::size_t j = 0; j < model.var_count(); ++j) {
        if (model.objective[j] == 0.0) continue;
        if (first) os << ' ';
        term(model.objective[j], static_cast<int>(j), first);
        first = false;
    }
    if (first) os << " 0 " << model.names.front();
    os << "\nSubject To\n";
    for (const auto& r : model.rows) {
        os << ' ' << r.name << ':';
        bool f = true;
        for (const auto& t : r.terms) {
            if (f) os << ' ';
            term(t.coef, t.var, f);
            f = false;
        }
        if (f) os << " 0 " << model.names.front();
        os << (r.sense == Sense::le ? " <= " : r.sense == Sense::ge ? " >= " : " = ") << r.rhs << '\n';
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < model.var_count(); ++j) {
        const double lo = model.lower[j];
        const double hi = model.upper[j];
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            os << ' ' << model.names[j] << " free\n";
        } else {
            os << ' ';
            if (std::isfinite(lo)) {
                os << lo;
            } else {
                os << "-inf";
            }
            os << " <= " << model.names[j] << " <= ";
            if (std::isfinite(hi)) {
                os << hi;
            } else {
                os << "+inf";
            }
            os << '\n';
        }
    }
    bool any_int = false;
    for (std::size_t j = 0; j < model.var_count(); ++j) {
        if (!model.integer[j]) continue;
        if (!any_int) os << "Generals\n";
        any_int = true;
        os << ' ' << model.names[j] << '\n';
    }
    os << "End\n";
}

}  // namespace csr::lp
