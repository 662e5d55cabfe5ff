#pragma once

// Post-processing of episode traces: Holt trend, convergence detection,
// Theil-Sen slope and run summaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace csr {

struct HoltState {
    double level = 0.0;
    double trend = 0.0;
    double alpha = 0.1;
    double beta = 0.05;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
            throw std::invalid_argument("Holt smoothing factors must lie in (0, 1]");
        }
    }

    void step(double y) {
        const double prev = level;
        level = alpha * y + (1.0 - alpha) * (level + trend);
        trend = beta * (level - prev) + (1.0 - beta) * trend;
    }
};

/// Trend component after each observation; element 0 is the initial trend y1 - y0.
inline std::vector<double> holt_trend(const std::vector<double>& series, double alpha = 0.1, double beta = 0.05) {
    if (series.size() < 2) throw std::invalid_argument("Holt smoothing needs at least two points");
    HoltState h{series[0], series[1] - series[0], alpha, beta};
    h.validate();
    std::vector<double> out;
    out.reserve(series.size());
    out.push_back(h.trend);
    for (std::size_t t = 1; t < series.size(); ++t) {
        h.step(series[t]);
        out.push_back(h.trend);
    }
    return out;
}

struct ConvergenceParams {
    double alpha = 0.1;
    double beta = 0.05;
    double threshold = 1e-3;
    int patience = 100;
    /// Exponential smoothing factor applied to the normalized trend; 1 disables it.
    double smoothing = 0.01;

    void validate() const {
        HoltState{0.0, 0.0, alpha, beta}.validate();
        if (patience < 1) throw std::invalid_argument("patience must be at least 1");
        if (!(smoothing > 0.0 && smoothing <= 1.0)) throw std::invalid_argument("smoothing factor must lie in (0, 1]");
    }
};

struct ConvergenceVerdict {
    bool converged = false;
    std::optional<std::size_t> step;
    double threshold = 0.0;
    int patience = 0;
};

/// Trend divided by the running maximum of |mean|, then exponentially smoothed.
/// Converged at start + patience for the first run of `patience` consecutive
/// steps below the threshold.
inline ConvergenceVerdict detect_convergence(const std::vector<double>& mean_series, const ConvergenceParams& p = {}) {
    p.validate();
    ConvergenceVerdict v{false, std::nullopt, p.threshold, p.patience};
    if (mean_series.size() < 2) return v;
    const auto trend = holt_trend(mean_series, p.alpha, p.beta);
    double peak = 0.0;
    double smooth = 0.0;
    int run = 0;
    for (std::size_t t = 0; t < trend.size(); ++t) {
        peak = std::max(peak, std::abs(mean_series[t]));
        const double norm = peak > 0.0 ? std::abs(trend[t]) / peak : std::abs(trend[t]);
        smooth = t == 0 ? norm : p.smoothing * norm + (1.0 - p.smoothing) * smooth;
        run = smooth < p.threshold ? run + 1 : 0;
        if (run == p.patience) {
            v.converged = true;
            v.step = t + 1;
            return v;
        }
    }
    return v;
}

inline ConvergenceVerdict detect_convergence(const std::vector<double>& mean_series, double threshold, int patience) {
    ConvergenceParams p;
    p.threshold = threshold;
    p.patience = patience;
    return detect_convergence(mean_series, p);
}

/// Median of pairwise slopes. With an even number of slopes the lower middle
/// one is taken.
inline double theil_sen_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("x and y sizes differ");
    if (xs.size() < 2) throw std::invalid_argument("Theil-Sen needs at least two points");
    std::vector<double> slopes;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            if (xs[j] != xs[i]) slopes.push_back((ys[j] - ys[i]) / (xs[j] - xs[i]));
        }
    }
    if (slopes.empty()) throw std::invalid_argument("Theil-Sen: all x values are equal");
    const auto mid = slopes.begin() + static_cast<std::ptrdiff_t>((slopes.size() - 1) / 2);
    std::nth_element(slopes.begin(), mid, slopes.end());
    return *mid;
}

struct CdfPoint {
    double value = 0.0;
    double quantile = 0.0;
};

struct RunSummary {
    std::vector<double> mean;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::vector<CdfPoint> station_cdf;
};

/// Two-sided t quantile; zero below two samples.
inline double t_half_width(double sd, std::size_t n, double confidence = 0.95) {
    if (n < 2) return 0.0;
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double q = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
    return q * sd / std::sqrt(static_cast<double>(n));
}

/// Sorted per-station rates with empirical quantiles (i+1)/n.
inline std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<CdfPoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({values[i], static_cast<double>(i + 1) / static_cast<double>(values.size())});
    }
    return out;
}

/// `runs[r][t]`: effective rate of run r at step t. `station_rates[r][s]`:
/// mean rate of station s in run r, averaged over runs for the CDF.
inline RunSummary summarize(const std::vector<std::vector<double>>& runs,
                            const std::vector<std::vector<double>>& station_rates = {}, double confidence = 0.95) {
    if (runs.empty()) throw std::invalid_argument("summary needs at least one run");
    const std::size_t len = runs.front().size();
    for (const auto& r : runs) {
        if (r.size() != len) throw std::invalid_argument("runs have different lengths");
    }
    const std::size_t n = runs.size();
    RunSummary out;
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto& r : runs) sum += r[t];
        const double m = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : runs) ss += (r[t] - m) * (r[t] - m);
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        const double h = t_half_width(sd, n, confidence);
        out.mean.push_back(m);
        out.ci_low.push_back(m - h);
        out.ci_high.push_back(m + h);
    }
    if (!station_rates.empty()) {
        const std::size_t stations = station_rates.front().size();
        std::vector<double> avg(stations, 0.0);
        for (const auto& r : station_rates) {
            if (r.size() != stations) throw std::invalid_argument("station rate rows have different lengths");
            for (std::size_t s = 0; s < stations; ++s) avg[s] += r[s] / static_cast<double>(station_rates.size());
        }
        out.station_cdf = empirical_cdf(std::move(avg));
    }
    return out;
}

}  // namespace csr
