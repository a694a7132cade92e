#pragma once

// Pooled distance statistics (six-number summaries) and histograms of
// clustering coefficients over [0, 1].

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rbn/distance.hpp"

namespace rbn {

struct SummaryStats {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
};

namespace detail {

// Quantile by linear interpolation of order statistics, h = (n-1)p + 1.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1)
        return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n)
        return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

inline SummaryStats summary(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("summary: empty input");
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    SummaryStats s;
    s.min = values.front();
    s.max = values.back();
    s.mean = sum / static_cast<double>(values.size());
    s.q1 = detail::quantile_sorted(values, 0.25);
    s.median = detail::quantile_sorted(values, 0.5);
    s.q3 = detail::quantile_sorted(values, 0.75);
    return s;
}

/// Concatenate the strictly-upper-triangle entries of every matrix, in the
/// given matrix order. 1x1 matrices contribute nothing. All matrices must
/// carry the same measure.
inline std::vector<double> pool_distances(const std::vector<DistanceMatrix>& mats) {
    std::vector<double> pooled;
    for (const auto& m : mats) {
        if (m.measure != mats.front().measure)
            throw std::invalid_argument("pool_distances: mixed measures");
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j)
                pooled.push_back(m.at(i, j));
    }
    return pooled;
}

struct Histogram {
    std::vector<double> edges;        // bins + 1, strictly increasing
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

/// Uniform bins over [0, 1], right-open except the last bin which is closed.
/// Bin membership is decided against the edge values k/bins.
inline Histogram clustering_histogram(const std::vector<double>& values,
                                      std::size_t bins) {
    if (bins < 1)
        throw std::invalid_argument("clustering_histogram: bins must be >= 1");
    Histogram h;
    h.edges.reserve(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges.push_back(static_cast<double>(b) / static_cast<double>(bins));
    h.counts.assign(bins, 0);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("clustering_histogram: value outside [0, 1]");
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
        std::size_t bin = static_cast<std::size_t>(it - h.edges.begin());
        bin = bin == 0 ? 0 : bin - 1;
        if (bin >= bins)
            bin = bins - 1;  // v == 1 falls in the closed last bin
        ++h.counts[bin];
        ++h.total;
    }
    return h;
}

}  // namespace rbn
