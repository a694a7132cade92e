#pragma once

// Attractor clustering: weighted adjacency from a distance matrix, the Zhang
// weighted clustering coefficient, and single-link dendrograms.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbn/distance.hpp"

namespace rbn {

/// Symmetric weight matrix with zero diagonal and entries in [0, 1].
struct WeightedAdjacency {
    std::vector<double> a;  // row-major, n x n
    std::size_t n = 0;

    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        a[i * n + j] = v;
        a[j * n + i] = v;
    }
};

/// Edge weights as normalised reciprocal distances: with d_min the smallest
/// strictly positive off-diagonal distance, a_ij = min(1, d_min / d_ij).
/// Zero-distance pairs clamp to weight 1; if every off-diagonal distance is
/// zero, all off-diagonal weights are 1.
inline WeightedAdjacency weights_from_distances(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    if (n < 2)
        throw std::invalid_argument("weights_from_distances: need at least 2 nodes");
    double d_min = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = d.at(i, j);
            if (v > 0.0 && (d_min == 0.0 || v < d_min))
                d_min = v;
        }
    WeightedAdjacency w;
    w.n = n;
    w.a.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = d.at(i, j);
            const double weight =
                dist == 0.0 ? 1.0 : std::min(1.0, d_min / dist);
            w.set(i, j, weight);
        }
    return w;
}

/// Zhang weighted clustering coefficient C_i = n_i / g_i with
///   n_i = 1/2 sum_{u != i} sum_{v != i,u} a_iu a_uv a_vi
///   g_i = 1/2 ((sum_{u != i} a_iu)^2 - sum_{u != i} a_iu^2)
/// Returns nullopt when g_i = 0 (at most one positively weighted neighbour).
/// The triple sum is evaluated through full dot products; the diagonal being
/// zero removes the u = i and v = i,u terms.
inline std::optional<double> node_clustering_coefficient(
    const WeightedAdjacency& w, std::size_t i) {
    const std::size_t n = w.n;
    double strength = 0.0, strength_sq = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double a_iu = w.at(i, u);
        strength += a_iu;
        strength_sq += a_iu * a_iu;
    }
    const double g_i = 0.5 * (strength * strength - strength_sq);
    if (g_i == 0.0)
        return std::nullopt;
    double paths = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double a_iu = w.at(i, u);
        if (a_iu == 0.0)
            continue;
        double closing = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            closing += w.at(u, v) * w.at(v, i);
        paths += a_iu * closing;
    }
    const double n_i = 0.5 * paths;
    return n_i / g_i;
}

struct ClusteringReport {
    std::vector<std::optional<double>> per_node;
    double network = 0.0;  // mean over nodes with a defined coefficient
    std::size_t defined = 0;
};

/// Mean coefficient over the nodes where it is defined; throws if none is.
inline double network_clustering_coefficient(const WeightedAdjacency& w) {
    double sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t i = 0; i < w.n; ++i)
        if (auto c = node_clustering_coefficient(w, i)) {
            sum += *c;
            ++defined;
        }
    if (defined == 0)
        throw std::domain_error(
            "network_clustering_coefficient: no node has a defined coefficient");
    return sum / static_cast<double>(defined);
}

inline ClusteringReport clustering_report(const WeightedAdjacency& w) {
    ClusteringReport report;
    report.per_node.reserve(w.n);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.n; ++i) {
        report.per_node.push_back(node_clustering_coefficient(w, i));
        if (report.per_node.back()) {
            sum += *report.per_node.back();
            ++report.defined;
        }
    }
    if (report.defined == 0)
        throw std::domain_error("clustering_report: no node has a defined coefficient");
    report.network = sum / static_cast<double>(report.defined);
    return report;
}

struct DendrogramMerge {
    std::uint32_t left = 0;   // cluster ids; leaves 0..N-1, merge m creates N+m
    std::uint32_t right = 0;  // left < right
    double height = 0.0;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<std::string> labels;        // one per leaf
    std::vector<DendrogramMerge> merges;    // N-1 entries, heights non-decreasing
};

/// Single-link agglomerative clustering. Inter-cluster distance is the
/// minimum pairwise member distance; ties break on the smallest
/// (id-ordered) cluster pair so the output is deterministic.
inline Dendrogram single_link_dendrogram(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 2)
        throw std::invalid_argument("single_link_dendrogram: need at least 2 leaves");

    // Working copy indexed by slot; each slot holds one active cluster.
    std::vector<double> d(dist.values);
    std::vector<std::uint32_t> id(n);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i)
        id[i] = static_cast<std::uint32_t>(i);

    Dendrogram out;
    out.leaves = n;
    out.labels = dist.labels;
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_i = 0, best_j = 0;
        double best_d = 0.0;
        bool have = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i])
                continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j])
                    continue;
                const double v = d[i * n + j];
                const std::uint32_t lo = std::min(id[i], id[j]);
                const std::uint32_t hi = std::max(id[i], id[j]);
                const std::uint32_t cur_lo = std::min(id[best_i], id[best_j]);
                const std::uint32_t cur_hi = std::max(id[best_i], id[best_j]);
                if (!have || v < best_d ||
                    (v == best_d &&
                     (lo < cur_lo || (lo == cur_lo && hi < cur_hi)))) {
                    best_i = i;
                    best_j = j;
                    best_d = v;
                    have = true;
                }
            }
        }
        out.merges.push_back({std::min(id[best_i], id[best_j]),
                              std::max(id[best_i], id[best_j]), best_d});
        // Collapse into best_i with the single-link minimum rule.
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == best_i || c == best_j)
                continue;
            const double m = std::min(d[best_i * n + c], d[best_j * n + c]);
            d[best_i * n + c] = m;
            d[c * n + best_i] = m;
        }
        active[best_j] = false;
        id[best_i] = static_cast<std::uint32_t>(n + step);
    }
    return out;
}

/// Newick serialization with ultrametric branch lengths: a node at merge
/// height h sits h/2 from the leaves, so each branch is half the height
/// difference between parent and child.
inline std::string newick_export(const Dendrogram& dendro) {
    const std::size_t n = dendro.leaves;
    if (n < 2 || dendro.merges.size() != n - 1)
        throw std::invalid_argument("newick_export: malformed dendrogram");

    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    auto height_of = [&](std::uint32_t cid) {
        return cid < n ? 0.0 : dendro.merges[cid - n].height;
    };
    // Child subtrees first; merges are topologically ordered by construction.
    std::vector<std::string> rendered(n + dendro.merges.size());
    for (std::size_t i = 0; i < n; ++i)
        rendered[i] = dendro.labels.empty() ? attractor_label(i) : dendro.labels[i];
    for (std::size_t m = 0; m < dendro.merges.size(); ++m) {
        const auto& merge = dendro.merges[m];
        const double h = merge.height;
        const std::string left = rendered[merge.left] + ":" +
                                 fmt((h - height_of(merge.left)) / 2.0);
        const std::string right = rendered[merge.right] + ":" +
                                  fmt((h - height_of(merge.right)) / 2.0);
        rendered[n + m] = "(" + left + "," + right + ")";
    }
    return rendered.back() + ";";
}

}  // namespace rbn
