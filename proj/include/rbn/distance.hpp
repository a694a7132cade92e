#pragma once

// Attractor distances: min-Hamming over the cycle states, plus Euclidean and
// pseudo-Hamming over per-node activation vectors.
//
// Activation entries are exact reduced fractions (ones-count / period), so
// the pseudo-Hamming equality test is independent of the attractor periods;
// 1/2 from a period-2 cycle equals 2/4 from a period-4 cycle. Floating point
// enters only in the final Euclidean arithmetic.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/attractor.hpp"
#include "rbn/state.hpp"

namespace rbn {

enum class Measure { min_hamming, euclidean, pseudo_hamming };

inline std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::min_hamming: return "min-hamming";
        case Measure::euclidean: return "euclidean";
        case Measure::pseudo_hamming: return "pseudo-hamming";
    }
    throw std::logic_error("measure_name: bad enum");
}

/// Identifier used in file names: '-' becomes '_'.
inline std::string measure_tag(Measure m) {
    std::string tag{measure_name(m)};
    for (auto& c : tag)
        if (c == '-')
            c = '_';
    return tag;
}

inline Measure parse_measure(std::string_view name) {
    if (name == "min-hamming") return Measure::min_hamming;
    if (name == "euclidean") return Measure::euclidean;
    if (name == "pseudo-hamming") return Measure::pseudo_hamming;
    throw std::invalid_argument("unknown measure: " + std::string(name));
}

inline bool integer_valued(Measure m) { return m != Measure::euclidean; }

/// Reduced non-negative fraction; equality is exact value equality.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(const Fraction&, const Fraction&) = default;

    double value() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

inline Fraction make_fraction(std::uint64_t num, std::uint64_t den) {
    if (den == 0)
        throw std::invalid_argument("make_fraction: zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return Fraction{num / g, den / g};
}

/// Per-node activation frequencies of one attractor.
struct ActivationVector {
    std::vector<Fraction> entries;

    std::size_t size() const { return entries.size(); }
};

/// Entry j = (number of cycle states with node j on) / period.
inline ActivationVector activation_vector(const Attractor& a) {
    const std::size_t n = a.n();
    const std::size_t wps = NetworkState::word_count(n);
    std::vector<std::uint64_t> counts(n, 0);
    for (std::size_t h = 0; h < a.period(); ++h) {
        const auto words = a.state_words(h);
        for (std::size_t w = 0; w < wps; ++w) {
            std::uint64_t bits = words[w];
            while (bits) {
                const int lead = std::countl_zero(bits);
                counts[w * 64 + static_cast<std::size_t>(lead)] += 1;
                bits &= ~(0x8000000000000000ull >> lead);
            }
        }
    }
    ActivationVector v;
    v.entries.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        v.entries.push_back(make_fraction(counts[j], a.period()));
    return v;
}

/// Minimum Hamming distance over all cross pairs of cycle states. Exact; a
/// sorted-popcount window prunes pairs that cannot beat the current best
/// (|popcount(s) - popcount(s')| is a lower bound on their distance).
inline std::size_t min_hamming(const Attractor& a, const Attractor& b) {
    if (a.n() != b.n())
        throw std::invalid_argument("min_hamming: attractors over different n");
    if (a == b)
        return 0;

    struct Entry {
        std::size_t pop;
        std::size_t idx;
    };
    std::vector<Entry> sorted;
    sorted.reserve(b.period());
    for (std::size_t h = 0; h < b.period(); ++h) {
        const auto words = b.state_words(h);
        std::size_t pop = 0;
        for (auto w : words)
            pop += static_cast<std::size_t>(std::popcount(w));
        sorted.push_back({pop, h});
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Entry& x, const Entry& y) { return x.pop < y.pop; });

    std::size_t best = a.n() + 1;
    for (std::size_t h = 0; h < a.period() && best > 1; ++h) {
        const auto sa = a.state_words(h);
        std::size_t pop = 0;
        for (auto w : sa)
            pop += static_cast<std::size_t>(std::popcount(w));
        // candidates with popcount in (pop - best, pop + best)
        const std::size_t lo = pop >= best - 1 ? pop - (best - 1) : 0;
        auto it = std::lower_bound(
            sorted.begin(), sorted.end(), lo,
            [](const Entry& e, std::size_t v) { return e.pop < v; });
        for (; it != sorted.end() && it->pop + 1 <= pop + best; ++it) {
            const auto sb = b.state_words(it->idx);
            std::size_t d = 0;
            for (std::size_t w = 0; w < sa.size(); ++w)
                d += static_cast<std::size_t>(std::popcount(sa[w] ^ sb[w]));
            if (d < best) {
                best = d;
                if (best <= 1)
                    break;  // distinct attractors share no state
            }
        }
    }
    return best;
}

/// Euclidean distance between activation vectors; exact rational coordinate
/// differences, converted to double only for the squaring and the root.
inline double euclidean(const ActivationVector& v, const ActivationVector& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("euclidean: vectors of different length");
    double sum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto& a = v.entries[j];
        const auto& b = w.entries[j];
        const auto num = static_cast<std::int64_t>(a.num * b.den) -
                         static_cast<std::int64_t>(b.num * a.den);
        const double diff =
            static_cast<double>(num) / static_cast<double>(a.den * b.den);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

/// Number of coordinates whose activation values differ exactly.
inline std::size_t pseudo_hamming(const ActivationVector& v,
                                  const ActivationVector& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("pseudo_hamming: vectors of different length");
    std::size_t count = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!(v.entries[j] == w.entries[j]))
            ++count;
    return count;
}

/// Symmetric labeled matrix of pairwise attractor distances for one measure.
struct DistanceMatrix {
    Measure measure = Measure::min_hamming;
    std::vector<std::string> labels;
    std::vector<double> values;  // row-major, size labels.size()^2

    std::size_t size() const { return labels.size(); }

    double at(std::size_t i, std::size_t j) const {
        return values[i * size() + j];
    }

    void set(std::size_t i, std::size_t j, double v) {
        values[i * size() + j] = v;
        values[j * size() + i] = v;
    }
};

/// Deterministic label for the i-th attractor of a canonical-sorted set.
inline std::string attractor_label(std::size_t i) {
    return "A" + std::to_string(i);
}

/// All pairwise distances under one measure; rows follow the set's canonical
/// attractor order.
inline DistanceMatrix distance_matrix(const AttractorSet& set, Measure measure) {
    const std::size_t m = set.attractors.size();
    if (m == 0)
        throw std::invalid_argument("distance_matrix: empty attractor set");
    DistanceMatrix dm;
    dm.measure = measure;
    dm.labels.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        dm.labels.push_back(attractor_label(i));
    dm.values.assign(m * m, 0.0);

    if (measure == Measure::min_hamming) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                dm.set(i, j,
                       static_cast<double>(
                           min_hamming(set.attractors[i], set.attractors[j])));
        return dm;
    }

    std::vector<ActivationVector> vectors;
    vectors.reserve(m);
    for (const auto& a : set.attractors)
        vectors.push_back(activation_vector(a));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d =
                measure == Measure::euclidean
                    ? euclidean(vectors[i], vectors[j])
                    : static_cast<double>(pseudo_hamming(vectors[i], vectors[j]));
            dm.set(i, j, d);
        }
    return dm;
}

}  // namespace rbn
