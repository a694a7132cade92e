#pragma once

// Boolean networks with uniform in-degree k and synchronous deterministic
// dynamics, plus the random generator over the (n, k, bias) ensemble.
//
// Truth-table convention: entry index = sum over input slot j of
// bit(inputs[j]) << j, i.e. the first listed input is the least significant
// bit. Serialized networks depend on this, keep it fixed.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rbn/rng.hpp"
#include "rbn/state.hpp"

namespace rbn {

struct NodeFunction {
    std::vector<std::uint32_t> inputs;  // ordered, pairwise distinct
    std::vector<std::uint8_t> table;    // 2^k entries, values 0/1

    friend bool operator==(const NodeFunction&, const NodeFunction&) = default;
};

struct GenerationParams {
    std::size_t n = 0;
    std::size_t k = 0;
    double bias = 0.5;       // probability of a 1 table entry
    std::uint64_t seed = 0;
};

/// Truth-table lookup for one node against a full network state.
inline bool eval_node(const NodeFunction& node, const NetworkState& state) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < node.inputs.size(); ++j) {
        if (node.inputs[j] >= state.size())
            throw std::invalid_argument("eval_node: input index out of range");
        idx |= static_cast<std::size_t>(state.get(node.inputs[j])) << j;
    }
    return node.table[idx] != 0;
}

class BooleanNetwork {
  public:
    BooleanNetwork(std::size_t n, std::size_t k, std::vector<NodeFunction> nodes)
        : n_(n), k_(k), nodes_(std::move(nodes)) {
        validate();
        build_kernel();
    }

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    const NodeFunction& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<NodeFunction>& nodes() const { return nodes_; }

    /// One synchronous update; the input state is untouched.
    NetworkState step(const NetworkState& state) const {
        NetworkState next(n_);
        step_into(state, next);
        return next;
    }

    friend bool operator==(const BooleanNetwork&, const BooleanNetwork&) = default;

    /// Allocation-free update for hot loops. next must have size n.
    void step_into(const NetworkState& state, NetworkState& next) const {
        if (state.size() != n_ || next.size() != n_)
            throw std::invalid_argument("step: state length must equal n");
        const auto src = state.words();
        auto dst = next.words();
        for (auto& w : dst)
            w = 0;
        const std::uint32_t* in_word = in_word_.data();
        const std::uint8_t* in_shift = in_shift_.data();
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < k_; ++j) {
                idx |= ((src[in_word[j]] >> in_shift[j]) & 1u) << j;
            }
            in_word += k_;
            in_shift += k_;
            const std::uint64_t bit =
                (table_words_[i * words_per_table_ + (idx >> 6)] >> (idx & 63)) & 1u;
            dst[i >> 6] |= bit << (63 - (i & 63));
        }
    }

  private:
    void validate() const {
        if (n_ == 0)
            throw std::invalid_argument("BooleanNetwork: n must be >= 1");
        if (k_ == 0 || k_ > n_)
            throw std::invalid_argument("BooleanNetwork: need 1 <= k <= n");
        if (nodes_.size() != n_)
            throw std::invalid_argument("BooleanNetwork: expected n node functions");
        const std::size_t table_len = std::size_t{1} << k_;
        std::vector<bool> seen(n_);
        for (const auto& node : nodes_) {
            if (node.inputs.size() != k_)
                throw std::invalid_argument("BooleanNetwork: node must have k inputs");
            if (node.table.size() != table_len)
                throw std::invalid_argument("BooleanNetwork: table must have 2^k entries");
            for (auto v : node.table)
                if (v > 1)
                    throw std::invalid_argument("BooleanNetwork: table entries must be 0/1");
            std::fill(seen.begin(), seen.end(), false);
            for (auto in : node.inputs) {
                if (in >= n_)
                    throw std::invalid_argument("BooleanNetwork: input index out of range");
                if (seen[in])
                    throw std::invalid_argument("BooleanNetwork: duplicate input index");
                seen[in] = true;
            }
        }
    }

    // Flatten inputs to (word, shift) pairs and pack truth tables into words
    // so the update loop touches no per-node allocations.
    void build_kernel() {
        in_word_.reserve(n_ * k_);
        in_shift_.reserve(n_ * k_);
        const std::size_t table_len = std::size_t{1} << k_;
        words_per_table_ = (table_len + 63) / 64;
        table_words_.assign(n_ * words_per_table_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (auto in : nodes_[i].inputs) {
                in_word_.push_back(in >> 6);
                in_shift_.push_back(static_cast<std::uint8_t>(63 - (in & 63)));
            }
            for (std::size_t idx = 0; idx < table_len; ++idx)
                if (nodes_[i].table[idx])
                    table_words_[i * words_per_table_ + (idx >> 6)] |=
                        1ull << (idx & 63);
        }
    }

    std::size_t n_;
    std::size_t k_;
    std::vector<NodeFunction> nodes_;
    std::vector<std::uint32_t> in_word_;
    std::vector<std::uint8_t> in_shift_;
    std::vector<std::uint64_t> table_words_;
    std::size_t words_per_table_ = 1;
};

// Truth tables grow as 2^k; past this the generator refuses rather than
// allocating gigabytes.
inline constexpr std::size_t kMaxInDegree = 20;

/// Generate one random network. Draw order is fixed: for node 0..n-1, first
/// the k inputs (uniform without replacement via rejection, self-loops
/// allowed, kept in draw order), then the 2^k table entries in index order,
/// each 1 with probability bias.
inline BooleanNetwork generate_rbn(const GenerationParams& params) {
    if (params.n == 0)
        throw std::invalid_argument("generate_rbn: n must be >= 1");
    if (params.k == 0 || params.k > params.n)
        throw std::invalid_argument("generate_rbn: need 1 <= k <= n");
    if (params.k > kMaxInDegree)
        throw std::invalid_argument("generate_rbn: k exceeds supported in-degree");
    if (!(params.bias >= 0.0 && params.bias <= 1.0))
        throw std::invalid_argument("generate_rbn: bias must be in [0, 1]");

    Rng rng(params.seed);
    const std::size_t table_len = std::size_t{1} << params.k;
    std::vector<NodeFunction> nodes(params.n);
    std::vector<bool> used(params.n);
    for (auto& node : nodes) {
        std::fill(used.begin(), used.end(), false);
        node.inputs.reserve(params.k);
        while (node.inputs.size() < params.k) {
            const auto pick =
                static_cast<std::uint32_t>(rng.uniform_below(params.n));
            if (used[pick])
                continue;
            used[pick] = true;
            node.inputs.push_back(pick);
        }
        node.table.resize(table_len);
        for (auto& entry : node.table)
            entry = rng.bernoulli(params.bias) ? 1 : 0;
    }
    return BooleanNetwork(params.n, params.k, std::move(nodes));
}

/// Bias p >= 1/2 on the critical line 2 p (1 - p) = 1/k.
inline double critical_bias(std::size_t k) {
    if (k < 2)
        throw std::domain_error("critical_bias: defined for k >= 2");
    return (1.0 + std::sqrt(1.0 - 2.0 / static_cast<double>(k))) / 2.0;
}

}  // namespace rbn
