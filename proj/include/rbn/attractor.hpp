#pragma once

// Trajectory simulation with exact cycle detection, canonical attractors and
// attractor-set accumulation over sampled or exhaustive initial states.
//
// Cycle detection keeps every visited state in a hash map keyed by the packed
// state words, so the first revisit yields the exact transient length and
// period. Memory grows with the trajectory; memory_cap turns exhaustion into
// a NotFound result instead of an allocation blow-up.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rbn/network.hpp"
#include "rbn/state.hpp"

namespace rbn {

struct SearchConfig {
    std::uint64_t max_steps = 1'000'000;       // step budget per trajectory
    std::optional<std::size_t> memory_cap;     // max stored visited states
};

/// A cycle of pairwise-distinct states, rotated so that states[0] is the
/// lexicographically smallest (canonical form). Stored flat, one state per
/// word_count(n) words.
class Attractor {
  public:
    Attractor(std::size_t n, std::size_t period, std::vector<std::uint64_t> words)
        : n_(n), period_(period), words_(std::move(words)) {}

    std::size_t n() const { return n_; }
    std::size_t period() const { return period_; }

    std::span<const std::uint64_t> state_words(std::size_t h) const {
        const std::size_t w = NetworkState::word_count(n_);
        return {words_.data() + h * w, w};
    }

    NetworkState state(std::size_t h) const {
        NetworkState s(n_);
        const auto src = state_words(h);
        std::copy(src.begin(), src.end(), s.words().begin());
        return s;
    }

    NetworkState canonical_first() const { return state(0); }

    friend bool operator==(const Attractor&, const Attractor&) = default;

  private:
    std::size_t n_;
    std::size_t period_;
    std::vector<std::uint64_t> words_;
};

/// Rotate a cycle into canonical form (smallest state first, cyclic order
/// preserved). The input must be a genuine cycle of pairwise-distinct states.
inline Attractor canonicalize(const std::vector<NetworkState>& cycle) {
    if (cycle.empty())
        throw std::invalid_argument("canonicalize: empty cycle");
    const std::size_t n = cycle[0].size();
    std::size_t start = 0;
    for (std::size_t h = 1; h < cycle.size(); ++h)
        if (cycle[h] < cycle[start])
            start = h;
    const std::size_t w = NetworkState::word_count(n);
    std::vector<std::uint64_t> words;
    words.reserve(cycle.size() * w);
    for (std::size_t h = 0; h < cycle.size(); ++h) {
        const auto& s = cycle[(start + h) % cycle.size()];
        if (s.size() != n)
            throw std::invalid_argument("canonicalize: mixed state lengths");
        words.insert(words.end(), s.words().begin(), s.words().end());
    }
    return Attractor(n, cycle.size(), std::move(words));
}

struct AttractorSet {
    std::size_t n = 0;
    std::vector<Attractor> attractors;      // sorted by canonical first state
    std::vector<std::uint64_t> basin_hits;  // parallel to attractors
    std::uint64_t not_found = 0;            // trajectories that exhausted the budget
};

namespace detail {

// Open-addressing state -> time map, reused across trajectories via an epoch
// counter so clearing is O(1). Keys are fixed-width word spans stored inline.
class VisitedMap {
  public:
    explicit VisitedMap(std::size_t words_per_state)
        : wps_(words_per_state == 0 ? 1 : words_per_state) {
        rebuild(1u << 10);
    }

    void clear() {
        ++epoch_;
        size_ = 0;
        if (epoch_ == 0) {  // epoch wrapped; forget stale marks
            std::fill(epochs_.begin(), epochs_.end(), 0);
            epoch_ = 1;
        }
    }

    std::size_t size() const { return size_; }

    /// Returns the stored time if the state was seen this epoch, otherwise
    /// inserts it with `time` and returns nullopt.
    std::optional<std::uint64_t> find_or_insert(std::span<const std::uint64_t> key,
                                                std::uint64_t time) {
        if ((size_ + 1) * 2 > slots_)
            grow();
        std::size_t slot = hash(key) & mask_;
        for (;;) {
            if (epochs_[slot] != epoch_) {
                epochs_[slot] = epoch_;
                times_[slot] = time;
                std::copy(key.begin(), key.end(), keys_.begin() + slot * wps_);
                ++size_;
                return std::nullopt;
            }
            if (std::equal(key.begin(), key.end(), keys_.begin() + slot * wps_))
                return times_[slot];
            slot = (slot + 1) & mask_;
        }
    }

  private:
    std::size_t hash(std::span<const std::uint64_t> key) const {
        std::uint64_t h = 0x9ae16a3b2f90404full;
        for (std::uint64_t w : key)
            h = mix64(h ^ w);
        return static_cast<std::size_t>(h);
    }

    void rebuild(std::size_t slots) {
        slots_ = slots;
        mask_ = slots - 1;
        epochs_.assign(slots, 0);
        times_.assign(slots, 0);
        keys_.assign(slots * wps_, 0);
        epoch_ = 1;
        size_ = 0;
    }

    void grow() {
        const std::size_t old_slots = slots_;
        auto old_epochs = std::move(epochs_);
        auto old_times = std::move(times_);
        auto old_keys = std::move(keys_);
        const std::uint32_t old_epoch = epoch_;
        rebuild(old_slots * 2);
        for (std::size_t s = 0; s < old_slots; ++s) {
            if (old_epochs[s] != old_epoch)
                continue;
            std::span<const std::uint64_t> key{old_keys.data() + s * wps_, wps_};
            std::size_t slot = hash(key) & mask_;
            while (epochs_[slot] == epoch_)
                slot = (slot + 1) & mask_;
            epochs_[slot] = epoch_;
            times_[slot] = old_times[s];
            std::copy(key.begin(), key.end(), keys_.begin() + slot * wps_);
            ++size_;
        }
    }

    std::size_t wps_;
    std::size_t slots_ = 0;
    std::size_t mask_ = 0;
    std::uint32_t epoch_ = 1;
    std::size_t size_ = 0;
    std::vector<std::uint32_t> epochs_;
    std::vector<std::uint64_t> times_;
    std::vector<std::uint64_t> keys_;
};

// Scratch buffers shared by consecutive trajectory searches on one network.
struct TrajectoryWorkspace {
    explicit TrajectoryWorkspace(const BooleanNetwork& net)
        : visited(NetworkState::word_count(net.n())),
          cur(net.n()),
          nxt(net.n()) {}

    VisitedMap visited;
    std::vector<std::uint64_t> trajectory;  // wps words per visited state
    NetworkState cur, nxt;
};

inline std::optional<Attractor> find_attractor_impl(const BooleanNetwork& net,
                                                    const NetworkState& initial,
                                                    const SearchConfig& cfg,
                                                    TrajectoryWorkspace& ws) {
    if (initial.size() != net.n())
        throw std::invalid_argument("find_attractor: initial state length != n");
    if (cfg.max_steps < 1)
        throw std::invalid_argument("find_attractor: max_steps must be >= 1");
    const std::size_t wps = NetworkState::word_count(net.n());
    const std::size_t cap =
        cfg.memory_cap.value_or(std::numeric_limits<std::size_t>::max());

    ws.visited.clear();
    ws.trajectory.clear();
    ws.cur = initial;
    for (std::uint64_t t = 0;; ++t) {
        if (ws.visited.size() >= cap)
            return std::nullopt;  // stored-state budget exhausted
        const auto words = ws.cur.words();
        if (auto seen = ws.visited.find_or_insert(words, t)) {
            const std::uint64_t first = *seen;
            const std::size_t period = static_cast<std::size_t>(t - first);
            std::vector<NetworkState> cycle;
            cycle.reserve(period);
            for (std::uint64_t h = first; h < t; ++h) {
                NetworkState s(net.n());
                std::copy_n(ws.trajectory.begin() +
                                static_cast<std::ptrdiff_t>(h * wps),
                            wps, s.words().begin());
                cycle.push_back(std::move(s));
            }
            return canonicalize(cycle);
        }
        if (t == cfg.max_steps)
            return std::nullopt;  // step budget exhausted without a revisit
        ws.trajectory.insert(ws.trajectory.end(), words.begin(), words.end());
        net.step_into(ws.cur, ws.nxt);
        std::swap(ws.cur, ws.nxt);
    }
}

// Accumulates deduplicated attractors; key is the canonical first state,
// which identifies a cycle under deterministic dynamics.
class AttractorAccumulator {
  public:
    explicit AttractorAccumulator(std::size_t n) : n_(n) {}

    void add(Attractor a, std::uint64_t hits = 1) {
        auto [it, inserted] = index_.try_emplace(a.canonical_first(), list_.size());
        if (inserted) {
            list_.push_back(std::move(a));
            hits_.push_back(hits);
        } else {
            hits_[it->second] += hits;
        }
    }

    void add_not_found(std::uint64_t count = 1) { not_found_ += count; }

    AttractorSet finish() {
        std::vector<std::size_t> order(list_.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
            return list_[a].canonical_first() < list_[b].canonical_first();
        });
        AttractorSet set;
        set.n = n_;
        set.attractors.reserve(list_.size());
        set.basin_hits.reserve(list_.size());
        for (std::size_t i : order) {
            set.attractors.push_back(std::move(list_[i]));
            set.basin_hits.push_back(hits_[i]);
        }
        set.not_found = not_found_;
        return set;
    }

  private:
    std::size_t n_;
    std::unordered_map<NetworkState, std::size_t, StateHash> index_;
    std::vector<Attractor> list_;
    std::vector<std::uint64_t> hits_;
    std::uint64_t not_found_ = 0;
};

}  // namespace detail

/// Simulate from one initial state until the first revisit; nullopt means the
/// step budget (or memory cap) ran out, which is expected in chaotic regimes.
inline std::optional<Attractor> find_attractor(const BooleanNetwork& net,
                                               const NetworkState& initial,
                                               const SearchConfig& cfg) {
    detail::TrajectoryWorkspace ws(net);
    return detail::find_attractor_impl(net, initial, cfg, ws);
}

/// Run find_attractor from each given initial state and merge the outcomes.
inline AttractorSet sample_attractors(const BooleanNetwork& net,
                                      std::span<const NetworkState> initials,
                                      const SearchConfig& cfg) {
    detail::TrajectoryWorkspace ws(net);
    detail::AttractorAccumulator acc(net.n());
    for (const auto& initial : initials) {
        if (auto a = detail::find_attractor_impl(net, initial, cfg, ws))
            acc.add(std::move(*a));
        else
            acc.add_not_found();
    }
    return acc.finish();
}

/// Sample num_samples initial states uniformly (with replacement) and merge
/// the attractors they reach. Deterministic given the seed.
inline AttractorSet sample_attractors(const BooleanNetwork& net,
                                      std::uint64_t num_samples,
                                      const SearchConfig& cfg,
                                      std::uint64_t seed) {
    if (num_samples < 1)
        throw std::invalid_argument("sample_attractors: num_samples must be >= 1");
    Rng rng(seed);
    detail::TrajectoryWorkspace ws(net);
    detail::AttractorAccumulator acc(net.n());
    for (std::uint64_t s = 0; s < num_samples; ++s) {
        const NetworkState initial = random_state(net.n(), rng);
        if (auto a = detail::find_attractor_impl(net, initial, cfg, ws))
            acc.add(std::move(*a));
        else
            acc.add_not_found();
    }
    return acc.finish();
}

inline constexpr std::size_t kExhaustiveMaxNodes = 20;

/// Enumerate all 2^n initial states with memoized trajectory walking; yields
/// the complete attractor set with exact basin sizes. Feasible for small n
/// only, intended as a testing oracle.
inline AttractorSet exhaustive_attractors(const BooleanNetwork& net,
                                          std::size_t max_nodes = kExhaustiveMaxNodes) {
    const std::size_t n = net.n();
    if (n > max_nodes)
        throw std::invalid_argument("exhaustive_attractors: n above enumeration limit");
    const std::size_t total = std::size_t{1} << n;

    // States are indexed by the integer with bit j = value of node j.
    NetworkState cur(n), nxt(n);
    auto to_state = [&](std::size_t idx, NetworkState& s) {
        for (std::size_t j = 0; j < n; ++j)
            s.set(j, (idx >> j) & 1u);
    };
    auto to_index = [&](const NetworkState& s) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j)
            idx |= static_cast<std::size_t>(s.get(j)) << j;
        return idx;
    };

    constexpr std::int32_t kUnassigned = -1;
    std::vector<std::int32_t> owner(total, kUnassigned);
    std::vector<std::int32_t> path_pos(total, kUnassigned);
    std::vector<std::size_t> path;
    detail::AttractorAccumulator acc(n);
    std::vector<std::uint64_t> basin;
    std::vector<Attractor> found;

    for (std::size_t start = 0; start < total; ++start) {
        if (owner[start] != kUnassigned)
            continue;
        path.clear();
        std::size_t s = start;
        while (owner[s] == kUnassigned && path_pos[s] == kUnassigned) {
            path_pos[s] = static_cast<std::int32_t>(path.size());
            path.push_back(s);
            to_state(s, cur);
            net.step_into(cur, nxt);
            s = to_index(nxt);
        }
        std::int32_t id;
        if (owner[s] != kUnassigned) {
            id = owner[s];  // walked into a known basin
        } else {
            const auto cycle_start = static_cast<std::size_t>(path_pos[s]);
            std::vector<NetworkState> cycle;
            cycle.reserve(path.size() - cycle_start);
            for (std::size_t h = cycle_start; h < path.size(); ++h) {
                NetworkState st(n);
                to_state(path[h], st);
                cycle.push_back(std::move(st));
            }
            id = static_cast<std::int32_t>(found.size());
            found.push_back(canonicalize(cycle));
            basin.push_back(0);
        }
        for (std::size_t q : path) {
            owner[q] = id;
            path_pos[q] = kUnassigned;
            ++basin[static_cast<std::size_t>(id)];
        }
    }
    for (std::size_t i = 0; i < found.size(); ++i)
        acc.add(std::move(found[i]), basin[i]);
    return acc.finish();
}

}  // namespace rbn
